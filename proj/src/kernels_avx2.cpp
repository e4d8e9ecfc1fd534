#include "fracspec/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

#include <algorithm>
#include <limits>

namespace fracspec::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmin(__m256d v) {
    __m128d lo = _mm_min_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
    return _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm_max_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
    return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
    }
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double clamped_sum_avx2(const double* x, std::size_t n, double cap) {
    const __m256d c = _mm256_set1_pd(cap);
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_min_pd(_mm256_loadu_pd(x + i), c));
        a1 = _mm256_add_pd(a1, _mm256_min_pd(_mm256_loadu_pd(x + i + 4), c));
    }
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += std::min(x[i], cap);
    return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), a1);
    }
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

MinMax lagged_difference_extrema_avx2(const double* f, std::size_t n, std::size_t lag) {
    const double inf = std::numeric_limits<double>::infinity();
    MinMax r{inf, -inf};
    if (n <= lag) return r;
    const std::size_t m = n - lag;
    __m256d lo = _mm256_set1_pd(inf), hi = _mm256_set1_pd(-inf);
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(f + i + lag), _mm256_loadu_pd(f + i));
        lo = _mm256_min_pd(lo, d);
        hi = _mm256_max_pd(hi, d);
    }
    r.min = hmin(lo);
    r.max = hmax(hi);
    for (; i < m; ++i) {
        double d = f[i + lag] - f[i];
        r.min = std::min(r.min, d);
        r.max = std::max(r.max, d);
    }
    return r;
}

double min_squared_distance_avx2(const double* const* columns, std::size_t dim, std::size_t count,
                                 const double* query) {
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d d2 = _mm256_setzero_pd();
        for (std::size_t k = 0; k < dim; ++k) {
            __m256d d = _mm256_sub_pd(_mm256_loadu_pd(columns[k] + i), _mm256_set1_pd(query[k]));
            d2 = _mm256_add_pd(d2, _mm256_mul_pd(d, d));
        }
        best = _mm256_min_pd(best, d2);
    }
    double b = hmin(best);
    for (; i < count; ++i) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            double d = columns[k][i] - query[k];
            d2 = d2 + d * d;
        }
        b = std::min(b, d2);
    }
    return b;
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable t{sum_avx2, clamped_sum_avx2, dot_avx2, lagged_difference_extrema_avx2,
                               min_squared_distance_avx2};
    return &t;
}

}  // namespace fracspec::kernels

#else

namespace fracspec::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace fracspec::kernels

#endif
