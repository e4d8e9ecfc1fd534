#include "fracspec/kernels.hpp"

#if defined(__ARM_NEON) && defined(__aarch64__)
#include <arm_neon.h>

#include <algorithm>
#include <limits>

namespace fracspec::kernels {
namespace {

double sum_neon(const double* x, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0), a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vaddq_f64(a0, vld1q_f64(x + i));
        a1 = vaddq_f64(a1, vld1q_f64(x + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double clamped_sum_neon(const double* x, std::size_t n, double cap) {
    const float64x2_t c = vdupq_n_f64(cap);
    float64x2_t a0 = vdupq_n_f64(0.0), a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vaddq_f64(a0, vminq_f64(vld1q_f64(x + i), c));
        a1 = vaddq_f64(a1, vminq_f64(vld1q_f64(x + i + 2), c));
    }
    double s = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) s += std::min(x[i], cap);
    return s;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0), a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vfmaq_f64(a0, vld1q_f64(a + i), vld1q_f64(b + i));
        a1 = vfmaq_f64(a1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

MinMax lagged_difference_extrema_neon(const double* f, std::size_t n, std::size_t lag) {
    const double inf = std::numeric_limits<double>::infinity();
    MinMax r{inf, -inf};
    if (n <= lag) return r;
    const std::size_t m = n - lag;
    float64x2_t lo = vdupq_n_f64(inf), hi = vdupq_n_f64(-inf);
    std::size_t i = 0;
    for (; i + 2 <= m; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(f + i + lag), vld1q_f64(f + i));
        lo = vminq_f64(lo, d);
        hi = vmaxq_f64(hi, d);
    }
    r.min = vminvq_f64(lo);
    r.max = vmaxvq_f64(hi);
    for (; i < m; ++i) {
        double d = f[i + lag] - f[i];
        r.min = std::min(r.min, d);
        r.max = std::max(r.max, d);
    }
    return r;
}

double min_squared_distance_neon(const double* const* columns, std::size_t dim, std::size_t count,
                                 const double* query) {
    float64x2_t best = vdupq_n_f64(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 2 <= count; i += 2) {
        float64x2_t d2 = vdupq_n_f64(0.0);
        for (std::size_t k = 0; k < dim; ++k) {
            float64x2_t d = vsubq_f64(vld1q_f64(columns[k] + i), vdupq_n_f64(query[k]));
            d2 = vaddq_f64(d2, vmulq_f64(d, d));
        }
        best = vminq_f64(best, d2);
    }
    double b = vminvq_f64(best);
    for (; i < count; ++i) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            double d = columns[k][i] - query[k];
            d2 += d * d;
        }
        b = std::min(b, d2);
    }
    return b;
}

}  // namespace

const KernelTable* neon_table() {
    static const KernelTable t{sum_neon, clamped_sum_neon, dot_neon, lagged_difference_extrema_neon,
                               min_squared_distance_neon};
    return &t;
}

}  // namespace fracspec::kernels

#else

namespace fracspec::kernels {
const KernelTable* neon_table() { return nullptr; }
}  // namespace fracspec::kernels

#endif
