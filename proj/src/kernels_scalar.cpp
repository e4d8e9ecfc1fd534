#include "fracspec/kernels.hpp"

#include <algorithm>
#include <limits>

namespace fracspec::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double clamped_sum_scalar(const double* x, std::size_t n, double cap) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::min(x[i], cap);
    return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

MinMax lagged_difference_extrema_scalar(const double* f, std::size_t n, std::size_t lag) {
    MinMax r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i + lag < n; ++i) {
        double d = f[i + lag] - f[i];
        r.min = std::min(r.min, d);
        r.max = std::max(r.max, d);
    }
    return r;
}

double min_squared_distance_scalar(const double* const* columns, std::size_t dim, std::size_t count,
                                   const double* query) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            double d = columns[k][i] - query[k];
            d2 += d * d;
        }
        best = std::min(best, d2);
    }
    return best;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{sum_scalar, clamped_sum_scalar, dot_scalar, lagged_difference_extrema_scalar,
                               min_squared_distance_scalar};
    return t;
}

}  // namespace fracspec::kernels
