#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Hot loops with a scalar reference and vectorized variants picked at runtime.
// Set FRACSPEC_FORCE_SCALAR=1 in the environment to pin the scalar path.
namespace fracspec::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);
Isa active_isa();
// Returns false (and changes nothing) when the ISA is not available here.
bool set_isa(Isa isa);

struct MinMax {
    double min;
    double max;
};

struct KernelTable {
    double (*sum)(const double* x, std::size_t n);
    double (*clamped_sum)(const double* x, std::size_t n, double cap);
    double (*dot)(const double* a, const double* b, std::size_t n);
    MinMax (*lagged_difference_extrema)(const double* f, std::size_t n, std::size_t lag);
    double (*min_squared_distance)(const double* const* columns, std::size_t dim, std::size_t count,
                                   const double* query);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();
const KernelTable& table();

inline double sum(std::span<const double> x) { return table().sum(x.data(), x.size()); }
// Sum of min(x_i, cap).
inline double clamped_sum(std::span<const double> x, double cap) {
    return table().clamped_sum(x.data(), x.size(), cap);
}
inline double dot(std::span<const double> a, std::span<const double> b) {
    return table().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}
// min and max of f[i + lag] - f[i] over all valid i. Requires n > lag.
inline MinMax lagged_difference_extrema(std::span<const double> f, std::size_t lag) {
    return table().lagged_difference_extrema(f.data(), f.size(), lag);
}
// Points stored column-wise: columns[k][i] is coordinate k of point i.
inline double min_squared_distance(const double* const* columns, std::size_t dim, std::size_t count,
                                   const double* query) {
    return table().min_squared_distance(columns, dim, count, query);
}

}  // namespace fracspec::kernels
