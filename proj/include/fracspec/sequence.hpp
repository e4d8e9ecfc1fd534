#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace fracspec {

// Nonincreasing positive sequence mu_1 >= mu_2 >= ... indexed from 1, either
// backed by stored values or produced on demand by a generator up to a cap.
class EigenvalueSequence {
public:
    using Generator = std::function<double(std::uint64_t)>;
    // Sum over k > n of mu_k^power. nullopt when unknown, +inf when divergent.
    using TailSum = std::function<std::optional<double>(std::uint64_t n, double power)>;

    EigenvalueSequence() = default;

    // A finite list. `exhausted` means no eigenvalues exist beyond the list.
    static EigenvalueSequence from_values(std::vector<double> values, bool exhausted = true,
                                          TailSum tail = {});
    static EigenvalueSequence from_generator(Generator generator, std::uint64_t cap, TailSum tail = {});

    std::uint64_t size() const { return size_; }
    bool exhausted() const { return exhausted_; }
    double exponent() const { return exponent_; }
    bool has_analytic_tail() const { return static_cast<bool>(tail_); }

    // 1-based access; n must lie in [1, size()].
    double operator()(std::uint64_t n) const;

    // mu_n -> mu_n^alpha.
    EigenvalueSequence power(double alpha) const;
    // Same values, truncated at a smaller cap (never marked exhausted).
    EigenvalueSequence truncated(std::uint64_t cap) const;

    std::optional<double> analytic_tail(std::uint64_t n) const;

    // Calls fn(first_index, block) over [first, last] in increasing order.
    void for_each_block(std::uint64_t first, std::uint64_t last,
                        const std::function<void(std::uint64_t, std::span<const double>)>& fn) const;

    std::vector<double> materialize() const;
    std::vector<double> materialize(std::uint64_t first, std::uint64_t last) const;

    // Throws NotPositive, NotMonotone or NotVanishing.
    void validate() const;

    void write_csv(std::ostream& out) const;

private:
    std::shared_ptr<const std::vector<double>> values_;
    Generator generator_;
    TailSum tail_;
    std::uint64_t size_ = 0;
    bool exhausted_ = false;
    double exponent_ = 1.0;

    double raw(std::uint64_t n) const;
};

// Eigenvalues paired with per-entry weights, for numerators of trace ratios.
struct WeightedSequence {
    EigenvalueSequence values;
    std::vector<double> weights;  // weights[k-1] multiplies mu_k; empty means all ones
    double scale = 1.0;
};

std::string format_double(double x);

}  // namespace fracspec
