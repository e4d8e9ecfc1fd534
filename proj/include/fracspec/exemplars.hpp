#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "fracspec/sequence.hpp"

namespace fracspec {

// Gap lengths a_1, a_2, ... between slope changes (a_0 = 0).
struct GapRule {
    enum class Kind { Constant, Linear, Custom };
    Kind kind = Kind::Constant;
    double constant = 1.0;
    std::vector<double> custom;  // a_1, a_2, ...; the last entry repeats

    double operator()(std::uint64_t k) const;
};

struct TwoSlopeSpec {
    double alpha = 2.0;
    double beta = 1.0;
    GapRule gaps;
};

struct StepSpec {
    double q = 2.0;                 // preset x_n = round(exp(n^q))
    std::vector<double> custom_x;   // optional explicit x_1 < x_2 < ... (x_0 = 1)
};

// mu(y) on [1, inf) with an exact antiderivative of mu^gamma.
class Profile {
public:
    virtual ~Profile() = default;
    virtual double mu(double y) const = 0;
    // Integral of mu(y)^gamma over [a, b]; b may be infinite. Returns +inf when
    // the integral diverges and NaN when convergence cannot be decided.
    virtual double integral(double gamma, double a, double b) const = 0;
    // Points in (a, b) where mu or its log-derivative jumps.
    virtual std::vector<double> breakpoints(double a, double b) const = 0;
    virtual double cap() const { return kNoCap; }

    static constexpr double kNoCap = 1.0e300;
};

class TwoSlopeProfile : public Profile {
public:
    explicit TwoSlopeProfile(TwoSlopeSpec spec, double t_limit = 760.0);

    double f(double t) const;
    double mu(double y) const override;
    double integral(double gamma, double a, double b) const override;
    std::vector<double> breakpoints(double a, double b) const override;

    const TwoSlopeSpec& spec() const { return spec_; }
    // b_k = a_0 + ... + a_k; slopes alpha on [b_2k, b_2k+1), beta on [b_2k+1, b_2k+2).
    const std::vector<double>& log_breaks() const { return breaks_; }
    double slope(std::size_t piece) const { return piece % 2 == 0 ? spec_.alpha : spec_.beta; }

private:
    TwoSlopeSpec spec_;
    std::vector<double> breaks_;
    std::vector<double> f_at_breaks_;
    std::size_t piece_of(double t) const;
};

class StepProfile : public Profile {
public:
    explicit StepProfile(StepSpec spec);

    double mu(double y) const override;
    double integral(double gamma, double a, double b) const override;
    std::vector<double> breakpoints(double a, double b) const override;

    // x_0 = 1, x_1, ... (x_j may be +inf once exp(b_j) overflows) and b_j = log x_j.
    const std::vector<double>& jumps() const { return x_; }
    const std::vector<double>& log_jumps() const { return b_; }
    // Sum over k > n of mu_k^p; +inf when p <= 1.
    double tail_sum(std::uint64_t n, double p) const;

private:
    std::vector<double> x_;
    std::vector<double> b_;
    std::size_t plateau_of(double y) const;
};

// mu(y) = y^-p.
class PowerProfile : public Profile {
public:
    explicit PowerProfile(double p) : p_(p) {}
    double mu(double y) const override;
    double integral(double gamma, double a, double b) const override;
    std::vector<double> breakpoints(double, double) const override { return {}; }

private:
    double p_;
};

// A raw sequence: mu(y) interpolated linearly between integer nodes and
// integrated with the trapezoid rule; beyond the cap the fitted tail is used.
class SequenceProfile : public Profile {
public:
    explicit SequenceProfile(EigenvalueSequence seq) : seq_(std::move(seq)) {}
    double mu(double y) const override;
    double integral(double gamma, double a, double b) const override;
    std::vector<double> breakpoints(double a, double b) const override;
    double cap() const override { return static_cast<double>(seq_.size()); }

private:
    EigenvalueSequence seq_;
};

EigenvalueSequence two_slope_sequence(const TwoSlopeSpec& spec, std::uint64_t cap);
EigenvalueSequence step_sequence(const StepSpec& spec, std::uint64_t cap);

// sigma(gamma, x) = integral of mu^gamma over [1, x]; returns sigma(lambda x) / sigma(x).
double sigma_ratio(const Profile& profile, double gamma, double x, double lambda);
// s(gamma, x) = integral of mu^gamma over [x, inf); returns s(x / lambda) / s(x).
double s_ratio(const Profile& profile, double gamma, double x, double lambda);

// Composite trapezoid rule in log y with nodes aligned to the profile breakpoints.
double trapezoid_integral(const Profile& profile, double gamma, double a, double b, std::size_t nodes_per_piece = 4000);

// Upper bound on sigma_ratio - 1 at x = exp(b_{2n+1}), the right end of a steep
// piece of length steep_length, for the two-slope family. Valid on
// 1/alpha <= gamma <= 1/beta; the endpoints use the logarithmic limits.
double two_slope_sigma_bound(const TwoSlopeSpec& spec, double gamma, double lambda, double steep_length);
// Upper bound on s_ratio - 1 at x = exp(b_{2n-1}), the left end of a flat piece of
// length flat_length.
double two_slope_s_bound(const TwoSlopeSpec& spec, double gamma, double lambda, double flat_length);

// Ratios mu_{n+1}/mu_n across every jump of the step sequence below the cap.
std::vector<double> step_jump_ratios(const StepProfile& profile, std::uint64_t cap);

}  // namespace fracspec
