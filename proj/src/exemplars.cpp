#include "fracspec/exemplars.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracspec/asymptotics.hpp"
#include "fracspec/error.hpp"

namespace fracspec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// (e^z - 1) / z, continuous at 0.
double expm1_over(double z) { return std::abs(z) < 1e-12 ? 1.0 + 0.5 * z : std::expm1(z) / z; }

// u / (e^(a u) - 1), tending to 1/a.
double damp(double u, double a) { return 1.0 / (a * expm1_over(a * u)); }

// (lambda^v - 1) / v, tending to log lambda.
double growth(double v, double lambda) { return std::log(lambda) * expm1_over(v * std::log(lambda)); }

}  // namespace

double GapRule::operator()(std::uint64_t k) const {
    if (k == 0) return 0.0;
    switch (kind) {
    case Kind::Constant: return constant;
    case Kind::Linear: return static_cast<double>(k);
    case Kind::Custom: return custom.empty() ? 0.0 : custom[std::min<std::size_t>(k, custom.size()) - 1];
    }
    return 0.0;
}

TwoSlopeProfile::TwoSlopeProfile(TwoSlopeSpec spec, double t_limit) : spec_(std::move(spec)) {
    require(spec_.beta > 0.0 && spec_.beta <= spec_.alpha, ErrorCode::InvalidArgument, "need 0 < beta <= alpha");
    const GapRule& g = spec_.gaps;
    if (g.kind == GapRule::Kind::Constant)
        require(g.constant > 0.0, ErrorCode::InvalidArgument, "constant gap must be positive");
    if (g.kind == GapRule::Kind::Custom) {
        require(!g.custom.empty() && g.custom.front() > 0.0, ErrorCode::InvalidArgument, "a_1 must be positive");
        for (std::size_t i = 1; i < g.custom.size(); ++i)
            require(g.custom[i] >= g.custom[i - 1], ErrorCode::InvalidArgument, "gaps must be nondecreasing");
    }
    breaks_.push_back(0.0);
    f_at_breaks_.push_back(0.0);
    for (std::uint64_t k = 1; breaks_.back() <= t_limit; ++k) {
        double len = g(k);
        std::size_t piece = breaks_.size() - 1;
        breaks_.push_back(breaks_.back() + len);
        f_at_breaks_.push_back(f_at_breaks_.back() + slope(piece) * len);
    }
}

std::size_t TwoSlopeProfile::piece_of(double t) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    std::size_t k = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return std::min(k, breaks_.size() - 2);
}

double TwoSlopeProfile::f(double t) const {
    if (t <= 0.0) return spec_.alpha * t;
    std::size_t k = piece_of(t);
    return f_at_breaks_[k] + slope(k) * (t - breaks_[k]);
}

double TwoSlopeProfile::mu(double y) const { return std::exp(-f(std::log(y))); }

double TwoSlopeProfile::integral(double gamma, double a, double b) const {
    if (!(b > a)) return 0.0;
    const double t1 = std::log(a);
    const double t2 = std::isinf(b) ? kInf : std::log(b);
    double total = 0.0;
    std::size_t k = piece_of(t1);
    int quiet = 0;
    double first_envelope = -1.0, envelope = 0.0;
    for (; k + 1 < breaks_.size(); ++k) {
        double u = std::max(t1, breaks_[k]);
        double v = std::min(t2, breaks_[k + 1]);
        if (v > u) {
            double rate = 1.0 - gamma * slope(k);
            double start = std::exp(u - gamma * f(u));
            total += start * (v - u) * expm1_over(rate * (v - u));
            envelope = std::exp(v - gamma * f(v));
            if (first_envelope < 0.0) first_envelope = start;
        }
        if (v >= t2) return total;
        quiet = envelope < 1e-18 * total ? quiet + 1 : 0;
        if (quiet >= 2) return total;
    }
    // Ran past the tabulated range without settling.
    return envelope >= first_envelope ? kInf : kNaN;
}

std::vector<double> TwoSlopeProfile::breakpoints(double a, double b) const {
    std::vector<double> out;
    for (double t : breaks_) {
        double y = std::exp(t);
        if (y > a && y < b) out.push_back(y);
    }
    return out;
}

StepProfile::StepProfile(StepSpec spec) {
    x_.push_back(1.0);
    b_.push_back(0.0);
    if (!spec.custom_x.empty()) {
        for (double x : spec.custom_x) {
            require(x == std::floor(x) && x > x_.back(), ErrorCode::InvalidArgument,
                    "jump points must be increasing integers above 1");
            x_.push_back(x);
            b_.push_back(std::log(x));
        }
    } else {
        if (!(spec.q > 1.0)) fail(ErrorCode::SpecNotDiverging, "preset exponent q must exceed 1");
        const double exact_limit = std::log(9007199254740992.0);
        for (int j = 1; b_.back() < 2.0e4 && j < 200000; ++j) {
            double b = std::pow(static_cast<double>(j), spec.q);
            double x = b < exact_limit ? std::round(std::exp(b)) : std::exp(b);
            if (b < exact_limit) b = std::log(x);
            if (!(x > x_.back()) && std::isfinite(x)) continue;
            x_.push_back(x);
            b_.push_back(b);
        }
    }
    // Increments b_{j+1} - b_j must keep growing over the generated range.
    for (std::size_t j = 2; j < b_.size(); ++j)
        if (!(b_[j] - b_[j - 1] > b_[j - 1] - b_[j - 2]))
            fail(ErrorCode::SpecNotDiverging, "log-jump increments stop growing at j = " + std::to_string(j));
}

std::size_t StepProfile::plateau_of(double y) const {
    auto it = std::lower_bound(x_.begin(), x_.end(), y);
    if (it == x_.end()) fail(ErrorCode::CapExceeded, "point beyond the last jump of the step profile");
    return static_cast<std::size_t>(it - x_.begin());
}

double StepProfile::mu(double y) const { return std::exp(-b_[plateau_of(y)]); }

double StepProfile::integral(double gamma, double a, double b) const {
    if (!(b > a)) return 0.0;
    const bool to_infinity = std::isinf(b);
    if (to_infinity && gamma <= 1.0) return kInf;
    double total = 0.0;
    for (std::size_t j = plateau_of(a); j < x_.size(); ++j) {
        // plateau j is (x_{j-1}, x_j] with value 1/x_j
        double u = std::max(a, j == 0 ? 0.0 : x_[j - 1]);
        double v = to_infinity ? x_[j] : std::min(b, x_[j]);
        if (v > u) {
            double log_len = std::isfinite(v) ? std::log(v - u) : b_[j] + std::log1p(-std::exp(std::log(u) - b_[j]));
            double term = std::exp(log_len - gamma * b_[j]);
            total += term;
            if (to_infinity && j > 1 && term < 1e-18 * total) return total;
        }
        if (!to_infinity && x_[j] >= b) return total;
    }
    if (!to_infinity) fail(ErrorCode::CapExceeded, "point beyond the last jump of the step profile");
    return total;
}

std::vector<double> StepProfile::breakpoints(double a, double b) const {
    std::vector<double> out;
    for (double x : x_)
        if (x > a && x < b) out.push_back(x);
    return out;
}

double StepProfile::tail_sum(std::uint64_t n, double p) const {
    if (p <= 1.0) return kInf;
    return integral(p, std::max(1.0, static_cast<double>(n)), kInf) + (n == 0 ? 1.0 : 0.0);
}

double PowerProfile::mu(double y) const { return std::pow(y, -p_); }

double PowerProfile::integral(double gamma, double a, double b) const {
    const double e = 1.0 - p_ * gamma;
    if (std::isinf(b)) return e < 0.0 ? -std::pow(a, e) / e : kInf;
    if (std::abs(e) < 1e-14) return std::log(b / a);
    return (std::pow(b, e) - std::pow(a, e)) / e;
}

double SequenceProfile::mu(double y) const {
    const double n = static_cast<double>(seq_.size());
    if (y < 1.0 || y > n) fail(ErrorCode::CapExceeded, "point outside the sequence range");
    auto k = static_cast<std::uint64_t>(std::floor(y));
    if (static_cast<double>(k) == y || k == seq_.size()) return seq_(k);
    double w = y - static_cast<double>(k);
    return (1.0 - w) * seq_(k) + w * seq_(k + 1);
}

double SequenceProfile::integral(double gamma, double a, double b) const {
    if (!(b > a)) return 0.0;
    const double n = static_cast<double>(seq_.size());
    double upper = std::isinf(b) ? n : b;
    if (upper > n || a < 1.0) fail(ErrorCode::CapExceeded, "integration range outside the sequence");
    auto g = [&](std::uint64_t k) { return std::pow(seq_(k), gamma); };
    auto interp = [&](double y) {
        auto k = static_cast<std::uint64_t>(std::floor(y));
        if (k >= seq_.size()) return g(seq_.size());
        double w = y - static_cast<double>(k);
        return (1.0 - w) * g(k) + w * g(k + 1);
    };
    auto ka = static_cast<std::uint64_t>(std::ceil(a));
    auto kb = static_cast<std::uint64_t>(std::floor(upper));
    double total = 0.0;
    if (ka > kb) return 0.5 * (interp(a) + interp(upper)) * (upper - a);
    total += 0.5 * (interp(a) + g(ka)) * (static_cast<double>(ka) - a);
    for (std::uint64_t k = ka; k < kb; ++k) total += 0.5 * (g(k) + g(k + 1));
    total += 0.5 * (g(kb) + interp(upper)) * (upper - static_cast<double>(kb));
    if (std::isinf(b)) {
        auto tail = fit_tail(seq_.power(gamma));
        total += tail.remainder + 0.5 * g(seq_.size());
    }
    return total;
}

std::vector<double> SequenceProfile::breakpoints(double, double) const { return {}; }

EigenvalueSequence two_slope_sequence(const TwoSlopeSpec& spec, std::uint64_t cap) {
    auto profile = std::make_shared<const TwoSlopeProfile>(spec);
    auto gen = [profile](std::uint64_t n) { return std::exp(-profile->f(std::log(static_cast<double>(n)))); };
    auto tail = [profile](std::uint64_t n, double p) -> std::optional<double> {
        constexpr std::uint64_t kExplicit = 2048;
        double s = 0.0;
        for (std::uint64_t k = n + 1; k <= n + kExplicit; ++k)
            s += std::exp(-p * profile->f(std::log(static_cast<double>(k))));
        double rest = profile->integral(p, static_cast<double>(n + kExplicit) + 0.5, kInf);
        if (std::isnan(rest)) return std::nullopt;
        return s + rest;
    };
    return EigenvalueSequence::from_generator(gen, cap, tail);
}

EigenvalueSequence step_sequence(const StepSpec& spec, std::uint64_t cap) {
    auto profile = std::make_shared<const StepProfile>(spec);
    if (profile->jumps().back() < static_cast<double>(cap))
        fail(ErrorCode::CapExceeded, "step profile ends before the cap");
    auto gen = [profile](std::uint64_t n) { return profile->mu(static_cast<double>(n)); };
    std::optional<bool> finite_list = !spec.custom_x.empty();
    auto tail = [profile, finite_list](std::uint64_t n, double p) -> std::optional<double> {
        if (*finite_list) return std::nullopt;
        return profile->tail_sum(n, p);
    };
    return EigenvalueSequence::from_generator(gen, cap, tail);
}

double sigma_ratio(const Profile& profile, double gamma, double x, double lambda) {
    require(lambda > 1.0 && x >= 1.0 && gamma > 0.0, ErrorCode::InvalidArgument, "need lambda > 1, x >= 1, gamma > 0");
    if (lambda * x > profile.cap()) fail(ErrorCode::CapExceeded, "lambda x beyond the cap");
    return profile.integral(gamma, 1.0, lambda * x) / profile.integral(gamma, 1.0, x);
}

double s_ratio(const Profile& profile, double gamma, double x, double lambda) {
    require(lambda > 1.0 && x / lambda >= 1.0 && gamma > 0.0, ErrorCode::InvalidArgument,
            "need lambda > 1, x / lambda >= 1, gamma > 0");
    if (x > profile.cap()) fail(ErrorCode::CapExceeded, "x beyond the cap");
    double near = profile.integral(gamma, x, kInf);
    double far = profile.integral(gamma, x / lambda, x);
    return 1.0 + far / near;
}

double trapezoid_integral(const Profile& profile, double gamma, double a, double b, std::size_t nodes_per_piece) {
    require(b > a && std::isfinite(b), ErrorCode::InvalidArgument, "trapezoid needs a finite range");
    std::vector<double> cuts{a};
    for (double y : profile.breakpoints(a, b)) cuts.push_back(y);
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        double u = std::log(cuts[s]), v = std::log(cuts[s + 1]);
        double h = (v - u) / static_cast<double>(nodes_per_piece);
        double inset = 1e-12 * std::max(1.0, std::abs(v));
        auto g = [&](double t) { return std::pow(profile.mu(std::exp(t)), gamma) * std::exp(t); };
        double acc = 0.5 * (g(u + inset) + g(v - inset));
        for (std::size_t i = 1; i < nodes_per_piece; ++i) acc += g(u + h * static_cast<double>(i));
        total += acc * h;
    }
    return total;
}

double two_slope_sigma_bound(const TwoSlopeSpec& spec, double gamma, double lambda, double steep_length) {
    return damp(spec.alpha * gamma - 1.0, steep_length) * growth(1.0 - spec.beta * gamma, lambda);
}

double two_slope_s_bound(const TwoSlopeSpec& spec, double gamma, double lambda, double flat_length) {
    return damp(1.0 - spec.beta * gamma, flat_length) * growth(spec.alpha * gamma - 1.0, lambda);
}

std::vector<double> step_jump_ratios(const StepProfile& profile, std::uint64_t cap) {
    std::vector<double> out;
    const auto& x = profile.jumps();
    const auto& b = profile.log_jumps();
    for (std::size_t j = 0; j + 1 < x.size() && x[j] < static_cast<double>(cap); ++j)
        out.push_back(std::exp(b[j] - b[j + 1]));
    return out;
}

}  // namespace fracspec
