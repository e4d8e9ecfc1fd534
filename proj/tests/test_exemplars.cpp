#include <doctest.h>

#include <cmath>

#include "fracspec/asymptotics.hpp"
#include "fracspec/exemplars.hpp"
#include "support.hpp"

using namespace fracspec;

namespace {

TwoSlopeSpec two_slope(double alpha, double beta, GapRule::Kind kind, double constant = 1.0) {
    return TwoSlopeSpec{alpha, beta, GapRule{kind, constant, {}}};
}

}  // namespace

TEST_CASE("gap rules") {
    GapRule constant{GapRule::Kind::Constant, 2.5, {}};
    CHECK(constant(1) == 2.5);
    CHECK(constant(40) == 2.5);
    GapRule linear{GapRule::Kind::Linear, 1.0, {}};
    CHECK(linear(1) == 1.0);
    CHECK(linear(7) == 7.0);
    GapRule custom{GapRule::Kind::Custom, 1.0, {0.5, 2.0}};
    CHECK(custom(1) == 0.5);
    CHECK(custom(2) == 2.0);
    CHECK(custom(9) == 2.0);
}

TEST_CASE("two-slope profile alternates slopes between breaks") {
    TwoSlopeProfile p(two_slope(2.0, 1.0, GapRule::Kind::Linear));
    const auto& b = p.log_breaks();
    REQUIRE(b.size() > 5);
    CHECK(b[0] == 0.0);
    CHECK(b[1] == doctest::Approx(1.0));
    CHECK(b[2] == doctest::Approx(3.0));
    CHECK(b[3] == doctest::Approx(6.0));
    CHECK(p.f(0.5) == doctest::Approx(1.0));   // slope 2 on [0, 1)
    CHECK(p.f(2.0) == doctest::Approx(3.0));   // 2 + slope 1 on [1, 3)
    CHECK(p.f(4.0) == doctest::Approx(6.0));   // 4 + slope 2 on [3, 6)
    CHECK(p.mu(std::exp(2.0)) == doctest::Approx(std::exp(-3.0)));
}

TEST_CASE("closed-form integrals agree with the trapezoid rule") {
    TwoSlopeProfile two(two_slope(2.0, 1.0, GapRule::Kind::Linear));
    for (double gamma : {0.5, 2.0 / 3.0, 1.0}) {
        CAPTURE(gamma);
        CHECK(two.integral(gamma, 1.0, 5000.0) == doctest::Approx(trapezoid_integral(two, gamma, 1.0, 5000.0)).epsilon(1e-6));
    }
    PowerProfile power(1.0);
    CHECK(power.integral(1.0, 1.0, std::exp(3.0)) == doctest::Approx(3.0));
    CHECK(std::isinf(power.integral(1.0, 1.0, kInf)));
    CHECK(power.integral(2.0, 1.0, kInf) == doctest::Approx(1.0));

    StepProfile step(StepSpec{});
    CHECK(step.integral(1.5, 1.0, 1e6) == doctest::Approx(trapezoid_integral(step, 1.5, 1.0, 1e6)).epsilon(1e-6));
    CHECK(std::isinf(step.integral(1.0, 1.0, kInf)));
}

TEST_CASE("two-slope sequences sample the profile") {
    auto spec = two_slope(2.0, 1.0, GapRule::Kind::Constant);
    auto seq = two_slope_sequence(spec, 1000);
    TwoSlopeProfile p(spec);
    CHECK(seq(1) == doctest::Approx(1.0));
    for (std::uint64_t n : {2u, 17u, 999u}) CHECK(seq(n) == doctest::Approx(p.mu(static_cast<double>(n))).epsilon(1e-14));
    CHECK_NOTHROW(seq.validate());
    REQUIRE(seq.has_analytic_tail());
    // alpha=2 beta=1 with unit gaps averages slope 3/2, so mu^1 is summable
    auto tail = seq.analytic_tail(1000);
    REQUIRE(tail.has_value());
    CHECK(std::isfinite(*tail));
    CHECK(*tail > 0.0);
}

TEST_CASE("step sequences are constant on plateaus") {
    StepSpec spec;
    spec.q = 2.0;
    StepProfile profile(spec);
    const auto& x = profile.jumps();
    REQUIRE(x.size() > 3);
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 3.0);    // round(e)
    CHECK(x[2] == 55.0);   // round(e^4)
    auto seq = step_sequence(spec, 100'000);
    CHECK(seq(1) == 1.0);
    CHECK(seq(2) == doctest::Approx(1.0 / 3.0));
    CHECK(seq(3) == doctest::Approx(1.0 / 3.0));
    CHECK(seq(4) == doctest::Approx(1.0 / 55.0));
    CHECK(seq(55) == doctest::Approx(1.0 / 55.0));
    CHECK(seq(56) < seq(55));

    auto ratios = step_jump_ratios(profile, 100'000);
    REQUIRE(ratios.size() >= 2);
    CHECK(ratios[0] == doctest::Approx(1.0 / 3.0));
    CHECK(ratios[1] == doctest::Approx(3.0 / 55.0));

    CHECK(std::isinf(profile.tail_sum(10, 1.0)));
    CHECK(std::isfinite(profile.tail_sum(10, 2.0)));

    StepSpec custom;
    custom.custom_x = {4.0, 20.0, 100.0};
    CHECK_ERROR_CODE(step_sequence(custom, 1000), ErrorCode::CapExceeded);
    auto short_seq = step_sequence(custom, 100);
    CHECK(short_seq(5) == doctest::Approx(1.0 / 20.0));

    StepSpec bad;
    bad.q = 1.0;
    CHECK_ERROR_CODE(StepProfile{bad}, ErrorCode::SpecNotDiverging);
    StepSpec unordered;
    unordered.custom_x = {10.0, 5.0};
    CHECK_ERROR_CODE(StepProfile{unordered}, ErrorCode::InvalidArgument);
}

TEST_CASE("two-slope ratio bounds dominate the measured ratios") {
    auto spec = two_slope(2.0, 1.0, GapRule::Kind::Linear);
    TwoSlopeProfile p(spec);
    const auto& b = p.log_breaks();
    const double lambda = 2.0;
    for (double gamma : {0.5, 0.75, 1.0}) {
        CAPTURE(gamma);
        // right end of the steep pieces and left end of the flat ones
        for (std::size_t k = 3; k + 1 < b.size() && b[k] < 40.0; k += 2) {
            const double x = std::exp(b[k]);
            const double steep = b[k] - b[k - 1];
            const double flat = b[k + 1] - b[k];
            CHECK(sigma_ratio(p, gamma, x, lambda) - 1.0 <= two_slope_sigma_bound(spec, gamma, lambda, steep) + 1e-12);
            CHECK(s_ratio(p, gamma, x, lambda) - 1.0 <= two_slope_s_bound(spec, gamma, lambda, flat) + 1e-12);
        }
    }
    CHECK_ERROR_CODE(sigma_ratio(p, 1.0, 10.0, 1.0), ErrorCode::InvalidArgument);
}

TEST_CASE("two-slope c bounds follow the slope pair") {
    auto seq = two_slope_sequence(two_slope(3.0, 1.0, GapRule::Kind::Linear), 1'000'000);
    auto cb = c_bounds(log_profile(seq));
    CHECK(cb.lower.value == doctest::Approx(1.0 / 3.0).epsilon(0.05));
    CHECK(cb.upper.value == doctest::Approx(1.0).epsilon(0.05));
}
