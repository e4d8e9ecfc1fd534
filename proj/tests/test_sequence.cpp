#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fracspec/sequence.hpp"
#include "support.hpp"

using namespace fracspec;

TEST_CASE("stored and generated sequences index from one") {
    auto stored = EigenvalueSequence::from_values({1.0, 0.5, 0.25});
    CHECK(stored.size() == 3);
    CHECK(stored.exhausted());
    CHECK(stored(1) == 1.0);
    CHECK(stored(3) == 0.25);
    CHECK_ERROR_CODE(stored(0), ErrorCode::CapExceeded);
    CHECK_ERROR_CODE(stored(4), ErrorCode::CapExceeded);

    auto gen = EigenvalueSequence::from_generator([](std::uint64_t n) { return 1.0 / static_cast<double>(n); }, 100);
    CHECK_FALSE(gen.exhausted());
    CHECK(gen(4) == 0.25);
    CHECK(gen.size() == 100);
}

TEST_CASE("power composes exponents and truncation drops exhaustion") {
    auto seq = EigenvalueSequence::from_values({1.0, 0.5, 0.25, 0.125});
    auto sq = seq.power(2.0);
    CHECK(sq(2) == doctest::Approx(0.25));
    CHECK(sq.power(0.5)(3) == doctest::Approx(0.25));
    CHECK(sq.exponent() == 2.0);
    CHECK_ERROR_CODE(seq.power(0.0), ErrorCode::InvalidArgument);
    CHECK_ERROR_CODE(seq.power(-1.0), ErrorCode::InvalidArgument);

    auto cut = seq.truncated(2);
    CHECK(cut.size() == 2);
    CHECK_FALSE(cut.exhausted());
    CHECK(cut(2) == 0.5);
}

TEST_CASE("blocks cover a range in order") {
    auto seq = EigenvalueSequence::from_generator([](std::uint64_t n) { return 1.0 / static_cast<double>(n); }, 10'000);
    std::uint64_t expected = 3;
    double total = 0.0;
    seq.for_each_block(3, 9'000, [&](std::uint64_t first, std::span<const double> b) {
        CHECK(first == expected);
        expected += b.size();
        for (double v : b) total += v;
    });
    CHECK(expected == 9'001);
    double direct = 0.0;
    for (std::uint64_t n = 3; n <= 9'000; ++n) direct += 1.0 / static_cast<double>(n);
    CHECK(total == doctest::Approx(direct).epsilon(1e-13));
    CHECK(seq.materialize(5, 7).size() == 3);
}

TEST_CASE("validation names the offending index") {
    CHECK_ERROR_CODE(EigenvalueSequence::from_values({1.0, 0.0}).validate(), ErrorCode::NotPositive);
    CHECK_ERROR_CODE(EigenvalueSequence::from_values({1.0, -2.0}).validate(), ErrorCode::NotPositive);
    CHECK_ERROR_CODE(EigenvalueSequence::from_values({1.0, 0.5, 0.6}).validate(), ErrorCode::NotMonotone);
    CHECK_ERROR_CODE(EigenvalueSequence::from_values({0.5, 0.5, 0.5}, false).validate(), ErrorCode::NotVanishing);
    CHECK_NOTHROW(EigenvalueSequence::from_values({0.5, 0.5, 0.5}, true).validate());
    try {
        EigenvalueSequence::from_values({1.0, 0.5, 0.6}).validate();
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("mu_3") != std::string::npos);
    }
}

TEST_CASE("csv uses 17 significant digits and a header") {
    auto seq = EigenvalueSequence::from_values({1.0 / 3.0, 0.1});
    std::ostringstream out;
    seq.write_csv(out);
    CHECK(out.str() == "n,mu_n\n1,0.33333333333333331\n2,0.10000000000000001\n");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_double(INFINITY) == "inf");
    CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("analytic tails are forwarded") {
    auto seq = EigenvalueSequence::from_generator(
        [](std::uint64_t n) { return std::pow(2.0, -static_cast<double>(n)); }, 20,
        [](std::uint64_t n, double p) -> std::optional<double> {
            const double r = std::pow(2.0, -p);
            return std::pow(r, static_cast<double>(n + 1)) / (1.0 - r);
        });
    REQUIRE(seq.has_analytic_tail());
    CHECK(*seq.analytic_tail(20) == doctest::Approx(std::pow(2.0, -20)));
    CHECK(*seq.power(2.0).analytic_tail(0) == doctest::Approx(1.0 / 3.0));
}
