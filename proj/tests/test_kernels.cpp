#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracspec/asymptotics.hpp"
#include "fracspec/kernels.hpp"

using namespace fracspec;
namespace k = fracspec::kernels;

namespace {

std::vector<const k::KernelTable*> vector_tables() {
    std::vector<const k::KernelTable*> out;
    if (k::avx2_table() && k::isa_supported(k::Isa::Avx2)) out.push_back(k::avx2_table());
    if (k::neon_table() && k::isa_supported(k::Isa::Neon)) out.push_back(k::neon_table());
    return out;
}

std::vector<double> random_values(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

// restores the dispatched ISA when a test leaves scope
struct IsaGuard {
    k::Isa saved = k::active_isa();
    ~IsaGuard() { k::set_isa(saved); }
};

}  // namespace

TEST_CASE("scalar kernels match plain loops") {
    const auto& s = k::scalar_table();
    auto x = random_values(1001, 1);
    double plain = 0.0, clamped = 0.0, dot = 0.0;
    for (double v : x) plain += v, clamped += std::min(v, 0.25), dot += v * v;
    CHECK(s.sum(x.data(), x.size()) == doctest::Approx(plain).epsilon(1e-13));
    CHECK(s.clamped_sum(x.data(), x.size(), 0.25) == doctest::Approx(clamped).epsilon(1e-13));
    CHECK(s.dot(x.data(), x.data(), x.size()) == doctest::Approx(dot).epsilon(1e-13));

    auto mm = s.lagged_difference_extrema(x.data(), x.size(), 7);
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i + 7 < x.size(); ++i) lo = std::min(lo, x[i + 7] - x[i]), hi = std::max(hi, x[i + 7] - x[i]);
    CHECK(mm.min == lo);
    CHECK(mm.max == hi);
}

TEST_CASE("vector kernels agree with the scalar reference") {
    const auto& s = k::scalar_table();
    auto tables = vector_tables();
    if (tables.empty()) MESSAGE("no vector ISA available; only the scalar path is exercised");
    for (const auto* t : tables) {
        // lengths around the vector width exercise the remainder loops
        for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 63u, 100u, 4099u}) {
            CAPTURE(n);
            auto a = random_values(n, 10 + n, 0.0, 2.0);
            auto b = random_values(n, 20 + n);
            const double scale = static_cast<double>(n) + 1.0;
            CHECK(std::abs(t->sum(a.data(), n) - s.sum(a.data(), n)) <= 1e-14 * scale);
            CHECK(std::abs(t->clamped_sum(a.data(), n, 0.7) - s.clamped_sum(a.data(), n, 0.7)) <= 1e-14 * scale);
            CHECK(std::abs(t->dot(a.data(), b.data(), n) - s.dot(a.data(), b.data(), n)) <= 1e-14 * scale);
            if (n > 2) {
                for (std::size_t lag : {std::size_t{1}, n / 2, n - 1}) {
                    auto mt = t->lagged_difference_extrema(a.data(), n, lag);
                    auto ms = s.lagged_difference_extrema(a.data(), n, lag);
                    CHECK(mt.min == ms.min);
                    CHECK(mt.max == ms.max);
                }
            }
        }
        for (std::size_t dim : {1u, 2u, 3u}) {
            for (std::size_t count : {1u, 3u, 4u, 5u, 33u, 1000u}) {
                std::vector<std::vector<double>> cols;
                std::vector<const double*> ptrs;
                for (std::size_t c = 0; c < dim; ++c) cols.push_back(random_values(count, 100 * dim + count + c));
                for (auto& c : cols) ptrs.push_back(c.data());
                auto q = random_values(dim, 7 + dim);
                CHECK(t->min_squared_distance(ptrs.data(), dim, count, q.data()) ==
                      doctest::Approx(s.min_squared_distance(ptrs.data(), dim, count, q.data())).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("analyses give the same answer on every ISA") {
    IsaGuard guard;
    auto seq = EigenvalueSequence::from_generator([](std::uint64_t n) { return 1.0 / static_cast<double>(n); }, 200'000);
    REQUIRE(k::set_isa(k::Isa::Scalar));
    auto ref_order = order_of_infinitesimal(seq);
    auto ref_dix = dixmier_trace_estimate(seq);
    for (k::Isa isa : {k::Isa::Avx2, k::Isa::Neon}) {
        if (!k::set_isa(isa)) continue;
        CAPTURE(k::isa_name(isa));
        auto order = order_of_infinitesimal(seq);
        auto dix = dixmier_trace_estimate(seq);
        CHECK(order.ord.value == doctest::Approx(ref_order.ord.value).epsilon(1e-12));
        CHECK(dix.value.value == doctest::Approx(ref_dix.value.value).epsilon(1e-12));
        CHECK(dix.value.lo == doctest::Approx(ref_dix.value.lo).epsilon(1e-12));
    }
}

TEST_CASE("set_isa refuses unavailable instruction sets") {
    IsaGuard guard;
    CHECK(k::set_isa(k::Isa::Scalar));
    CHECK(k::active_isa() == k::Isa::Scalar);
    for (k::Isa isa : {k::Isa::Avx2, k::Isa::Neon}) {
        if (!k::isa_supported(isa)) {
            CHECK_FALSE(k::set_isa(isa));
            CHECK(k::active_isa() == k::Isa::Scalar);
        }
    }
}
