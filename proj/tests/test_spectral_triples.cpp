#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "fracspec/spectral_triples.hpp"
#include "support.hpp"

using namespace fracspec;

namespace {

Similarity map1(double r, double t) { return Similarity::scaling(r, {t}); }

LimitIfs cantor() {
    auto c = LimitIfs::stationary({map1(1.0 / 3, 0.0), map1(1.0 / 3, 2.0 / 3)});
    c.interval = std::make_pair(0.0, 1.0);
    return c;
}

LimitIfs nonlattice() { return LimitIfs::stationary({map1(0.5, 0.0), map1(1.0 / 3, 2.0 / 3)}); }

using Seeds = std::optional<std::pair<std::vector<double>, std::vector<double>>>;

const double kCantorDim = std::log(2.0) / std::log(3.0);

}  // namespace

TEST_CASE("eigen-entries come in equal pairs") {
    auto pair = pair_triple(cantor(), std::nullopt, 40, 2000);
    CHECK(pair.eigen.size() == 2000);
    for (std::uint64_t k = 1; k < pair.eigen.size(); k += 2) CHECK(pair.eigen(k) == pair.eigen(k + 1));
    CHECK(pair.seed_distance == doctest::Approx(1.0));
    CHECK(pair.blocks() == 1000);

    auto gap = gap_triple(gaps_by_count(cantor(), 1000), nullptr);
    for (std::uint64_t k = 1; k < gap.eigen.size(); k += 2) CHECK(gap.eigen(k) == gap.eigen(k + 1));
    CHECK(gap.eigen(1) == doctest::Approx(1.0 / 3.0));
    CHECK(*gap.x_of_entry(1) == doctest::Approx(1.0 / 3.0));
    CHECK(*gap.y_of_entry(2) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("priority enumeration matches a full sort of all words") {
    auto ifs = nonlattice();
    const std::size_t depth = 7;
    auto model = pair_triple(ifs, std::nullopt, depth, 1'000'000);
    CHECK(model.eigen.exhausted());
    CHECK(model.depth_limited);
    CHECK(model.depth_reached == depth);
    std::vector<double> oracle;
    std::function<void(std::size_t, double)> walk = [&](std::size_t level, double r) {
        if (level > 0) oracle.push_back(r * model.seed_distance);
        if (level == depth) return;
        walk(level + 1, r * 0.5);
        walk(level + 1, r / 3.0);
    };
    walk(0, 1.0);
    std::sort(oracle.begin(), oracle.end(), std::greater<>());
    REQUIRE(model.eigen.size() == 2 * oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(model.eigen(2 * i + 1) == doctest::Approx(oracle[i]).epsilon(1e-14));
}

TEST_CASE("seed choice changes entries by a scale only") {
    auto ifs = cantor();
    auto unit = pair_triple(ifs, Seeds{{{0.0}, {1.0}}}, 40, 4000);
    auto half = pair_triple(ifs, Seeds{{{0.25}, {0.75}}}, 40, 4000);
    for (std::uint64_t k : {1u, 2u, 77u, 4000u}) CHECK(half.eigen(k) == 0.5 * unit.eigen(k));
    CHECK(*half.exact_dimension == doctest::Approx(kCantorDim).epsilon(1e-13));

    // tags move, the state of a Lipschitz functional does not
    auto a = pair_triple(ifs, std::nullopt, 60, 400'000);
    auto b = pair_triple(ifs, Seeds{{{0.1}, {0.35}}}, 60, 400'000);
    auto x = Functional::affine(0.0, {1.0});
    const double va = hausdorff_functional(a, x, kCantorDim).trace.value.value;
    const double vb = hausdorff_functional(b, x, kCantorDim).trace.value.value;
    CHECK(va == doctest::Approx(0.5).epsilon(0.02));
    CHECK(vb == doctest::Approx(va).epsilon(0.02));

    CHECK_ERROR_CODE(pair_triple(ifs, Seeds{{{0.4}, {0.4}}}, 10), ErrorCode::SeedCoincident);
    CHECK_ERROR_CODE(pair_triple(LimitIfs::stationary({map1(0.5, 0.0)}), std::nullopt, 10), ErrorCode::SeedCoincident);
}

TEST_CASE("closed-form zeta agrees with direct sums") {
    auto pair = pair_triple(cantor(), std::nullopt, 60, 2'000'000);
    REQUIRE(pair.zeta.has_value());
    // 2 sum_n 2^n 3^-ns
    auto pair_exact = [](double s) { double y = 2.0 * std::pow(3.0, -s); return 2.0 * y / (1.0 - y); };
    auto gap = gap_triple(gaps_by_count(cantor(), 500'000), nullptr);
    auto src = cantor();
    auto gap_src = gap_triple(gaps_by_count(src, 500'000), &src);
    REQUIRE(gap_src.zeta.has_value());
    // 2 sum_n 2^(n-1) 3^-ns
    auto gap_exact = [](double s) { double y = 2.0 * std::pow(3.0, -s); return std::pow(3.0, -s) * 2.0 / (1.0 - y); };
    for (double s : {0.75, 1.0, 2.0, 3.0}) {
        CAPTURE(s);
        CHECK((*pair.zeta)(s) == doctest::Approx(pair_exact(s)).epsilon(1e-13));
        CHECK((*gap_src.zeta)(s) == doctest::Approx(gap_exact(s)).epsilon(1e-13));
        // the head alone is close to the full sum once s is well above d
        double head = 0.0;
        for (std::uint64_t k = 1; k <= gap.eigen.size(); ++k) head += std::pow(gap.eigen(k), s);
        if (s >= 2.0) CHECK(head == doctest::Approx(gap_exact(s)).epsilon(1e-9));
        auto zp = zeta_partial(gap_src, s);
        // the fitted tail ignores the closed form, so only its band is checked
        CHECK(zp.value.contains(gap_exact(s), 1e-12 * gap_exact(s)));  // slack for summation rounding
        if (s >= 2.0) CHECK(zp.value.value == doctest::Approx(gap_exact(s)).epsilon(1e-9));
        REQUIRE(zp.closed_form.has_value());
        CHECK(*zp.closed_form == doctest::Approx(gap_exact(s)).epsilon(1e-13));
    }
    CHECK(std::isinf((*pair.zeta)(kCantorDim)));
    CHECK(std::isinf((*pair.zeta)(0.5)));
    CHECK(pair.zeta->dimension() == doctest::Approx(kCantorDim).epsilon(1e-14));
    CHECK(pair.zeta->residue(kCantorDim) == doctest::Approx(2.0 / std::log(3.0)).epsilon(1e-12));
    CHECK(gap_src.zeta->residue(kCantorDim) == doctest::Approx(1.0 / std::log(3.0)).epsilon(1e-12));

    CHECK_ERROR_CODE(zeta_partial(pair, 0.6), ErrorCode::SBelowDimension);
    CHECK_ERROR_CODE(zeta_partial(pair, kCantorDim - 1e-9), ErrorCode::SBelowDimension);
}

TEST_CASE("numeric residue tracks the closed form") {
    auto src = cantor();
    auto model = gap_triple(gaps_by_count(src, 200'000), &src);
    auto r = zeta_residue(model);
    CHECK(r.d == doctest::Approx(kCantorDim).epsilon(1e-13));
    CHECK(r.analytic == doctest::Approx(1.0 / std::log(3.0)).epsilon(1e-12));
    CHECK(r.numeric.value == doctest::Approx(r.analytic).epsilon(1e-6));
    CHECK(r.log_normalized == doctest::Approx(r.analytic / r.d));
    CHECK(r.s_grid.size() == r.scaled.size());
    auto bare = gap_triple(gaps_by_count(src, 1000), nullptr);
    CHECK_ERROR_CODE(zeta_residue(bare), ErrorCode::InvalidArgument);
}

TEST_CASE("spectral dimension of Cantor models") {
    auto src = cantor();
    auto gap = gap_triple(gaps_by_count(src, 200'000), &src);
    auto sd = spectral_dimension(gap);
    CHECK(sd.dimension.value == doctest::Approx(kCantorDim).epsilon(0.01));
    REQUIRE(sd.linear.has_value());
    auto pair = pair_triple(src, std::nullopt, 60, 400'000);
    CHECK(spectral_dimension(pair).dimension.value == doctest::Approx(kCantorDim).epsilon(0.01));
}

TEST_CASE("the functional is a state") {
    auto src = cantor();
    auto model = pair_triple(src, std::nullopt, 60, 400'000);
    for (double c : {1.0, -2.5, 7.0}) {
        auto v = hausdorff_functional(model, Functional::constant(c), kCantorDim);
        CHECK(v.trace.value.value == c);
        CHECK(v.trace.measurable);
    }
    // linear in f on a fixed subsequence
    auto base = hausdorff_functional(model, Functional::affine(0.0, {1.0}), kCantorDim);
    auto shifted = hausdorff_functional(model, Functional::affine(2.0, {3.0}), kCantorDim, base.subsequence);
    CHECK(shifted.trace.value.value == doctest::Approx(2.0 + 3.0 * base.trace.value.value).epsilon(1e-12));
    // positive: a nonnegative functional has a nonnegative state
    auto cyl = Functional::smoothed_cylinder(src, Word{{0}});
    auto w = hausdorff_functional(model, cyl, kCantorDim);
    CHECK(w.trace.value.value >= 0.0);
    CHECK(w.trace.value.value <= 1.0);
    CHECK(w.subsequence_source == "log_windows");

    CHECK_ERROR_CODE(hausdorff_functional(model, cyl, 0.0), ErrorCode::InvalidArgument);
}

TEST_CASE("functional construction and evaluation") {
    auto src = cantor();
    auto cyl = Functional::smoothed_cylinder(src, Word{{1, 0}}, 0.01);
    const double inside[] = {0.7}, near[] = {7.0 / 9.0 + 0.005}, far[] = {0.2};
    CHECK(cyl(inside) == 1.0);
    CHECK(cyl(near) == doctest::Approx(0.5).epsilon(0.05));
    CHECK(cyl(far) == 0.0);
    CHECK(cyl.lipschitz() == doctest::Approx(100.0));
    CHECK_ERROR_CODE(Functional::smoothed_cylinder(src, Word{{2}}), ErrorCode::InvalidArgument);
    CHECK_ERROR_CODE(Functional::smoothed_cylinder(src, Word{}), ErrorCode::InvalidArgument);

    auto affine = Functional::affine(1.0, {2.0});
    const double x[] = {0.25};
    CHECK(affine(x) == 1.5);
    CHECK(affine.lipschitz() == 2.0);

    auto tab = Functional::tabulated(1, {0.0, 1.0}, {3.0, 4.0}, 1e-6);
    const double at0[] = {0.0}, at1[] = {1.0 - 1e-9}, mid[] = {0.5};
    CHECK(tab(at0) == 3.0);
    CHECK(tab(at1) == 4.0);
    CHECK_ERROR_CODE(tab(mid), ErrorCode::UndefinedTag);
    CHECK_ERROR_CODE(Functional::tabulated(1, {0.0}, {1.0, 2.0}, 1e-6), ErrorCode::InvalidArgument);

    auto model = pair_triple(src, std::nullopt, 20, 2000);
    CHECK_ERROR_CODE(hausdorff_functional(model, tab, kCantorDim), ErrorCode::UndefinedTag);

    Box box = attractor_box(src);
    CHECK(box.lo[0] <= 0.0);
    CHECK(box.hi[0] >= 1.0);
}

TEST_CASE("model CSV layout") {
    auto model = pair_triple(LimitIfs::stationary({Similarity::scaling(0.5, {0.0, 0.0}), Similarity::scaling(0.5, {0.5, 0.0})}),
                             std::nullopt, 3, 4);
    std::ostringstream out;
    write_model_csv(out, model);
    const std::string csv = out.str();
    CHECK(csv.rfind("k,mu_k,tag_x1,tag_x2,tag_y1,tag_y2\n1,0.5,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("Minkowski link on a non-lattice gap model") {
    auto src = nonlattice();
    auto model = gap_triple(gaps_by_count(src, 400'000), &src);
    const double d = *model.exact_dimension;
    auto link = minkowski_link_check(model, d);
    CHECK_FALSE(link.lattice);
    CHECK(link.equality_asserted);
    CHECK(link.overlap);
    CHECK_ERROR_CODE(minkowski_link_check(model, 1.5), ErrorCode::InvalidArgument);
}
