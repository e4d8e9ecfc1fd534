// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fracspec/asymptotics.hpp"
#include "fracspec/exemplars.hpp"
#include "fracspec/fractal_geometry.hpp"
#include "fracspec/spectral_triples.hpp"

using namespace fracspec;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail << "\n    [" << (ok ? "ok" : "FAIL") << "] " << what;
    }
};

std::string num(double x, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string band(const Estimate& e) { return num(e.value) + " [" + num(e.lo) + ", " + num(e.hi) + "]"; }

bool within(double x, double target, double tol) { return std::abs(x - target) <= tol; }

Similarity map1(double r, double t) { return Similarity::scaling(r, {t}); }

LimitIfs cantor() { return LimitIfs::stationary({map1(1.0 / 3, 0.0), map1(1.0 / 3, 2.0 / 3)}); }
LimitIfs nonlattice() { return LimitIfs::stationary({map1(0.5, 0.0), map1(1.0 / 3, 2.0 / 3)}); }

int failures = 0;

void criterion(int id, const std::string& title, double time_limit, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.check(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit > 0.0) o.check(seconds < time_limit, "runtime " + num(seconds, 3) + " s < " + num(time_limit) + " s");
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), seconds,
                o.detail.str().c_str());
    std::fflush(stdout);
}

void eccentric_for(Outcome& o, const EigenvalueSequence& seq, double exponent, const std::string& name) {
    auto powered = seq.power(exponent);
    const SumKind kind = sum_kind_for(powered);
    auto scan = eccentricity_scan(powered, kind, 0.02);
    o.check(!scan.accepted.empty(), "eccentricity_scan of mu^" + name + " (" + std::string(sum_kind_name(kind)) +
                                        ") accepts " + std::to_string(scan.accepted.size()) +
                                        " indices; smallest |S_2n/S_n - 1| = " + num(scan.min_gap, 4) + " at n = " +
                                        std::to_string(scan.argmin));
}

// sandwich c_lower <= 1/ord <= c_upper, reused by the property suite
struct SandwichCase {
    std::string name;
    bool holds;
};
std::vector<SandwichCase> sandwich_cases;

void record_sandwich(const std::string& name, const EigenvalueSequence& seq) {
    auto order = order_of_infinitesimal(seq);
    auto dim = reciprocal(order.ord);
    auto cb = c_bounds(log_profile(seq));
    sandwich_cases.push_back({name, cb.lower.lo <= dim.hi && dim.lo <= cb.upper.hi});
}

}  // namespace

int main() {
    constexpr std::uint64_t kCap = 1'000'000;
    constexpr std::uint64_t kEntries = 2'000'000;
    const double log23 = std::log(2.0) / std::log(3.0);

    criterion(1, "two-slope exemplar, alpha=2 beta=1 a_n=1: c bounds near 2/3", 10.0, [&](Outcome& o) {
        TwoSlopeSpec spec{2.0, 1.0, GapRule{GapRule::Kind::Constant, 1.0, {}}};
        auto seq = two_slope_sequence(spec, kCap);
        auto cb = c_bounds(log_profile(seq));
        o.check(within(cb.lower.value, 2.0 / 3, 0.05), "c_lower = " + band(cb.lower) + " within 0.05 of 2/3");
        o.check(within(cb.upper.value, 2.0 / 3, 0.05), "c_upper = " + band(cb.upper) + " within 0.05 of 2/3");
        record_sandwich("two-slope a_n=1", seq);
    });

    criterion(2, "two-slope exemplar, alpha=2 beta=1 a_n=n: c bounds, ord and eccentricity", 30.0, [&](Outcome& o) {
        TwoSlopeSpec spec{2.0, 1.0, GapRule{GapRule::Kind::Linear, 1.0, {}}};
        auto seq = two_slope_sequence(spec, kCap);
        auto cb = c_bounds(log_profile(seq));
        auto order = order_of_infinitesimal(seq);
        o.check(within(cb.lower.value, 0.5, 0.05), "c_lower = " + band(cb.lower) + " in 0.5 +- 0.05");
        o.check(within(cb.upper.value, 1.0, 0.05), "c_upper = " + band(cb.upper) + " in 1.0 +- 0.05");
        o.check(within(order.ord.value, 1.5, 0.05), "ord = " + band(order.ord) + " in 1.5 +- 0.05");
        eccentric_for(o, seq, 0.5, "0.5");
        eccentric_for(o, seq, 2.0 / 3, "2/3");
        eccentric_for(o, seq, 1.0, "1");
        record_sandwich("two-slope a_n=n", seq);
    });

    criterion(3, "step exemplar, q=2: ord, c bounds and eccentricity", 30.0, [&](Outcome& o) {
        StepSpec spec;
        spec.q = 2.0;
        auto seq = step_sequence(spec, kCap);
        auto order = order_of_infinitesimal(seq);
        auto cb = c_bounds(log_profile(seq));
        o.check(within(order.ord.value, 1.0, 0.05), "ord = " + band(order.ord) + " in 1 +- 0.05");
        o.check(cb.lower.value < 0.05, "c_lower = " + band(cb.lower) + " < 0.05");
        o.check(cb.upper_unresolved && !(cb.upper.value <= cb.h_grid_max),
                "c_upper = " + band(cb.upper) + " unresolved above the largest window h = " + num(cb.h_grid_max));
        for (double a : {0.5, 1.0, 2.0, 4.0}) eccentric_for(o, seq, a, num(a));
        record_sandwich("step q=2", seq);
    });

    criterion(4, "Cantor set: similarity, gap-triple, pair-triple and box dimensions agree", 60.0, [&](Outcome& o) {
        auto ifs = cantor();
        auto sd = similarity_dimension(ifs);
        o.check(std::abs(sd.value - log23) <= 1e-12,
                "similarity dimension " + num(sd.value, 17) + " vs log2/log3, error " + num(sd.value - log23, 3));

        auto gaps = gaps_by_count(ifs, kEntries / 2);
        auto gm = gap_triple(gaps, &ifs);
        if (gm.eigen.size() > kEntries) gm.eigen = gm.eigen.truncated(kEntries);
        auto gd = spectral_dimension(gm);
        o.check(within(gd.dimension.value, log23, 0.01),
                "gap triple (" + std::to_string(gm.eigen.size()) + " entries) dimension " + band(gd.dimension));
        record_sandwich("Cantor gap triple", gm.eigen);

        auto pm = pair_triple(ifs, std::nullopt, 1000, kEntries);
        auto pd = spectral_dimension(pm);
        o.check(within(pd.dimension.value, log23, 0.01),
                "pair triple (" + std::to_string(pm.eigen.size()) + " entries) dimension " + band(pd.dimension));
        record_sandwich("Cantor pair triple", pm.eigen);

        std::vector<double> seed{0.0};
        auto cloud = attractor_cloud(ifs, 12, seed);
        auto bd = box_dimension_estimate(cloud.points, std::pow(3.0, -12));
        o.check(within(bd.dimension.value, log23, 0.03), "box dimension at depth 12 " + band(bd.dimension));
    });

    criterion(5, "translation formula matches the pair triple on periodic blocks (2, 1/4), (3, 1/3)", 0.0,
              [&](Outcome& o) {
                  auto ifs = LimitIfs::periodic({{map1(0.25, 0.0), map1(0.25, 0.75)},
                                                 {map1(1.0 / 3, 0.0), map1(1.0 / 3, 1.0 / 3), map1(1.0 / 3, 2.0 / 3)}});
                  const double expected = (std::log(2.0) + std::log(3.0)) / (std::log(4.0) + std::log(3.0));
                  auto tf = translation_dimension_formula(ifs, 20);
                  o.check(tf.closed_form && std::abs(*tf.closed_form - expected) <= 1e-12,
                          "closed form " + num(tf.closed_form.value_or(NAN), 12) + " vs (log2+log3)/(log4+log3) = " +
                              num(expected, 12));
                  auto pm = pair_triple(ifs, std::nullopt, 1000, kEntries);
                  auto pd = spectral_dimension(pm);
                  o.check(within(pd.dimension.value, expected, 0.02),
                          "pair triple dimension " + band(pd.dimension) + " within 0.02 of " + num(expected));
                  record_sandwich("periodic pair triple", pm.eigen);
              });

    criterion(6, "non-lattice (1/2, 1/3) pair triple: zeta residue and Dixmier trace", 0.0, [&](Outcome& o) {
        auto ifs = nonlattice();
        auto pm = pair_triple(ifs, std::nullopt, 1000, kEntries);
        auto zr = zeta_residue(pm);
        o.check(std::abs(zr.analytic - zr.numeric.value) <= 1e-4,
                "residue L = " + num(zr.analytic, 10) + ", numeric " + band(zr.numeric) + ", difference " +
                    num(zr.analytic - zr.numeric.value, 3));
        auto dx = dixmier_trace_estimate(pm.eigen.power(zr.d));
        o.check(dx.value.contains(zr.analytic),
                "Dixmier band " + band(dx.value) + " contains L = " + num(zr.analytic) + " (note: L/d = " +
                    num(zr.log_normalized) + (dx.value.contains(zr.log_normalized) ? " is inside the band)" : " is outside the band)"));
        record_sandwich("non-lattice pair triple", pm.eigen);
    });

    criterion(7, "functionals on cylinders reproduce the limit measure", 0.0, [&](Outcome& o) {
        auto ifs = cantor();
        const double d = similarity_dimension(ifs).value;
        auto pm = pair_triple(ifs, std::nullopt, 1000, kEntries);
        for (std::uint32_t j = 0; j < 2; ++j) {
            Word w{{j}};
            auto hv = hausdorff_functional(pm, Functional::smoothed_cylinder(ifs, w), d);
            o.check(hv.trace.value.contains(0.5) && hv.trace.value.width() < 0.05,
                    "Cantor cylinder " + w.to_string() + ": " + band(hv.trace.value) + " holds 0.5, width " +
                        num(hv.trace.value.width(), 3) + " < 0.05");
        }

        auto tr = LimitIfs::periodic({{map1(1.0 / 3, 0.0), map1(1.0 / 3, 2.0 / 3)},
                                      {map1(0.2, 0.0), map1(0.2, 0.4), map1(0.2, 0.8)}});
        std::uint64_t words = 0, level = 1;
        for (std::size_t k = 1; k <= 10; ++k) words += (level *= tr.maps_at(k));
        auto tm = pair_triple(tr, std::nullopt, 1000, 2 * words);
        const double td = *tm.exact_dimension;
        for (const Word& w : {Word{{0}}, Word{{1}}, Word{{0, 0}}, Word{{1, 2}}}) {
            auto hv = hausdorff_functional(tm, Functional::smoothed_cylinder(tr, w), td);
            const double weight = cylinder_weight(tr, td, w);
            // band edges are sums of the same terms in another order
            o.check(hv.trace.value.contains(weight, 1e-12 * weight),
                    "translation fractal cylinder " + w.to_string() + ": " + band(hv.trace.value) +
                        " vs cylinder weight " + num(weight));
        }
    });

    criterion(8, "property suites", 0.0, [&](Outcome& o) {
        std::mt19937_64 rng(20260917);
        std::uniform_real_distribution<double> p_dist(0.5, 3.0), q_dist(-1.0, 1.0), a_dist(0.3, 3.0);

        // ord homogeneity: ord(mu^a) = a ord(mu)
        int homogeneous = 0;
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double p = p_dist(rng), q = q_dist(rng), a = a_dist(rng);
            auto seq = EigenvalueSequence::from_generator(
                [p, q](std::uint64_t n) {
                    const double x = static_cast<double>(n);
                    return std::pow(x, -p) * std::pow(std::log(x + 2.0), -q);
                },
                200'000);
            const double base = order_of_infinitesimal(seq).ord.value;
            const double powered = order_of_infinitesimal(seq.power(a)).ord.value;
            const double err = std::abs(powered - a * base) / (a * base);
            worst = std::max(worst, err);
            homogeneous += err <= 1e-9;
        }
        o.check(homogeneous == 50, "ord homogeneity on " + std::to_string(homogeneous) +
                                       "/50 random sequences, worst relative error " + num(worst, 3));

        int sandwiched = 0;
        std::string broken;
        for (const auto& c : sandwich_cases) {
            sandwiched += c.holds;
            if (!c.holds) broken += " " + c.name + ";";
        }
        o.check(sandwiched == static_cast<int>(sandwich_cases.size()) && !sandwich_cases.empty(),
                "sandwich c_lower <= 1/ord <= c_upper on " + std::to_string(sandwiched) + "/" +
                    std::to_string(sandwich_cases.size()) + " analyzed models" + (broken.empty() ? "" : ":" + broken));

        // cylinder weights of every word at a depth sum to one
        {
            std::vector<LimitIfs> systems{
                cantor(), nonlattice(),
                LimitIfs::periodic({{map1(0.25, 0.0), map1(0.25, 0.75)},
                                    {map1(1.0 / 3, 0.0), map1(1.0 / 3, 1.0 / 3), map1(1.0 / 3, 2.0 / 3)}}),
                LimitIfs::stationary({Similarity::scaling(0.5, {0.0, 0.0}), Similarity::scaling(0.5, {0.5, 0.0}),
                                      Similarity::scaling(0.5, {0.25, 0.5})})};
            double worst_sum = 0.0;
            for (const auto& ifs : systems) {
                double s = 0.0;
                if (ifs.generation() == Generation::Stationary) s = similarity_dimension(ifs).value;
                else s = *translation_dimension_formula(ifs, 2).closed_form;
                for (std::size_t depth : {1, 3, 6}) {
                    double total = 0.0;
                    for (double w : cylinder_measure(ifs, s, depth).weights) total += w;
                    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
                }
            }
            o.check(worst_sum <= 1e-12, "cylinder weights sum to 1, worst deviation " + num(worst_sum, 3));
        }

        // gap conservation in exact rational arithmetic
        {
            std::vector<LimitIfs> systems{cantor(), nonlattice(),
                                          LimitIfs::stationary({map1(0.2, 0.0), map1(0.3, 0.35), map1(0.25, 0.75)}),
                                          LimitIfs::periodic({{map1(0.25, 0.0), map1(0.25, 0.75)},
                                                              {map1(0.2, 0.0), map1(0.2, 0.4), map1(0.2, 0.8)}})};
            int conserved = 0;
            for (auto& ifs : systems) {
                ifs.interval = std::make_pair(0.0, 1.0);
                auto gl = gaps_from_interval_ifs(ifs, 8);
                conserved += gl.exact && gl.exact_conserved && gl.exact_total == "1";
            }
            o.check(conserved == static_cast<int>(systems.size()),
                    "gaps plus residual intervals total exactly 1 on " + std::to_string(conserved) + "/" +
                        std::to_string(systems.size()) + " rational systems");
        }

        // contraction bound on random non-stationary systems
        {
            std::uniform_real_distribution<double> r_dist(0.1, 0.6), t_dist(-1.0, 1.0), angle(0.0, 6.283185307179586);
            std::uniform_int_distribution<int> maps_dist(2, 3);
            int dominated = 0;
            for (int i = 0; i < 10; ++i) {
                const std::size_t dim = 1 + static_cast<std::size_t>(i % 2);
                std::vector<std::vector<Similarity>> levels;
                for (int k = 0; k < 7; ++k) {
                    std::vector<Similarity> level;
                    for (int j = maps_dist(rng); j > 0; --j) {
                        Similarity s;
                        s.ratio = r_dist(rng);
                        for (std::size_t c = 0; c < dim; ++c) s.translation.push_back(t_dist(rng));
                        if (dim == 2) {
                            const double th = angle(rng);
                            s.orthogonal = {std::cos(th), -std::sin(th), std::sin(th), std::cos(th)};
                        }
                        level.push_back(std::move(s));
                    }
                    levels.push_back(std::move(level));
                }
                PointCloud seed;
                seed.dim = dim;
                seed.push(std::vector<double>(dim, 0.25));
                seed.push(std::vector<double>(dim, -0.5));
                auto cr = contraction_limit(LimitIfs::explicit_levels(levels), seed, levels.size());
                dominated += cr.dominated;
            }
            o.check(dominated == 10, "rho(S_{n+1}K, S_nK) <= M prod lambda_j on " + std::to_string(dominated) +
                                         "/10 random non-stationary systems");
        }

        // the spectral dimension does not depend on the seed pair
        {
            struct Instance {
                std::string name;
                LimitIfs ifs;
                std::vector<double> x, y;
            };
            std::vector<Instance> instances{
                {"Cantor", cantor(), {0.1}, {0.75}},
                {"non-lattice", nonlattice(), {0.2}, {0.9}},
                {"periodic", LimitIfs::periodic({{map1(0.25, 0.0), map1(0.25, 0.75)},
                                                  {map1(1.0 / 3, 0.0), map1(1.0 / 3, 1.0 / 3), map1(1.0 / 3, 2.0 / 3)}}),
                 {0.05},
                 {0.6}},
                {"Sierpinski", LimitIfs::stationary({Similarity::scaling(0.5, {0.0, 0.0}),
                                                     Similarity::scaling(0.5, {0.5, 0.0}),
                                                     Similarity::scaling(0.5, {0.25, 0.5})}),
                 {0.1, 0.1},
                 {0.7, 0.3}},
                {"three-map line", LimitIfs::stationary({map1(0.2, 0.0), map1(0.3, 0.35), map1(0.25, 0.75)}),
                 {0.3},
                 {0.9}},
            };
            int independent = 0;
            std::string detail;
            for (const auto& inst : instances) {
                auto a = spectral_dimension(pair_triple(inst.ifs, std::nullopt, 1000, 400'000)).dimension;
                auto b = spectral_dimension(pair_triple(inst.ifs, std::make_pair(inst.x, inst.y), 1000, 400'000)).dimension;
                const bool ok = overlaps(a, b) && std::abs(a.value - b.value) <= 0.01;
                independent += ok;
                detail += " " + inst.name + " " + num(a.value, 4) + "/" + num(b.value, 4) + ";";
            }
            o.check(independent == static_cast<int>(instances.size()),
                    "seed-pair independence on " + std::to_string(independent) + "/" +
                        std::to_string(instances.size()) + " systems:" + detail);
        }
    });

    criterion(9, "Minkowski link: Dixmier trace against 2^d (1-d) M_d", 0.0, [&](Outcome& o) {
        auto nl = nonlattice();
        nl.interval = std::make_pair(0.0, 1.0);
        auto ng = gap_triple(gaps_by_count(nl, kEntries / 2), &nl);
        if (ng.eigen.size() > kEntries) ng.eigen = ng.eigen.truncated(kEntries);
        auto link = minkowski_link_check(ng, *ng.exact_dimension);
        o.check(!link.lattice && link.equality_asserted && link.overlap,
                "non-lattice: Dixmier " + band(link.dixmier.value) + " and scaled content " +
                    band(link.scaled_content) + " overlap");

        auto c = cantor();
        c.interval = std::make_pair(0.0, 1.0);
        auto cg = gap_triple(gaps_by_count(c, kEntries / 2), &c);
        if (cg.eigen.size() > kEntries) cg.eigen = cg.eigen.truncated(kEntries);
        auto lc = minkowski_link_check(cg, *cg.exact_dimension);
        o.check(lc.lattice && !lc.equality_asserted && std::isfinite(lc.dixmier.value.width()) &&
                    std::isfinite(lc.scaled_content.width()),
                "lattice Cantor: bands reported without asserting equality; Dixmier " + band(lc.dixmier.value) +
                    ", scaled content " + band(lc.scaled_content) + (lc.overlap ? " (overlapping)" : " (disjoint)"));
    });

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
    return failures == 0 ? 0 : 1;
}
