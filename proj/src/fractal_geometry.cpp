#include "fracspec/fractal_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fracspec/error.hpp"
#include "fracspec/sequence.hpp"
#include "stats.hpp"

namespace fracspec {

SimilarityDimension similarity_dimension(std::span<const double> ratios) {
    require(!ratios.empty(), ErrorCode::InvalidArgument, "no ratios");
    for (double r : ratios) require(r > 0.0 && r < 1.0, ErrorCode::InvalidArgument, "ratios must lie in (0, 1)");
    if (ratios.size() == 1) return {0.0, true};
    auto g = [&](double s) {
        double t = 0.0;
        for (double r : ratios) t += std::pow(r, s);
        return t - 1.0;
    };
    double lo = 0.0, hi = 1.0;
    while (g(hi) > 0.0) lo = hi, hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), false};
}

SimilarityDimension similarity_dimension(const LimitIfs& ifs) {
    require(ifs.generation() == Generation::Stationary, ErrorCode::InvalidArgument,
            "similarity dimension needs a stationary system");
    std::vector<double> ratios;
    for (const auto& w : ifs.level(1)) ratios.push_back(w.ratio);
    return similarity_dimension(ratios);
}

namespace {

PointCloud apply_level(const std::vector<Similarity>& maps, const PointCloud& in) {
    PointCloud out;
    out.dim = in.dim;
    out.coords.resize(maps.size() * in.coords.size());
    double* dst = out.coords.data();
    for (const auto& w : maps)
        for (std::size_t i = 0; i < in.size(); ++i, dst += in.dim) w.apply(in.point(i), dst);
    return out;
}

PointCloud compose_levels(const std::vector<std::vector<Similarity>>& levels, std::size_t n, const PointCloud& seed) {
    PointCloud cur = seed;
    for (std::size_t k = n; k-- > 0;) cur = apply_level(levels[k], cur);
    return cur;
}

}  // namespace

ContractionResult contraction_limit(const std::vector<std::vector<Similarity>>& levels, const PointCloud& seed,
                                    std::size_t depth) {
    require(levels.size() >= depth, ErrorCode::InvalidArgument, "fewer levels than the requested depth");
    require(seed.size() > 0, ErrorCode::InvalidArgument, "empty seed");
    for (std::size_t k = 0; k < depth; ++k) {
        require(!levels[k].empty(), ErrorCode::InvalidArgument, "empty level");
        for (const auto& w : levels[k]) {
            w.validate(false);
            require(w.dim() == seed.dim, ErrorCode::InvalidArgument, "seed dimension mismatch");
        }
    }
    std::vector<double> prod(depth + 1, 1.0);
    for (std::size_t k = 1; k <= depth; ++k) {
        double lam = 0.0;
        for (const auto& w : levels[k - 1]) lam = std::max(lam, w.ratio);
        prod[k] = prod[k - 1] * lam;
    }
    if (depth >= 2 && prod[depth] >= prod[(depth + 1) / 2])
        fail(ErrorCode::DivergentSpec, "products of level ratios stop decaying over the generated range");

    ContractionResult out;
    for (std::size_t k = 0; k < depth; ++k)
        out.m_constant = std::max(out.m_constant, hausdorff_distance(apply_level(levels[k], seed), seed));
    PointCloud prev = seed;
    for (std::size_t n = 0; n < depth; ++n) {
        PointCloud next = compose_levels(levels, n + 1, seed);
        out.steps.push_back(hausdorff_distance(next, prev));
        out.bounds.push_back(out.m_constant * prod[n]);
        if (out.steps.back() > out.bounds.back() * (1.0 + 1e-9) + 1e-15) out.dominated = false;
        prev = std::move(next);
    }
    out.cloud = std::move(prev);
    return out;
}

ContractionResult contraction_limit(const LimitIfs& ifs, const PointCloud& seed, std::size_t depth) {
    std::vector<std::vector<Similarity>> levels;
    for (std::size_t k = 1; k <= depth; ++k) levels.push_back(ifs.level(k));
    return contraction_limit(levels, seed, depth);
}

AttractorCloud attractor_cloud(const LimitIfs& ifs, std::size_t depth, std::span<const double> seed,
                               std::uint64_t word_budget) {
    require(seed.size() == ifs.dim(), ErrorCode::InvalidArgument, "seed dimension mismatch");
    if (!word_count(ifs, depth, word_budget))
        fail(ErrorCode::BudgetExceeded, "number of words at depth " + std::to_string(depth) + " exceeds the budget");
    PointCloud cur;
    cur.dim = ifs.dim();
    cur.push(seed);
    for (std::size_t k = depth; k >= 1; --k) cur = apply_level(ifs.level(k), cur);
    return {std::move(cur), depth};
}

void write_cloud_csv(std::ostream& out, const LimitIfs& ifs, const AttractorCloud& cloud) {
    out << "word";
    for (std::size_t k = 0; k < cloud.points.dim; ++k) out << ",x" << (k + 1);
    out << '\n';
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        out << word_at(ifs, cloud.depth, i).to_string();
        for (std::size_t k = 0; k < cloud.points.dim; ++k) out << ',' << format_double(cloud.points.point(i)[k]);
        out << '\n';
    }
}

CylinderMeasure cylinder_measure(const LimitIfs& ifs, double s, std::size_t depth, std::uint64_t word_budget) {
    require(s > 0.0, ErrorCode::InvalidArgument, "s must be positive");
    if (!word_count(ifs, depth, word_budget))
        fail(ErrorCode::BudgetExceeded, "number of words at depth " + std::to_string(depth) + " exceeds the budget");
    CylinderMeasure m{s, depth, {1.0}};
    for (std::size_t k = 1; k <= depth; ++k) {
        const auto& level = ifs.level(k);
        std::vector<double> local;
        double z = 0.0;
        for (const auto& w : level) local.push_back(std::pow(w.ratio, s)), z += local.back();
        for (double& v : local) v /= z;
        std::vector<double> next;
        next.reserve(m.weights.size() * level.size());
        for (double parent : m.weights)
            for (double v : local) next.push_back(parent * v);
        m.weights = std::move(next);
    }
    return m;
}

double cylinder_weight(const LimitIfs& ifs, double s, const Word& w) {
    double weight = 1.0;
    for (std::size_t k = 0; k < w.digits.size(); ++k) {
        const auto& level = ifs.level(k + 1);
        double z = 0.0;
        for (const auto& m : level) z += std::pow(m.ratio, s);
        weight *= std::pow(level.at(w.digits[k]).ratio, s) / z;
    }
    return weight;
}

namespace {

std::size_t count_boxes(const PointCloud& cloud, double eps, const std::vector<double>& origin) {
    const std::size_t n = cloud.size(), dim = cloud.dim;
    std::vector<std::int64_t> keys(n * dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < dim; ++k)
            keys[i * dim + k] = static_cast<std::int64_t>(std::floor((cloud.point(i)[k] - origin[k]) / eps));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(keys.begin() + a * dim, keys.begin() + (a + 1) * dim, keys.begin() + b * dim,
                                            keys.begin() + (b + 1) * dim);
    };
    std::sort(order.begin(), order.end(), less);
    std::size_t distinct = n ? 1 : 0;
    for (std::size_t i = 1; i < n; ++i)
        if (less(order[i - 1], order[i])) ++distinct;
    return distinct;
}

}  // namespace

BoxDimension box_dimension_estimate(const PointCloud& cloud, double resolution, std::vector<double> eps_grid) {
    BoxDimension out;
    const double diam = cloud.diameter();
    if (cloud.size() <= 1 || diam == 0.0) {
        out.dimension = Estimate::exact(0.0);
        return out;
    }
    require(resolution > 0.0, ErrorCode::InvalidArgument, "resolution must be positive");
    if (eps_grid.empty()) {
        for (double e = diam / 4.0; e >= 4.0 * resolution; e *= 0.9) eps_grid.push_back(e);
    }
    require(eps_grid.size() >= 8, ErrorCode::EpsilonBelowResolution, "fewer than 8 usable epsilon values above the resolution");
    for (double e : eps_grid)
        if (e < resolution) fail(ErrorCode::EpsilonBelowResolution, "epsilon " + format_double(e) + " below cloud resolution");
    std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());

    std::vector<double> lo(cloud.dim, kInf);
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t k = 0; k < cloud.dim; ++k) lo[k] = std::min(lo[k], cloud.point(i)[k]);
    std::vector<double> x, y;
    for (double e : eps_grid) {
        // grid offset by an irrational fraction of a box to avoid aligned boundaries
        std::vector<double> origin(lo);
        for (double& o : origin) o -= 0.3819660112501051 * e;
        double count = static_cast<double>(count_boxes(cloud, e, origin));
        out.eps.push_back(e);
        out.counts.push_back(count);
        x.push_back(-std::log(e));
        y.push_back(std::log(count));
    }
    auto full = detail::fit_line(x, y);
    const std::size_t n = x.size(), width = std::max<std::size_t>(n / 2, 2);
    double wmin = kInf, wmax = -kInf;
    for (int w = 0; w < 5; ++w) {
        std::size_t start = (n - width) * w / 4;
        auto fit = detail::fit_line(std::span<const double>(x).subspan(start, width),
                                    std::span<const double>(y).subspan(start, width));
        wmin = std::min(wmin, fit.slope);
        wmax = std::max(wmax, fit.slope);
    }
    out.lower = wmin;
    out.upper = wmax;
    out.dimension = {full.slope, wmin, wmax};
    return out;
}

TranslationDimension translation_dimension_formula(const LimitIfs& ifs, std::size_t depth) {
    require(ifs.translation_flag(), ErrorCode::InvalidArgument, "ratios differ within a level");
    require(depth >= 1, ErrorCode::InvalidArgument, "depth must be positive");
    TranslationDimension out;
    double num = 0.0, den = 0.0;
    for (std::size_t k = 1; k <= depth; ++k) {
        const auto& level = ifs.level(k);
        num += std::log(static_cast<double>(level.size()));
        den += std::log(1.0 / level.front().ratio);
        out.partial_ratios.push_back(num / den);
    }
    std::span<const double> tail(out.partial_ratios.data() + (depth - 1) / 2, depth - (depth - 1) / 2);
    auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    const double last = out.partial_ratios.back();
    out.limsup = {*hi, std::min(*hi, last), *hi};
    out.liminf = {*lo, *lo, std::max(*lo, last)};
    if (ifs.generation() != Generation::Explicit) {
        double bn = 0.0, bd = 0.0;
        for (const auto& level : ifs.block()) {
            bn += std::log(static_cast<double>(level.size()));
            bd += std::log(1.0 / level.front().ratio);
        }
        out.closed_form = bn / bd;
        out.limsup = {bn / bd, bn / bd, bn / bd};
    }
    return out;
}

}  // namespace fracspec
