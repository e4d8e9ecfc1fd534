#include "fracspec/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fracspec/error.hpp"
#include "fracspec/kernels.hpp"

namespace fracspec {

void Similarity::apply(const double* x, double* out) const {
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        if (orthogonal.empty()) acc = x[i];
        else
            for (std::size_t k = 0; k < n; ++k) acc += orthogonal[i * n + k] * x[k];
        out[i] = ratio * acc + translation[i];
    }
}

std::vector<double> Similarity::apply(std::span<const double> x) const {
    std::vector<double> out(dim());
    apply(x.data(), out.data());
    return out;
}

void Similarity::validate(bool require_contraction) const {
    require(dim() > 0, ErrorCode::InvalidArgument, "similarity needs a translation vector");
    require(ratio > 0.0 && std::isfinite(ratio), ErrorCode::InvalidArgument, "ratio must be positive");
    if (require_contraction) require(ratio < 1.0, ErrorCode::InvalidArgument, "ratio must be below 1");
    const std::size_t n = dim();
    if (orthogonal.empty()) return;
    require(orthogonal.size() == n * n, ErrorCode::InvalidArgument, "orthogonal part must be N x N");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double dotp = 0.0;
            for (std::size_t k = 0; k < n; ++k) dotp += orthogonal[k * n + i] * orthogonal[k * n + j];
            require(std::abs(dotp - (i == j ? 1.0 : 0.0)) <= 1e-12, ErrorCode::InvalidArgument,
                    "linear part is not orthogonal");
        }
}

Similarity Similarity::scaling(double ratio, std::vector<double> translation) {
    Similarity s;
    s.ratio = ratio;
    s.translation = std::move(translation);
    return s;
}

std::string generation_name(Generation g) {
    switch (g) {
    case Generation::Stationary: return "STATIONARY";
    case Generation::Periodic: return "PERIODIC";
    case Generation::Explicit: return "EXPLICIT";
    }
    return "UNKNOWN";
}

LimitIfs::LimitIfs(Generation generation, std::vector<std::vector<Similarity>> block)
    : generation_(generation), block_(std::move(block)) {
    require(!block_.empty(), ErrorCode::InvalidArgument, "at least one level is required");
    if (generation_ == Generation::Stationary)
        require(block_.size() == 1, ErrorCode::InvalidArgument, "stationary systems have one level");
    const std::size_t n = block_.front().empty() ? 0 : block_.front().front().dim();
    for (const auto& level : block_) {
        require(!level.empty(), ErrorCode::InvalidArgument, "every level needs at least one map");
        for (const auto& w : level) {
            w.validate();
            require(w.dim() == n, ErrorCode::InvalidArgument, "maps must share the ambient dimension");
        }
    }
}

LimitIfs LimitIfs::stationary(std::vector<Similarity> maps) { return LimitIfs(Generation::Stationary, {std::move(maps)}); }
LimitIfs LimitIfs::periodic(std::vector<std::vector<Similarity>> block) {
    return LimitIfs(Generation::Periodic, std::move(block));
}
LimitIfs LimitIfs::explicit_levels(std::vector<std::vector<Similarity>> levels) {
    return LimitIfs(Generation::Explicit, std::move(levels));
}

std::optional<std::size_t> LimitIfs::level_count() const {
    if (generation_ == Generation::Explicit) return block_.size();
    return std::nullopt;
}

const std::vector<Similarity>& LimitIfs::level(std::size_t k) const {
    require(k >= 1, ErrorCode::InvalidArgument, "levels are numbered from 1");
    switch (generation_) {
    case Generation::Stationary: return block_.front();
    case Generation::Periodic: return block_[(k - 1) % block_.size()];
    case Generation::Explicit:
        if (k > block_.size())
            fail(ErrorCode::BudgetExceeded, "explicit system has only " + std::to_string(block_.size()) + " levels");
        return block_[k - 1];
    }
    return block_.front();
}

double LimitIfs::max_ratio(std::size_t k) const {
    double r = 0.0;
    for (const auto& w : level(k)) r = std::max(r, w.ratio);
    return r;
}

bool LimitIfs::translation_flag() const {
    for (const auto& level : block_)
        for (const auto& w : level)
            if (w.ratio != level.front().ratio) return false;
    return true;
}

namespace {

Box image_box(const Similarity& w, const Box& v) {
    const std::size_t n = v.lo.size();
    Box out{std::vector<double>(n, std::numeric_limits<double>::infinity()),
            std::vector<double>(n, -std::numeric_limits<double>::infinity())};
    std::vector<double> corner(n), img(n);
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) corner[i] = (mask >> i) & 1 ? v.hi[i] : v.lo[i];
        w.apply(corner.data(), img.data());
        for (std::size_t i = 0; i < n; ++i) {
            out.lo[i] = std::min(out.lo[i], img[i]);
            out.hi[i] = std::max(out.hi[i], img[i]);
        }
    }
    return out;
}

}  // namespace

OscEvidence osc_evidence(const LimitIfs& ifs, std::size_t depth) {
    OscEvidence ev;
    if (!ifs.osc_box) return ev;
    ev.asserted = true;
    const Box& v = *ifs.osc_box;
    const double tol = 1e-12;
    std::size_t levels = ifs.generation() == Generation::Explicit ? std::min(depth, ifs.block().size())
                                                                  : std::min(depth, ifs.block().size());
    for (std::size_t k = 1; k <= levels; ++k) {
        std::vector<Box> boxes;
        for (const auto& w : ifs.level(k)) boxes.push_back(image_box(w, v));
        for (const auto& b : boxes)
            for (std::size_t i = 0; i < v.lo.size(); ++i)
                if (b.lo[i] < v.lo[i] - tol || b.hi[i] > v.hi[i] + tol) ev.images_inside = false;
        for (std::size_t p = 0; p < boxes.size(); ++p)
            for (std::size_t q = p + 1; q < boxes.size(); ++q) {
                bool overlap = true;
                for (std::size_t i = 0; i < v.lo.size(); ++i)
                    if (std::min(boxes[p].hi[i], boxes[q].hi[i]) - std::max(boxes[p].lo[i], boxes[q].lo[i]) <= tol)
                        overlap = false;
                if (overlap) ev.images_disjoint = false;
            }
        ++ev.levels_checked;
    }
    return ev;
}

std::string Word::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(digits[i] + 1);
    }
    return s;
}

double word_ratio(const LimitIfs& ifs, const Word& w) {
    double r = 1.0;
    for (std::size_t k = 0; k < w.digits.size(); ++k) r *= ifs.level(k + 1).at(w.digits[k]).ratio;
    return r;
}

std::vector<double> apply_word(const LimitIfs& ifs, const Word& w, std::span<const double> x) {
    std::vector<double> cur(x.begin(), x.end()), next(cur.size());
    for (std::size_t k = w.digits.size(); k-- > 0;) {
        ifs.level(k + 1).at(w.digits[k]).apply(cur.data(), next.data());
        std::swap(cur, next);
    }
    return cur;
}

Word word_at(const LimitIfs& ifs, std::size_t depth, std::uint64_t index) {
    Word w;
    w.digits.resize(depth);
    for (std::size_t k = depth; k-- > 0;) {
        auto p = ifs.maps_at(k + 1);
        w.digits[k] = static_cast<std::uint32_t>(index % p);
        index /= p;
    }
    return w;
}

std::optional<std::uint64_t> word_count(const LimitIfs& ifs, std::size_t depth, std::uint64_t limit) {
    std::uint64_t c = 1;
    for (std::size_t k = 1; k <= depth; ++k) {
        c *= ifs.maps_at(k);
        if (c > limit) return std::nullopt;
    }
    return c;
}

double PointCloud::diameter() const {
    // exact for small clouds, bounding-box diagonal otherwise
    const std::size_t n = size();
    if (n < 2) return 0.0;
    if (n <= 2000) {
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double d2 = 0.0;
                for (std::size_t k = 0; k < dim; ++k) {
                    double d = point(i)[k] - point(j)[k];
                    d2 += d * d;
                }
                best = std::max(best, d2);
            }
        return std::sqrt(best);
    }
    double d2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        double lo = point(0)[k], hi = lo;
        for (std::size_t i = 1; i < n; ++i) lo = std::min(lo, point(i)[k]), hi = std::max(hi, point(i)[k]);
        d2 += (hi - lo) * (hi - lo);
    }
    return std::sqrt(d2);
}

namespace {

struct Columns {
    std::vector<std::vector<double>> data;
    std::vector<const double*> ptrs;
};

Columns to_columns(const PointCloud& c, const std::vector<std::size_t>* order = nullptr) {
    Columns out;
    const std::size_t n = c.size();
    out.data.assign(c.dim, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t src = order ? (*order)[i] : i;
        for (std::size_t k = 0; k < c.dim; ++k) out.data[k][i] = c.point(src)[k];
    }
    for (auto& col : out.data) out.ptrs.push_back(col.data());
    return out;
}

// sup over a of the distance to the nearest point of b.
double directed_brute(const PointCloud& a, const PointCloud& b) {
    Columns cols = to_columns(b);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, kernels::min_squared_distance(cols.ptrs.data(), b.dim, b.size(), a.point(i)));
    return std::sqrt(worst);
}

// Same, with b sorted along the first axis and a pruned outward sweep.
double directed_sweep(const PointCloud& a, const PointCloud& b) {
    std::vector<std::size_t> order(b.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return b.point(x)[0] < b.point(y)[0]; });
    Columns cols = to_columns(b, &order);
    const std::vector<double>& x0 = cols.data[0];
    const std::size_t n = b.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double* q = a.point(i);
        auto it = std::lower_bound(x0.begin(), x0.end(), q[0]);
        std::size_t mid = static_cast<std::size_t>(it - x0.begin());
        double best = std::numeric_limits<double>::infinity();
        auto dist2 = [&](std::size_t j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < b.dim; ++k) {
                double d = cols.data[k][j] - q[k];
                d2 += d * d;
            }
            return d2;
        };
        for (std::size_t j = mid; j < n; ++j) {
            double dx = x0[j] - q[0];
            if (dx * dx >= best) break;
            best = std::min(best, dist2(j));
        }
        for (std::size_t j = mid; j-- > 0;) {
            double dx = q[0] - x0[j];
            if (dx * dx >= best) break;
            best = std::min(best, dist2(j));
        }
        worst = std::max(worst, best);
        if (worst == std::numeric_limits<double>::infinity()) break;
    }
    return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
    require(a.dim == b.dim, ErrorCode::InvalidArgument, "clouds differ in dimension");
    require(a.size() > 0 && b.size() > 0, ErrorCode::InvalidArgument, "empty point cloud");
    const bool brute = std::max(a.size(), b.size()) <= 10000;
    auto directed = brute ? directed_brute : directed_sweep;
    return std::max(directed(a, b), directed(b, a));
}

namespace {

bool near_rational(double x, long max_den, double tol) {
    // continued fraction convergents
    double v = x;
    long h0 = 1, h1 = 0, k0 = 0, k1 = 1;
    for (int it = 0; it < 40; ++it) {
        double a = std::floor(v);
        long h2 = static_cast<long>(a) * h0 + h1, k2 = static_cast<long>(a) * k0 + k1;
        if (k2 > max_den) break;
        if (std::abs(x - static_cast<double>(h2) / static_cast<double>(k2)) <= tol * std::max(1.0, std::abs(x)))
            return true;
        h1 = h0, h0 = h2, k1 = k0, k0 = k2;
        double frac = v - a;
        if (frac < 1e-15) break;
        v = 1.0 / frac;
    }
    return false;
}

}  // namespace

bool is_lattice(std::span<const double> ratios) {
    if (ratios.empty()) return true;
    const double base = -std::log(ratios[0]);
    for (double r : ratios)
        if (!near_rational(-std::log(r) / base, 1000, 1e-9)) return false;
    return true;
}

}  // namespace fracspec
