#include "fracspec/spectral_triples.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "fracspec/error.hpp"
#include "fracspec/kernels.hpp"
#include "stats.hpp"

namespace fracspec {

// ---------------------------------------------------------------- zeta

namespace {

double level_sum(const std::vector<double>& v, double s) {
    double t = 0.0;
    for (double x : v) t += std::pow(x, s);
    return t;
}

double block_product(const ClosedZeta& z, double s) {
    double p = 1.0;
    for (const auto& r : z.ratios) p *= level_sum(r, s);
    return p;
}

}  // namespace

double ClosedZeta::operator()(double s) const {
    const double period = block_product(*this, s);
    // within rounding of the pole counts as the pole
    if (!(period < 1.0 - 1e-12)) return kInf;
    double numerator = 0.0, prefix = 1.0;
    for (std::size_t n = 0; n < ratios.size(); ++n) {
        numerator += prefix * level_sum(weights[n], s);
        prefix *= level_sum(ratios[n], s);
    }
    return 2.0 * numerator / (1.0 - period);
}

double ClosedZeta::dimension() const {
    double lo = 0.0, hi = 1.0;
    while (block_product(*this, hi) > 1.0) lo = hi, hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        (block_product(*this, mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double ClosedZeta::residue(double d) const {
    double numerator = 0.0, prefix = 1.0, slope = 0.0;
    for (std::size_t n = 0; n < ratios.size(); ++n) {
        numerator += prefix * level_sum(weights[n], d);
        const double lam = level_sum(ratios[n], d);
        prefix *= lam;
        double deriv = 0.0;
        for (double r : ratios[n]) deriv += std::pow(r, d) * std::log(1.0 / r);
        slope += deriv / lam;
    }
    return 2.0 * numerator / slope;
}

namespace {

EigenvalueSequence::TailSum closed_tail(std::shared_ptr<const std::vector<double>> values, ClosedZeta zeta) {
    return [values, zeta](std::uint64_t n, double p) -> std::optional<double> {
        const double total = zeta(p);
        if (std::isinf(total)) return kInf;
        double head = 0.0;
        const std::uint64_t m = std::min<std::uint64_t>(n, values->size());
        for (std::uint64_t k = 0; k < m; ++k) head += std::pow((*values)[k], p);
        return std::max(0.0, total - head);
    };
}

std::vector<double> all_ratios(const LimitIfs& ifs) {
    std::vector<double> out;
    for (const auto& level : ifs.block())
        for (const auto& w : level) out.push_back(w.ratio);
    return out;
}

// Gap lengths between the sorted images of [a, b] under one level.
std::vector<double> base_gaps(const std::vector<Similarity>& level, double a, double b) {
    std::vector<std::pair<double, double>> images;
    for (const auto& w : level) {
        double u = w.apply(std::vector<double>{a})[0], v = w.apply(std::vector<double>{b})[0];
        images.push_back({std::min(u, v), std::max(u, v)});
    }
    std::sort(images.begin(), images.end());
    std::vector<double> out;
    const double tol = 1e-12 * (b - a);
    for (std::size_t j = 1; j < images.size(); ++j) {
        double g = images[j].first - images[j - 1].second;
        if (g > tol) out.push_back(g);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- models

GapTripleModel gap_triple(const GapList& gaps, const LimitIfs* source) {
    GapTripleModel m;
    m.gaps = gaps;
    m.dim = 1;
    std::vector<double> values;
    for (const auto& g : gaps.gaps) {
        if (!(g.length > gaps.complete_above)) break;
        values.push_back(g.length);
        values.push_back(g.length);
        m.tag_x.push_back(g.left);
        m.tag_y.push_back(g.right);
    }
    const bool finished = gaps.max_gap_fraction == 0.0 || gaps.residual_total == 0.0;
    auto shared = std::make_shared<const std::vector<double>>(values);
    EigenvalueSequence::TailSum tail;
    if (source && source->generation() != Generation::Explicit && !finished) {
        ClosedZeta z;
        for (const auto& level : source->block()) {
            std::vector<double> r;
            for (const auto& w : level) r.push_back(w.ratio);
            z.ratios.push_back(std::move(r));
            z.weights.push_back(base_gaps(level, gaps.a, gaps.b));
        }
        m.zeta = z;
        m.exact_dimension = z.dimension();
        tail = closed_tail(shared, z);
    }
    if (source) {
        m.lattice_ratios = all_ratios(*source);
        m.source = *source;
    }
    m.eigen = EigenvalueSequence::from_values(std::move(values), finished, std::move(tail));
    return m;
}

namespace {

std::vector<double> fixed_point(const Similarity& w) {
    const std::size_t n = w.dim();
    // (I - r O) x = t by Gaussian elimination with partial pivoting
    std::vector<double> a(n * n), x(w.translation);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double o = w.orthogonal.empty() ? (i == j ? 1.0 : 0.0) : w.orthogonal[i * n + j];
            a[i * n + j] = (i == j ? 1.0 : 0.0) - w.ratio * o;
        }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
            std::swap(x[c], x[piv]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            double f = a[r * n + c] / a[c * n + c];
            for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
            x[r] -= f * x[c];
        }
    }
    for (std::size_t c = n; c-- > 0;) {
        for (std::size_t j = c + 1; j < n; ++j) x[c] -= a[c * n + j] * x[j];
        x[c] /= a[c * n + c];
    }
    return x;
}

double distance(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// Composed similarity stored flat: ratio, O (n*n), t (n).
struct FlatMaps {
    std::size_t n;
    std::vector<double> data;
    std::size_t stride() const { return 1 + n * n + n; }
    std::size_t size() const { return data.size() / stride(); }
    const double* at(std::size_t i) const { return data.data() + i * stride(); }

    void push_identity() {
        data.push_back(1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) data.push_back(i == j ? 1.0 : 0.0);
        for (std::size_t i = 0; i < n; ++i) data.push_back(0.0);
    }
    // outer o w
    void push_composed(std::size_t outer, const Similarity& w) {
        const std::size_t base = data.size();
        data.resize(base + stride());
        const double* o = at(outer);
        double* out = data.data() + base;
        const double r1 = o[0];
        const double* O1 = o + 1;
        const double* t1 = o + 1 + n * n;
        out[0] = r1 * w.ratio;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    double ok = w.orthogonal.empty() ? (k == j ? 1.0 : 0.0) : w.orthogonal[k * n + j];
                    acc += O1[i * n + k] * ok;
                }
                out[1 + i * n + j] = acc;
            }
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += O1[i * n + k] * w.translation[k];
            out[1 + n * n + i] = r1 * acc + t1[i];
        }
    }
    void apply(std::size_t i, const double* x, double* out) const {
        const double* m = at(i);
        for (std::size_t r = 0; r < n; ++r) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += m[1 + r * n + k] * x[k];
            out[r] = m[0] * acc + m[1 + n * n + r];
        }
    }
};

}  // namespace

PairTripleModel pair_triple(const LimitIfs& ifs,
                            std::optional<std::pair<std::vector<double>, std::vector<double>>> seeds,
                            std::size_t depth_cap, std::uint64_t entry_cap) {
    const std::size_t n = ifs.dim();
    PairTripleModel m;
    m.dim = n;
    if (seeds) {
        m.seed_x = seeds->first;
        m.seed_y = seeds->second;
    } else {
        const auto& first = ifs.level(1);
        require(first.size() >= 2, ErrorCode::SeedCoincident, "default seeds need two maps at level 1");
        m.seed_x = fixed_point(first[0]);
        m.seed_y = fixed_point(first[1]);
    }
    require(m.seed_x.size() == n && m.seed_y.size() == n, ErrorCode::InvalidArgument, "seed dimension mismatch");
    m.seed_distance = distance(m.seed_x.data(), m.seed_y.data(), n);
    require(m.seed_distance > 0.0, ErrorCode::SeedCoincident, "seed points coincide");
    require(entry_cap >= 2, ErrorCode::InvalidArgument, "entry cap below one block");
    m.lattice_ratios = all_ratios(ifs);
    m.source = ifs;

    std::size_t max_depth = depth_cap;
    if (auto count = ifs.level_count()) max_depth = std::min(max_depth, *count);

    struct Key {
        double ratio;
        std::uint64_t serial;
        bool operator<(const Key& o) const { return ratio != o.ratio ? ratio < o.ratio : serial > o.serial; }
    };
    FlatMaps maps{n, {}};
    std::vector<std::uint32_t> level_of;
    std::priority_queue<Key> heap;
    maps.push_identity();
    level_of.push_back(0);
    auto push_children = [&](std::size_t parent) {
        const std::size_t lvl = level_of[parent];
        if (lvl >= max_depth) {
            m.depth_limited = true;
            return;
        }
        for (const auto& w : ifs.level(lvl + 1)) {
            maps.push_composed(parent, w);
            level_of.push_back(static_cast<std::uint32_t>(lvl + 1));
            heap.push(Key{maps.at(maps.size() - 1)[0], maps.size() - 1});
        }
    };
    push_children(0);

    std::vector<double> values;
    std::vector<double> x(n), y(n);
    const std::uint64_t max_blocks = entry_cap / 2;
    while (!heap.empty() && values.size() / 2 < max_blocks) {
        Key top = heap.top();
        heap.pop();
        maps.apply(top.serial, m.seed_x.data(), x.data());
        maps.apply(top.serial, m.seed_y.data(), y.data());
        const double mu = top.ratio * m.seed_distance;
        values.push_back(mu);
        values.push_back(mu);
        m.tag_x.insert(m.tag_x.end(), x.begin(), x.end());
        m.tag_y.insert(m.tag_y.end(), y.begin(), y.end());
        m.depth_reached = std::max<std::size_t>(m.depth_reached, level_of[top.serial]);
        push_children(top.serial);
    }
    const bool finished = heap.empty();
    if (depth_cap == 0) m.depth_limited = true;

    EigenvalueSequence::TailSum tail;
    if (!finished && ifs.generation() != Generation::Explicit) {
        ClosedZeta z;
        for (const auto& level : ifs.block()) {
            std::vector<double> r, w;
            for (const auto& s : level) r.push_back(s.ratio), w.push_back(s.ratio * m.seed_distance);
            z.ratios.push_back(std::move(r));
            z.weights.push_back(std::move(w));
        }
        m.zeta = z;
        m.exact_dimension = z.dimension();
        tail = closed_tail(std::make_shared<const std::vector<double>>(values), z);
    } else if (ifs.generation() != Generation::Explicit) {
        ClosedZeta z;
        for (const auto& level : ifs.block()) {
            std::vector<double> r;
            for (const auto& s : level) r.push_back(s.ratio);
            z.ratios.push_back(std::move(r));
            z.weights.push_back({});
        }
        m.exact_dimension = z.dimension();
    }
    m.eigen = EigenvalueSequence::from_values(std::move(values), finished, std::move(tail));
    return m;
}

void write_model_csv(std::ostream& out, const TripleModel& model) {
    out << "k,mu_k";
    for (std::size_t i = 1; i <= model.dim; ++i) out << ",tag_x" << i;
    for (std::size_t i = 1; i <= model.dim; ++i) out << ",tag_y" << i;
    out << '\n';
    for (std::uint64_t k = 1; k <= model.eigen.size(); ++k) {
        out << k << ',' << format_double(model.eigen(k));
        const double* x = model.x_of_entry(k);
        const double* y = model.y_of_entry(k);
        for (std::size_t i = 0; i < model.dim; ++i) out << ',' << format_double(x[i]);
        for (std::size_t i = 0; i < model.dim; ++i) out << ',' << format_double(y[i]);
        out << '\n';
    }
}

// ---------------------------------------------------------------- dimension

SpectralDimension spectral_dimension(const TripleModel& model) {
    SpectralDimension out;
    out.order = order_of_infinitesimal(model.eigen);
    out.dimension = reciprocal(out.order.ord);
    return out;
}

SpectralDimension spectral_dimension(const GapTripleModel& model) {
    SpectralDimension out = spectral_dimension(static_cast<const TripleModel&>(model));
    const std::size_t count = model.blocks();
    if (count >= 16) {
        const double first = std::ceil(std::sqrt(static_cast<double>(count)));
        std::vector<double> ratios;
        for (double g = first; g <= static_cast<double>(count); g *= 1.05) {
            const std::size_t idx = static_cast<std::size_t>(g);
            const double len = model.gaps.gaps[idx - 1].length;
            if (len < 1.0) ratios.push_back(std::log(static_cast<double>(idx)) / std::abs(std::log(len)));
        }
        if (!ratios.empty()) {
            auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
            out.linear = Estimate{*hi, *lo, *hi};
        }
    }
    return out;
}

// ---------------------------------------------------------------- zeta

ZetaPartial zeta_partial(const TripleModel& model, double s) {
    require(s > 0.0, ErrorCode::InvalidArgument, "s must be positive");
    const double dim = model.exact_dimension ? *model.exact_dimension : spectral_dimension(model).dimension.value;
    if (!(s > dim)) fail(ErrorCode::SBelowDimension, "s = " + format_double(s) + " does not exceed d = " + format_double(dim));
    ZetaPartial out;
    out.s = s;
    const std::uint64_t size = model.eigen.size();
    double partial = 0.0;
    if (size) {
        model.eigen.power(s).for_each_block(1, size, [&](std::uint64_t, std::span<const double> v) {
            partial += kernels::sum(v);
        });
    }
    out.partial = partial;
    if (model.zeta) out.closed_form = (*model.zeta)(s);
    if (model.eigen.exhausted() || size == 0) {
        out.value = Estimate::exact(partial);
        out.tail_kind = std::string(tail_kind_name(TailKind::Exhausted));
        return out;
    }
    // independent tail fit: ignore any closed form carried by the sequence
    auto plain = EigenvalueSequence::from_values(model.eigen.materialize(), false).power(s);
    try {
        TailModel t = fit_tail(plain);
        out.value = {partial + t.remainder, partial + t.remainder - t.error, partial + t.remainder + t.error};
        out.tail_kind = std::string(tail_kind_name(t.kind));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TailUnfittable) throw;
        // envelope mu_k^s <= mu_N^s (k/N)^(-s/d) beyond the cap
        const double last = plain(size);
        const double rem = static_cast<double>(size) * last / (s / dim - 1.0);
        out.value = {partial + rem, partial, partial + 2.0 * rem};
        out.tail_kind = "ENVELOPE";
    }
    return out;
}

ZetaResidue zeta_residue(const TripleModel& model) {
    require(model.zeta.has_value(), ErrorCode::InvalidArgument, "residue needs a stationary or periodic source");
    const ClosedZeta& z = *model.zeta;
    ZetaResidue out;
    out.d = z.dimension();
    out.analytic = z.residue(out.d);
    out.log_normalized = out.analytic / out.d;
    std::vector<double> h;
    for (int i = 0; i < 8; ++i) {
        h.push_back(0.02 * std::ldexp(1.0, -i));
        out.s_grid.push_back(out.d + h.back());
        out.scaled.push_back(h.back() * z(out.d + h.back()));
    }
    // Neville extrapolation to h = 0
    std::vector<double> p = out.scaled;
    double previous = p.front();
    double current = p.front();
    for (std::size_t level = 1; level < p.size(); ++level) {
        for (std::size_t i = 0; i + level < h.size(); ++i)
            p[i] = (h[i + level] * p[i] - h[i] * p[i + 1]) / (h[i + level] - h[i]);
        previous = current;
        current = p[0];
    }
    const double err = std::abs(current - previous);
    out.numeric = {current, current - err, current + err};
    return out;
}

// ---------------------------------------------------------------- functionals

namespace {

struct Composed {
    double ratio = 1.0;
    std::vector<double> o;  // n x n
    std::vector<double> t;
};

Composed compose_word(const LimitIfs& ifs, const Word& w) {
    const std::size_t n = ifs.dim();
    FlatMaps maps{n, {}};
    maps.push_identity();
    for (std::size_t k = 0; k < w.digits.size(); ++k) maps.push_composed(k, ifs.level(k + 1).at(w.digits[k]));
    const double* m = maps.at(maps.size() - 1);
    Composed c;
    c.ratio = m[0];
    c.o.assign(m + 1, m + 1 + n * n);
    c.t.assign(m + 1 + n * n, m + 1 + n * n + n);
    return c;
}

}  // namespace

Box attractor_box(const LimitIfs& ifs) {
    if (ifs.osc_box) return *ifs.osc_box;
    const std::size_t n = ifs.dim();
    if (n == 1 && ifs.interval) return Box{{ifs.interval->first}, {ifs.interval->second}};
    require(ifs.generation() != Generation::Explicit, ErrorCode::InvalidArgument,
            "explicit systems need an asserted bounding box");
    Box b{std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
    std::vector<double> corner(n), img(n);
    for (int it = 0; it < 20000; ++it) {
        Box cur = b;
        for (std::size_t k = ifs.block().size(); k-- > 0;) {
            Box next{std::vector<double>(n, kInf), std::vector<double>(n, -kInf)};
            for (const auto& w : ifs.block()[k])
                for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
                    for (std::size_t i = 0; i < n; ++i) corner[i] = (mask >> i) & 1 ? cur.hi[i] : cur.lo[i];
                    w.apply(corner.data(), img.data());
                    for (std::size_t i = 0; i < n; ++i) {
                        next.lo[i] = std::min(next.lo[i], img[i]);
                        next.hi[i] = std::max(next.hi[i], img[i]);
                    }
                }
            cur = std::move(next);
        }
        double change = 0.0, scale = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            change = std::max({change, std::abs(cur.lo[i] - b.lo[i]), std::abs(cur.hi[i] - b.hi[i])});
            scale = std::max({scale, std::abs(cur.lo[i]), std::abs(cur.hi[i])});
        }
        b = std::move(cur);
        if (change <= 1e-15 * scale) break;
    }
    return b;
}

Functional Functional::constant(double c) {
    Functional f;
    f.kind_ = Kind::Constant;
    f.constant_ = c;
    f.label_ = "constant(" + format_double(c) + ")";
    return f;
}

Functional Functional::affine(double offset, std::vector<double> gradient) {
    Functional f;
    f.kind_ = Kind::Affine;
    f.constant_ = offset;
    double norm = 0.0;
    for (double g : gradient) norm += g * g;
    f.lipschitz_ = std::sqrt(norm);
    f.gradient_ = std::move(gradient);
    f.dim_ = f.gradient_.size();
    f.label_ = "affine";
    return f;
}

Functional Functional::smoothed_cylinder(const LimitIfs& ifs, const Word& word, double width) {
    require(word.length() >= 1, ErrorCode::InvalidArgument, "cylinder word must be nonempty");
    for (std::size_t k = 0; k < word.length(); ++k)
        require(word.digits[k] < ifs.maps_at(k + 1), ErrorCode::InvalidArgument, "cylinder digit out of range");
    Functional f;
    f.kind_ = Kind::SmoothedCylinder;
    f.dim_ = ifs.dim();
    Composed c = compose_word(ifs, word);
    f.cyl_ratio_ = c.ratio;
    f.cyl_orthogonal_ = std::move(c.o);
    f.cyl_shift_ = std::move(c.t);
    f.cyl_box_ = attractor_box(ifs);
    if (width <= 0.0) {
        double diag = 0.0;
        for (std::size_t i = 0; i < f.dim_; ++i)
            diag += (f.cyl_box_.hi[i] - f.cyl_box_.lo[i]) * (f.cyl_box_.hi[i] - f.cyl_box_.lo[i]);
        width = 0.1 * f.cyl_ratio_ * std::sqrt(diag);
    }
    require(width > 0.0, ErrorCode::InvalidArgument, "cylinder smoothing width must be positive");
    f.width_ = width;
    f.lipschitz_ = 1.0 / width;
    f.label_ = "cylinder(" + word.to_string() + ")";
    return f;
}

Functional Functional::tabulated(std::size_t dim, std::vector<double> points, std::vector<double> values,
                                 double tolerance) {
    require(dim >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
    require(points.size() == dim * values.size(), ErrorCode::InvalidArgument, "points and values differ in count");
    require(tolerance > 0.0, ErrorCode::InvalidArgument, "tag tolerance must be positive");
    Functional f;
    f.kind_ = Kind::Tabulated;
    f.dim_ = dim;
    f.tolerance_ = tolerance;
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a * dim] < points[b * dim]; });
    for (std::size_t i : order) {
        f.points_.insert(f.points_.end(), points.begin() + i * dim, points.begin() + (i + 1) * dim);
        f.values_.push_back(values[i]);
    }
    // Lipschitz estimate from pairs of neighbours in the sorted order
    for (std::size_t i = 1; i < f.values_.size(); ++i) {
        double dist = distance(f.points_.data() + (i - 1) * dim, f.points_.data() + i * dim, dim);
        if (dist > 0.0) f.lipschitz_ = std::max(f.lipschitz_, std::abs(f.values_[i] - f.values_[i - 1]) / dist);
    }
    f.label_ = "tabulated(" + std::to_string(values.size()) + ")";
    return f;
}

double Functional::operator()(const double* x) const {
    switch (kind_) {
    case Kind::Constant: return constant_;
    case Kind::Affine: {
        double v = constant_;
        for (std::size_t i = 0; i < gradient_.size(); ++i) v += gradient_[i] * x[i];
        return v;
    }
    case Kind::SmoothedCylinder: {
        const std::size_t n = dim_;
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            // y = O^T (x - t) / r
            double y = 0.0;
            for (std::size_t k = 0; k < n; ++k) y += cyl_orthogonal_[k * n + i] * (x[k] - cyl_shift_[k]);
            y /= cyl_ratio_;
            double out = std::max({0.0, cyl_box_.lo[i] - y, y - cyl_box_.hi[i]});
            d2 += out * out;
        }
        const double dist = cyl_ratio_ * std::sqrt(d2);
        return std::max(0.0, 1.0 - dist / width_);
    }
    case Kind::Tabulated: {
        // binary search on the first coordinate
        std::size_t lo = 0, hi = values_.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (points_[mid * dim_] < x[0] - tolerance_) lo = mid + 1;
            else hi = mid;
        }
        double best = kInf;
        double value = 0.0;
        for (std::size_t i = lo; i < values_.size() && points_[i * dim_] <= x[0] + tolerance_; ++i) {
            double dist = distance(points_.data() + i * dim_, x, dim_);
            if (dist <= tolerance_ && dist < best) best = dist, value = values_[i];
        }
        if (!std::isfinite(best)) fail(ErrorCode::UndefinedTag, "no tabulated point within tolerance of a tag");
        return value;
    }
    }
    return 0.0;
}

std::string Functional::describe() const { return label_; }

FunctionalValue hausdorff_functional(const TripleModel& model, const Functional& f, double d,
                                     std::vector<std::uint64_t> subsequence) {
    require(d > 0.0, ErrorCode::InvalidArgument, "exponent must be positive");
    FunctionalValue out;
    const std::uint64_t size = model.eigen.size();
    require(size >= 2, ErrorCode::EmptySubsequence, "model has no eigen-entries");
    auto seq_d = model.eigen.power(d);
    IdealReport cls = classify_ideal(model.eigen, d);
    const SumKind kind = cls.classification == IdealClass::L1 ? SumKind::TraceClass : SumKind::NonTraceClass;
    // Equal eigenvalues have no canonical order, so cut points move to the end
    // of their run of ties.
    // A run reaching the cap may continue past it, so it is cut before it starts.
    auto snap = [&](std::uint64_t n) -> std::uint64_t {
        while (n < size && model.eigen(n + 1) == model.eigen(n)) ++n;
        if (n == size && !model.eigen.exhausted()) {
            while (n > 1 && model.eigen(n - 1) == model.eigen(n)) --n;
            --n;
        }
        return n;
    };
    const bool windows = subsequence.empty() && cls.classification == IdealClass::L1Weak;
    if (!subsequence.empty()) {
        out.subsequence_source = "given";
    } else if (windows) {
        out.subsequence_source = "log_windows";
        const double ln = std::log(static_cast<double>(size));
        for (int i = 0; i <= 8; ++i) {
            auto e = snap(std::clamp<std::uint64_t>(std::llround(std::exp(ln * (0.5 + i / 16.0))), 1, size));
            if (e > 0 && (subsequence.empty() || e > subsequence.back())) subsequence.push_back(e);
        }
        if (subsequence.size() < 2) fail(ErrorCode::EmptySubsequence, "tail window collapses onto one run of ties");
    } else {
        out.subsequence_source = "eccentricity_scan";
        for (auto n : eccentricity_scan(seq_d, kind).accepted) {
            auto e = snap(n);
            if (e > 0 && (subsequence.empty() || e > subsequence.back())) subsequence.push_back(e);
        }
        if (subsequence.empty())
            fail(ErrorCode::EmptySubsequence, "no eccentric indices for exponent " + format_double(d));
    }
    out.subsequence = subsequence;

    if (f.is_constant()) {
        // normalization: the state takes the constant value exactly
        out.subsequence_source = out.subsequence_source.empty() ? "normalization" : out.subsequence_source;
        out.trace.value = Estimate::exact(f(model.tag_x.data()));
        out.trace.measurable = true;
        out.trace.indices = subsequence;
        out.trace.ratios.assign(subsequence.size(), out.trace.value.value);
        return out;
    }

    std::vector<double> weights(size);
    const std::size_t used_blocks = std::min<std::size_t>(model.blocks(), (size + 1) / 2);
    for (std::size_t b = 0; b < used_blocks; ++b) {
        const double w = 0.5 * (f(model.tag_x.data() + b * model.dim) + f(model.tag_y.data() + b * model.dim));
        weights[2 * b] = w;
        if (2 * b + 1 < size) weights[2 * b + 1] = w;
    }
    WeightedSequence numerator{seq_d, std::move(weights), 1.0};
    if (!windows) {
        out.trace = singular_trace_estimate(numerator, seq_d, subsequence, kind);
        return out;
    }
    // log-divergent sums: ratio of increments over each tail window, the same
    // windows that give the Dixmier slope
    auto num = partial_sums(numerator, SumKind::NonTraceClass, subsequence);
    auto den = partial_sums(seq_d, SumKind::NonTraceClass, subsequence);
    for (std::size_t i = 0; i + 1 < subsequence.size(); ++i) {
        const double dd = den.values[i + 1] - den.values[i];
        if (!(dd > 0.0)) continue;
        out.trace.indices.push_back(subsequence[i + 1]);
        out.trace.ratios.push_back((num.values[i + 1] - num.values[i]) / dd);
    }
    if (out.trace.ratios.empty()) fail(ErrorCode::EmptySubsequence, "no tail window with positive increment");
    auto [lo, hi] = std::minmax_element(out.trace.ratios.begin(), out.trace.ratios.end());
    out.trace.value = {detail::mean(out.trace.ratios), *lo, *hi};
    out.trace.measurable = out.trace.value.width() < 0.01 * std::abs(out.trace.value.value);
    return out;
}

// ---------------------------------------------------------------- Minkowski link

LinkCheck minkowski_link_check(const GapTripleModel& model, double d) {
    require(d > 0.0 && d <= 1.0, ErrorCode::InvalidArgument, "d must lie in (0, 1]");
    LinkCheck out;
    out.d = d;
    out.dixmier = dixmier_trace_estimate(model.eigen.power(d));
    out.minkowski = minkowski_content_estimate(model.gaps, d);
    const double factor = std::pow(2.0, d) * (1.0 - d);
    out.scaled_content = {factor * out.minkowski.content.value, factor * out.minkowski.content.lo,
                          factor * out.minkowski.content.hi};
    out.lattice = !model.lattice_ratios.empty() && is_lattice(model.lattice_ratios);
    out.equality_asserted = !model.lattice_ratios.empty() && !out.lattice && out.minkowski.measurable;
    out.overlap = overlaps(out.dixmier.value, out.scaled_content);
    return out;
}

}  // namespace fracspec
