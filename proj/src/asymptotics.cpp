#include "fracspec/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fracspec/error.hpp"
#include "fracspec/kernels.hpp"
#include "stats.hpp"

namespace fracspec {

using detail::fit_line;

std::string_view sum_kind_name(SumKind kind) {
    return kind == SumKind::TraceClass ? "TRACE_CLASS" : "NON_TRACE_CLASS";
}

std::string_view tail_kind_name(TailKind kind) {
    switch (kind) {
    case TailKind::Exhausted: return "EXHAUSTED";
    case TailKind::Analytic: return "ANALYTIC";
    case TailKind::PowerLaw: return "POWER_LAW";
    case TailKind::Geometric: return "GEOMETRIC";
    }
    return "UNKNOWN";
}

std::string_view ideal_class_name(IdealClass c) {
    switch (c) {
    case IdealClass::L1: return "L1";
    case IdealClass::L1Weak: return "L1_WEAK";
    case IdealClass::L1Weak0: return "L1_WEAK_0";
    case IdealClass::None: return "NONE";
    case IdealClass::Inconclusive: return "INCONCLUSIVE";
    }
    return "UNKNOWN";
}

namespace {

std::vector<std::uint64_t> log_spaced(std::uint64_t a, std::uint64_t b, std::size_t count) {
    std::vector<std::uint64_t> out;
    double la = std::log(static_cast<double>(a)), lb = std::log(static_cast<double>(b));
    for (std::size_t i = 0; i < count; ++i) {
        double t = count == 1 ? 1.0 : static_cast<double>(i) / (count - 1);
        auto n = static_cast<std::uint64_t>(std::llround(std::exp(la + t * (lb - la))));
        n = std::clamp(n, a, b);
        if (out.empty() || out.back() != n) out.push_back(n);
    }
    return out;
}

// Sum of weight_k * mu_k over consecutive segments (idx[j-1], idx[j]].
std::vector<double> segment_sums(const EigenvalueSequence& seq, const std::vector<double>* weights,
                                 const std::vector<std::uint64_t>& bounds) {
    std::vector<double> out(bounds.size(), 0.0);
    if (bounds.empty()) return out;
    std::uint64_t last = bounds.back();
    if (last == 0) return out;
    std::size_t seg = 0;
    while (seg < bounds.size() && bounds[seg] == 0) ++seg;
    seq.for_each_block(1, last, [&](std::uint64_t start, std::span<const double> block) {
        std::size_t i = 0;
        while (i < block.size()) {
            std::uint64_t n = start + i;
            while (seg < bounds.size() && bounds[seg] < n) ++seg;
            std::uint64_t seg_end = bounds[seg];
            std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(seg_end - n + 1, block.size() - i));
            std::span<const double> part = block.subspan(i, len);
            double s;
            if (weights && !weights->empty())
                s = kernels::dot(part, std::span<const double>(weights->data() + (n - 1), len));
            else
                s = kernels::sum(part);
            out[seg] += s;
            i += len;
        }
    });
    return out;
}

PartialSumSeries partial_sums_impl(const EigenvalueSequence& seq, const std::vector<double>* weights, double scale,
                                   SumKind kind, std::vector<std::uint64_t> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    const std::uint64_t cap = seq.size();
    if (!indices.empty() && indices.back() > cap)
        fail(ErrorCode::CapExceeded, "partial sum index " + std::to_string(indices.back()) + " beyond cap " +
                                         std::to_string(cap));
    if (weights && !weights->empty() && weights->size() < cap)
        fail(ErrorCode::InvalidArgument, "weight vector shorter than the sequence");

    PartialSumSeries out;
    out.kind = kind;
    out.indices = indices;
    out.values.resize(indices.size());
    if (kind == SumKind::NonTraceClass) {
        std::vector<double> seg = segment_sums(seq, weights, indices);
        double acc = 0.0;
        for (std::size_t j = 0; j < indices.size(); ++j) {
            acc += seg[j];
            out.values[j] = scale * acc;
        }
        for (std::size_t j = 1; j < out.values.size(); ++j)
            require(out.values[j] >= out.values[j - 1], ErrorCode::NotMonotone, "partial sums decreased");
        return out;
    }

    out.tail = fit_tail(seq);
    double tail_weight = 1.0;
    if (weights && !weights->empty() && out.tail.kind != TailKind::Exhausted) {
        std::uint64_t from = std::max<std::uint64_t>(1, cap / 10);
        tail_weight = detail::mean(std::span<const double>(weights->data() + (from - 1), cap - from + 1));
    }
    std::vector<std::uint64_t> bounds = indices;
    if (bounds.empty() || bounds.back() != cap) bounds.push_back(cap);
    std::vector<double> seg = segment_sums(seq, weights, bounds);
    // seg[j] covers (bounds[j-1], bounds[j]]; S at bounds[j] is the sum of seg[j+1..] plus the tail.
    std::vector<double> suffix(bounds.size(), 0.0);
    double acc = tail_weight * out.tail.remainder;
    for (std::size_t j = bounds.size(); j-- > 0;) {
        suffix[j] = acc;
        acc += seg[j];
    }
    for (std::size_t j = 0; j < indices.size(); ++j) out.values[j] = scale * suffix[j];
    out.error = std::abs(scale * tail_weight) * out.tail.error;
    for (std::size_t j = 1; j < out.values.size(); ++j)
        require(out.values[j] <= out.values[j - 1], ErrorCode::NotMonotone, "tail sums increased");
    return out;
}

}  // namespace

TailModel fit_tail(const EigenvalueSequence& seq) {
    TailModel m;
    const std::uint64_t n = seq.size();
    if (seq.exhausted()) return m;
    if (auto t = seq.analytic_tail(n)) {
        if (!std::isfinite(*t)) fail(ErrorCode::TailUnfittable, "analytic tail diverges");
        m.kind = TailKind::Analytic;
        m.remainder = *t;
        m.error = std::abs(*t) * 1e-12;
        return m;
    }
    if (n < 20) fail(ErrorCode::TailUnfittable, "sequence too short to fit a tail");
    std::vector<std::uint64_t> pts = log_spaced(std::max<std::uint64_t>(1, n / 10), n, 64);
    std::vector<double> lx, nx, ly;
    for (auto k : pts) {
        double v = seq(k);
        lx.push_back(std::log(static_cast<double>(k)));
        nx.push_back(static_cast<double>(k));
        ly.push_back(std::log(v));
    }
    const double mu_n = seq(n);
    const double nn = static_cast<double>(n);
    auto power_fit = fit_line(lx, ly);
    auto geo_fit = fit_line(nx, ly);
    const double tol = 0.05;
    bool power_ok = power_fit.residual_sd <= tol && -power_fit.slope > 1.0 + 1e-9;
    bool geo_ok = geo_fit.residual_sd <= tol && geo_fit.slope < -1e-12;
    if (power_ok && (!geo_ok || power_fit.residual_sd <= geo_fit.residual_sd)) {
        const double a = -power_fit.slope;
        auto remainder = [&](double e) {
            // anchored at mu_N, integral of mu_N (x/N)^-e over (N + 1/2, inf)
            return mu_n * std::pow(nn, e) * std::pow(nn + 0.5, 1.0 - e) / (e - 1.0);
        };
        m.kind = TailKind::PowerLaw;
        m.exponent = a;
        m.coefficient = std::exp(power_fit.intercept);
        m.remainder = remainder(a);
        double da = 2.0 * power_fit.slope_se;
        double lo_a = std::max(a - da, 1.0 + 0.5 * (a - 1.0));
        m.error = std::max(std::abs(remainder(lo_a) - m.remainder), std::abs(remainder(a + da) - m.remainder)) +
                  m.remainder * (std::exp(2.0 * power_fit.residual_sd) - 1.0);
        return m;
    }
    if (geo_ok) {
        const double r = std::exp(geo_fit.slope);
        auto remainder = [&](double q) { return mu_n * q / (1.0 - q); };
        m.kind = TailKind::Geometric;
        m.ratio = r;
        m.remainder = remainder(r);
        double dr = r * 2.0 * geo_fit.slope_se;
        double hi_r = std::min(r + dr, 0.5 * (1.0 + r));
        m.error = std::abs(remainder(hi_r) - m.remainder) +
                  m.remainder * (std::exp(2.0 * geo_fit.residual_sd) - 1.0);
        return m;
    }
    fail(ErrorCode::TailUnfittable, "last decade is neither power-law nor geometric");
}

PartialSumSeries partial_sums(const EigenvalueSequence& seq, SumKind kind, std::vector<std::uint64_t> indices) {
    return partial_sums_impl(seq, nullptr, 1.0, kind, std::move(indices));
}

PartialSumSeries partial_sums(const WeightedSequence& seq, SumKind kind, std::vector<std::uint64_t> indices) {
    return partial_sums_impl(seq.values, &seq.weights, seq.scale, kind, std::move(indices));
}

OrderEstimate order_of_infinitesimal(const EigenvalueSequence& seq) {
    const std::uint64_t n = seq.size();
    if (n < 16) fail(ErrorCode::CapExceeded, "cap too small for a tail window");
    const double log_n = std::log(static_cast<double>(n));
    constexpr std::size_t kBins = 4096;

    // One sample at the right end of every run of equal values, thinned to
    // at most one per bin of log n.
    std::vector<double> xs, ys;
    std::vector<std::size_t> bins;
    double prev = 0.0;
    auto add_corner = [&](std::uint64_t k, double v) {
        double x = std::log(static_cast<double>(k));
        auto bin = static_cast<std::size_t>(x / log_n * kBins);
        if (!bins.empty() && bins.back() == bin) {
            xs.back() = x;
            ys.back() = -std::log(v);
        } else {
            bins.push_back(bin);
            xs.push_back(x);
            ys.push_back(-std::log(v));
        }
    };
    seq.for_each_block(1, n, [&](std::uint64_t start, std::span<const double> block) {
        for (std::size_t i = 0; i < block.size(); ++i) {
            std::uint64_t k = start + i;
            if (k > 1 && block[i] < prev) add_corner(k - 1, prev);
            prev = block[i];
        }
    });
    if (seq.exhausted()) add_corner(n, prev);

    OrderEstimate out;
    out.corners = xs.size();
    for (int i = 0; i < 8; ++i) {
        double theta = 0.125 * std::pow(4.0, i / 7.0);
        double start = theta * log_n;
        auto it = std::lower_bound(xs.begin(), xs.end(), start);
        std::size_t from = static_cast<std::size_t>(it - xs.begin());
        if (xs.size() - from < 2) continue;
        auto fit = fit_line(std::span<const double>(xs).subspan(from), std::span<const double>(ys).subspan(from));
        if (fit.count < 2) continue;
        out.window_slopes.push_back(fit.slope);
        out.window_starts.push_back(start);
    }
    if (out.window_slopes.empty()) fail(ErrorCode::CapExceeded, "no tail window has two distinct levels");
    auto [lo, hi] = std::minmax_element(out.window_slopes.begin(), out.window_slopes.end());
    out.ord = {detail::median(out.window_slopes), *lo, *hi};
    return out;
}

LogProfile log_profile(const EigenvalueSequence& seq, double dt) {
    require(dt > 0.0, ErrorCode::InvalidArgument, "profile step must be positive");
    LogProfile p;
    p.dt = dt;
    const double t_end = std::log(static_cast<double>(seq.size()));
    for (std::size_t i = 0;; ++i) {
        double t = dt * static_cast<double>(i);
        if (t > t_end + 1e-12) break;
        auto k = static_cast<std::uint64_t>(std::floor(std::exp(t) * (1.0 + 1e-14)));
        k = std::clamp<std::uint64_t>(k, 1, seq.size());
        p.f.push_back(-std::log(seq(k)));
    }
    return p;
}

CBounds c_bounds(const LogProfile& profile, const CBoundsOptions& options) {
    const double dt = profile.dt;
    const double h_min = options.h_min > 0.0 ? options.h_min : 2.0 * dt;
    if (h_min < 2.0 * dt * (1.0 - 1e-12))
        fail(ErrorCode::GridTooCoarse, "smallest window below twice the profile step");
    require(options.h_ratio > 1.0, ErrorCode::InvalidArgument, "window ratio must exceed 1");
    const std::size_t m = profile.f.size();
    const std::size_t i0 = m / 2;
    const std::size_t tail = m - i0;
    const auto lag_min = static_cast<std::size_t>(std::llround(h_min / dt));
    if (tail < lag_min + options.min_samples)
        fail(ErrorCode::GridTooCoarse, "profile too short for the smallest window");
    std::span<const double> g(profile.f.data() + i0, tail);

    std::vector<std::size_t> lags;
    for (double h = lag_min;; h *= options.h_ratio) {
        auto lag = static_cast<std::size_t>(std::llround(h));
        if (tail < lag + options.min_samples) break;
        if (lags.empty() || lags.back() != lag) lags.push_back(lag);
    }

    CBounds out;
    std::vector<kernels::MinMax> all(lags.size());
    std::vector<bool> sup_ok(lags.size()), inf_ok(lags.size());
    for (std::size_t j = 0; j < lags.size(); ++j) {
        std::size_t lag = lags[j];
        all[j] = kernels::lagged_difference_extrema(g, lag);
        std::size_t margin = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.1 * lag)));
        if (tail >= 2 * margin + lag + options.min_samples) {
            auto inner = kernels::lagged_difference_extrema(g.subspan(margin, tail - 2 * margin), lag);
            sup_ok[j] = inner.max >= all[j].max - 0.01 * std::abs(all[j].max);
            inf_ok[j] = inner.min <= all[j].min + 0.01 * std::abs(all[j].min);
        }
        double h = lag * dt;
        out.h_grid.push_back(h);
        out.sup_quotient.push_back(all[j].max / h);
        out.inf_quotient.push_back(all[j].min / h);
    }
    out.h_grid_max = out.h_grid.back();

    auto last_true = [&](const std::vector<bool>& ok) {
        for (std::size_t j = ok.size(); j-- > 0;)
            if (ok[j]) return j;
        return ok.size() - 1;
    };
    auto inv = [](double q) { return q > 0.0 ? 1.0 / q : kInf; };

    // Lower bound from the sup of increments.
    {
        std::size_t j = last_true(sup_ok);
        std::size_t lag = lags[j], half = std::max(lag_min, lag / 2);
        double g_full = all[j].max;
        double g_half = kernels::lagged_difference_extrema(g, half).max;
        out.h_sup = lag * dt;
        if (g_half > 0.0 && g_full < 1.5 * g_half) {
            out.lower_unresolved = true;
            double v = inv(out.sup_quotient.front());
            out.lower = {v, 0.0, v};
        } else {
            double v = inv(out.sup_quotient[j]);
            double lo = v, hi = v;
            for (std::size_t k = 0; k <= j; ++k)
                if (lags[k] >= half) lo = std::min(lo, inv(out.sup_quotient[k])), hi = std::max(hi, inv(out.sup_quotient[k]));
            double vh = inv(g_half / (half * dt));
            out.lower = {v, std::min(lo, vh), std::max(hi, vh)};
        }
    }
    // Upper bound from the inf of increments.
    {
        std::size_t j = last_true(inf_ok);
        std::size_t lag = lags[j], half = std::max(lag_min, lag / 2);
        double k_full = all[j].min;
        double k_half = kernels::lagged_difference_extrema(g, half).min;
        out.h_inf = lag * dt;
        if (k_half <= 0.0 || k_full > 3.0 * k_half) {
            out.upper_unresolved = true;
            out.upper = {kInf, inv(out.inf_quotient[j]), kInf};
        } else {
            double v = inv(out.inf_quotient[j]);
            double lo = v, hi = v;
            for (std::size_t k = 0; k <= j; ++k)
                if (lags[k] >= half) lo = std::min(lo, inv(out.inf_quotient[k])), hi = std::max(hi, inv(out.inf_quotient[k]));
            double vh = inv(k_half / (half * dt));
            out.upper = {v, std::min(lo, vh), std::max(hi, vh)};
        }
    }
    return out;
}

LogSlopes log_slopes(const EigenvalueSequence& seq) {
    const std::uint64_t n = seq.size();
    if (n < 64) fail(ErrorCode::CapExceeded, "cap too small for tail sub-windows");
    LogSlopes out;
    std::vector<std::uint64_t> edges;
    const double ln = std::log(static_cast<double>(n));
    for (int i = 0; i <= 8; ++i) {
        auto e = static_cast<std::uint64_t>(std::llround(std::exp(ln * (0.5 + i / 16.0))));
        e = std::clamp<std::uint64_t>(e, 1, n);
        if (edges.empty() || e > edges.back()) edges.push_back(e);
    }
    auto sums = partial_sums(seq, SumKind::NonTraceClass, edges);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double dl = std::log(static_cast<double>(edges[i + 1]) / static_cast<double>(edges[i]));
        out.slopes.push_back((sums.values[i + 1] - sums.values[i]) / dl);
    }
    for (auto e : edges) out.edges.push_back(static_cast<double>(e));
    return out;
}

IdealReport classify_ideal(const EigenvalueSequence& seq, double alpha) {
    EigenvalueSequence s = seq.power(alpha);
    IdealReport r;
    auto order = order_of_infinitesimal(s);
    r.exponent = order.ord;
    if (auto t = s.analytic_tail(0)) r.convergent = std::isfinite(*t);
    if (s.exhausted()) r.convergent = true;

    auto set_class = [&](IdealClass c) {
        r.classification = c;
        r.in_l1 = c == IdealClass::L1;
        r.in_l1_weak_0 = r.in_l1 || c == IdealClass::L1Weak0;
        r.in_l1_weak = r.in_l1_weak_0 || c == IdealClass::L1Weak;
    };

    auto slopes = log_slopes(s);
    r.slopes = slopes.slopes;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < slopes.slopes.size(); ++i) {
        if (!(slopes.slopes[i] > 0.0)) continue;
        double mid = std::sqrt(slopes.edges[i] * slopes.edges[i + 1]);
        lx.push_back(std::log(std::log(mid)));
        ly.push_back(std::log(slopes.slopes[i]));
    }
    auto fit = fit_line(lx, ly);
    double q = -fit.slope, q_se = fit.slope_se;
    r.log_decay = {q, q - 3.0 * q_se, q + 3.0 * q_se};

    if (r.convergent && *r.convergent) {
        set_class(IdealClass::L1);
        return r;
    }
    const double p = order.ord.value;
    // a log factor (log n)^-q lifts the local power by about q / log n, so
    // exponents within that reach are left to the log-decay fit
    const double log_cap = std::log(static_cast<double>(std::max<std::uint64_t>(s.size(), 3)));
    const double p_margin = std::max({3.0 * 0.5 * order.ord.width(), 0.02, 1.5 / log_cap});
    bool known_divergent = r.convergent && !*r.convergent;
    if (p - 1.0 > p_margin && !known_divergent) {
        set_class(IdealClass::L1);
        return r;
    }
    if (1.0 - p > p_margin) {
        set_class(IdealClass::None);
        return r;
    }
    const double q_margin = std::max(3.0 * q_se, 0.25);
    if (lx.size() < 3) set_class(IdealClass::Inconclusive);
    else if (q > 1.0 + q_margin) set_class(known_divergent ? IdealClass::L1Weak0 : IdealClass::L1);
    else if (q >= 1.0 - q_margin) set_class(known_divergent ? IdealClass::L1Weak0 : IdealClass::Inconclusive);
    else if (q > q_margin) set_class(IdealClass::L1Weak0);
    else if (q >= -q_margin) set_class(IdealClass::L1Weak);
    else set_class(IdealClass::None);
    return r;
}

SumKind sum_kind_for(const EigenvalueSequence& seq) {
    return classify_ideal(seq, 1.0).classification == IdealClass::L1 ? SumKind::TraceClass : SumKind::NonTraceClass;
}

EccentricityScan eccentricity_scan(const EigenvalueSequence& seq, SumKind kind, double tolerance, double grid_ratio,
                                   std::span<const std::uint64_t> extra_points) {
    require(tolerance > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
    require(grid_ratio > 1.0, ErrorCode::InvalidArgument, "grid ratio must exceed 1");
    const std::uint64_t cap = seq.size();
    if (cap < 2) fail(ErrorCode::CapExceeded, "cap too small to scan");
    EccentricityScan out;
    out.kind = kind;
    out.tolerance = tolerance;
    std::vector<std::uint64_t> grid;
    for (double x = 1.0;; x *= grid_ratio) {
        auto k = static_cast<std::uint64_t>(std::llround(x));
        if (2 * k > cap) break;
        if (grid.empty() || grid.back() != k) grid.push_back(k);
    }
    for (auto k : extra_points) {
        if (k == 0) continue;
        if (2 * k > cap) fail(ErrorCode::CapExceeded, "scan point " + std::to_string(k) + " needs 2n within cap");
        grid.push_back(k);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<std::uint64_t> idx = grid;
    for (auto k : grid) idx.push_back(2 * k);
    auto sums = partial_sums(seq, kind, idx);
    auto at = [&](std::uint64_t k) {
        auto it = std::lower_bound(sums.indices.begin(), sums.indices.end(), k);
        return sums.values[static_cast<std::size_t>(it - sums.indices.begin())];
    };
    for (auto k : grid) {
        double sn = at(k), s2n = at(2 * k);
        if (!(sn > 0.0)) continue;
        double gap = std::abs(s2n / sn - 1.0);
        out.grid.push_back(k);
        out.gaps.push_back(gap);
        if (gap < tolerance) out.accepted.push_back(k);
        if (gap < out.min_gap) out.min_gap = gap, out.argmin = k;
    }
    return out;
}

TraceEstimate singular_trace_estimate(const WeightedSequence& numerator, const EigenvalueSequence& denominator,
                                      std::span<const std::uint64_t> subsequence, SumKind kind) {
    if (subsequence.empty()) fail(ErrorCode::EmptySubsequence, "no eccentric indices supplied");
    std::vector<std::uint64_t> idx(subsequence.begin(), subsequence.end());
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    auto num = partial_sums(numerator, kind, idx);
    auto den = partial_sums(denominator, kind, idx);
    TraceEstimate out;
    const std::size_t from = idx.size() / 2;
    for (std::size_t i = from; i < idx.size(); ++i) {
        if (!(den.values[i] > 0.0)) continue;
        out.indices.push_back(idx[i]);
        out.ratios.push_back(num.values[i] / den.values[i]);
    }
    if (out.ratios.empty()) fail(ErrorCode::EmptySubsequence, "denominator vanishes on the subsequence tail");
    auto [lo, hi] = std::minmax_element(out.ratios.begin(), out.ratios.end());
    out.value = {detail::mean(out.ratios), *lo, *hi};
    out.measurable = out.value.width() < 0.01 * std::abs(out.value.value);
    return out;
}

TraceEstimate dixmier_trace_estimate(const EigenvalueSequence& seq) {
    auto cls = classify_ideal(seq, 1.0);
    if (cls.classification != IdealClass::L1Weak)
        fail(ErrorCode::NotL1Weak, std::string("sequence classified ") + std::string(ideal_class_name(cls.classification)));
    auto slopes = log_slopes(seq);
    TraceEstimate out;
    out.ratios = slopes.slopes;
    for (std::size_t i = 1; i < slopes.edges.size(); ++i) out.indices.push_back(static_cast<std::uint64_t>(slopes.edges[i]));
    auto [lo, hi] = std::minmax_element(out.ratios.begin(), out.ratios.end());
    out.value = {detail::mean(out.ratios), *lo, *hi};
    out.measurable = out.value.width() < 0.01 * std::abs(out.value.value);
    return out;
}

TraceabilityReport analyze(const EigenvalueSequence& seq, double tolerance) {
    TraceabilityReport r;
    r.order = order_of_infinitesimal(seq);
    r.dimension = reciprocal(r.order.ord);
    r.bounds = c_bounds(log_profile(seq));
    r.ideal = classify_ideal(seq, 1.0);
    SumKind kind = r.ideal.classification == IdealClass::L1 ? SumKind::TraceClass : SumKind::NonTraceClass;
    r.scan = eccentricity_scan(seq, kind, tolerance);
    if (r.ideal.classification == IdealClass::L1Weak) r.dixmier = dixmier_trace_estimate(seq);
    r.not_traceable_at_1 =
        r.ideal.classification == IdealClass::None && r.scan.accepted.empty() && r.scan.min_gap > tolerance;
    return r;
}

}  // namespace fracspec
