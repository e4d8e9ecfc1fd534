#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

#include "fracspec/error.hpp"
#include "fracspec/fractal_geometry.hpp"
#include "fracspec/sequence.hpp"

namespace fracspec {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr std::uint64_t kExactNodeLimit = std::uint64_t{1} << 17;

std::optional<Rational> to_rational(double x) {
    if (!std::isfinite(x)) return std::nullopt;
    // continued fraction convergents
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int it = 0; it < 40; ++it) {
        double a = std::floor(r);
        if (std::abs(a) > 1e12) break;
        long long ai = static_cast<long long>(a);
        long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > 10'000'000) break;
        p0 = p1, q0 = q1, p1 = p2, q1 = q2;
        if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) <= 1e-14 * std::max(1.0, std::abs(x)))
            return Rational(p1, q1);
        double frac = r - a;
        if (frac == 0.0) break;
        r = 1.0 / frac;
    }
    return std::nullopt;
}

double to_double(double x) { return x; }
double to_double(const Rational& x) { return x.convert_to<double>(); }

// Exact sums of many small fractions: numerators are grouped by denominator so
// each addition is an integer add, and the groups are combined once at the end.
template <class T>
struct Accumulator {
    T sum = T(0);
    void operator+=(const T& x) { sum += x; }
    T value() const { return sum; }
};

template <>
struct Accumulator<Rational> {
    std::map<boost::multiprecision::cpp_int, boost::multiprecision::cpp_int> groups;
    void operator+=(const Rational& x) { groups[denominator(x)] += numerator(x); }
    Rational value() const {
        Rational total(0);
        for (const auto& [den, num] : groups) total += Rational(num, den);
        return total;
    }
};

template <class T>
struct Affine {
    T c;  // signed scale
    T t;
    Affine compose(const Affine& inner) const { return {c * inner.c, c * inner.t + t}; }
    T operator()(const T& x) const { return c * x + t; }
};

template <class T>
T abs_of(const T& x) { return x < T(0) ? T(-x) : x; }

// Children of the unit node for one level, sorted by position, with the gaps
// between consecutive images.
template <class T>
struct Pattern {
    std::vector<Affine<T>> maps;
    std::vector<std::pair<T, T>> gaps;  // in base coordinates
    double max_gap = 0.0;
};

template <class T>
Pattern<T> make_pattern(const std::vector<Affine<T>>& maps, const T& a, const T& b, double tol) {
    Pattern<T> p;
    std::vector<std::pair<std::pair<T, T>, Affine<T>>> images;
    for (const auto& m : maps) {
        T l = m(a), r = m(b);
        if (r < l) std::swap(l, r);
        images.push_back({{l, r}, m});
    }
    std::sort(images.begin(), images.end(), [](const auto& x, const auto& y) { return x.first.first < y.first.first; });
    const double span = to_double(T(b - a));
    require(to_double(T(abs_of(T(images.front().first.first - a)))) <= tol * span &&
                to_double(T(abs_of(T(images.back().first.second - b)))) <= tol * span,
            ErrorCode::InvalidArgument, "images do not reach both ends of the interval");
    for (std::size_t j = 0; j < images.size(); ++j) {
        p.maps.push_back(images[j].second);
        if (j == 0) continue;
        const T& prev_r = images[j - 1].first.second;
        const T& next_l = images[j].first.first;
        T g = next_l - prev_r;
        if (to_double(g) < -tol * span) fail(ErrorCode::OverlappingImages, "images of the interval overlap");
        if (to_double(g) > tol * span) {
            p.gaps.push_back({prev_r, next_l});
            p.max_gap = std::max(p.max_gap, to_double(g) / span);
        }
    }
    return p;
}

struct Setup {
    double a = 0.0, b = 1.0;
    std::vector<std::vector<std::pair<double, double>>> levels;  // (signed scale, shift) per pattern level
    bool periodic_levels = true;                                // levels index modulo size
};

std::pair<double, double> hull_of(const std::vector<std::vector<std::pair<double, double>>>& levels) {
    double a = 0.0, b = 1.0;
    for (int it = 0; it < 20000; ++it) {
        double na = a, nb = b;
        for (std::size_t k = levels.size(); k-- > 0;) {
            double lo = kInf, hi = -kInf;
            for (auto [c, t] : levels[k]) {
                double u = c * na + t, v = c * nb + t;
                lo = std::min({lo, u, v});
                hi = std::max({hi, u, v});
            }
            na = lo, nb = hi;
        }
        bool done = std::abs(na - a) <= 1e-16 * std::max(1.0, std::abs(a)) && std::abs(nb - b) <= 1e-16 * std::max(1.0, std::abs(b));
        a = na, b = nb;
        if (done) break;
    }
    return {a, b};
}

Setup make_setup(const LimitIfs& ifs, std::size_t levels_needed) {
    require(ifs.dim() == 1, ErrorCode::InvalidArgument, "gap lists need a system on the line");
    Setup s;
    auto convert = [](const std::vector<Similarity>& level) {
        std::vector<std::pair<double, double>> out;
        for (const auto& w : level) {
            double o = w.orthogonal.empty() ? 1.0 : w.orthogonal[0];
            out.push_back({w.ratio * o, w.translation[0]});
        }
        return out;
    };
    if (ifs.generation() == Generation::Explicit) {
        s.periodic_levels = false;
        for (std::size_t k = 1; k <= levels_needed; ++k) s.levels.push_back(convert(ifs.level(k)));
    } else {
        for (const auto& level : ifs.block()) s.levels.push_back(convert(level));
    }
    if (ifs.interval) {
        s.a = ifs.interval->first;
        s.b = ifs.interval->second;
    } else if (ifs.generation() != Generation::Explicit) {
        std::tie(s.a, s.b) = hull_of(s.levels);
    }
    require(s.b > s.a, ErrorCode::InvalidArgument, "interval must have positive length");
    return s;
}

struct Node {
    double length;
    std::uint64_t serial;
    std::size_t index;  // into node storage
    bool operator<(const Node& o) const { return length != o.length ? length < o.length : serial > o.serial; }
};

template <class T>
GapList build(const Setup& s, const T& a, const T& b, std::optional<std::size_t> depth, std::size_t target,
              double tol) {
    std::vector<Pattern<T>> patterns;
    for (const auto& level : s.levels) {
        std::vector<Affine<T>> maps;
        for (auto [c, t] : level) {
            if constexpr (std::is_same_v<T, double>) maps.push_back({c, t});
            else maps.push_back({*to_rational(c), *to_rational(t)});
        }
        patterns.push_back(make_pattern(maps, a, b, tol));
    }
    auto pattern_at = [&](std::size_t level) -> const Pattern<T>& {
        // level is 1-based
        if (s.periodic_levels) return patterns[(level - 1) % patterns.size()];
        if (level > patterns.size()) fail(ErrorCode::BudgetExceeded, "explicit levels exhausted");
        return patterns[level - 1];
    };
    double gmf = 0.0;
    for (const auto& p : patterns) gmf = std::max(gmf, p.max_gap);

    struct Item {
        Affine<T> map;
        std::size_t level;
    };
    std::vector<Item> items{{Affine<T>{T(1), T(0)}, 0}};
    std::vector<std::pair<std::pair<T, T>, double>> found;  // endpoints, length
    const double span = to_double(T(b - a));
    auto node_length = [&](const Affine<T>& m) { return std::abs(to_double(m.c)) * span; };
    auto expand = [&](const Item& it, auto&& emit) {
        const auto& p = pattern_at(it.level + 1);
        for (const auto& g : p.gaps) {
            T l = it.map(g.first), r = it.map(g.second);
            if (r < l) std::swap(l, r);
            // scale times base length keeps equal gaps bitwise equal in floating point
            const double len = std::is_same_v<T, double> ? std::abs(to_double(it.map.c)) * to_double(T(g.second - g.first))
                                                         : to_double(T(r - l));
            found.push_back({{l, r}, len});
        }
        for (const auto& m : p.maps) emit(Item{it.map.compose(m), it.level + 1});
    };

    std::vector<Item> leaves;
    double complete_above = 0.0;
    if (depth) {
        std::vector<Item> cur = items;
        for (std::size_t k = 0; k < *depth; ++k) {
            std::vector<Item> next;
            for (const auto& it : cur) expand(it, [&](Item c) { next.push_back(std::move(c)); });
            cur = std::move(next);
        }
        for (const auto& it : cur) complete_above = std::max(complete_above, node_length(it.map) * gmf);
        leaves = std::move(cur);
    } else {
        std::priority_queue<Node> heap;
        std::vector<Item> store;
        std::uint64_t serial = 0;
        auto push = [&](Item it) {
            heap.push(Node{node_length(it.map), serial++, store.size()});
            store.push_back(std::move(it));
        };
        push(items.front());
        std::size_t check_at = target;
        for (;;) {
            require(!heap.empty(), ErrorCode::InvalidArgument, "interval system has no gaps left to expand");
            if (found.size() >= check_at) {
                double bound = heap.top().length * gmf;
                std::size_t longer = 0;
                for (const auto& f : found) longer += f.second > bound;
                if (longer >= target) {
                    complete_above = bound;
                    break;
                }
                check_at = found.size() + found.size() / 2 + 1;
            }
            if (gmf == 0.0) {
                complete_above = 0.0;
                break;
            }
            Node top = heap.top();
            heap.pop();
            Item it = store[top.index];
            expand(it, push);
        }
        while (!heap.empty()) leaves.push_back(store[heap.top().index]), heap.pop();
    }

    // longest first, ties left to right; double keys decide unless they collide
    std::vector<double> left_key(found.size());
    for (std::size_t i = 0; i < found.size(); ++i) left_key[i] = to_double(found[i].first.first);
    std::vector<std::size_t> order(found.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (found[i].second != found[j].second) return found[i].second > found[j].second;
        if (left_key[i] != left_key[j]) return left_key[i] < left_key[j];
        return found[i].first.first < found[j].first.first;
    });
    GapList out;
    out.a = to_double(a);
    out.b = to_double(b);
    out.complete_above = complete_above;
    out.max_gap_fraction = gmf;
    Accumulator<T> total;
    for (std::size_t i : order) {
        const auto& f = found[i];
        out.gaps.push_back({left_key[i], to_double(f.first.second), f.second});
        total += f.first.second - f.first.first;
    }
    for (const auto& it : leaves) {
        T l = it.map(a), r = it.map(b);
        if (r < l) std::swap(l, r);
        out.residuals.push_back({to_double(l), to_double(r)});
        out.residual_total += to_double(T(r - l));
        total += r - l;
    }
    std::sort(out.residuals.begin(), out.residuals.end());
    if constexpr (!std::is_same_v<T, double>) {
        out.exact = true;
        const Rational sum = total.value();
        out.exact_conserved = sum == b - a;
        out.exact_total = sum.str();
    } else {
        out.exact_total = format_double(total.value());
    }
    return out;
}

bool all_rational(const Setup& s) {
    if (!to_rational(s.a) || !to_rational(s.b)) return false;
    for (const auto& level : s.levels)
        for (auto [c, t] : level)
            if (!to_rational(c) || !to_rational(t)) return false;
    return true;
}

GapList dispatch(const Setup& s, std::optional<std::size_t> depth, std::size_t target, std::uint64_t nodes) {
    if (nodes <= kExactNodeLimit && all_rational(s))
        return build<Rational>(s, *to_rational(s.a), *to_rational(s.b), depth, target, 0.0);
    return build<double>(s, s.a, s.b, depth, target, 1e-12);
}

}  // namespace

GapList gaps_from_interval_ifs(const LimitIfs& ifs, std::size_t depth) {
    auto count = word_count(ifs, depth, 10'000'000);
    if (!count) fail(ErrorCode::BudgetExceeded, "too many intervals at depth " + std::to_string(depth));
    Setup s = make_setup(ifs, depth);
    return dispatch(s, depth, 0, *count);
}

GapList gaps_by_count(const LimitIfs& ifs, std::size_t target) {
    require(target >= 1, ErrorCode::InvalidArgument, "target must be positive");
    require(target <= 20'000'000, ErrorCode::BudgetExceeded, "gap target exceeds the budget");
    std::size_t levels = 0;
    if (ifs.generation() == Generation::Explicit) levels = *ifs.level_count();
    Setup s = make_setup(ifs, levels);
    return dispatch(s, std::nullopt, target, 2 * target);
}

MinkowskiEstimate minkowski_content_estimate(const GapList& gl, double d, std::vector<double> eps_grid) {
    require(d > 0.0 && d <= 1.0, ErrorCode::InvalidArgument, "d must lie in (0, 1]");
    const double diam = gl.b - gl.a;
    if (eps_grid.empty()) {
        require(!gl.gaps.empty(), ErrorCode::InvalidArgument, "no gaps to set an epsilon grid");
        const double smallest = gl.gaps.back().length;
        for (double e = diam / 2.0; e >= 10.0 * smallest; e *= 0.9) eps_grid.push_back(e);
    }
    require(eps_grid.size() >= 4, ErrorCode::InvalidArgument, "epsilon grid too short");
    std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());
    for (double e : eps_grid) require(e > 0.0, ErrorCode::InvalidArgument, "epsilon must be positive");

    // gap lengths ascending with prefix sums so each epsilon costs a binary search
    std::vector<double> lengths;
    for (const auto& g : gl.gaps) lengths.push_back(g.length);
    std::sort(lengths.begin(), lengths.end());
    std::vector<double> prefix(lengths.size() + 1, 0.0);
    for (std::size_t i = 0; i < lengths.size(); ++i) prefix[i + 1] = prefix[i] + lengths[i];
    std::vector<double> residual_len;
    for (auto [l, r] : gl.residuals) residual_len.push_back(r - l);
    std::sort(residual_len.begin(), residual_len.end());

    MinkowskiEstimate out;
    double smallest_eps_uncertainty = 0.0, smallest_eps_volume = 0.0;
    for (double e : eps_grid) {
        const double two = 2.0 * e;
        std::size_t k = std::lower_bound(lengths.begin(), lengths.end(), two) - lengths.begin();
        double vol = two + prefix[k] + two * static_cast<double>(lengths.size() - k) + gl.residual_total;
        double uncertainty = 0.0;
        for (auto it = residual_len.rbegin(); it != residual_len.rend() && *it * gl.max_gap_fraction > two; ++it)
            uncertainty += *it;
        smallest_eps_uncertainty = uncertainty;
        smallest_eps_volume = vol;
        out.eps.push_back(e);
        out.normalized.push_back(vol / std::pow(e, 1.0 - d));
    }
    if (smallest_eps_uncertainty > 0.01 * smallest_eps_volume)
        fail(ErrorCode::TruncationTooCoarse, "unresolved residual intervals exceed 1% of the tube volume");

    const double mid = std::sqrt(eps_grid.front() * eps_grid.back());
    std::vector<double> half;
    for (std::size_t i = 0; i < out.eps.size(); ++i)
        if (out.eps[i] <= mid) half.push_back(out.normalized[i]);
    double sum = 0.0;
    for (double v : half) sum += v;
    auto [lo, hi] = std::minmax_element(half.begin(), half.end());
    out.content = {sum / half.size(), *lo, *hi};
    out.measurable = out.content.width() < 0.01 * out.content.value;
    return out;
}

}  // namespace fracspec
