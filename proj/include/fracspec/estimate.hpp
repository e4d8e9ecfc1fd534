#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracspec {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// A point value with the interval it is believed to lie in.
struct Estimate {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }

    static Estimate exact(double v) { return {v, v, v}; }
};

inline bool overlaps(const Estimate& a, const Estimate& b) { return a.lo <= b.hi && b.lo <= a.hi; }

// Reciprocal that maps 0 to infinity and infinity to 0; the interval flips.
inline Estimate reciprocal(const Estimate& e) {
    auto inv = [](double x) { return x == 0.0 ? kInf : (std::isinf(x) ? 0.0 : 1.0 / x); };
    return {inv(e.value), inv(e.hi), inv(e.lo)};
}

}  // namespace fracspec
