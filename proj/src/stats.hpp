#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace fracspec::detail {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double residual_sd = 0.0;
    std::size_t count = 0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    LineFit r;
    const std::size_t n = std::min(x.size(), y.size());
    r.count = n;
    if (n < 2) return r;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) return r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - r.intercept - r.slope * x[i];
        ss += e * e;
    }
    if (n > 2) {
        r.residual_sd = std::sqrt(ss / (n - 2));
        r.slope_se = r.residual_sd / std::sqrt(sxx);
    }
    return r;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return NAN;
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline double mean(std::span<const double> v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? NAN : s / v.size();
}

}  // namespace fracspec::detail
