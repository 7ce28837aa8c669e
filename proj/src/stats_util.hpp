#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace berw {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    r.n = xs.size();
    if (xs.empty()) return r;
    double sum = 0.0;
    for (double x : xs) sum += x;
    r.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - r.mean) * (x - r.mean);
        r.se = std::sqrt(ss / (static_cast<double>(xs.size() - 1) *
                               static_cast<double>(xs.size())));
    }
    return r;
}

inline double median(std::vector<double> xs) {
    if (xs.empty()) throw ContractError("median of empty sample");
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

inline double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw ContractError("quantile of empty sample");
    std::sort(xs.begin(), xs.end());
    double idx = q * static_cast<double>(xs.size() - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, xs.size() - 1);
    double frac = idx - static_cast<double>(lo);
    return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ContractError("KS needs non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        double fa = static_cast<double>(i) / static_cast<double>(a.size());
        double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

/// Large-sample critical value at level alpha for the two-sample KS test.
inline double ks_critical(double alpha, std::size_t n1, std::size_t n2) {
    double c;
    if (alpha <= 0.01)
        c = 1.628;
    else if (alpha <= 0.05)
        c = 1.358;
    else
        c = 1.224;
    return c * std::sqrt(static_cast<double>(n1 + n2) /
                         (static_cast<double>(n1) * static_cast<double>(n2)));
}

/// Least-squares slope of y against x.
inline double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ContractError("slope fit needs >= 2 matched points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    if (den == 0.0) throw ContractError("degenerate abscissae in slope fit");
    return num / den;
}

/// Pearson chi-square statistic against expected counts.
inline double chi_square(const std::vector<double>& observed,
                         const std::vector<double>& expected) {
    if (observed.size() != expected.size())
        throw ContractError("chi-square needs matched category counts");
    double s = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) throw ContractError("chi-square expected count must be > 0");
        double d = observed[i] - expected[i];
        s += d * d / expected[i];
    }
    return s;
}

} // namespace berw
