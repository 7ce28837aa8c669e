#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace berw {

/// Positions of a 1-D nearest-neighbour path (length n means n+1 points).
std::vector<std::int32_t> srw_positions(std::uint64_t seed, std::uint64_t length);

/// A 1-D path with doubling sparse tables for O(1) min/max queries over any
/// closed time interval. For a nearest-neighbour path the set of visited
/// points on [s, s+t] is exactly the integer interval [min, max], so the
/// range cardinality is max - min + 1.
class PathExtrema {
public:
    explicit PathExtrema(std::vector<std::int32_t> positions);

    std::uint64_t length() const { return positions_.size() - 1; }
    std::int32_t position(std::uint64_t i) const { return positions_[i]; }

    std::int32_t min_on(std::uint64_t s, std::uint64_t e) const;
    std::int32_t max_on(std::uint64_t s, std::uint64_t e) const;

    /// Number of distinct points visited during [s, e].
    std::uint64_t range_card(std::uint64_t s, std::uint64_t e) const {
        return static_cast<std::uint64_t>(max_on(s, e) - min_on(s, e)) + 1;
    }

private:
    void check(std::uint64_t s, std::uint64_t e) const;

    std::vector<std::int32_t> positions_;
    std::vector<std::vector<std::int32_t>> min_table_;
    std::vector<std::vector<std::int32_t>> max_table_;
    std::vector<std::uint8_t> log2_;
};

/// Whether the interval [s, s+len] is eps-slow: range cardinality minus one is
/// at most eps * sqrt(len). Empty intervals (len = 0) are slow by convention.
bool is_slow(const PathExtrema& path, std::uint64_t s, std::uint64_t len, double eps);

/// [offset * 2^scale, (offset+1) * 2^scale]. Two dyadic intervals are nested
/// or disjoint up to shared endpoints.
struct DyadicInterval {
    std::uint32_t scale = 0;
    std::uint64_t offset = 0;

    std::uint64_t lo() const { return offset << scale; }
    std::uint64_t hi() const { return (offset + 1) << scale; }
    std::uint64_t len() const { return std::uint64_t(1) << scale; }
    bool contains_point(std::uint64_t s) const { return lo() <= s && s <= hi(); }
    bool contains(const DyadicInterval& other) const {
        return lo() <= other.lo() && other.hi() <= hi();
    }

    friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

struct SlowCover {
    std::uint32_t k = 0;
    double eps = 0.0;
    std::vector<DyadicInterval> members; ///< maximal slow dyadics, sorted by lo
    std::uint64_t covered_steps = 0;
    double covered_fraction = 0.0;
};

/// The maximal eps-slow dyadic intervals of [0, 2^k]: slow dyadics not
/// strictly contained in any other slow dyadic. Members are pairwise disjoint
/// up to endpoints.
SlowCover maximal_slow_dyadic_cover(const PathExtrema& path, double eps, std::uint32_t k);

struct McEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::uint64_t n = 0;
};

/// Monte Carlo probability that time point s lies in no eps-slow dyadic
/// interval of [0, 2^k] for a fresh random walk.
McEstimate uncovered_probability(std::uint64_t master_seed, std::uint32_t n_seeds, double eps,
                                 std::uint32_t k, std::uint64_t s);

/// The positive root of g(theta) = theta * a - log cosh(theta), a in (0, 1).
struct ThetaRoot {
    double a = 0.0;
    double theta = 0.0;
    double residual = 0.0;
};

double g_of_theta(double a, double theta);
ThetaRoot solve_theta(double a);

struct RangeSupEstimate {
    McEstimate value;
    double argmax_early_fraction = 0.0; ///< share of samples with argmax < k_max/2
    bool stabilized = false;            ///< argmax_early_fraction >= 0.99
};

/// MC estimate of E[ sup_{k <= k_max} { R_k * sqrt(l) - gamma * (k + l) } ]
/// for a simple random walk, where R_k is the range cardinality at time k.
/// The sup in the underlying statement is over all k; the truncation is
/// accepted only when the argmax stabilizes well before k_max.
RangeSupEstimate range_sup_functional(std::uint64_t master_seed, std::uint32_t n_seeds,
                                      double l, double gamma,
                                      std::uint64_t k_max = std::uint64_t(1) << 20);

/// MC estimate of P(tau_m > k * m^2), tau_m the hitting time of +-floor(m)
/// by a simple random walk from 0. m >= 2, k >= 1.
McEstimate hitting_time_tail(double m, double k, std::uint64_t trials, std::uint64_t seed);

} // namespace berw
