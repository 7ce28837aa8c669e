#pragma once

#include <cstdint>
#include <vector>

#include "environment.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "slow.hpp"

namespace berw {

/// One horizontal level of the lattice, seen through its instruction stacks:
/// the number of vertical instructions pointing at each site (the possible
/// entry budget) and the horizontal instructions at indices >= 2.
class LevelEnvironment {
public:
    virtual ~LevelEnvironment() = default;

    virtual std::int64_t level() const = 0;
    /// U_x: how many vertical instructions of the adjacent levels point here.
    virtual std::uint32_t entries(std::int64_t x) const = 0;
    /// Sign of the k-th instruction at (x, level), k >= 2. +1 = right.
    virtual int horizontal_sign(std::int64_t x, std::uint32_t k) const = 0;
};

/// Level view of the balanced random environment with the given seed.
/// Entry counts are Bin(2, 1/2) per site, except 1 + Bin(2, 1/2) at the
/// walk's starting site (0, 0).
class RandomLevelEnvironment final : public LevelEnvironment {
public:
    RandomLevelEnvironment(std::uint64_t seed, std::int64_t y) : env_(seed), y_(y) {}

    std::int64_t level() const override { return y_; }

    std::uint32_t entries(std::int64_t x) const override {
        std::uint32_t u = 0;
        if (env_.instruction({x, y_ - 1}, 1).dir == Dir::PlusY) ++u;
        if (env_.instruction({x, y_ + 1}, 1).dir == Dir::MinusY) ++u;
        if (x == 0 && y_ == 0) ++u;
        return u;
    }

    int horizontal_sign(std::int64_t x, std::uint32_t k) const override {
        if (k < 2) throw ContractError("horizontal instructions start at index 2");
        return env_.instruction({x, y_}, k).dir == Dir::PlusX ? 1 : -1;
    }

private:
    RandomEnvironment env_;
    std::int64_t y_;
};

/// Hand-built level for oracles: a default entry count with overrides, and a
/// constant or scripted horizontal direction.
class ScriptedLevelEnvironment : public LevelEnvironment {
public:
    ScriptedLevelEnvironment(std::int64_t y, std::uint32_t default_entries,
                             int default_sign = 1)
        : y_(y), default_entries_(default_entries), default_sign_(default_sign) {}

    void set_entries(std::int64_t x, std::uint32_t u) { entry_overrides_.emplace_back(x, u); }

    std::int64_t level() const override { return y_; }

    std::uint32_t entries(std::int64_t x) const override {
        for (const auto& [ox, u] : entry_overrides_)
            if (ox == x) return u;
        return default_entries_;
    }

    int horizontal_sign(std::int64_t, std::uint32_t k) const override {
        if (k < 2) throw ContractError("horizontal instructions start at index 2");
        return default_sign_;
    }

private:
    std::int64_t y_;
    std::uint32_t default_entries_;
    int default_sign_;
    std::vector<std::pair<std::int64_t, std::uint32_t>> entry_overrides_;
};

struct FamilyResult {
    std::vector<std::uint64_t> lifetimes;
    std::uint64_t total_lifetime = 0;
    bool budget_exhausted = false;
    /// Maximal contiguous visited intervals [lo, hi], sorted.
    std::vector<std::pair<std::int64_t, std::int64_t>> visited_intervals;
    /// Instructions consumed per site, sorted by x.
    std::vector<std::pair<std::int64_t, std::uint32_t>> consumed;
};

/// Runs the sequential family of walks in one level: walk i starts at
/// entries[i], repeatedly consumes the first unused instruction at its
/// position; at a first-visited site that instruction is the vertical one and
/// the walk stops. The lifetime counts the instructions the walk consumed.
FamilyResult run_family(const LevelEnvironment& env, const std::vector<std::int64_t>& entries,
                        std::uint64_t budget = 100'000'000);

/// Exposes a level as ordinary per-site stacks: index 1 is a ceasing vertical
/// step, indices >= 2 are the level's horizontal instructions. Running
/// particles at the entry points through the generic movement engine consumes
/// exactly the addresses the family consumes.
class LevelStackEnvironment : public Environment {
public:
    explicit LevelStackEnvironment(const LevelEnvironment& level) : level_(level) {}

protected:
    Instruction instruction_impl(Site s, std::uint32_t k) const override {
        if (s.y != level_.level())
            throw ContractError("level stack queried off-level at " + site_str(s));
        if (k == 1) return {Dir::PlusY, true};
        return {level_.horizontal_sign(s.x, k) > 0 ? Dir::PlusX : Dir::MinusX, false};
    }

private:
    const LevelEnvironment& level_;
};

struct SurplusScan {
    std::int64_t n = 0;
    std::int64_t max_surplus = 0; ///< M_n over windows of length <= n in [-n^2, n^2)
    double threshold = 0.0;       ///< sqrt(6 n ln n)
    bool within_threshold = true; ///< max_surplus <= threshold
};

/// Exact maximum of sum_{x in I} (entries(x) - 1) over intervals I = [a, b)
/// with -n^2 <= a <= b < n^2 and b - a <= n.
SurplusScan surplus_scan(const LevelEnvironment& env, std::int64_t n);

bool is_feasible(const LevelEnvironment& env, const std::vector<std::int64_t>& entries);

/// Random feasible multiset of at most max_size entry points in [lo, hi),
/// returned in increasing order.
std::vector<std::int64_t> sample_feasible_entries(const LevelEnvironment& env, std::int64_t lo,
                                                  std::int64_t hi, std::size_t max_size,
                                                  SplitMix& rng);

struct BoundaryDistanceCheck {
    std::vector<std::uint64_t> distances; ///< per walk, at its start
    std::uint64_t max_distance = 0;
    std::int64_t max_surplus = 0;
    bool within_surplus = true; ///< max_distance <= max_surplus
};

/// For an increasing feasible entry sequence in [-n^2, n^2): the distance
/// from each walk's start to the nearest unvisited site at that moment.
/// Deterministically bounded by the maximal surplus.
BoundaryDistanceCheck boundary_distance_check(const LevelEnvironment& env,
                                              const std::vector<std::int64_t>& entries,
                                              std::int64_t n);

struct IntervalRow {
    std::int64_t lo = 0;
    std::int64_t hi = 0; ///< interval [lo, hi)
    std::uint32_t family_size = 0;
    std::uint64_t total_lifetime = 0;
    double ratio = 0.0; ///< total_lifetime / (|I| n^{3/2} sqrt(ln n))
};

struct BadIntervalScan {
    std::int64_t n = 0;
    bool bad = false; ///< some interval had ratio >= 2^7
    double worst_ratio = 0.0;
    IntervalRow worst;
    bool budget_exhausted = false;
    std::vector<IntervalRow> rows; ///< per interval when collect_rows
};

/// Runs the full-entry family A_I (every x taken entries(x) times) for every
/// interval I of length <= n inside [-n^2, n^2) and compares total lifetimes
/// against 2^7 |I| n^{3/2} sqrt(ln n).
BadIntervalScan detect_bad_interval(const LevelEnvironment& env, std::int64_t n,
                                    bool collect_rows = false,
                                    std::uint64_t family_budget = 100'000'000);

/// MC estimate of P(sum of r exit times from (0, r) started at m > 8 r^2 m).
McEstimate exit_time_tail(std::int64_t r, std::int64_t m, std::uint64_t trials,
                          std::uint64_t seed);

/// MC estimate of P(total exit time from (0, r) of walks at `starts` > 4 n r^2).
McEstimate exit_total_from_points(std::int64_t r, std::int64_t n,
                                  const std::vector<std::int64_t>& starts,
                                  std::uint64_t trials, std::uint64_t seed);

} // namespace berw
