#include "levels.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace berw {

namespace {

/// Dense per-site counters over a growable window of one level. Epoch stamps
/// make resets O(1) so thousands of families can share one allocation.
class LineCounters {
public:
    void reset(std::int64_t lo, std::int64_t hi) {
        std::int64_t want = hi - lo + 1;
        if (lo < lo_ || lo + static_cast<std::int64_t>(cells_.size()) < hi + 1 ||
            cells_.empty()) {
            std::int64_t margin = std::max<std::int64_t>(64, want);
            lo_ = lo - margin;
            cells_.assign(static_cast<std::size_t>(want + 2 * margin), {0, 0});
        }
        ++epoch_;
    }

    std::uint32_t get(std::int64_t x) {
        Cell& c = cell(x);
        return c.epoch == epoch_ ? c.count : 0;
    }

    void set(std::int64_t x, std::uint32_t v) {
        Cell& c = cell(x);
        c.epoch = epoch_;
        c.count = v;
    }

private:
    struct Cell {
        std::uint32_t epoch;
        std::uint32_t count;
    };

    Cell& cell(std::int64_t x) {
        while (x < lo_ || x >= lo_ + static_cast<std::int64_t>(cells_.size())) grow();
        return cells_[static_cast<std::size_t>(x - lo_)];
    }

    void grow() {
        std::size_t old = cells_.size();
        std::vector<Cell> next(old * 2, {0, 0});
        std::copy(cells_.begin(), cells_.end(), next.begin() + static_cast<std::ptrdiff_t>(old / 2));
        lo_ -= static_cast<std::int64_t>(old / 2);
        cells_ = std::move(next);
    }

    std::int64_t lo_ = 0;
    std::vector<Cell> cells_;
    std::uint32_t epoch_ = 0;
};

template <typename Env>
FamilyResult run_family_impl(const Env& env, const std::vector<std::int64_t>& entries,
                             std::uint64_t budget, LineCounters& counters,
                             bool collect_details) {
    FamilyResult res;
    res.lifetimes.reserve(entries.size());
    if (entries.empty()) return res;

    auto [mn_it, mx_it] = std::minmax_element(entries.begin(), entries.end());
    counters.reset(*mn_it, *mx_it);
    std::int64_t seen_lo = *mn_it, seen_hi = *mx_it;

    std::uint64_t used = 0;
    for (std::int64_t start : entries) {
        std::uint64_t life = 0;
        std::int64_t pos = start;
        while (true) {
            if (used >= budget) {
                res.budget_exhausted = true;
                break;
            }
            std::uint32_t c = counters.get(pos);
            ++used;
            ++life;
            if (c == 0) {
                // First visit: the site's vertical instruction; the walk stops.
                counters.set(pos, 1);
                seen_lo = std::min(seen_lo, pos);
                seen_hi = std::max(seen_hi, pos);
                break;
            }
            counters.set(pos, c + 1);
            pos += env.horizontal_sign(pos, c + 1);
        }
        res.lifetimes.push_back(life);
        res.total_lifetime += life;
        if (res.budget_exhausted) break;
    }

    if (collect_details && !res.budget_exhausted) {
        for (std::int64_t x = seen_lo; x <= seen_hi; ++x) {
            std::uint32_t c = counters.get(x);
            if (c == 0) continue;
            res.consumed.emplace_back(x, c);
            if (!res.visited_intervals.empty() && res.visited_intervals.back().second == x - 1)
                res.visited_intervals.back().second = x;
            else
                res.visited_intervals.emplace_back(x, x);
        }
    }
    return res;
}

} // namespace

FamilyResult run_family(const LevelEnvironment& env, const std::vector<std::int64_t>& entries,
                        std::uint64_t budget) {
    LineCounters counters;
    return run_family_impl(env, entries, budget, counters, true);
}

SurplusScan surplus_scan(const LevelEnvironment& env, std::int64_t n) {
    if (n < 2) throw ContractError("surplus scan needs n >= 2");
    SurplusScan scan;
    scan.n = n;
    // Prefix sums of (U_x - 1) over x in [-n^2, n^2); S_[a,b) = P[b] - P[a].
    const std::int64_t n2 = n * n;
    const std::size_t len = static_cast<std::size_t>(2 * n2);
    std::vector<std::int64_t> prefix(len);
    prefix[0] = 0;
    for (std::size_t j = 1; j < len; ++j) {
        std::int64_t x = static_cast<std::int64_t>(j) - 1 - n2;
        prefix[j] = prefix[j - 1] + static_cast<std::int64_t>(env.entries(x)) - 1;
    }
    std::int64_t best = 0;
    std::deque<std::size_t> window; // indices with increasing prefix values
    for (std::size_t b = 0; b < len; ++b) {
        while (!window.empty() &&
               window.front() + static_cast<std::size_t>(n) < b)
            window.pop_front();
        while (!window.empty() && prefix[window.back()] >= prefix[b]) window.pop_back();
        window.push_back(b);
        best = std::max(best, prefix[b] - prefix[window.front()]);
    }
    scan.max_surplus = best;
    scan.threshold = std::sqrt(6.0 * static_cast<double>(n) *
                               std::log(static_cast<double>(n)));
    scan.within_threshold = static_cast<double>(best) <= scan.threshold;
    return scan;
}

bool is_feasible(const LevelEnvironment& env, const std::vector<std::int64_t>& entries) {
    std::size_t i = 0;
    std::vector<std::int64_t> sorted(entries);
    std::sort(sorted.begin(), sorted.end());
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        if (j - i > env.entries(sorted[i])) return false;
        i = j;
    }
    return true;
}

std::vector<std::int64_t> sample_feasible_entries(const LevelEnvironment& env, std::int64_t lo,
                                                  std::int64_t hi, std::size_t max_size,
                                                  SplitMix& rng) {
    std::vector<std::int64_t> slots;
    for (std::int64_t x = lo; x < hi; ++x)
        for (std::uint32_t u = env.entries(x); u > 0; --u) slots.push_back(x);
    if (slots.empty() || max_size == 0) return {};
    std::size_t want = 1 + static_cast<std::size_t>(rng.next_below(max_size));
    want = std::min(want, slots.size());
    for (std::size_t i = 0; i < want; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next_below(slots.size() - i));
        std::swap(slots[i], slots[j]);
    }
    slots.resize(want);
    std::sort(slots.begin(), slots.end());
    return slots;
}

BoundaryDistanceCheck boundary_distance_check(const LevelEnvironment& env,
                                              const std::vector<std::int64_t>& entries,
                                              std::int64_t n) {
    if (!std::is_sorted(entries.begin(), entries.end()))
        throw ContractError("entry sequence must be increasing");
    if (!is_feasible(env, entries))
        throw ContractError("entry sequence is infeasible for this level");
    const std::int64_t n2 = n * n;
    for (std::int64_t a : entries)
        if (a < -n2 || a >= n2) throw ContractError("entry point outside [-n^2, n^2)");

    BoundaryDistanceCheck out;
    LineCounters counters;
    counters.reset(entries.empty() ? 0 : entries.front(),
                   entries.empty() ? 0 : entries.back());

    for (std::int64_t start : entries) {
        // Distance from the start to the nearest unvisited site right now.
        std::uint64_t dist = 0;
        if (counters.get(start) != 0) {
            std::uint64_t d = 1;
            while (true) {
                if (counters.get(start - static_cast<std::int64_t>(d)) == 0 ||
                    counters.get(start + static_cast<std::int64_t>(d)) == 0) {
                    dist = d;
                    break;
                }
                ++d;
            }
        }
        out.distances.push_back(dist);
        out.max_distance = std::max(out.max_distance, dist);

        std::int64_t pos = start;
        while (true) {
            std::uint32_t c = counters.get(pos);
            if (c == 0) {
                counters.set(pos, 1);
                break;
            }
            counters.set(pos, c + 1);
            pos += env.horizontal_sign(pos, c + 1);
        }
    }
    out.max_surplus = surplus_scan(env, n).max_surplus;
    out.within_surplus =
        static_cast<std::int64_t>(out.max_distance) <= out.max_surplus;
    return out;
}

namespace {

/// One walk of a family, on shared counters. Returns its lifetime, or 0 with
/// `exhausted` set when the budget ran out mid-walk.
template <typename Env>
std::uint64_t run_one_walk(const Env& env, LineCounters& counters, std::int64_t start,
                           std::uint64_t budget, std::uint64_t& used, bool& exhausted) {
    std::uint64_t life = 0;
    std::int64_t pos = start;
    while (true) {
        if (used >= budget) {
            exhausted = true;
            return 0;
        }
        std::uint32_t c = counters.get(pos);
        ++used;
        ++life;
        if (c == 0) {
            counters.set(pos, 1);
            return life;
        }
        counters.set(pos, c + 1);
        pos += env.horizontal_sign(pos, c + 1);
    }
}

template <typename Env>
BadIntervalScan detect_bad_interval_impl(const Env& env, std::int64_t n, bool collect_rows,
                                         std::uint64_t family_budget) {
    if (n < 10) throw ContractError("bad-interval scan needs n >= 10");
    BadIntervalScan scan;
    scan.n = n;
    const std::int64_t n2 = n * n;
    const double base = std::pow(static_cast<double>(n), 1.5) *
                        std::sqrt(std::log(static_cast<double>(n)));

    std::vector<std::uint32_t> u(static_cast<std::size_t>(2 * n2));
    for (std::int64_t x = -n2; x < n2; ++x)
        u[static_cast<std::size_t>(x + n2)] = env.entries(x);

    // A_[a,b+1) is A_[a,b) plus the entries of site b, and the walks of the
    // extension continue from the shared state, so each left endpoint needs
    // one incremental sweep rather than a fresh run per interval.
    LineCounters counters;
    for (std::int64_t a = -n2; a < n2; ++a) {
        counters.reset(a, std::min(a + n, n2));
        std::uint64_t total = 0, used = 0;
        std::uint32_t family_size = 0;
        bool exhausted = false;
        for (std::int64_t b = a + 1; b <= std::min(a + n, n2); ++b) {
            std::int64_t x = b - 1;
            for (std::uint32_t i = u[static_cast<std::size_t>(x + n2)]; i > 0 && !exhausted;
                 --i) {
                total += run_one_walk(env, counters, x, family_budget, used, exhausted);
                ++family_size;
            }
            if (exhausted) {
                scan.budget_exhausted = true;
                break;
            }
            IntervalRow row;
            row.lo = a;
            row.hi = b;
            row.family_size = family_size;
            row.total_lifetime = total;
            row.ratio = static_cast<double>(total) / (static_cast<double>(b - a) * base);
            if (row.ratio > scan.worst_ratio) {
                scan.worst_ratio = row.ratio;
                scan.worst = row;
            }
            if (row.ratio >= 128.0) scan.bad = true;
            if (collect_rows) scan.rows.push_back(row);
        }
    }
    return scan;
}

} // namespace

BadIntervalScan detect_bad_interval(const LevelEnvironment& env, std::int64_t n,
                                    bool collect_rows, std::uint64_t family_budget) {
    if (const auto* fast = dynamic_cast<const RandomLevelEnvironment*>(&env))
        return detect_bad_interval_impl(*fast, n, collect_rows, family_budget);
    return detect_bad_interval_impl(env, n, collect_rows, family_budget);
}

namespace {

McEstimate tail_probability(std::uint64_t hits, std::uint64_t trials) {
    McEstimate e;
    e.n = trials;
    if (trials == 0) return e;
    double p = static_cast<double>(hits) / static_cast<double>(trials);
    e.mean = p;
    e.se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return e;
}

} // namespace

McEstimate exit_time_tail(std::int64_t r, std::int64_t m, std::uint64_t trials,
                          std::uint64_t seed) {
    if (r < 1 || m < 1) throw ContractError("exit_time_tail needs r >= 1 and m >= 1");
    const std::uint64_t threshold = 8ull * static_cast<std::uint64_t>(r * r) *
                                    static_cast<std::uint64_t>(m);
    SplitMix rng(mix64(seed ^ 0xE517ULL));
    std::uint64_t hits = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        std::uint64_t total = 0;
        for (std::int64_t i = 0; i < r && total <= threshold; ++i) {
            std::int64_t pos = m;
            while (pos > 0 && pos < r) {
                pos += rng.next_bit() ? 1 : -1;
                if (++total > threshold) break;
            }
        }
        if (total > threshold) ++hits;
    }
    return tail_probability(hits, trials);
}

McEstimate exit_total_from_points(std::int64_t r, std::int64_t n,
                                  const std::vector<std::int64_t>& starts,
                                  std::uint64_t trials, std::uint64_t seed) {
    if (r < 1 || n < 1) throw ContractError("exit_total_from_points needs r >= 1, n >= 1");
    for (std::int64_t s : starts)
        if (s <= 0 || s >= r) throw ContractError("start points must lie in (0, r)");
    const std::uint64_t threshold = 4ull * static_cast<std::uint64_t>(n) *
                                    static_cast<std::uint64_t>(r * r);
    SplitMix rng(mix64(seed ^ 0xE518ULL));
    std::uint64_t hits = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < starts.size() && total <= threshold; ++i) {
            std::int64_t pos = starts[i];
            while (pos > 0 && pos < r) {
                pos += rng.next_bit() ? 1 : -1;
                if (++total > threshold) break;
            }
        }
        if (total > threshold) ++hits;
    }
    return tail_probability(hits, trials);
}

} // namespace berw
