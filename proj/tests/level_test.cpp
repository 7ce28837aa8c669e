#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "levels.hpp"
#include "movement.hpp"
#include "stats_util.hpp"

using namespace berw;

TEST_CASE("a walk started on a fresh site lives for exactly one instruction") {
    RandomLevelEnvironment env(5, 1);
    FamilyResult fam = run_family(env, {4});
    REQUIRE(fam.lifetimes.size() == 1);
    CHECK(fam.lifetimes[0] == 1);
    CHECK(fam.total_lifetime == 1);
    REQUIRE(fam.visited_intervals.size() == 1);
    CHECK(fam.visited_intervals[0] == std::pair<std::int64_t, std::int64_t>{4, 4});
}

TEST_CASE("total lifetime is invariant under permutations of the entries") {
    SplitMix gen(99);
    for (int inst = 0; inst < 100; ++inst) {
        RandomLevelEnvironment env(derive_seed(12, inst), 1);
        std::vector<std::int64_t> entries =
            sample_feasible_entries(env, -50, 50, 30, gen);
        if (entries.empty()) continue;
        FamilyResult base = run_family(env, entries);
        for (int perm = 0; perm < 5; ++perm) {
            std::vector<std::int64_t> shuffled = entries;
            for (std::size_t i = shuffled.size(); i > 1; --i)
                std::swap(shuffled[i - 1], shuffled[gen.next_below(i)]);
            FamilyResult other = run_family(env, shuffled);
            REQUIRE(other.total_lifetime == base.total_lifetime);
            REQUIRE(other.consumed == base.consumed);
        }
    }
}

TEST_CASE("constant entries reproduce cubic aggregate growth") {
    std::vector<double> lx, ly;
    for (std::int64_t n : {16, 32, 64, 128}) {
        double acc = 0;
        const int seeds = 6;
        for (int s = 0; s < seeds; ++s) {
            RandomLevelEnvironment env(derive_seed(1000 + n, s), 1);
            std::vector<std::int64_t> entries(static_cast<std::size_t>(n), 0);
            FamilyResult fam = run_family(env, entries);
            REQUIRE_FALSE(fam.budget_exhausted);
            acc += std::log(static_cast<double>(fam.total_lifetime));
        }
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(acc / seeds);
    }
    double slope = lsq_slope(lx, ly);
    CHECK(slope > 2.6);
    CHECK(slope < 3.4);
}

TEST_CASE("visited sites form disjoint intervals each holding an entry point") {
    SplitMix gen(7);
    for (int inst = 0; inst < 50; ++inst) {
        RandomLevelEnvironment env(derive_seed(77, inst), 1);
        std::vector<std::int64_t> entries =
            sample_feasible_entries(env, -40, 40, 20, gen);
        if (entries.empty()) continue;
        FamilyResult fam = run_family(env, entries);
        for (std::size_t j = 0; j < fam.visited_intervals.size(); ++j) {
            auto [lo, hi] = fam.visited_intervals[j];
            CHECK(lo <= hi);
            if (j > 0) CHECK(fam.visited_intervals[j - 1].second + 1 < lo);
            bool has_entry = false;
            for (std::int64_t a : entries)
                if (a >= lo && a <= hi) has_entry = true;
            CHECK(has_entry);
        }
    }
}

TEST_CASE("family consumption equals the generic movement engine's used set") {
    SplitMix gen(31);
    for (int inst = 0; inst < 25; ++inst) {
        RandomLevelEnvironment level_env(derive_seed(3131, inst), 2);
        std::vector<std::int64_t> entries =
            sample_feasible_entries(level_env, -30, 30, 15, gen);
        if (entries.empty()) continue;
        FamilyResult fam = run_family(level_env, entries);

        LevelStackEnvironment stacks(level_env);
        std::vector<Site> starts;
        for (std::int64_t a : entries) starts.push_back({a, 2});
        MovementList list;
        for (std::uint32_t i = 0; i < starts.size(); ++i) list.push_back(i);
        MovementResult run =
            run_movement_list(stacks, make_particles(starts), list, 1000000);
        REQUIRE(run.all_ceased);
        CHECK(run.used.total() == fam.total_lifetime);
        for (const auto& [x, c] : fam.consumed) CHECK(run.used.count_at({x, 2}) == c);
        CHECK(run.used.sites() == fam.consumed.size());
    }
}

TEST_CASE("surplus of scripted all-ones entries is identically zero") {
    ScriptedLevelEnvironment env(3, 1);
    SurplusScan scan = surplus_scan(env, 16);
    CHECK(scan.max_surplus == 0);
    CHECK(scan.within_threshold);
}

TEST_CASE("single-site surpluses are distributed as Bin(2,1/2) - 1") {
    RandomLevelEnvironment env(424242, 1);
    std::vector<double> observed(3, 0.0);
    const std::int64_t n = 100000;
    for (std::int64_t x = 0; x < n; ++x) {
        std::uint32_t u = env.entries(x);
        REQUIRE(u <= 2);
        observed[u] += 1.0;
    }
    std::vector<double> expected = {n / 4.0, n / 2.0, n / 4.0};
    double chi2 = chi_square(observed, expected);
    CHECK(chi2 < 9.21034); // 1% quantile of chi-square with 2 dof
}

TEST_CASE("entry counts are uncorrelated across sites and with the stacks") {
    RandomLevelEnvironment env(171717, 1);
    const std::int64_t n = 50000;
    double cx = 0.0, cs = 0.0, mean = 0.0;
    for (std::int64_t x = 0; x < n; ++x) {
        double u = static_cast<double>(env.entries(x)) - 1.0;
        double ux = static_cast<double>(env.entries(x + 1)) - 1.0;
        double h = env.horizontal_sign(x, 2);
        mean += u;
        cx += u * ux;
        cs += u * h;
    }
    double se = std::sqrt(0.5 / n); // Var(U - 1) = 1/2
    CHECK(std::fabs(mean / n) < 5 * se);
    CHECK(std::fabs(cx / n) < 5 * 0.5 / std::sqrt(static_cast<double>(n)) + 5 * se * se);
    CHECK(std::fabs(cs / n) < 5 * std::sqrt(0.5) / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("the walk's starting site carries one extra entry") {
    int total = 0;
    for (int s = 0; s < 2000; ++s) {
        RandomLevelEnvironment env(derive_seed(888, s), 0);
        std::uint32_t u = env.entries(0);
        CHECK(u >= 1);
        CHECK(u <= 3);
        total += static_cast<int>(u);
    }
    double mean = static_cast<double>(total) / 2000.0;
    CHECK(std::fabs(mean - 2.0) < 0.1); // 1 + Bin(2, 1/2) has mean 2
}

TEST_CASE("deque surplus scan equals the cubic brute force") {
    for (int s = 0; s < 10; ++s) {
        RandomLevelEnvironment env(derive_seed(5555, s), 1);
        std::int64_t n = 10;
        SurplusScan scan = surplus_scan(env, n);
        std::int64_t best = 0;
        for (std::int64_t a = -n * n; a < n * n; ++a) {
            for (std::int64_t b = a; b < n * n && b - a <= n; ++b) {
                std::int64_t sum = 0;
                for (std::int64_t x = a; x < b; ++x)
                    sum += static_cast<std::int64_t>(env.entries(x)) - 1;
                best = std::max(best, sum);
            }
        }
        CHECK(scan.max_surplus == best);
    }
}

TEST_CASE("surplus tail event rate respects its bound at small n") {
    const std::int64_t n = 16;
    const int seeds = 2000;
    int complement = 0;
    for (int s = 0; s < seeds; ++s) {
        RandomLevelEnvironment env(derive_seed(606060, s), 1);
        if (!surplus_scan(env, n).within_threshold) ++complement;
    }
    double rate = static_cast<double>(complement) / seeds;
    double bound = 3.0 / (static_cast<double>(n) * n * n);
    CHECK(rate <= bound + 3 * std::sqrt(bound * (1 - bound) / seeds) + 3.0 / seeds);
}

TEST_CASE("fresh distinct entries have zero boundary distance") {
    ScriptedLevelEnvironment env(1, 2);
    BoundaryDistanceCheck check = boundary_distance_check(env, {-3, 0, 5}, 8);
    CHECK(check.max_distance == 0);
    CHECK(check.within_surplus);
}

TEST_CASE("hand-computed boundary distances on a doubled block") {
    // Entries twice at 0, 1, 2 with all horizontal instructions pointing
    // east; walked by hand: distances 0, 1, 1, 2, 2, 3.
    ScriptedLevelEnvironment env(1, 2, +1);
    std::vector<std::int64_t> entries = {0, 0, 1, 1, 2, 2};
    BoundaryDistanceCheck check = boundary_distance_check(env, entries, 6);
    std::vector<std::uint64_t> expect = {0, 1, 1, 2, 2, 3};
    CHECK(check.distances == expect);
    CHECK(check.max_distance == 3);
    CHECK(check.within_surplus); // max surplus of the window is much larger
}

TEST_CASE("boundary distance never exceeds the maximal surplus") {
    SplitMix gen(17);
    const std::int64_t n = 32;
    for (int trial = 0; trial < 150; ++trial) {
        RandomLevelEnvironment env(derive_seed(717171, trial), 1);
        std::vector<std::int64_t> entries =
            sample_feasible_entries(env, -n * n, n * n, static_cast<std::size_t>(n), gen);
        if (entries.empty()) continue;
        BoundaryDistanceCheck check = boundary_distance_check(env, entries, n);
        CHECK(check.within_surplus);
    }
}

TEST_CASE("infeasible or unsorted entries are rejected") {
    ScriptedLevelEnvironment env(1, 1);
    CHECK_THROWS_AS(boundary_distance_check(env, {0, 0}, 8), ContractError); // U=1 twice
    CHECK_THROWS_AS(boundary_distance_check(env, {3, 1}, 8), ContractError); // not sorted
}

TEST_CASE("no entries anywhere means no bad intervals") {
    ScriptedLevelEnvironment env(1, 0);
    BadIntervalScan scan = detect_bad_interval(env, 10, true);
    CHECK_FALSE(scan.bad);
    CHECK(scan.worst_ratio == 0.0);
    for (const auto& row : scan.rows) {
        CHECK(row.family_size == 0);
        CHECK(row.total_lifetime == 0);
    }
}

TEST_CASE("bad-interval scan at small n stays far from the threshold") {
    const std::int64_t n = 12;
    for (int s = 0; s < 10; ++s) {
        RandomLevelEnvironment env(derive_seed(343434, s), 1);
        BadIntervalScan scan = detect_bad_interval(env, n);
        CHECK_FALSE(scan.bad);
        CHECK(scan.worst_ratio < 64.0);
    }
    CHECK_THROWS_AS(detect_bad_interval(RandomLevelEnvironment(1, 1), 9), ContractError);
}

TEST_CASE("interval scan rows agree with standalone family runs") {
    RandomLevelEnvironment env(987, 1);
    const std::int64_t n = 10;
    BadIntervalScan scan = detect_bad_interval(env, n, true);
    SplitMix pick(3);
    REQUIRE(!scan.rows.empty());
    for (int t = 0; t < 25; ++t) {
        const IntervalRow& row = scan.rows[pick.next_below(scan.rows.size())];
        std::vector<std::int64_t> family;
        for (std::int64_t x = row.lo; x < row.hi; ++x)
            for (std::uint32_t i = env.entries(x); i > 0; --i) family.push_back(x);
        FamilyResult fam = run_family(env, family);
        CHECK(fam.total_lifetime == row.total_lifetime);
        CHECK(family.size() == row.family_size);
    }
}

TEST_CASE("family lifetimes decompose across final visited intervals") {
    SplitMix gen(23);
    const std::int64_t n = 24;
    for (int trial = 0; trial < 60; ++trial) {
        RandomLevelEnvironment env(derive_seed(232323, trial), 1);
        std::vector<std::int64_t> entries =
            sample_feasible_entries(env, -n * n, n * n, static_cast<std::size_t>(n), gen);
        if (entries.empty()) continue;
        FamilyResult fam = run_family(env, entries);
        std::uint64_t sum = 0;
        for (auto [lo, hi] : fam.visited_intervals) {
            std::vector<std::int64_t> full;
            for (std::int64_t x = lo; x <= hi; ++x)
                for (std::uint32_t i = env.entries(x); i > 0; --i) full.push_back(x);
            sum += run_family(env, full).total_lifetime;
        }
        CHECK(fam.total_lifetime <= sum);
    }
}

TEST_CASE("exit-time tails") {
    // Starting on or beyond the boundary exits immediately.
    McEstimate trivial = exit_time_tail(5, 5, 500, 1);
    CHECK(trivial.mean == 0.0);

    // r = 50, m = 10: the oracle run measured 0.0000 over 1e4 trials; the
    // registered threshold is the specified 0.01.
    McEstimate main = exit_time_tail(50, 10, 10000, 2);
    CHECK(main.mean <= 0.01);

    // Nonincreasing in m within 2 SE.
    McEstimate m5 = exit_time_tail(50, 5, 4000, 3);
    McEstimate m10 = exit_time_tail(50, 10, 4000, 4);
    McEstimate m15 = exit_time_tail(50, 15, 4000, 5);
    CHECK(m10.mean <= m5.mean + 2 * std::sqrt(m5.se * m5.se + m10.se * m10.se));
    CHECK(m15.mean <= m10.mean + 2 * std::sqrt(m10.se * m10.se + m15.se * m15.se));

    CHECK_THROWS_AS(exit_time_tail(0, 1, 10, 1), ContractError);
}

TEST_CASE("total exit time of placed walks respects its threshold check") {
    std::vector<std::int64_t> starts;
    for (int i = 0; i < 20; ++i) starts.push_back(1 + (i % 19));
    McEstimate e = exit_total_from_points(20, 20, starts, 4000, 9);
    CHECK(e.mean <= 0.01);
    CHECK_THROWS_AS(exit_total_from_points(20, 20, {0}, 10, 1), ContractError);
    CHECK_THROWS_AS(exit_total_from_points(20, 20, {20}, 10, 1), ContractError);
}
