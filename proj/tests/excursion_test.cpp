#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "excursions.hpp"
#include "stats_util.hpp"

using namespace berw;

TEST_CASE("a lone particle starts with a vertical move and returns to the axis") {
    int returned_total = 0, moved = 0;
    for (int s = 0; s < 50; ++s) {
        StripConfig cfg;
        cfg.seed = derive_seed(63, s);
        cfg.half_width = 0;
        cfg.horizon = 40.0;
        StripResult res = simulate_strip(cfg);
        REQUIRE(res.particles.size() == 1);
        const auto& p = res.particles[0];
        if (p.vertical_moves > 0) ++moved;
        if (p.returned) {
            ++returned_total;
            CHECK(p.vertical_moves >= 2);
            CHECK(p.vertical_moves % 2 == 0);
        }
    }
    CHECK(moved == 50); // a clock fires within T = 40 essentially surely
    CHECK(returned_total > 25);
}

TEST_CASE("the fraction of returned particles grows with the horizon") {
    double prev_rate = 0.0, prev_se = 0.0;
    for (double T : {10.0, 40.0, 160.0}) {
        std::uint32_t returned = 0, considered = 0;
        int seeds = 120;
        for (int s = 0; s < seeds; ++s) {
            StripConfig cfg;
            cfg.seed = derive_seed(9000 + static_cast<int>(T), s);
            cfg.horizon = T;
            StripResult res = simulate_strip(cfg);
            StripSummary sum = summarize_strip(res);
            returned += sum.returned;
            considered += sum.total - sum.truncated;
        }
        double rate = static_cast<double>(returned) / considered;
        double se = std::sqrt(rate * (1 - rate) / considered);
        CHECK(rate + 2 * std::sqrt(se * se + prev_se * prev_se) >= prev_rate);
        prev_rate = rate;
        prev_se = se;
    }
    CHECK(prev_rate > 0.85); // T = 160
}

TEST_CASE("full-excursion departures average one per level") {
    std::vector<std::vector<double>> deps(3);
    for (int s = 0; s < 250; ++s) {
        StripConfig cfg;
        cfg.seed = derive_seed(2024, s);
        cfg.horizon = 50.0;
        StripResult res = simulate_strip(cfg);
        for (const auto& p : res.particles) {
            if (p.truncated) continue;
            for (int i = 0; i < 3; ++i)
                deps[static_cast<std::size_t>(i)].push_back(p.completed_departures[i]);
        }
    }
    for (int i = 0; i < 3; ++i) {
        MeanSe m = mean_se(deps[static_cast<std::size_t>(i)]);
        CHECK(std::fabs(m.mean - 1.0) <= 3 * m.se);
    }
}

TEST_CASE("identical seeds reproduce the event log bit for bit") {
    StripConfig cfg;
    cfg.seed = 321;
    StripResult a = simulate_strip(cfg);
    StripResult b = simulate_strip(cfg);
    CHECK(a.event_hash == b.event_hash);
    CHECK(a.firings == b.firings);
    cfg.seed = 322;
    StripResult c = simulate_strip(cfg);
    CHECK(a.event_hash != c.event_hash);
}

TEST_CASE("versions A and B agree in law at desk scale") {
    std::vector<double> tau_a, tau_b;
    for (int s = 0; s < 1000; ++s) {
        for (int v = 0; v < 2; ++v) {
            StripConfig cfg;
            cfg.seed = derive_seed(777 + v, s);
            cfg.version = v == 0 ? StripVersion::A : StripVersion::B;
            StripResult res = simulate_strip(cfg);
            for (const auto& p : res.particles)
                if (!p.truncated && p.returned)
                    (v == 0 ? tau_a : tau_b).push_back(p.vertical_moves);
        }
    }
    double d = ks_statistic(tau_a, tau_b);
    CHECK(d < ks_critical(0.01, tau_a.size(), tau_b.size()));
}

namespace {

struct Enumeration {
    // Probabilities over sign sequences of length `depth`: excursions that
    // complete within it, classified by departures from level 1.
    std::array<double, 8> completed_by_l{};
    double completed = 0.0;

    static Enumeration run(int depth) {
        Enumeration e;
        std::uint32_t total = 1u << depth;
        double w = 1.0 / static_cast<double>(total);
        for (std::uint32_t bits = 0; bits < total; ++bits) {
            int pos = 0, l = 0;
            bool done = false;
            for (int step = 0; step < depth && !done; ++step) {
                if (pos == 1) ++l;
                pos += (bits >> step) & 1 ? 1 : -1;
                if (pos == 0) done = true;
            }
            if (done) {
                e.completed += w;
                if (l < 8) e.completed_by_l[static_cast<std::size_t>(l)] += w;
            }
        }
        return e;
    }
};

} // namespace

TEST_CASE("excursion departures at level one match exact enumeration brackets") {
    // Enumerating all sign sequences of length 18 gives exact lower bounds
    // P(L = l, tau <= 18); the defect P(tau > 18) brackets the rest.
    Enumeration e = Enumeration::run(18);
    double defect = 1.0 - e.completed;
    REQUIRE(defect < 0.25);

    // Distribution of L from the public sampler, one trial per call.
    const std::uint64_t trials = 200000;
    std::array<std::uint64_t, 8> counts{};
    for (std::uint64_t t = 0; t < trials; ++t) {
        McEstimate one = srw_excursion_departures(1, 1, derive_seed(4141, t));
        std::uint32_t l = static_cast<std::uint32_t>(one.mean + 0.5);
        if (l < 8) ++counts[l];
    }
    for (std::size_t l = 0; l < 4; ++l) {
        double p = static_cast<double>(counts[l]) / static_cast<double>(trials);
        double se = std::sqrt(p * (1 - p) / static_cast<double>(trials));
        CHECK(p >= e.completed_by_l[l] - 4 * se);
        CHECK(p <= e.completed_by_l[l] + defect + 4 * se);
    }
}

TEST_CASE("excursion departure means are one for levels 1..3") {
    for (int level : {1, 2, 3}) {
        McEstimate e = srw_excursion_departures(level, 300000, 500 + level);
        CHECK(std::fabs(e.mean - 1.0) <= 3 * e.se);
    }
    CHECK_THROWS_AS(srw_excursion_departures(0, 10, 1), ContractError);
}

TEST_CASE("an excursion that never reaches the level contributes zero") {
    // With one trial the estimate is the single sample; scan until a zero
    // and a positive sample have both appeared.
    bool saw_zero = false, saw_positive = false;
    for (int t = 0; t < 200 && !(saw_zero && saw_positive); ++t) {
        McEstimate one = srw_excursion_departures(3, 1, derive_seed(555, t));
        if (one.mean == 0.0) saw_zero = true;
        if (one.mean > 0.0) saw_positive = true;
    }
    CHECK(saw_zero);
    CHECK(saw_positive);
}

TEST_CASE("no clocks means no descending chains") {
    McEstimate e = count_descending_chains(0.0, 2, 4, 200, 1);
    CHECK(e.mean == 0.0);
}

TEST_CASE("length-one chain count matches its closed form") {
    // A single-vertex chain from an origin neighbour exists iff that
    // neighbour fired by t: mean 4(1 - e^-t).
    double t = 0.25;
    McEstimate e = count_descending_chains(t, 1, 3, 40000, 7);
    double expect = 4.0 * (1.0 - std::exp(-t));
    CHECK(std::fabs(e.mean - expect) <= 3 * e.se);
    CHECK(e.mean <= 1.0 + 3 * e.se);
}

TEST_CASE("chain counts respect the factorial bound") {
    for (double t : {0.25, 0.5}) {
        for (int n = 1; n <= 4; ++n) {
            McEstimate e = count_descending_chains(t, n, n + 2, 8000, 11 + n);
            double bound = std::pow(4.0 * t, n) / std::tgamma(n + 1.0);
            CHECK(e.mean <= bound + 2 * e.se);
        }
    }
}

TEST_CASE("chain boxes must leave room for the longest chain") {
    CHECK_THROWS_AS(count_descending_chains(0.5, 4, 4, 10, 1), ContractError);
}
