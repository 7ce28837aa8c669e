#include "walk.hpp"

#include <algorithm>
#include <cmath>

namespace berw {

const CheckpointRow& RangeSeries::at_time(std::uint64_t t) const {
    for (const auto& row : checkpoints)
        if (row.t == t) return row;
    throw ContractError("no checkpoint recorded at t=" + std::to_string(t));
}

bool RangeSeries::has_time(std::uint64_t t) const {
    for (const auto& row : checkpoints)
        if (row.t == t) return true;
    return false;
}

namespace {

std::vector<std::uint64_t> checkpoint_times(const WalkConfig& cfg) {
    std::vector<std::uint64_t> ts;
    ts.push_back(0);
    for (std::uint64_t t = 1; t <= cfg.n_steps && t != 0; t <<= 1) ts.push_back(t);
    for (std::uint64_t t : cfg.extra_checkpoints)
        if (t <= cfg.n_steps) ts.push_back(t);
    ts.push_back(cfg.n_steps);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

/// Stream engine: one fresh fair bit per step.
struct StreamPolicy {
    SplitMix rng;
    SiteSet visited;

    StreamPolicy(std::uint64_t seed, std::size_t expected)
        : rng(mix64(seed ^ 0x5741ULL)), visited(expected) {
        visited.insert({0, 0});
    }

    bool arrive(Site s) { return visited.insert(s); }

    Dir decide(Site, bool fresh) {
        bool plus = rng.next_bit();
        if (fresh) return plus ? Dir::PlusY : Dir::MinusY;
        return plus ? Dir::PlusX : Dir::MinusX;
    }

    std::uint64_t range(bool) const { return visited.size(); }
    std::uint64_t sites() const { return visited.size(); }
};

/// Stack engine: per-site departure counters address the instruction stacks.
struct StackPolicy {
    const Environment& env;
    SiteCountMap departures;

    StackPolicy(const Environment& e, std::size_t expected) : env(e), departures(expected) {}

    // A previously visited site has always been departed from, so absence in
    // the departure map is exactly first-visit freshness.
    bool arrive(Site s) { return !departures.contains(s); }

    Dir decide(Site s, bool) {
        std::uint32_t& c = departures.at(s);
        Instruction ins = env.instruction(s, c + 1);
        ++c;
        return ins.dir;
    }

    std::uint64_t range(bool current_fresh) const {
        return departures.size() + (current_fresh ? 1 : 0);
    }
    std::uint64_t sites() const { return departures.size(); }
};

template <typename Policy>
WalkResult run_walk(const WalkConfig& cfg, Policy& policy) {
    if (cfg.record_steps && cfg.n_steps > WalkConfig::kFullLogLimit)
        throw ContractError("full step log limited to n <= " +
                            std::to_string(WalkConfig::kFullLogLimit));

    WalkResult res;
    std::vector<std::uint64_t> cps = checkpoint_times(cfg);
    std::size_t cp_idx = 0;

    Site z{0, 0};
    bool fresh = true; // origin is new at t = 0
    std::uint64_t fresh_arrivals = 0;
    std::uint64_t n_horizontal = 0, m_vertical = 0;
    std::int64_t x_min = 0, x_max = 0, y_min = 0, y_max = 0;

    SiteCountMap level_entries(cfg.track_levels ? 1024 : 2);
    SiteCountMap visit_counts(cfg.track_visits ? 4096 : 2);
    if (cfg.track_levels) level_entries.at({0, 0}) = 1;
    if (cfg.track_visits) visit_counts.at({0, 0}) = 1;

    if (cfg.record_steps) res.trajectory.steps.reserve(cfg.n_steps);
    if (cfg.record_stride > 0) res.trajectory.points.emplace_back(0, z);

    auto emit_checkpoints = [&](std::uint64_t t) {
        while (cp_idx < cps.size() && cps[cp_idx] == t) {
            CheckpointRow row;
            row.t = t;
            row.range = policy.range(fresh);
            row.vertical_steps = fresh_arrivals;
            row.x_min = x_min;
            row.x_max = x_max;
            row.y_min = y_min;
            row.y_max = y_max;
            row.n_horizontal = n_horizontal;
            row.m_vertical = m_vertical;
            res.series.checkpoints.push_back(row);
            ++cp_idx;
        }
    };

    emit_checkpoints(0);

    for (std::uint64_t t = 0; t < cfg.n_steps; ++t) {
        Dir d = policy.decide(z, fresh);
        z = step(z, d);
        if (is_vertical(d)) {
            ++m_vertical;
            if (cfg.track_levels) ++level_entries.at({z.y, 0});
        } else {
            ++n_horizontal;
        }
        fresh = policy.arrive(z);
        if (fresh) ++fresh_arrivals;
        if (cfg.track_visits) ++visit_counts.at(z);
        if (policy.sites() > cfg.max_sites)
            throw ResourceError("visited-site limit exceeded", t + 1);
        x_min = std::min(x_min, z.x);
        x_max = std::max(x_max, z.x);
        y_min = std::min(y_min, z.y);
        y_max = std::max(y_max, z.y);
        if (cfg.record_steps) res.trajectory.steps.push_back(d);
        if (cfg.record_stride > 0 && (t + 1) % cfg.record_stride == 0)
            res.trajectory.points.emplace_back(t + 1, z);
        emit_checkpoints(t + 1);
    }

    if (cfg.record_stride > 0 && res.trajectory.points.back().first != cfg.n_steps)
        res.trajectory.points.emplace_back(cfg.n_steps, z);
    res.trajectory.final_position = z;

    if (cfg.track_levels) {
        level_entries.for_each([&](Site s, std::uint32_t c) {
            res.level_entries.emplace_back(s.x, c);
        });
        std::sort(res.level_entries.begin(), res.level_entries.end());
    }
    if (cfg.track_visits) {
        visit_counts.for_each([&](Site s, std::uint32_t c) {
            res.visit_counts.emplace_back(pack_site(s), c);
        });
        std::sort(res.visit_counts.begin(), res.visit_counts.end());
    }
    return res;
}

std::size_t expected_sites(std::uint64_t n) {
    // Range grows roughly like n^0.78; size the table up front with headroom.
    double est = std::pow(static_cast<double>(n) + 16.0, 0.78);
    return static_cast<std::size_t>(est) + 64;
}

} // namespace

WalkResult berw_run(const WalkConfig& config) {
    if (config.engine == WalkEngine::Stream) {
        StreamPolicy p(config.seed, expected_sites(config.n_steps));
        return run_walk(config, p);
    }
    RandomEnvironment env(config.seed);
    StackPolicy p(env, expected_sites(config.n_steps));
    return run_walk(config, p);
}

WalkResult berw_run_in_environment(const WalkConfig& config, const Environment& env) {
    StackPolicy p(env, expected_sites(config.n_steps));
    return run_walk(config, p);
}

TimingSequence::TimingSequence(std::uint64_t horizon, std::vector<std::uint64_t> horizontal_times)
    : horizon_(horizon), jump_times_(std::move(horizontal_times)) {
    for (std::size_t i = 0; i < jump_times_.size(); ++i) {
        if (jump_times_[i] == 0 || jump_times_[i] > horizon_ ||
            (i > 0 && jump_times_[i] <= jump_times_[i - 1]))
            throw ContractError("timing sequence jump times must be strictly increasing in [1, T]");
    }
}

std::uint64_t TimingSequence::n_at(std::uint64_t t) const {
    if (t > horizon_) throw ContractError("t beyond timing sequence horizon");
    auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
    return static_cast<std::uint64_t>(it - jump_times_.begin());
}

std::uint64_t TimingSequence::sigma(std::uint64_t i) const {
    if (i == 0) return 0;
    if (i > jump_times_.size()) throw ContractError("sigma index beyond horizontal count");
    return jump_times_[i - 1];
}

Decomposition decompose(const Trajectory& trajectory) {
    if (trajectory.steps.empty() && trajectory.final_position != Site{0, 0})
        throw ContractError("decompose requires a full step log");
    Decomposition d;
    std::vector<std::uint64_t> jumps;
    std::int64_t x = 0, y = 0;
    for (std::size_t t = 0; t < trajectory.steps.size(); ++t) {
        Dir dir = trajectory.steps[t];
        if (is_horizontal(dir)) {
            x += (dir == Dir::PlusX) ? 1 : -1;
            d.x.positions.push_back(x);
            jumps.push_back(t + 1);
        } else {
            y += (dir == Dir::PlusY) ? 1 : -1;
            d.y.positions.push_back(y);
        }
    }
    d.q = TimingSequence(trajectory.steps.size(), std::move(jumps));
    return d;
}

std::pair<std::int64_t, std::int64_t> coordinate_extrema(const RangeSeries& series,
                                                         std::uint64_t t) {
    const CheckpointRow& row = series.at_time(t);
    return {row.x_max - row.x_min, row.y_max - row.y_min};
}

} // namespace berw
