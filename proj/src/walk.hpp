#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "environment.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "site_table.hpp"

namespace berw {

enum class WalkEngine : std::uint8_t { Stream = 0, Stack = 1 };

struct WalkConfig {
    std::uint64_t seed = 1;
    std::uint64_t n_steps = 0;
    WalkEngine engine = WalkEngine::Stream;
    std::uint64_t record_stride = 0; ///< decimated path stride; 0 = none
    bool record_steps = false;       ///< keep the full step log (n <= kFullLogLimit)
    bool track_levels = false;       ///< per-level vertical entry counts
    bool track_visits = false;       ///< per-site visit counts
    std::vector<std::uint64_t> extra_checkpoints;
    std::uint64_t max_sites = std::uint64_t(1) << 28;

    static constexpr std::uint64_t kFullLogLimit = 1'000'000;
};

/// One range-series checkpoint. `vertical_steps` counts first arrivals at new
/// sites, i.e. vertical instructions committed by the walk so far; each such
/// arrival is paired with that site's unique vertical departure, so the range
/// identity R_t = 1 + vertical_steps holds at every t. `m_vertical` counts
/// vertical steps realized among the first t steps (it lags `vertical_steps`
/// by at most the one pending departure).
struct CheckpointRow {
    std::uint64_t t = 0;
    std::uint64_t range = 1;
    std::uint64_t vertical_steps = 0;
    std::int64_t x_min = 0, x_max = 0, y_min = 0, y_max = 0;
    std::uint64_t n_horizontal = 0;
    std::uint64_t m_vertical = 0;
};

struct RangeSeries {
    std::vector<CheckpointRow> checkpoints;

    const CheckpointRow& at_time(std::uint64_t t) const;
    bool has_time(std::uint64_t t) const;
};

struct Trajectory {
    std::vector<std::pair<std::uint64_t, Site>> points; ///< decimated (t, Z_t)
    Site final_position;
    std::vector<Dir> steps; ///< full log when requested, else empty
};

struct WalkResult {
    Trajectory trajectory;
    RangeSeries series;
    std::vector<std::pair<std::int64_t, std::uint32_t>> level_entries; ///< (y, entries), sorted
    std::vector<std::pair<std::uint64_t, std::uint32_t>> visit_counts; ///< (packed site, visits), sorted
};

/// Runs the walk: a fair vertical step on the first departure from a site, a
/// fair horizontal step on later departures. The stream engine draws fresh
/// bits per step; the stack engine reads per-site instruction stacks. The two
/// sourcing schemes realize the same law since each stack address is read at
/// most once.
WalkResult berw_run(const WalkConfig& config);

/// Same decision rule, directions taken from an explicit environment
/// (scripted oracles). Indices follow the stack convention: the k-th departure
/// from a site consumes instruction k.
WalkResult berw_run_in_environment(const WalkConfig& config, const Environment& env);

/// The interlacing record of a walk: which of the first t steps were
/// horizontal. Stored as the ordered times of horizontal steps.
class TimingSequence {
public:
    TimingSequence() = default;
    TimingSequence(std::uint64_t horizon, std::vector<std::uint64_t> horizontal_times);

    std::uint64_t horizon() const { return horizon_; }
    std::uint64_t horizontal_count() const { return jump_times_.size(); }

    /// N_t: number of horizontal steps among the first t.
    std::uint64_t n_at(std::uint64_t t) const;
    /// M_t = t - N_t.
    std::uint64_t m_at(std::uint64_t t) const { return t - n_at(t); }

    /// sigma_i: the time of the i-th horizontal step (i >= 1).
    std::uint64_t sigma(std::uint64_t i) const;

    const std::vector<std::uint64_t>& horizontal_times() const { return jump_times_; }

private:
    std::uint64_t horizon_ = 0;
    std::vector<std::uint64_t> jump_times_;
};

/// A 1-D nearest-neighbour path by positions, x_0 = 0.
struct Path1D {
    std::vector<std::int64_t> positions{0};

    std::size_t steps() const { return positions.size() - 1; }
};

struct Decomposition {
    Path1D x; ///< horizontal sub-walk
    Path1D y; ///< vertical sub-walk
    TimingSequence q;
};

/// Splits a fully logged trajectory into its horizontal walk, vertical walk
/// and timing sequence, so that Z_t = (X_{N_t}, Y_{M_t}). Rejects trajectories
/// without a full step log.
Decomposition decompose(const Trajectory& trajectory);

/// (horizontal span, vertical span) = (max - min) of each coordinate over [0, t].
/// t must be a recorded checkpoint.
std::pair<std::int64_t, std::int64_t> coordinate_extrema(const RangeSeries& series,
                                                         std::uint64_t t);

} // namespace berw
