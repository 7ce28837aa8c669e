#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "movement.hpp"
#include "report.hpp"
#include "slow.hpp"
#include "walk.hpp"

namespace berw {

// ---------------------------------------------------------------------------
// Ensemble fits and diagnostics
// ---------------------------------------------------------------------------

struct ExponentFit {
    std::vector<double> slopes; ///< per seed
    double median_slope = 0.0;
    double iqr_lo = 0.0; ///< 25% quantile
    double iqr_hi = 0.0; ///< 75% quantile
    std::uint32_t excluded_seeds = 0;
    /// Per seed, the fitted grid rows (n, R_n).
    std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> grids;
};

/// Fit of log R_n against log n on the dyadic grid n in [2^14, n_max].
/// Rejects a non-monotone range series (that would be an engine bug).
double fit_exponent(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& grid);

/// Runs one walk per derived seed and fits the range-growth exponent.
/// rule "berw" uses the fast dedicated engine; other rules go through the
/// generic interlacing engine.
ExponentFit estimate_alpha(std::uint64_t master_seed, std::uint32_t n_seeds,
                           std::uint64_t n_max, const std::string& rule = "berw");

struct DiagnosticsRow {
    std::uint64_t t = 0;
    std::uint64_t range = 0;
    double lower_margin = 0.0;     ///< R_t - t^{4/7} / ln^2 t
    double upper_ratio = 0.0;      ///< R_t sqrt(ln ln t) / t
    double vertical_scaling = 0.0; ///< max_{s<=t} |y| / sqrt(t)
    double lil_ratio = 0.0;        ///< max_{s<=t} |y| / sqrt(2 t ln ln t)
};

struct DiagnosticsReport {
    std::vector<DiagnosticsRow> rows; ///< per checkpoint with t >= 4
    double final_lower_margin = 0.0;
    double final_vertical_scaling = 0.0;
    double final_lil_ratio = 0.0;
    std::uint32_t max_level_entries = 0;
    double level_cap = 0.0; ///< 2 sqrt(R ln ln (R v 4)) at the final time
    bool level_cap_ok = true;
    double kesten_ratio = 0.0; ///< max level entries / sqrt(2 m ln ln (m v 4))
};

/// Bound margins from a finished run. Level statistics require the run to
/// have tracked per-level entries.
DiagnosticsReport bound_diagnostics(const WalkResult& run);

struct RecurrenceProbe {
    std::vector<std::pair<std::uint32_t, std::uint64_t>> histogram; ///< (visits, #sites)
    std::uint32_t origin_visits = 0;
    std::uint64_t sites_at_least_k = 0;
    std::uint32_t k = 0;
};

/// Visit-count histogram of a run that tracked per-site visits.
RecurrenceProbe recurrence_probe(const WalkResult& run, std::uint32_t k);

// ---------------------------------------------------------------------------
// Randomized structural trial ensembles
// ---------------------------------------------------------------------------

struct AbelianTrials {
    std::uint32_t instances = 0;
    std::uint32_t comparisons = 0;
    std::uint32_t equal = 0;
    std::uint32_t different = 0;
    std::uint32_t indeterminate = 0;
    bool all_equal = false;
};

/// Randomized small particle systems (up to 5 particles in a +-20 window,
/// cease-augmented stacks), several movement lists each, pairwise used-set
/// comparison.
AbelianTrials run_abelian_trials(std::uint64_t master_seed, std::uint32_t instances,
                                 std::uint32_t lists_per_instance);

struct MonotonicityTrials {
    std::uint32_t instances = 0;
    std::uint32_t subset_holds = 0;
    std::uint32_t indeterminate = 0;
    bool all_hold = false;
};

/// P versus P plus extra particles: the used set may only grow.
MonotonicityTrials run_monotonicity_trials(std::uint64_t master_seed, std::uint32_t instances);

// ---------------------------------------------------------------------------
// Report builders behind the CLI subcommands
// ---------------------------------------------------------------------------

struct SimulateParams {
    std::uint64_t seed = 1;
    std::uint64_t n_steps = 1'000'000;
    WalkEngine engine = WalkEngine::Stream;
    std::uint64_t record_stride = 0;
    bool track_levels = false;
    bool track_visits = false;
    std::vector<std::uint64_t> extra_checkpoints;
};

Report make_simulate_report(const SimulateParams& params);
Report make_alpha_report(std::uint64_t master_seed, std::uint32_t seeds, std::uint64_t n_max,
                         const std::string& rule);
Report make_abelian_report(std::uint64_t master_seed, std::uint32_t instances,
                           std::uint32_t lists_per_instance);
Report make_slow_cover_report(std::uint64_t seed, double epsilon, std::uint32_t k,
                              std::uint32_t uncovered_seeds);
Report make_level_report(std::uint64_t master_seed, std::int64_t n, std::uint32_t seeds);
Report make_excursions_report(std::uint64_t master_seed, std::int64_t half_width,
                              double horizon, std::uint32_t seeds);
Report make_diagnostics_report(std::uint64_t seed, std::uint64_t n_steps, WalkEngine engine);
/// Simulate plus figure-ready path and displacement data.
Report make_export_report(const SimulateParams& params);

/// Parses a trajectory CSV (t,x,y) back into points; inverse of the exporter.
std::vector<std::pair<std::uint64_t, Site>> parse_trajectory_csv(const std::string& csv);

} // namespace berw
