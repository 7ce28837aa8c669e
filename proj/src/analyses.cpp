#include "analyses.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "excursions.hpp"
#include "levels.hpp"
#include "stats_util.hpp"
#include "timing.hpp"

namespace berw {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kFitWindowLo = std::uint64_t(1) << 14;

bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

const char* engine_name(WalkEngine e) { return e == WalkEngine::Stream ? "stream" : "stack"; }

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

} // namespace

double fit_exponent(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& grid) {
    if (grid.size() < 2) throw ContractError("exponent fit needs at least two grid points");
    std::vector<double> lx, ly;
    std::uint64_t prev_n = 0, prev_r = 0;
    for (const auto& [n, r] : grid) {
        if (n <= prev_n) throw ContractError("exponent fit grid must have increasing n");
        if (r < prev_r) throw ContractError("exponent fit rejects non-monotone range series");
        prev_n = n;
        prev_r = r;
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(static_cast<double>(r)));
    }
    return lsq_slope(lx, ly);
}

ExponentFit estimate_alpha(std::uint64_t master_seed, std::uint32_t n_seeds,
                           std::uint64_t n_max, const std::string& rule) {
    if (n_max < kFitWindowLo)
        throw ContractError("estimate_alpha needs n_max >= 2^14");
    ExponentFit fit;
    for (std::uint32_t i = 0; i < n_seeds; ++i) {
        std::uint64_t seed = derive_seed(master_seed, i);
        std::vector<std::pair<std::uint64_t, std::uint64_t>> grid;
        try {
            if (rule == "berw") {
                WalkConfig cfg;
                cfg.seed = seed;
                cfg.n_steps = n_max;
                cfg.engine = WalkEngine::Stream;
                WalkResult run = berw_run(cfg);
                for (const auto& row : run.series.checkpoints)
                    if (row.t >= kFitWindowLo && is_power_of_two(row.t))
                        grid.emplace_back(row.t, row.range);
            } else {
                auto r = make_rule(rule);
                LazySrwSource x(derive_seed(seed, 1));
                LazySrwSource y(derive_seed(seed, 2));
                BuildOptions opt;
                opt.aux_seed = derive_seed(seed, 3);
                opt.record_q = false;
                BuildResult run = build_walk(x, y, *r, n_max, opt);
                for (const auto& row : run.series.checkpoints)
                    if (row.t >= kFitWindowLo && is_power_of_two(row.t))
                        grid.emplace_back(row.t, row.range);
            }
        } catch (const ResourceError&) {
            ++fit.excluded_seeds;
            continue;
        }
        fit.slopes.push_back(fit_exponent(grid));
        fit.grids.push_back(std::move(grid));
    }
    if (!fit.slopes.empty()) {
        fit.median_slope = median(fit.slopes);
        fit.iqr_lo = quantile(fit.slopes, 0.25);
        fit.iqr_hi = quantile(fit.slopes, 0.75);
    }
    return fit;
}

namespace {

double log_log(double v) { return std::log(std::log(v)); }

} // namespace

DiagnosticsReport bound_diagnostics(const WalkResult& run) {
    if (run.series.checkpoints.empty()) throw ContractError("diagnostics need checkpoints");
    DiagnosticsReport rep;
    for (const auto& row : run.series.checkpoints) {
        if (row.t < 4) continue;
        double t = static_cast<double>(row.t);
        DiagnosticsRow d;
        d.t = row.t;
        d.range = row.range;
        double lt = std::log(t);
        d.lower_margin = static_cast<double>(row.range) - std::pow(t, 4.0 / 7.0) / (lt * lt);
        d.upper_ratio = static_cast<double>(row.range) * std::sqrt(log_log(std::max(t, 4.0))) / t;
        double max_abs_y =
            static_cast<double>(std::max(std::llabs(row.y_min), std::llabs(row.y_max)));
        d.vertical_scaling = max_abs_y / std::sqrt(t);
        d.lil_ratio = max_abs_y / std::sqrt(2.0 * t * log_log(std::max(t, 4.0)));
        rep.rows.push_back(d);
    }
    if (!rep.rows.empty()) {
        rep.final_lower_margin = rep.rows.back().lower_margin;
        rep.final_vertical_scaling = rep.rows.back().vertical_scaling;
        rep.final_lil_ratio = rep.rows.back().lil_ratio;
    }
    const CheckpointRow& last = run.series.checkpoints.back();
    if (!run.level_entries.empty()) {
        std::uint32_t max_entries = 0;
        for (const auto& [y, c] : run.level_entries) max_entries = std::max(max_entries, c);
        rep.max_level_entries = max_entries;
        double r = static_cast<double>(std::max<std::uint64_t>(last.range, 4));
        rep.level_cap = 2.0 * std::sqrt(static_cast<double>(last.range) * log_log(r));
        rep.level_cap_ok = static_cast<double>(max_entries) <= rep.level_cap;
        double m = static_cast<double>(std::max<std::uint64_t>(last.m_vertical, 4));
        rep.kesten_ratio =
            static_cast<double>(max_entries) / std::sqrt(2.0 * m * log_log(m));
    }
    return rep;
}

RecurrenceProbe recurrence_probe(const WalkResult& run, std::uint32_t k) {
    if (run.visit_counts.empty())
        throw ContractError("recurrence probe needs a run with visit tracking");
    RecurrenceProbe probe;
    probe.k = k;
    std::map<std::uint32_t, std::uint64_t> hist;
    std::uint64_t origin_key = pack_site({0, 0});
    for (const auto& [key, visits] : run.visit_counts) {
        ++hist[visits];
        if (visits >= k) ++probe.sites_at_least_k;
        if (key == origin_key) probe.origin_visits = visits;
    }
    probe.histogram.assign(hist.begin(), hist.end());
    return probe;
}

// ---------------------------------------------------------------------------
// Randomized structural trials
// ---------------------------------------------------------------------------

namespace {

struct RandomInstance {
    std::shared_ptr<const Environment> env;
    std::vector<Particle> particles;
};

RandomInstance make_random_instance(std::uint64_t instance_seed, std::uint32_t max_particles,
                                    SplitMix& gen) {
    RandomInstance inst;
    std::uint32_t n = 1 + static_cast<std::uint32_t>(gen.next_below(max_particles));
    std::vector<Site> starts;
    for (std::uint32_t p = 0; p < n; ++p)
        starts.push_back({-20 + static_cast<std::int64_t>(gen.next_below(41)),
                          -20 + static_cast<std::int64_t>(gen.next_below(41))});
    inst.particles = make_particles(starts);
    auto base = std::make_shared<RandomEnvironment>(mix64(instance_seed ^ 0xBA5EULL));
    inst.env = std::make_shared<CeaseAugmentedEnvironment>(base, 0.25,
                                                           instance_seed ^ 0xCAFEULL);
    return inst;
}

MovementList random_list(std::size_t n_particles, SplitMix& gen) {
    MovementList list;
    for (std::uint32_t id = 0; id < n_particles; ++id) list.push_back(id);
    std::size_t extra = gen.next_below(2 * n_particles + 1);
    for (std::size_t i = 0; i < extra; ++i)
        list.push_back(static_cast<std::uint32_t>(gen.next_below(n_particles)));
    for (std::size_t i = list.size(); i > 1; --i)
        std::swap(list[i - 1], list[gen.next_below(i)]);
    return list;
}

constexpr std::uint64_t kTrialBudget = 1'000'000;

} // namespace

AbelianTrials run_abelian_trials(std::uint64_t master_seed, std::uint32_t instances,
                                 std::uint32_t lists_per_instance) {
    AbelianTrials out;
    out.instances = instances;
    for (std::uint32_t i = 0; i < instances; ++i) {
        std::uint64_t iseed = derive_seed(master_seed, i);
        SplitMix gen(mix64(iseed));
        RandomInstance inst = make_random_instance(iseed, 5, gen);
        std::vector<MovementResult> runs;
        for (std::uint32_t l = 0; l < lists_per_instance; ++l)
            runs.push_back(run_movement_list(*inst.env, inst.particles,
                                             random_list(inst.particles.size(), gen),
                                             kTrialBudget));
        for (std::size_t a = 0; a < runs.size(); ++a) {
            for (std::size_t b = a + 1; b < runs.size(); ++b) {
                ++out.comparisons;
                if (!runs[a].all_ceased || !runs[b].all_ceased)
                    ++out.indeterminate;
                else if (runs[a].used == runs[b].used)
                    ++out.equal;
                else
                    ++out.different;
            }
        }
    }
    out.all_equal = out.different == 0 && out.indeterminate == 0;
    return out;
}

MonotonicityTrials run_monotonicity_trials(std::uint64_t master_seed, std::uint32_t instances) {
    MonotonicityTrials out;
    out.instances = instances;
    for (std::uint32_t i = 0; i < instances; ++i) {
        std::uint64_t iseed = derive_seed(master_seed ^ 0x0310ULL, i);
        SplitMix gen(mix64(iseed));
        RandomInstance inst = make_random_instance(iseed, 4, gen);
        std::vector<Particle> bigger = inst.particles;
        std::uint32_t extra = 1 + static_cast<std::uint32_t>(gen.next_below(3));
        for (std::uint32_t e = 0; e < extra; ++e) {
            Site s{-20 + static_cast<std::int64_t>(gen.next_below(41)),
                   -20 + static_cast<std::int64_t>(gen.next_below(41))};
            bigger.push_back({static_cast<std::uint32_t>(bigger.size()), s, s, false});
        }
        MovementResult small_run = run_movement_list(
            *inst.env, inst.particles, random_list(inst.particles.size(), gen), kTrialBudget);
        MovementResult big_run = run_movement_list(*inst.env, bigger,
                                                   random_list(bigger.size(), gen),
                                                   kTrialBudget);
        if (!small_run.all_ceased || !big_run.all_ceased) {
            ++out.indeterminate;
            continue;
        }
        if (small_run.used.subset_of(big_run.used)) ++out.subset_holds;
    }
    out.all_hold = out.subset_holds + out.indeterminate == out.instances &&
                   out.indeterminate == 0;
    return out;
}

// ---------------------------------------------------------------------------
// Report builders
// ---------------------------------------------------------------------------

namespace {

ordered_json manifest_json(const std::string& command, std::uint64_t master_seed,
                           ordered_json params) {
    ordered_json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["command"] = command;
    m["master_seed"] = master_seed;
    m["params"] = std::move(params);
    m["seed_derivation"] = "derived_seed(i) = prf64(master_seed, 0x5eed, i, 0)";
    return m;
}

std::string range_series_csv(const RangeSeries& series) {
    CsvBuilder csv({"t", "range", "vertical_steps", "x_min", "x_max", "y_min", "y_max",
                    "n_horizontal", "m_vertical"});
    for (const auto& row : series.checkpoints) {
        csv.cell(row.t)
            .cell(row.range)
            .cell(row.vertical_steps)
            .cell(row.x_min)
            .cell(row.x_max)
            .cell(row.y_min)
            .cell(row.y_max)
            .cell(row.n_horizontal)
            .cell(row.m_vertical);
        csv.end_row();
    }
    return csv.take();
}

std::string trajectory_csv(const Trajectory& tr) {
    CsvBuilder csv({"t", "x", "y"});
    for (const auto& [t, z] : tr.points) {
        csv.cell(t).cell(z.x).cell(z.y);
        csv.end_row();
    }
    return csv.take();
}

ordered_json summary_json(const WalkResult& run, const SimulateParams& p) {
    const CheckpointRow& last = run.series.checkpoints.back();
    ordered_json s;
    s["n_steps"] = last.t;
    s["engine"] = engine_name(p.engine);
    s["final"] = {{"x", run.trajectory.final_position.x},
                  {"y", run.trajectory.final_position.y},
                  {"range", last.range},
                  {"vertical_steps", last.vertical_steps},
                  {"n_horizontal", last.n_horizontal},
                  {"m_vertical", last.m_vertical},
                  {"x_min", last.x_min},
                  {"x_max", last.x_max},
                  {"y_min", last.y_min},
                  {"y_max", last.y_max}};
    s["checkpoints"] = run.series.checkpoints.size();
    return s;
}

WalkResult run_simulate(const SimulateParams& p) {
    WalkConfig cfg;
    cfg.seed = p.seed;
    cfg.n_steps = p.n_steps;
    cfg.engine = p.engine;
    cfg.record_stride = p.record_stride;
    cfg.track_levels = p.track_levels;
    cfg.track_visits = p.track_visits;
    cfg.extra_checkpoints = p.extra_checkpoints;
    return berw_run(cfg);
}

ordered_json simulate_params_json(const SimulateParams& p) {
    return ordered_json{{"n", p.n_steps},
                        {"engine", engine_name(p.engine)},
                        {"record_stride", p.record_stride},
                        {"track_levels", p.track_levels},
                        {"track_visits", p.track_visits},
                        {"extra_checkpoints", p.extra_checkpoints}};
}

} // namespace

Report make_simulate_report(const SimulateParams& p) {
    WalkResult run = run_simulate(p);
    Report rep;
    rep.add("manifest.json",
            dump_json(manifest_json("simulate", p.seed, simulate_params_json(p))));
    rep.add("summary.json", dump_json(summary_json(run, p)));
    rep.add("range_series.csv", range_series_csv(run.series));
    if (p.record_stride > 0) rep.add("trajectory.csv", trajectory_csv(run.trajectory));
    if (p.track_levels) {
        CsvBuilder csv({"y", "entries"});
        for (const auto& [y, c] : run.level_entries) {
            csv.cell(y).cell(c);
            csv.end_row();
        }
        rep.add("levels.csv", csv.take());
    }
    if (p.track_visits) {
        RecurrenceProbe probe = recurrence_probe(run, 2);
        CsvBuilder csv({"visits", "sites"});
        for (const auto& [v, c] : probe.histogram) {
            csv.cell(v).cell(c);
            csv.end_row();
        }
        rep.add("visits.csv", csv.take());
        ordered_json rj{{"origin_visits", probe.origin_visits},
                        {"sites_visited_at_least", probe.k},
                        {"count", probe.sites_at_least_k}};
        rep.add("recurrence.json", dump_json(rj));
    }
    return rep;
}

Report make_alpha_report(std::uint64_t master_seed, std::uint32_t seeds, std::uint64_t n_max,
                         const std::string& rule) {
    ExponentFit fit = estimate_alpha(master_seed, seeds, n_max, rule);
    Report rep;
    rep.add("manifest.json",
            dump_json(manifest_json("estimate-alpha", master_seed,
                                    {{"seeds", seeds}, {"n_max", n_max}, {"rule", rule}})));
    ordered_json a;
    a["rule"] = rule;
    a["seeds"] = seeds;
    a["excluded_seeds"] = fit.excluded_seeds;
    a["n_max"] = n_max;
    a["fit_window"] = {kFitWindowLo, n_max};
    a["median_slope"] = fit.median_slope;
    a["iqr"] = {fit.iqr_lo, fit.iqr_hi};
    a["slopes"] = fit.slopes;
    rep.add("alpha.json", dump_json(a));
    {
        CsvBuilder csv({"seed_index", "slope"});
        for (std::size_t i = 0; i < fit.slopes.size(); ++i) {
            csv.cell(static_cast<std::uint64_t>(i)).cell(fit.slopes[i]);
            csv.end_row();
        }
        rep.add("fits.csv", csv.take());
    }
    {
        CsvBuilder csv({"seed_index", "n", "range"});
        for (std::size_t i = 0; i < fit.grids.size(); ++i)
            for (const auto& [n, r] : fit.grids[i]) {
                csv.cell(static_cast<std::uint64_t>(i)).cell(n).cell(r);
                csv.end_row();
            }
        rep.add("range_grid.csv", csv.take());
    }
    return rep;
}

Report make_abelian_report(std::uint64_t master_seed, std::uint32_t instances,
                           std::uint32_t lists_per_instance) {
    AbelianTrials ab = run_abelian_trials(master_seed, instances, lists_per_instance);
    MonotonicityTrials mono = run_monotonicity_trials(master_seed, instances / 2);
    Report rep;
    rep.add("manifest.json",
            dump_json(manifest_json(
                "abelian-check", master_seed,
                {{"instances", instances}, {"lists_per_instance", lists_per_instance}})));
    ordered_json j;
    j["instances"] = ab.instances;
    j["comparisons"] = ab.comparisons;
    j["equal"] = ab.equal;
    j["different"] = ab.different;
    j["indeterminate"] = ab.indeterminate;
    j["all_equal"] = ab.all_equal;
    j["monotonicity"] = {{"instances", mono.instances},
                         {"subset_holds", mono.subset_holds},
                         {"indeterminate", mono.indeterminate},
                         {"all_hold", mono.all_hold}};
    rep.add("abelian.json", dump_json(j));
    return rep;
}

Report make_slow_cover_report(std::uint64_t seed, double epsilon, std::uint32_t k,
                              std::uint32_t uncovered_seeds) {
    PathExtrema path(srw_positions(seed, std::uint64_t(1) << k));
    SlowCover cover = maximal_slow_dyadic_cover(path, epsilon, k);
    Report rep;
    rep.add("manifest.json",
            dump_json(manifest_json("slow-cover", seed,
                                    {{"epsilon", epsilon},
                                     {"k", k},
                                     {"uncovered_seeds", uncovered_seeds}})));
    ordered_json j;
    j["k"] = k;
    j["epsilon"] = epsilon;
    j["members"] = cover.members.size();
    j["covered_steps"] = cover.covered_steps;
    j["covered_fraction"] = cover.covered_fraction;
    rep.add("slow_cover.json", dump_json(j));
    {
        CsvBuilder csv({"scale", "offset", "lo", "hi"});
        for (const auto& d : cover.members) {
            csv.cell(d.scale).cell(d.offset).cell(d.lo()).cell(d.hi());
            csv.end_row();
        }
        rep.add("cover.csv", csv.take());
    }
    if (uncovered_seeds > 0) {
        CsvBuilder csv({"k", "epsilon", "uncovered_estimate", "se", "seeds"});
        for (std::uint32_t kk = 8; kk <= k; ++kk) {
            McEstimate e = uncovered_probability(derive_seed(seed, kk), uncovered_seeds,
                                                 epsilon, kk, std::uint64_t(1) << (kk - 1));
            csv.cell(static_cast<std::uint64_t>(kk))
                .cell(epsilon)
                .cell(e.mean)
                .cell(e.se)
                .cell(e.n);
            csv.end_row();
        }
        rep.add("uncovered.csv", csv.take());
    }
    {
        CsvBuilder csv({"a", "theta", "residual"});
        for (int i = 1; i <= 99; ++i) {
            ThetaRoot root = solve_theta(static_cast<double>(i) / 100.0);
            csv.cell(root.a).cell(root.theta).cell(root.residual);
            csv.end_row();
        }
        rep.add("theta.csv", csv.take());
    }
    return rep;
}

Report make_level_report(std::uint64_t master_seed, std::int64_t n, std::uint32_t seeds) {
    if (seeds == 0) throw ContractError("level report needs at least one seed");
    Report rep;
    rep.add("manifest.json", dump_json(manifest_json("level-stats", master_seed,
                                                     {{"n", n}, {"seeds", seeds}})));

    std::uint32_t e_complement = 0;
    std::uint64_t surplus_counts[3] = {0, 0, 0}; // S = -1, 0, +1 on single sites
    std::uint64_t surplus_sites = 0;
    std::uint32_t perm_equal = 0, perm_total = 0;
    std::vector<double> totals;
    for (std::uint32_t s = 0; s < seeds; ++s) {
        RandomLevelEnvironment env(derive_seed(master_seed, s), 1);
        SurplusScan scan = surplus_scan(env, n);
        if (!scan.within_threshold) ++e_complement;
        for (std::int64_t x = 0; x < std::min<std::int64_t>(n, 256); ++x) {
            std::uint32_t u = env.entries(x);
            ++surplus_counts[u > 2 ? 2 : u];
            ++surplus_sites;
        }
        SplitMix gen(mix64(derive_seed(master_seed ^ 0x1EE7ULL, s)));
        std::vector<std::int64_t> entries =
            sample_feasible_entries(env, -n, n, static_cast<std::size_t>(n), gen);
        if (!entries.empty()) {
            FamilyResult fam = run_family(env, entries);
            totals.push_back(static_cast<double>(fam.total_lifetime));
            std::vector<std::int64_t> shuffled = entries;
            for (std::size_t i = shuffled.size(); i > 1; --i)
                std::swap(shuffled[i - 1], shuffled[gen.next_below(i)]);
            FamilyResult fam2 = run_family(env, shuffled);
            ++perm_total;
            if (fam.total_lifetime == fam2.total_lifetime) ++perm_equal;
        }
    }

    std::uint32_t d_seeds = std::min<std::uint32_t>(seeds, 20);
    std::uint32_t d_flags = 0;
    double worst_ratio = 0.0;
    for (std::uint32_t s = 0; s < d_seeds; ++s) {
        RandomLevelEnvironment env(derive_seed(master_seed, s), 1);
        BadIntervalScan scan = detect_bad_interval(env, n, s == 0);
        if (scan.bad) ++d_flags;
        worst_ratio = std::max(worst_ratio, scan.worst_ratio);
        if (s == 0) {
            CsvBuilder csv({"lo", "hi", "family_size", "total_lifetime", "ratio"});
            for (const auto& row : scan.rows) {
                csv.cell(row.lo)
                    .cell(row.hi)
                    .cell(row.family_size)
                    .cell(row.total_lifetime)
                    .cell(row.ratio);
                csv.end_row();
            }
            rep.add("intervals.csv", csv.take());
        }
    }

    ordered_json j;
    j["n"] = n;
    j["seeds"] = seeds;
    j["surplus_threshold"] = std::sqrt(6.0 * static_cast<double>(n) *
                                       std::log(static_cast<double>(n)));
    j["e_complement_rate"] = static_cast<double>(e_complement) / seeds;
    j["e_complement_bound"] = 3.0 / (static_cast<double>(n) * n * n);
    j["d_seeds"] = d_seeds;
    j["d_rate"] = d_seeds > 0 ? static_cast<double>(d_flags) / d_seeds : 0.0;
    j["d_bound"] = 4.0 / (static_cast<double>(n) * n * n);
    j["worst_interval_ratio"] = worst_ratio;
    j["single_site_surplus_counts"] = {{"-1", surplus_counts[0]},
                                       {"0", surplus_counts[1]},
                                       {"+1", surplus_counts[2]},
                                       {"sites", surplus_sites}};
    if (!totals.empty()) {
        MeanSe t = mean_se(totals);
        j["family_total_lifetime"] = {{"mean", t.mean}, {"se", t.se}, {"n", t.n}};
    }
    j["permutation_invariance"] = {{"checked", perm_total}, {"equal", perm_equal}};
    rep.add("levels.json", dump_json(j));
    return rep;
}

Report make_excursions_report(std::uint64_t master_seed, std::int64_t half_width,
                              double horizon, std::uint32_t seeds) {
    if (seeds == 0) throw ContractError("excursion report needs at least one seed");
    std::uint32_t total = 0, returned = 0, truncated = 0;
    double tau_sum = 0.0;
    std::vector<double> dep_sum(3, 0.0), dep_sq(3, 0.0);
    std::uint64_t dep_n = 0;
    for (std::uint32_t s = 0; s < seeds; ++s) {
        StripConfig cfg;
        cfg.seed = derive_seed(master_seed, s);
        cfg.half_width = half_width;
        cfg.horizon = horizon;
        StripResult res = simulate_strip(cfg);
        for (const auto& p : res.particles) {
            ++total;
            if (p.truncated) {
                ++truncated;
                continue;
            }
            ++dep_n;
            for (std::size_t i = 0; i < 3 && i < p.completed_departures.size(); ++i) {
                dep_sum[i] += p.completed_departures[i];
                dep_sq[i] += static_cast<double>(p.completed_departures[i]) *
                             p.completed_departures[i];
            }
            if (!p.returned) continue;
            ++returned;
            tau_sum += p.vertical_moves;
        }
    }
    Report rep;
    rep.add("manifest.json",
            dump_json(manifest_json("excursions", master_seed,
                                    {{"half_width", half_width},
                                     {"horizon", horizon},
                                     {"seeds", seeds}})));
    ordered_json j;
    j["seeds"] = seeds;
    j["half_width"] = half_width;
    j["horizon"] = horizon;
    j["particles"] = total;
    j["return_rate"] =
        total > truncated ? static_cast<double>(returned) / (total - truncated) : 0.0;
    j["truncation_rate"] = total > 0 ? static_cast<double>(truncated) / total : 0.0;
    j["mean_vertical_moves"] = returned > 0 ? tau_sum / returned : 0.0;
    ordered_json deps = ordered_json::array();
    for (std::size_t i = 0; i < 3; ++i) {
        double mean = dep_n > 0 ? dep_sum[i] / static_cast<double>(dep_n) : 0.0;
        double var = dep_n > 1
                         ? (dep_sq[i] - static_cast<double>(dep_n) * mean * mean) /
                               (static_cast<double>(dep_n) - 1)
                         : 0.0;
        deps.push_back({{"level", i + 1},
                        {"mean", mean},
                        {"se", dep_n > 0 ? std::sqrt(std::max(var, 0.0) /
                                                     static_cast<double>(dep_n))
                                         : 0.0}});
    }
    j["mean_departures"] = deps;
    rep.add("excursions.json", dump_json(j));
    return rep;
}

Report make_diagnostics_report(std::uint64_t seed, std::uint64_t n_steps, WalkEngine engine) {
    SimulateParams p;
    p.seed = seed;
    p.n_steps = n_steps;
    p.engine = engine;
    p.track_levels = true;
    WalkResult run = run_simulate(p);
    DiagnosticsReport d = bound_diagnostics(run);
    Report rep;
    rep.add("manifest.json",
            dump_json(manifest_json("diagnostics", seed,
                                    {{"n", n_steps}, {"engine", engine_name(engine)}})));
    ordered_json j;
    j["n"] = n_steps;
    j["final_lower_margin"] = d.final_lower_margin;
    j["final_vertical_scaling"] = d.final_vertical_scaling;
    j["final_lil_ratio"] = d.final_lil_ratio;
    j["max_level_entries"] = d.max_level_entries;
    j["level_cap"] = d.level_cap;
    j["level_cap_ok"] = d.level_cap_ok;
    j["kesten_ratio"] = d.kesten_ratio;
    rep.add("diagnostics.json", dump_json(j));
    CsvBuilder csv(
        {"t", "range", "lower_margin", "upper_ratio", "vertical_scaling", "lil_ratio"});
    for (const auto& row : d.rows) {
        csv.cell(row.t)
            .cell(row.range)
            .cell(row.lower_margin)
            .cell(row.upper_ratio)
            .cell(row.vertical_scaling)
            .cell(row.lil_ratio);
        csv.end_row();
    }
    rep.add("diagnostics.csv", csv.take());
    return rep;
}

Report make_export_report(const SimulateParams& params) {
    SimulateParams p = params;
    if (p.record_stride == 0)
        p.record_stride = std::max<std::uint64_t>(1, p.n_steps / 10'000);
    Report rep = make_simulate_report(p);
    Report out;
    for (const auto& [name, bytes] : rep.docs()) {
        if (name == "manifest.json") {
            out.add(name, dump_json(manifest_json("export", p.seed, simulate_params_json(p))));
            continue;
        }
        out.add(name, bytes);
    }
    return out;
}

std::vector<std::pair<std::uint64_t, Site>> parse_trajectory_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "t,x,y")
        throw ContractError("trajectory CSV must start with header t,x,y");
    std::vector<std::pair<std::uint64_t, Site>> points;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::uint64_t t;
        std::int64_t x, y;
        char c1, c2;
        if (!(ls >> t >> c1 >> x >> c2 >> y) || c1 != ',' || c2 != ',')
            throw ContractError("malformed trajectory row: " + line);
        points.emplace_back(t, Site{x, y});
    }
    return points;
}

} // namespace berw
