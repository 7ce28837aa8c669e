#include "berw/berw.h"

#include <new>
#include <string>

#include "analyses.hpp"
#include "errors.hpp"
#include "report.hpp"
#include "slow.hpp"
#include "walk.hpp"

struct berw_report {
    berw::Report report;
};

struct berw_walk {
    berw::WalkResult result;
};

namespace {

thread_local std::string g_last_error;

berw_status fail(berw_status code, const char* what) {
    g_last_error = what;
    return code;
}

template <typename F>
berw_status guarded(F&& f) {
    try {
        f();
        return BERW_OK;
    } catch (const berw::ResourceError& e) {
        return fail(BERW_ERR_RESOURCE, e.what());
    } catch (const berw::ContractError& e) {
        return fail(BERW_ERR_CONTRACT, e.what());
    } catch (const std::bad_alloc& e) {
        return fail(BERW_ERR_RESOURCE, e.what());
    } catch (const std::exception& e) {
        return fail(BERW_ERR_INTERNAL, e.what());
    }
}

berw::WalkConfig to_config(const berw_walk_params& p) {
    berw::WalkConfig cfg;
    cfg.seed = p.seed;
    cfg.n_steps = p.n_steps;
    cfg.engine = p.engine == 1 ? berw::WalkEngine::Stack : berw::WalkEngine::Stream;
    cfg.record_stride = p.record_stride;
    cfg.track_levels = p.track_levels != 0;
    cfg.track_visits = p.track_visits != 0;
    if (p.max_sites != 0) cfg.max_sites = p.max_sites;
    for (size_t i = 0; i < p.n_extra_checkpoints; ++i)
        cfg.extra_checkpoints.push_back(p.extra_checkpoints[i]);
    return cfg;
}

berw::SimulateParams to_simulate_params(const berw_walk_params& p) {
    berw::SimulateParams sp;
    sp.seed = p.seed;
    sp.n_steps = p.n_steps;
    sp.engine = p.engine == 1 ? berw::WalkEngine::Stack : berw::WalkEngine::Stream;
    sp.record_stride = p.record_stride;
    sp.track_levels = p.track_levels != 0;
    sp.track_visits = p.track_visits != 0;
    for (size_t i = 0; i < p.n_extra_checkpoints; ++i)
        sp.extra_checkpoints.push_back(p.extra_checkpoints[i]);
    return sp;
}

berw_status check_out(const void* params, const void* out) {
    if (params == nullptr || out == nullptr)
        return fail(BERW_ERR_CONTRACT, "null argument");
    return BERW_OK;
}

} // namespace

extern "C" {

const char* berw_version(void) { return berw::kToolVersion; }

const char* berw_last_error(void) { return g_last_error.c_str(); }

void berw_report_free(berw_report* report) { delete report; }

size_t berw_report_doc_count(const berw_report* report) {
    return report ? report->report.docs().size() : 0;
}

const char* berw_report_doc_name(const berw_report* report, size_t index) {
    if (!report || index >= report->report.docs().size()) return nullptr;
    return report->report.docs()[index].first.c_str();
}

const char* berw_report_doc(const berw_report* report, const char* name, size_t* size_out) {
    if (!report || !name) return nullptr;
    const std::string* doc = report->report.find(name);
    if (!doc) return nullptr;
    if (size_out) *size_out = doc->size();
    return doc->c_str();
}

berw_status berw_walk_run(const berw_walk_params* params, berw_walk** out) {
    if (berw_status s = check_out(params, out); s != BERW_OK) return s;
    *out = nullptr;
    return guarded([&] {
        auto handle = new berw_walk{berw::berw_run(to_config(*params))};
        *out = handle;
    });
}

void berw_walk_free(berw_walk* walk) { delete walk; }

size_t berw_walk_checkpoint_count(const berw_walk* walk) {
    return walk ? walk->result.series.checkpoints.size() : 0;
}

berw_status berw_walk_checkpoint(const berw_walk* walk, size_t index, berw_checkpoint* out) {
    if (!walk || !out) return fail(BERW_ERR_CONTRACT, "null argument");
    if (index >= walk->result.series.checkpoints.size())
        return fail(BERW_ERR_CONTRACT, "checkpoint index out of range");
    const berw::CheckpointRow& r = walk->result.series.checkpoints[index];
    *out = {r.t,     r.range, r.vertical_steps, r.x_min,        r.x_max,
            r.y_min, r.y_max, r.n_horizontal,   r.m_vertical};
    return BERW_OK;
}

berw_status berw_walk_final_position(const berw_walk* walk, int64_t* x, int64_t* y) {
    if (!walk || !x || !y) return fail(BERW_ERR_CONTRACT, "null argument");
    *x = walk->result.trajectory.final_position.x;
    *y = walk->result.trajectory.final_position.y;
    return BERW_OK;
}

size_t berw_walk_path_count(const berw_walk* walk) {
    return walk ? walk->result.trajectory.points.size() : 0;
}

berw_status berw_walk_path_point(const berw_walk* walk, size_t index, uint64_t* t, int64_t* x,
                                 int64_t* y) {
    if (!walk || !t || !x || !y) return fail(BERW_ERR_CONTRACT, "null argument");
    if (index >= walk->result.trajectory.points.size())
        return fail(BERW_ERR_CONTRACT, "path index out of range");
    const auto& [pt, site] = walk->result.trajectory.points[index];
    *t = pt;
    *x = site.x;
    *y = site.y;
    return BERW_OK;
}

berw_status berw_simulate(const berw_walk_params* params, berw_report** out) {
    if (berw_status s = check_out(params, out); s != BERW_OK) return s;
    *out = nullptr;
    return guarded([&] {
        *out = new berw_report{berw::make_simulate_report(to_simulate_params(*params))};
    });
}

berw_status berw_export(const berw_walk_params* params, berw_report** out) {
    if (berw_status s = check_out(params, out); s != BERW_OK) return s;
    *out = nullptr;
    return guarded([&] {
        *out = new berw_report{berw::make_export_report(to_simulate_params(*params))};
    });
}

berw_status berw_estimate_alpha(uint64_t master_seed, uint32_t seeds, uint64_t n_max,
                                const char* rule, berw_report** out) {
    if (!rule || !out) return fail(BERW_ERR_CONTRACT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new berw_report{berw::make_alpha_report(master_seed, seeds, n_max, rule)};
    });
}

berw_status berw_abelian_check(uint64_t master_seed, uint32_t instances,
                               uint32_t lists_per_instance, berw_report** out) {
    if (!out) return fail(BERW_ERR_CONTRACT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new berw_report{
            berw::make_abelian_report(master_seed, instances, lists_per_instance)};
    });
}

berw_status berw_slow_cover(uint64_t seed, double epsilon, uint32_t k,
                            uint32_t uncovered_seeds, berw_report** out) {
    if (!out) return fail(BERW_ERR_CONTRACT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new berw_report{berw::make_slow_cover_report(seed, epsilon, k, uncovered_seeds)};
    });
}

berw_status berw_level_stats(uint64_t master_seed, int64_t n, uint32_t seeds,
                             berw_report** out) {
    if (!out) return fail(BERW_ERR_CONTRACT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new berw_report{berw::make_level_report(master_seed, n, seeds)};
    });
}

berw_status berw_excursions(uint64_t master_seed, int64_t half_width, double horizon,
                            uint32_t seeds, berw_report** out) {
    if (!out) return fail(BERW_ERR_CONTRACT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new berw_report{
            berw::make_excursions_report(master_seed, half_width, horizon, seeds)};
    });
}

berw_status berw_diagnostics(uint64_t seed, uint64_t n_steps, int engine, berw_report** out) {
    if (!out) return fail(BERW_ERR_CONTRACT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new berw_report{berw::make_diagnostics_report(
            seed, n_steps, engine == 1 ? berw::WalkEngine::Stack : berw::WalkEngine::Stream)};
    });
}

berw_status berw_solve_theta(double a, double* theta_out, double* residual_out) {
    if (!theta_out) return fail(BERW_ERR_CONTRACT, "null argument");
    return guarded([&] {
        berw::ThetaRoot root = berw::solve_theta(a);
        *theta_out = root.theta;
        if (residual_out) *residual_out = root.residual;
    });
}

} // extern "C"
