/* Balanced excited random walk laboratory: C API.
 *
 * The core is a C++ library; this header is the stable surface for tools and
 * foreign-language callers. All functions are thread-compatible (no shared
 * mutable state between handles); error messages are per thread.
 *
 * Every analysis returns a berw_report: an ordered set of named documents
 * (UTF-8 bytes, CSV or JSON) whose contents are a pure function of the
 * parameters, byte for byte.
 */
#ifndef BERW_H
#define BERW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum berw_status {
    BERW_OK = 0,
    /* A precondition or enforced contract was violated (also bad arguments). */
    BERW_ERR_CONTRACT = 2,
    /* A configured resource limit was hit. */
    BERW_ERR_RESOURCE = 3,
    BERW_ERR_INTERNAL = 4
} berw_status;

const char* berw_version(void);

/* Message describing the most recent failure on the calling thread. */
const char* berw_last_error(void);

/* -------------------------------------------------------------------------
 * Reports
 * ---------------------------------------------------------------------- */

typedef struct berw_report berw_report;

void berw_report_free(berw_report* report);
size_t berw_report_doc_count(const berw_report* report);
/* Name of the index-th document, or NULL if out of range. */
const char* berw_report_doc_name(const berw_report* report, size_t index);
/* NUL-terminated bytes of the named document, or NULL if absent.
 * size_out (optional) receives the byte length without the terminator. */
const char* berw_report_doc(const berw_report* report, const char* name, size_t* size_out);

/* -------------------------------------------------------------------------
 * Walk runs
 * ---------------------------------------------------------------------- */

typedef struct berw_walk_params {
    uint64_t seed;
    uint64_t n_steps;
    int engine;             /* 0 = stream, 1 = stack */
    uint64_t record_stride; /* decimated path stride; 0 = none */
    int track_levels;       /* per-level vertical entry counts */
    int track_visits;       /* per-site visit counts */
    uint64_t max_sites;     /* visited-site cap; 0 = default (2^28) */
    const uint64_t* extra_checkpoints;
    size_t n_extra_checkpoints;
} berw_walk_params;

typedef struct berw_checkpoint {
    uint64_t t;
    uint64_t range;          /* distinct sites visited by time t */
    uint64_t vertical_steps; /* committed vertical steps; range = 1 + this */
    int64_t x_min, x_max, y_min, y_max;
    uint64_t n_horizontal; /* N_t */
    uint64_t m_vertical;   /* M_t */
} berw_checkpoint;

typedef struct berw_walk berw_walk;

berw_status berw_walk_run(const berw_walk_params* params, berw_walk** out);
void berw_walk_free(berw_walk* walk);
size_t berw_walk_checkpoint_count(const berw_walk* walk);
berw_status berw_walk_checkpoint(const berw_walk* walk, size_t index, berw_checkpoint* out);
berw_status berw_walk_final_position(const berw_walk* walk, int64_t* x, int64_t* y);
size_t berw_walk_path_count(const berw_walk* walk);
berw_status berw_walk_path_point(const berw_walk* walk, size_t index, uint64_t* t, int64_t* x,
                                 int64_t* y);

/* -------------------------------------------------------------------------
 * Analyses (one per CLI subcommand)
 * ---------------------------------------------------------------------- */

berw_status berw_simulate(const berw_walk_params* params, berw_report** out);
berw_status berw_export(const berw_walk_params* params, berw_report** out);
/* rule: "berw", "coin", "block", "always-h" or "always-v". */
berw_status berw_estimate_alpha(uint64_t master_seed, uint32_t seeds, uint64_t n_max,
                                const char* rule, berw_report** out);
berw_status berw_abelian_check(uint64_t master_seed, uint32_t instances,
                               uint32_t lists_per_instance, berw_report** out);
berw_status berw_slow_cover(uint64_t seed, double epsilon, uint32_t k,
                            uint32_t uncovered_seeds, berw_report** out);
berw_status berw_level_stats(uint64_t master_seed, int64_t n, uint32_t seeds,
                             berw_report** out);
berw_status berw_excursions(uint64_t master_seed, int64_t half_width, double horizon,
                            uint32_t seeds, berw_report** out);
berw_status berw_diagnostics(uint64_t seed, uint64_t n_steps, int engine, berw_report** out);

/* Positive root of theta * a = log cosh(theta) for a in (0, 1). */
berw_status berw_solve_theta(double a, double* theta_out, double* residual_out);

#ifdef __cplusplus
}
#endif

#endif /* BERW_H */
