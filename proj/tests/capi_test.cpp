// Exercises the shared-library surface exactly as an external caller would:
// only berw/berw.h, opaque handles, and status codes.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>

#include "berw/berw.h"

static int failures = 0;

#define EXPECT(cond, what)                                                     \
    do {                                                                       \
        if (!(cond)) {                                                         \
            std::fprintf(stderr, "FAILED: %s (%s:%d)\n", what, __FILE__,       \
                         __LINE__);                                            \
            ++failures;                                                        \
        }                                                                      \
    } while (0)

int main() {
    EXPECT(berw_version() != nullptr, "version string");
    EXPECT(std::strlen(berw_version()) > 0, "version non-empty");

    // Walk handle basics and the range identity through the C view.
    berw_walk_params params{};
    params.seed = 42;
    params.n_steps = 10000;
    params.engine = 0;
    params.record_stride = 100;
    berw_walk* walk = nullptr;
    EXPECT(berw_walk_run(&params, &walk) == BERW_OK, "walk run");
    EXPECT(walk != nullptr, "walk handle");
    size_t cps = berw_walk_checkpoint_count(walk);
    EXPECT(cps > 10, "checkpoint count");
    for (size_t i = 0; i < cps; ++i) {
        berw_checkpoint row;
        EXPECT(berw_walk_checkpoint(walk, i, &row) == BERW_OK, "checkpoint fetch");
        EXPECT(row.range == 1 + row.vertical_steps, "range identity");
        EXPECT(row.n_horizontal + row.m_vertical == row.t, "timing identity");
    }
    berw_checkpoint out;
    EXPECT(berw_walk_checkpoint(walk, cps, &out) == BERW_ERR_CONTRACT,
           "out-of-range checkpoint");
    EXPECT(std::strlen(berw_last_error()) > 0, "error message recorded");
    int64_t x = 0, y = 0;
    EXPECT(berw_walk_final_position(walk, &x, &y) == BERW_OK, "final position");
    size_t pts = berw_walk_path_count(walk);
    EXPECT(pts == 101, "decimated path length");
    uint64_t t0;
    int64_t px, py;
    EXPECT(berw_walk_path_point(walk, pts - 1, &t0, &px, &py) == BERW_OK, "path point");
    EXPECT(t0 == params.n_steps && px == x && py == y, "path end matches final");
    berw_walk_free(walk);

    // Null arguments are contract errors.
    EXPECT(berw_walk_run(nullptr, &walk) == BERW_ERR_CONTRACT, "null params");
    EXPECT(berw_simulate(&params, nullptr) == BERW_ERR_CONTRACT, "null out");

    // Reports: documents exist, lookups work, bytes are deterministic.
    berw_report *rep1 = nullptr, *rep2 = nullptr;
    EXPECT(berw_simulate(&params, &rep1) == BERW_OK, "simulate");
    EXPECT(berw_simulate(&params, &rep2) == BERW_OK, "simulate again");
    size_t docs = berw_report_doc_count(rep1);
    EXPECT(docs >= 3, "document count");
    for (size_t i = 0; i < docs; ++i) {
        const char* name = berw_report_doc_name(rep1, i);
        EXPECT(name != nullptr, "doc name");
        size_t s1 = 0, s2 = 0;
        const char* d1 = berw_report_doc(rep1, name, &s1);
        const char* d2 = berw_report_doc(rep2, name, &s2);
        EXPECT(d1 != nullptr && d2 != nullptr, "doc bytes");
        EXPECT(s1 == s2 && std::memcmp(d1, d2, s1) == 0, "byte determinism");
    }
    EXPECT(berw_report_doc(rep1, "no-such-doc.json", nullptr) == nullptr, "missing doc");
    berw_report_free(rep1);
    berw_report_free(rep2);

    // Theta solver through the C surface.
    double theta = 0.0, residual = 1.0;
    EXPECT(berw_solve_theta(0.5, &theta, &residual) == BERW_OK, "theta ok");
    EXPECT(std::fabs(theta - 1.219) < 1e-3, "theta value");
    EXPECT(residual < 1e-12, "theta residual");
    EXPECT(berw_solve_theta(1.5, &theta, nullptr) == BERW_ERR_CONTRACT, "theta domain");

    // A tiny ensemble analysis end to end.
    berw_report* alpha = nullptr;
    EXPECT(berw_estimate_alpha(7, 2, 1u << 15, "always-h", &alpha) == BERW_OK,
           "estimate alpha");
    size_t len = 0;
    EXPECT(berw_report_doc(alpha, "alpha.json", &len) != nullptr && len > 0, "alpha doc");
    berw_report_free(alpha);
    berw_report* bad = nullptr;
    EXPECT(berw_estimate_alpha(7, 2, 100, "berw", &bad) == BERW_ERR_CONTRACT,
           "alpha window too small");
    EXPECT(bad == nullptr, "no handle on failure");

    // Resource limits surface as the resource status.
    berw_walk_params capped = params;
    capped.max_sites = 32;
    berw_walk* capped_walk = nullptr;
    EXPECT(berw_walk_run(&capped, &capped_walk) == BERW_ERR_RESOURCE, "site cap");
    EXPECT(capped_walk == nullptr, "no handle on resource failure");

    berw_report* unknown = nullptr;
    EXPECT(berw_estimate_alpha(7, 1, 1u << 15, "wat", &unknown) == BERW_ERR_CONTRACT,
           "unknown rule");

    if (failures == 0) std::printf("capi_test: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
