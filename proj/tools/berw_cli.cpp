// Command-line front end. Links only the shared C API; every analysis happens
// behind it and comes back as named documents which this tool writes to disk.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "berw/berw.h"

namespace {

struct Common {
    std::string out_dir = ".";
    std::string format = "all"; // all | csv | json
};

bool format_keeps(const std::string& format, const std::string& name) {
    if (format == "all") return true;
    if (format == "csv") return name.size() > 4 && name.ends_with(".csv");
    if (format == "json") return name.size() > 5 && name.ends_with(".json");
    return true;
}

int write_report(berw_report* report, const Common& common) {
    if (!report) return 4;
    std::filesystem::create_directories(common.out_dir);
    size_t count = berw_report_doc_count(report);
    for (size_t i = 0; i < count; ++i) {
        const char* name = berw_report_doc_name(report, i);
        if (!name || !format_keeps(common.format, name)) continue;
        size_t size = 0;
        const char* bytes = berw_report_doc(report, name, &size);
        std::filesystem::path path = std::filesystem::path(common.out_dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << path << "\n";
            berw_report_free(report);
            return 3;
        }
        out.write(bytes, static_cast<std::streamsize>(size));
        std::cout << "wrote " << path.string() << " (" << size << " bytes)\n";
    }
    berw_report_free(report);
    return 0;
}

int finish(berw_status status, berw_report* report, const Common& common) {
    if (status != BERW_OK) {
        std::cerr << "error: " << berw_last_error() << "\n";
        return static_cast<int>(status);
    }
    return write_report(report, common);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Balanced excited random walk laboratory"};
    app.set_version_flag("--version", berw_version());
    app.require_subcommand(1);

    Common common;

    std::uint64_t seed = 1;
    std::uint64_t n = 1'000'000;
    std::uint32_t seeds = 10;
    std::string rule = "berw";
    std::string engine = "stream";
    double epsilon = 1.0;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Master seed");
        cmd->add_option("--out", common.out_dir, "Output directory for report documents");
        cmd->add_option("--format", common.format, "Restrict written documents: all|csv|json")
            ->check(CLI::IsMember({"all", "csv", "json"}));
    };
    auto add_engine = [&](CLI::App* cmd) {
        cmd->add_option("--engine", engine, "Walk engine: stream|stack")
            ->check(CLI::IsMember({"stream", "stack"}));
    };

    // simulate / export
    std::uint64_t stride = 0;
    bool track_levels = false, track_visits = false;
    std::vector<std::uint64_t> checkpoints;
    CLI::App* simulate = app.add_subcommand("simulate", "Run one walk and export its series");
    CLI::App* exp = app.add_subcommand("export", "Run one walk and export figure-ready data");
    for (CLI::App* cmd : {simulate, exp}) {
        add_seed(cmd);
        add_engine(cmd);
        cmd->add_option("--n", n, "Number of steps");
        cmd->add_option("--stride", stride, "Trajectory decimation stride (0 = none)");
        cmd->add_flag("--track-levels", track_levels, "Record per-level entry counts");
        cmd->add_flag("--track-visits", track_visits, "Record per-site visit counts");
        cmd->add_option("--checkpoint", checkpoints, "Extra checkpoint times");
    }

    // estimate-alpha
    CLI::App* alpha = app.add_subcommand("estimate-alpha", "Fit the range-growth exponent");
    add_seed(alpha);
    alpha->add_option("--n", n, "Largest walk length (n_max)");
    alpha->add_option("--seeds", seeds, "Number of independent runs");
    alpha->add_option("--rule", rule, "Timing rule: berw|coin|block|always-h|always-v");

    // abelian-check
    std::uint32_t instances = 1000, lists = 3;
    CLI::App* abelian = app.add_subcommand("abelian-check",
                                           "Order-independence trials on random stacks");
    add_seed(abelian);
    abelian->add_option("--instances", instances, "Random instances");
    abelian->add_option("--lists", lists, "Movement lists per instance");

    // slow-cover
    std::uint32_t k = 14, uncovered_seeds = 400;
    CLI::App* slow = app.add_subcommand("slow-cover",
                                        "Slow dyadic cover of a random walk path");
    add_seed(slow);
    slow->add_option("--epsilon", epsilon, "Slowness parameter");
    slow->add_option("--k", k, "Horizon exponent: path length 2^k");
    slow->add_option("--seeds", uncovered_seeds, "Seeds for the uncovered-point estimates");

    // level-stats
    std::int64_t level_n = 32;
    CLI::App* level = app.add_subcommand("level-stats", "Single-level family statistics");
    add_seed(level);
    level->add_option("--n", level_n, "Level scan size n");
    level->add_option("--seeds", seeds, "Number of level environments");

    // excursions
    std::int64_t half_width = 5;
    double horizon = 50.0;
    CLI::App* exc = app.add_subcommand("excursions", "Strip particle-system statistics");
    add_seed(exc);
    exc->add_option("--window", half_width, "Particle window half width W");
    exc->add_option("--horizon", horizon, "Time horizon T");
    exc->add_option("--seeds", seeds, "Independent systems");

    // diagnostics
    CLI::App* diag = app.add_subcommand("diagnostics", "Bound margins for one run");
    add_seed(diag);
    add_engine(diag);
    diag->add_option("--n", n, "Number of steps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    berw_report* report = nullptr;
    berw_status status = BERW_OK;

    if (simulate->parsed() || exp->parsed()) {
        berw_walk_params params{};
        params.seed = seed;
        params.n_steps = n;
        params.engine = engine == "stack" ? 1 : 0;
        params.record_stride = stride;
        params.track_levels = track_levels ? 1 : 0;
        params.track_visits = track_visits ? 1 : 0;
        params.extra_checkpoints = checkpoints.empty() ? nullptr : checkpoints.data();
        params.n_extra_checkpoints = checkpoints.size();
        status = simulate->parsed() ? berw_simulate(&params, &report)
                                    : berw_export(&params, &report);
    } else if (alpha->parsed()) {
        status = berw_estimate_alpha(seed, seeds, n, rule.c_str(), &report);
    } else if (abelian->parsed()) {
        status = berw_abelian_check(seed, instances, lists, &report);
    } else if (slow->parsed()) {
        status = berw_slow_cover(seed, epsilon, k, uncovered_seeds, &report);
    } else if (level->parsed()) {
        status = berw_level_stats(seed, level_n, seeds, &report);
    } else if (exc->parsed()) {
        status = berw_excursions(seed, half_width, horizon, seeds, &report);
    } else if (diag->parsed()) {
        status = berw_diagnostics(seed, n, engine == "stack" ? 1 : 0, &report);
    }

    return finish(status, report, common);
}
