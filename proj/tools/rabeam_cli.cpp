#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "rabeam/experiment.hpp"
#include "rabeam/selfcheck.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_csv,
            const std::string& out_svg, long seed, int runs, int threads)
{
    rabeam::ExperimentConfig cfg = rabeam::parse_config_file(config_path);
    if (!out_csv.empty())
        cfg.out_csv = out_csv;
    if (!out_svg.empty())
        cfg.out_svg = out_svg;
    if (seed >= 0)
        cfg.seed = static_cast<std::uint64_t>(seed);
    if (runs > 0)
        cfg.runs = runs;
    if (threads > 0)
        cfg.threads = threads;

    const auto rows = rabeam::run_experiment(cfg);
    std::printf("completed %zu cells (%zu snr x %zu pq x %d runs)\n", rows.size(),
                cfg.snr_list_db.size(), cfg.pq_list.size(), cfg.runs);
    if (!cfg.out_csv.empty()) {
        rabeam::emit_csv(rows, cfg.out_csv);
        std::printf("wrote %s\n", cfg.out_csv.c_str());
    }
    if (!cfg.out_svg.empty()) {
        const auto warnings =
            rabeam::emit_svg_lines(rows, rabeam::SvgMetric::MeanSinrDb, cfg.out_svg);
        for (const auto& w : warnings)
            std::fprintf(stderr, "warning: %s\n", w.c_str());
        std::printf("wrote %s\n", cfg.out_svg.c_str());
    }
    return 0;
}

int cmd_selftest(bool full, int threads)
{
    rabeam::CheckParams prm;
    if (!full) {
        prm.oracle_instances = 40;
        prm.oracle_samples = 300;
        prm.oracle_probes = 1500;
        prm.coincidence_instances = 40;
        prm.tower_vectors = 6;
        prm.ascent_scenarios = 8;
        prm.degenerate_instances = 10;
        prm.global_instances = 3;
        prm.global_grid_axis = 400;
        prm.planted_instances = 8;
        prm.phase_instances = 100;
        prm.protocol.runs = 2;
        prm.protocol.snr_list_db = {0.0, 20.0, 40.0};
        prm.protocol.pq_list = {{rabeam::ExtRational(2), rabeam::ExtRational(1)},
                                {rabeam::ExtRational(2), rabeam::ExtRational(2)},
                                {rabeam::ExtRational(2), rabeam::ExtRational::infinity()}};
    }
    if (threads > 0)
        prm.protocol.threads = threads;

    const auto outcomes = rabeam::acceptance_checks(prm);
    int failures = 0;
    for (const auto& o : outcomes) {
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", o.name.c_str(), o.detail.c_str());
        if (!o.pass)
            ++failures;
    }
    std::printf("%zu checks, %d failed\n", outcomes.size(), failures);
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"robust adaptive beamforming toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_csv, out_svg;
    long seed = -1;
    int runs = 0, threads = 0;
    auto* run = app.add_subcommand("run", "run a configured experiment sweep");
    run->add_option("--config", config_path, "key=value config file")->required();
    run->add_option("--out-csv", out_csv, "override the CSV output path");
    run->add_option("--out-svg", out_svg, "override the SVG output path");
    run->add_option("--seed", seed, "override the rng seed");
    run->add_option("--runs", runs, "override the Monte Carlo run count");
    run->add_option("--threads", threads, "override the worker thread count");

    bool full = false;
    int st_threads = 0;
    auto* selftest = app.add_subcommand("selftest", "run the acceptance property suites");
    selftest->add_flag("--full", full, "full acceptance budgets instead of the quick profile");
    selftest->add_option("--threads", st_threads, "worker threads for the protocol run");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, out_csv, out_svg, seed, runs, threads);
        return cmd_selftest(full, st_threads);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
