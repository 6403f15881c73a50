#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rabeam/experiment.hpp"

using namespace rabeam;
using Catch::Approx;

namespace {

ExperimentConfig tiny_config()
{
    ExperimentConfig cfg = default_experiment_config();
    cfg.scenario.ula.n = 4;
    cfg.scenario.snapshots = 8;
    cfg.snr_list_db = {0.0, 20.0};
    cfg.pq_list = {{ExtRational(2), ExtRational(1)}, {ExtRational(2), ExtRational::infinity()}};
    cfg.runs = 2;
    cfg.seed = 7;
    return cfg;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

bool same_except_cpu(const ResultRow& a, const ResultRow& b)
{
    const bool sinr_match = (a.sinr_db == b.sinr_db) ||
                            (std::isnan(a.sinr_db) && std::isnan(b.sinr_db));
    const bool wc_match = (a.worst_case_sinr_db == b.worst_case_sinr_db) ||
                          (std::isnan(a.worst_case_sinr_db) && std::isnan(b.worst_case_sinr_db));
    return a.snr_db == b.snr_db && a.p.str() == b.p.str() && a.q.str() == b.q.str() &&
           a.run == b.run && sinr_match && wc_match && a.opt_bound_db == b.opt_bound_db &&
           a.iterations == b.iterations && a.status == b.status;
}

} // namespace

TEST_CASE("default configuration pins the simulation protocol", "[experiment]")
{
    const ExperimentConfig cfg = default_experiment_config();
    CHECK(cfg.scenario.ula.n == 10);
    CHECK(cfg.scenario.ula.spacing == 0.5);
    CHECK(cfg.scenario.noise_power == 1.0);
    CHECK(cfg.scenario.snapshots == 50);
    CHECK(cfg.scenario.signal_true.center_deg == 30.0);
    CHECK(cfg.scenario.signal_true.spread_deg == 4.0);
    CHECK(cfg.scenario.signal_presumed.center_deg == 34.0);
    CHECK(cfg.scenario.signal_presumed.spread_deg == 6.0);
    REQUIRE(cfg.scenario.interferers.size() == 1);
    CHECK(cfg.scenario.interferers[0].power == 10.0);
    CHECK(cfg.snr_list_db == std::vector<double>{0.0, 10.0, 20.0, 30.0, 40.0});
    REQUIRE(cfg.pq_list.size() == 5);
    for (const auto& pq : cfg.pq_list)
        CHECK(pq.p.str() == "2");
    CHECK(cfg.pq_list[1].q.str() == "3/2");
    CHECK(cfg.pq_list[4].q.str() == "inf");
    CHECK(cfg.eta_factor == 0.05);
    CHECK(cfg.gamma_factor == 0.005);
    CHECK(cfg.runs == 100);
    CHECK(cfg.alpha == 1e-6);
    CHECK(cfg.seed == 1);
}

TEST_CASE("config text round-trips through the parser", "[experiment]")
{
    std::istringstream in(R"(# protocol override
sensors = 6
spacing = 0.45
noise_db = 3
snapshots = 25       # comment after value
signal_density = gaussian
signal_center_deg = 28
signal_spread_deg = 3
presumed_density = uniform
presumed_center_deg = 31
presumed_spread_deg = 5
interference_density = uniform
interference_center_deg = -12
interference_spread_deg = 8
inr_db = 20
snr_list_db = 0, 15
pq_list = 2:1, 2:3/2, inf:2
eta_factor = 0.1
gamma_factor = 0.01
runs = 3
alpha = 1e-5
constraint_mode = robust_norm
p1 = 2
q1 = 1
eta1_factor = 0.02
seed = 99
threads = 2
out_csv = results.csv
out_svg = results.svg
)");
    const ExperimentConfig cfg = parse_config(in);
    CHECK(cfg.scenario.ula.n == 6);
    CHECK(cfg.scenario.ula.spacing == 0.45);
    CHECK(cfg.scenario.noise_power == Approx(std::pow(10.0, 0.3)));
    CHECK(cfg.scenario.snapshots == 25);
    CHECK(cfg.scenario.signal_true.center_deg == 28.0);
    CHECK(cfg.scenario.signal_presumed.density == ScatteredSource::Density::Uniform);
    CHECK(cfg.scenario.interferers[0].center_deg == -12.0);
    // INR is relative to the noise floor
    CHECK(cfg.scenario.interferers[0].power ==
          Approx(std::pow(10.0, 2.0) * cfg.scenario.noise_power));
    CHECK(cfg.snr_list_db == std::vector<double>{0.0, 15.0});
    REQUIRE(cfg.pq_list.size() == 3);
    CHECK(cfg.pq_list[1].q.str() == "3/2");
    CHECK(cfg.pq_list[2].p.str() == "inf");
    CHECK(cfg.constraint_mode == ConstraintMode::RobustNorm);
    CHECK(cfg.q1.str() == "1");
    CHECK(cfg.eta1_factor == 0.02);
    CHECK(cfg.seed == 99);
    CHECK(cfg.threads == 2);
    CHECK(cfg.out_csv == "results.csv");
    CHECK(cfg.out_svg == "results.svg");
}

TEST_CASE("config parser rejects malformed input", "[experiment]")
{
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in);
    };
    CHECK_THROWS_WITH(parse("bogus_key = 1\n"), Catch::Matchers::ContainsSubstring("bogus_key"));
    CHECK_THROWS_WITH(parse("sensors two\n"), Catch::Matchers::ContainsSubstring("key=value"));
    CHECK_THROWS_WITH(parse("runs = many\n"), Catch::Matchers::ContainsSubstring("integer"));
    CHECK_THROWS_WITH(parse("pq_list = 2\n"), Catch::Matchers::ContainsSubstring("p:q"));
    CHECK_THROWS_WITH(parse("pq_list = 2:5/0\n"), Catch::Matchers::ContainsSubstring("order"));
    CHECK_THROWS_WITH(parse("sensors = 1\n"), Catch::Matchers::ContainsSubstring("sensors"));
    CHECK_THROWS_WITH(parse("runs = 0\n"), Catch::Matchers::ContainsSubstring("runs"));
    CHECK_THROWS_WITH(parse("eta_factor = -1\n"), Catch::Matchers::ContainsSubstring("factor"));
    CHECK_THROWS(parse_config_file("/nonexistent/rabeam.cfg"));
}

TEST_CASE("experiment rows are deterministic and ordered", "[experiment]")
{
    const ExperimentConfig cfg = tiny_config();
    const auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 2 * 2 * 2);

    // (snr, pq, run) lexicographic layout
    CHECK(rows[0].snr_db == 0.0);
    CHECK(rows[0].q.str() == "1");
    CHECK(rows[0].run == 0);
    CHECK(rows[1].run == 1);
    CHECK(rows[2].q.str() == "inf");
    CHECK(rows[4].snr_db == 20.0);

    const auto again = run_experiment(cfg);
    REQUIRE(again.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(same_except_cpu(rows[i], again[i]));

    ExperimentConfig threaded = cfg;
    threaded.threads = 2;
    const auto parallel = run_experiment(threaded);
    REQUIRE(parallel.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(same_except_cpu(rows[i], parallel[i]));
}

TEST_CASE("experiment rows respect the clairvoyant bound", "[experiment]")
{
    const auto rows = run_experiment(tiny_config());
    for (const auto& row : rows) {
        CHECK(row.status == "alpha_reached");
        CHECK(row.iterations >= 1);
        CHECK(std::isfinite(row.sinr_db));
        CHECK(row.sinr_db <= row.opt_bound_db + 1e-9);
        CHECK(row.cpu_ms >= 0.0);
    }
}

TEST_CASE("robust-norm constraint mode runs end to end", "[experiment]")
{
    ExperimentConfig cfg = tiny_config();
    cfg.snr_list_db = {10.0};
    cfg.pq_list = {{ExtRational(2), ExtRational(2)}};
    cfg.runs = 1;
    cfg.constraint_mode = ConstraintMode::RobustNorm;
    cfg.q1 = ExtRational(1);
    const auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].status == "alpha_reached");
    CHECK(std::isfinite(rows[0].sinr_db));
}

TEST_CASE("csv emission round-trips exactly", "[experiment]")
{
    const std::string path = "test_experiment_roundtrip.csv";
    auto rows = run_experiment(tiny_config());
    rows[0].status = "weird \"status\", with comma"; // exercise quoting
    emit_csv(rows, path);

    const std::string text = slurp(path);
    CHECK(text.rfind("snr_db,p,q,run,sinr_db,worst_case_sinr_db,opt_bound_db,iterations,"
                      "cpu_ms,status\n",
                      0) == 0);

    const auto parsed = parse_csv(path);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].snr_db == rows[i].snr_db);
        CHECK(parsed[i].p.str() == rows[i].p.str());
        CHECK(parsed[i].q.str() == rows[i].q.str());
        CHECK(parsed[i].run == rows[i].run);
        CHECK(parsed[i].sinr_db == rows[i].sinr_db);
        CHECK(parsed[i].worst_case_sinr_db == rows[i].worst_case_sinr_db);
        CHECK(parsed[i].opt_bound_db == rows[i].opt_bound_db);
        CHECK(parsed[i].iterations == rows[i].iterations);
        CHECK(parsed[i].cpu_ms == rows[i].cpu_ms);
        CHECK(parsed[i].status == rows[i].status);
    }
    std::remove(path.c_str());
}

TEST_CASE("csv parser rejects foreign headers", "[experiment]")
{
    const std::string path = "test_experiment_badheader.csv";
    {
        std::ofstream out(path);
        out << "a,b,c\n1,2,3\n";
    }
    CHECK_THROWS_WITH(parse_csv(path), Catch::Matchers::ContainsSubstring("header"));
    std::remove(path.c_str());
}

TEST_CASE("svg emission draws one series per (p,q)", "[experiment]")
{
    const std::string path = "test_experiment_plot.svg";
    const auto rows = run_experiment(tiny_config());

    const auto warnings = emit_svg_lines(rows, SvgMetric::MeanSinrDb, path);
    CHECK(warnings.empty());
    const std::string svg = slurp(path);
    CHECK(count_occurrences(svg, "<svg") == 1);
    CHECK(count_occurrences(svg, "</svg>") == 1);
    CHECK(count_occurrences(svg, "<polyline") == 2); // two (p,q) series
    CHECK(svg.find("q=1") != std::string::npos);
    CHECK(svg.find("q=inf") != std::string::npos);

    const auto cpu_warnings = emit_svg_lines(rows, SvgMetric::MeanCpuMs, path);
    CHECK(cpu_warnings.empty());
    std::remove(path.c_str());
}

TEST_CASE("svg emission skips degenerate series with a warning", "[experiment]")
{
    const std::string path = "test_experiment_degenerate.svg";
    auto rows = run_experiment(tiny_config());
    for (auto& row : rows)
        if (row.q.str() == "inf")
            row.sinr_db = std::numeric_limits<double>::quiet_NaN();

    const auto warnings = emit_svg_lines(rows, SvgMetric::MeanSinrDb, path);
    CHECK(warnings.size() == 1);
    const std::string svg = slurp(path);
    CHECK(count_occurrences(svg, "<polyline") == 1);
    std::remove(path.c_str());
}

TEST_CASE("splitmix64 matches the reference sequence", "[experiment]")
{
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}
