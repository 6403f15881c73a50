#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rabeam/ext_rational.hpp"
#include "rabeam/scenario.hpp"

namespace rabeam {

struct PqPair {
    ExtRational p{2};
    ExtRational q{2};
};

enum class ConstraintMode { Quadratic, RobustNorm };

struct ExperimentConfig {
    Scenario scenario;
    std::vector<double> snr_list_db;
    std::vector<PqPair> pq_list;
    double eta_factor = 0.05; // eta = eta_factor * ||Q||_2
    double gamma_factor = 0.005; // gamma = gamma_factor * ||R_sample||_F
    int runs = 100;
    double alpha = 1e-6;
    ConstraintMode constraint_mode = ConstraintMode::Quadratic;
    ExtRational p1{2};
    ExtRational q1{2};
    double eta1_factor = 0.05; // eta1 = eta1_factor * ||P||_2
    std::uint64_t seed = 1;
    std::string out_csv;
    std::string out_svg;
    int threads = 1;
};

/// The protocol defaults: N=10 half-wavelength ULA, 0 dB noise, Gaussian
/// signal 30/4 deg, presumed Gaussian 34/6 deg, uniform interference
/// 10/10 deg at 10 dB INR, T=50 snapshots, SNR in {0,10,20,30,40} dB,
/// p=2 with q in {1, 3/2, 2, 4, inf}, 100 runs.
ExperimentConfig default_experiment_config();

/// Flat key=value config text ('#' comments). Unknown keys are an error.
/// See README for the key list; values default to default_experiment_config().
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

struct ResultRow {
    double snr_db = 0.0;
    ExtRational p{2};
    ExtRational q{2};
    int run = 0;
    double sinr_db = 0.0;
    double worst_case_sinr_db = 0.0;
    double opt_bound_db = 0.0;
    int iterations = 0;
    double cpu_ms = 0.0;
    std::string status;
};

/// Full sweep: per SNR a fixed true covariance set, per run a fresh sample
/// covariance shared across all (p,q) cells, solve_sequential per cell.
/// Deterministic given config.seed (cpu_ms aside), any thread count.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> parse_csv(const std::string& path);

enum class SvgMetric { MeanSinrDb, MeanCpuMs };

/// One polyline per (p,q) series of the per-SNR mean. Returns warnings for
/// series skipped as empty/non-finite.
std::vector<std::string> emit_svg_lines(const std::vector<ResultRow>& rows, SvgMetric metric,
                                        const std::string& path);

/// splitmix64 step, used to derive independent per-cell rng streams.
std::uint64_t splitmix64(std::uint64_t x);

} // namespace rabeam
