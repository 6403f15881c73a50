#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rabeam/experiment.hpp"

namespace rabeam {

struct CheckOutcome {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Instance counts for the acceptance property suites. Defaults are the full
/// advertised budgets; the CLI selftest shrinks them to stay interactive.
struct CheckParams {
    int oracle_instances = 200;
    int oracle_samples = 1000;
    int oracle_probes = 10000;
    int coincidence_instances = 100;
    int tower_vectors = 50;
    int ascent_scenarios = 100;
    int degenerate_instances = 50;
    int global_instances = 20;
    int global_grid_axis = 1000; // grid = axis^2 points
    int planted_instances = 20;
    int infeasible_instances = 5;
    int phase_instances = 100;
    bool run_protocol = true;
    ExperimentConfig protocol = default_experiment_config();
    std::uint64_t seed = 20260814;
};

/// Runs the ten acceptance property suites in order and reports one outcome
/// per criterion. Exceptions inside a suite fail that criterion only.
std::vector<CheckOutcome> acceptance_checks(const CheckParams& params);

} // namespace rabeam
