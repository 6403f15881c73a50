#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rabeam/cone_program.hpp"

namespace rabeam {

enum class SolveStatus {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    MaxIterations,
    NumericalFailure,
};

std::string to_string(SolveStatus s);

struct SolverConfig {
    double tolerance = 1e-8;
    int max_iterations = 100;
    double regularization = 1e-12; // static regularization floor in the KKT system
};

struct IterationStat {
    double mu = 0.0;
    double step = 0.0;
    double sigma = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0; // |pobj - dobj|, maximization sense
    double pobj = 0.0;
    double dobj = 0.0;
    double tau = 0.0;
    double kappa = 0.0;
};

struct Solution {
    SolveStatus status = SolveStatus::NumericalFailure;
    std::vector<double> values; // indexed by VarId::index
    double objective = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    double primal_residual = std::numeric_limits<double>::quiet_NaN();
    double dual_residual = std::numeric_limits<double>::quiet_NaN();
    double gap_residual = std::numeric_limits<double>::quiet_NaN();
    std::vector<IterationStat> trace;
    std::uint32_t program_serial = 0;

    double value(VarId v) const;
};

/// Conic solver contract: any backend returning Solutions that pass verify()
/// at the configured tolerance may substitute for the built-in one.
class SolverBackend {
  public:
    virtual ~SolverBackend() = default;
    virtual std::string name() const = 0;
    virtual Solution solve(const ConeProgram& prog, const SolverConfig& cfg) const = 0;
};

/// Built-in dense Mehrotra predictor-corrector interior-point method with
/// Nesterov-Todd scaling on the homogeneous self-dual embedding.
class DenseIpmBackend final : public SolverBackend {
  public:
    std::string name() const override { return "dense-ipm"; }
    Solution solve(const ConeProgram& prog, const SolverConfig& cfg) const override;
};

Solution solve(const ConeProgram& prog, const SolverConfig& cfg = {});

struct ResidualReport {
    std::vector<double> equality_violation; // |expr(x)| per equality row
    std::vector<double> nonneg_violation; // max(0, -x_i), aligned with nonneg_list()
    std::vector<double> soc_violation; // max(0, ||u(x)|| - t(x)) per SOC block
    double objective = std::numeric_limits<double>::quiet_NaN();

    double max_equality() const;
    double max_nonneg() const;
    double max_soc() const;
    int worst_soc() const; // index of the largest SOC violation, -1 if none
};

/// Recomputes feasibility and the objective from scratch, independent of the
/// solve path.
ResidualReport verify(const ConeProgram& prog, const Solution& sol);

} // namespace rabeam
