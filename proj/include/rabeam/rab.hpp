#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rabeam/cone_program.hpp"
#include "rabeam/linalg.hpp"
#include "rabeam/socp_solver.hpp"
#include "rabeam/worst_case.hpp"

namespace rabeam {

using BeamVector = CVector;

/// Worst-case-SINR beamforming instance: maximize ||Qw||_p - eta ||w||_q
/// subject to w^H (R_hat + gamma I) w <= 1, or, in the doubly-robust variant,
/// ||Pw||_{p1} + eta1 ||w||_{q1} <= 1.
struct RabProblem {
    struct RobustNorm {
        CMatrix p_mat; // M' x N with P^H P = R_hat
        UncertaintySpec spec1; // (p1, q1, eta1)
    };

    HermitianMatrix r_hat;
    CMatrix q_mat; // M x N gram factor of the presumed signal covariance
    double gamma = 0.0;
    UncertaintySpec objective_spec; // (p, q, eta_{p,q})
    std::optional<RobustNorm> robust; // empty = quadratic constraint
};

struct StoppingRule {
    double alpha = 1e-6;
    int max_iter = 300;
};

enum class StopReason { AlphaReached, MaxIter, NonAscent, SolverFailure };

std::string to_string(StopReason r);

struct IterateEntry {
    int k = 0;
    double t = 0.0;
    int solver_iterations = 0;
    double wall_ms = 0.0;
    double ratio = 0.0; // ||Q w_k||_2 / ||Q w_k||_{q'} at the reference point
};

struct IterateTrace {
    std::vector<IterateEntry> entries;
    StopReason stop = StopReason::MaxIter;
    bool monotone = true; // t_{k+1} >= t_k - 1e-9 throughout
};

struct RabResult {
    BeamVector w;
    double t_star = 0.0;
    IterateTrace trace;
};

/// Feasible start: principal eigenvector of the pencil (Q^H Q, R_hat + gamma I)
/// scaled onto the quadratic-constraint boundary (and, for the robust-norm
/// constraint, further downscaled until it is feasible there too).
BeamVector initial_point(const RabProblem& problem);

/// ||Qw||_p - eta ||w||_q, unclamped.
double objective(const RabProblem& problem, const BeamVector& w);

/// (max{objective, 0})^2 -- the guaranteed worst-case SINR numerator under
/// the constraint normalization.
double worst_case_sinr(const RabProblem& problem, const BeamVector& w);

struct Restriction {
    ConeProgram prog;
    std::vector<ComplexVarRef> w;
    VarId t;
    VarId s; // epigraph of ||w||_q
};

/// The SOCP restriction at w_ref: maximize t subject to
/// Re(w_ref^H Q^H Q w)/||Q w_ref||_{q'} >= t + eta*s, ||w||_q <= s, and the
/// constraint block, with q' = p/(p-1). Frozen on return.
Restriction build_restriction(const RabProblem& problem, const BeamVector& w_ref);

/// Algorithm: iterate restrictions from initial_point (or w0 when given),
/// stopping once t_k - t_{k-1} <= alpha, on max_iter, on a non-ascent step
/// with p != 2, or on solver failure. Returns best-so-far w by true objective.
RabResult solve_sequential(const RabProblem& problem, const StoppingRule& rule = {},
                           const SolverConfig& cfg = {1e-10, 100, 1e-12},
                           const std::optional<BeamVector>& w0 = std::nullopt);

} // namespace rabeam
