#include "rabeam/rab.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "rabeam/epigraphs.hpp"

namespace rabeam {

std::string to_string(StopReason r)
{
    switch (r) {
    case StopReason::AlphaReached: return "alpha_reached";
    case StopReason::MaxIter: return "max_iter";
    case StopReason::NonAscent: return "non_ascent";
    case StopReason::SolverFailure: return "solver_failure";
    }
    return "unknown";
}

namespace {

void check_problem(const RabProblem& prob)
{
    if (prob.q_mat.size() == 0 || prob.q_mat.isZero(0.0))
        throw std::invalid_argument("RabProblem: Q must be nonzero");
    if (static_cast<Eigen::Index>(prob.q_mat.cols()) != prob.r_hat.dim())
        throw std::invalid_argument("RabProblem: Q and R_hat dimensions disagree");
    if (!(prob.gamma > 0.0))
        throw std::invalid_argument("RabProblem: gamma must be positive");
    if (prob.robust &&
        static_cast<Eigen::Index>(prob.robust->p_mat.cols()) != prob.r_hat.dim())
        throw std::invalid_argument("RabProblem: P and R_hat dimensions disagree");
}

CMatrix loaded(const RabProblem& prob)
{
    return prob.r_hat.matrix() +
           prob.gamma * CMatrix::Identity(prob.r_hat.dim(), prob.r_hat.dim());
}

double robust_constraint_value(const RabProblem& prob, const BeamVector& w)
{
    return vec_norm(prob.robust->p_mat * w, prob.robust->spec1.p) +
           prob.robust->spec1.eta * vec_norm(w, prob.robust->spec1.q);
}

} // namespace

BeamVector initial_point(const RabProblem& prob)
{
    check_problem(prob);
    const CMatrix qhq = prob.q_mat.adjoint() * prob.q_mat;
    Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> ges(qhq, loaded(prob));
    if (ges.info() != Eigen::Success)
        throw std::runtime_error("initial_point: generalized eigensolver failed");
    const Eigen::Index n = prob.r_hat.dim();
    BeamVector w = ges.eigenvectors().col(n - 1); // largest eigenvalue
    const double quad = (w.adjoint() * loaded(prob) * w).value().real();
    w /= std::sqrt(quad);
    if (prob.robust) {
        const double val = robust_constraint_value(prob, w);
        if (val > 1.0)
            w /= val;
    }
    return w;
}

double objective(const RabProblem& prob, const BeamVector& w)
{
    if (w.isZero(0.0))
        return 0.0;
    return vec_norm(prob.q_mat * w, prob.objective_spec.p) -
           prob.objective_spec.eta * vec_norm(w, prob.objective_spec.q);
}

double worst_case_sinr(const RabProblem& prob, const BeamVector& w)
{
    const double v = std::max(objective(prob, w), 0.0);
    return v * v;
}

Restriction build_restriction(const RabProblem& prob, const BeamVector& w_ref)
{
    check_problem(prob);
    const ExtRational qprime = prob.objective_spec.p.conjugate();
    const double denom = vec_norm(prob.q_mat * w_ref, qprime);
    if (!(denom > 0.0))
        throw std::invalid_argument("build_restriction: ||Q w_ref||_{q'} vanishes");

    Restriction r;
    const Eigen::Index n = prob.r_hat.dim();
    r.t = r.prog.add_var("t");
    r.w.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        r.w.push_back(r.prog.add_complex_var("w" + std::to_string(i)));
    r.s = r.prog.add_var("s");
    r.prog.set_objective(AffineExpr(r.t));

    const CVector c = prob.q_mat.adjoint() * (prob.q_mat * w_ref);
    AffineExpr lin = re_inner(c, r.w);
    lin *= 1.0 / denom;
    AffineExpr rhs(r.t);
    rhs.add_term(r.s, prob.objective_spec.eta);
    r.prog.add_linear_le(rhs, lin);
    lq_epigraph(r.prog, r.w, r.s, prob.objective_spec.q);

    if (prob.robust) {
        const CMatrix& pm = prob.robust->p_mat;
        const VarId rr = r.prog.add_var("r");
        const VarId s1 = r.prog.add_var("s1");
        AffineExpr combo(rr);
        combo.add_term(s1, prob.robust->spec1.eta);
        r.prog.add_linear_le(combo, AffineExpr(1.0));
        // Auxiliary complex variables pinned to Pw so the norm epigraphs
        // apply directly.
        std::vector<ComplexVarRef> pw;
        for (Eigen::Index i = 0; i < pm.rows(); ++i)
            pw.push_back(r.prog.add_complex_var("pw" + std::to_string(i)));
        const std::vector<AffineExpr> embed = complex_matvec(pm, r.w);
        for (Eigen::Index i = 0; i < pm.rows(); ++i) {
            AffineExpr re_eq = embed[static_cast<std::size_t>(i)];
            re_eq.add_term(pw[static_cast<std::size_t>(i)].re, -1.0);
            r.prog.add_equality(std::move(re_eq));
            AffineExpr im_eq = embed[static_cast<std::size_t>(pm.rows() + i)];
            im_eq.add_term(pw[static_cast<std::size_t>(i)].im, -1.0);
            r.prog.add_equality(std::move(im_eq));
        }
        lq_epigraph(r.prog, pw, rr, prob.robust->spec1.p);
        lq_epigraph(r.prog, r.w, s1, prob.robust->spec1.q);
    } else {
        quad_constraint(r.prog, r.w, cholesky_psd(HermitianMatrix(loaded(prob))));
    }
    r.prog.freeze();
    return r;
}

RabResult solve_sequential(const RabProblem& prob, const StoppingRule& rule,
                           const SolverConfig& cfg, const std::optional<BeamVector>& w0)
{
    if (!(rule.alpha > 0.0))
        throw std::invalid_argument("StoppingRule: alpha must be positive");
    if (rule.max_iter < 1)
        throw std::invalid_argument("StoppingRule: max_iter must be at least 1");
    check_problem(prob);

    const bool exact_linearization = prob.objective_spec.p.is_two();
    const ExtRational qprime = prob.objective_spec.p.conjugate();

    BeamVector w = w0 ? *w0 : initial_point(prob);
    RabResult out;
    out.w = w;
    out.t_star = -std::numeric_limits<double>::infinity();
    double best_obj = -std::numeric_limits<double>::infinity();
    double t_prev = -std::numeric_limits<double>::infinity();
    out.trace.stop = StopReason::MaxIter;

    for (int k = 0; k < rule.max_iter; ++k) {
        const auto start = std::chrono::steady_clock::now();
        const Restriction restr = build_restriction(prob, w);
        const Solution sol = ::rabeam::solve(restr.prog, cfg);
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();

        const bool usable =
            sol.status == SolveStatus::Optimal ||
            ((sol.status == SolveStatus::MaxIterations ||
              sol.status == SolveStatus::NumericalFailure) &&
             sol.primal_residual <= 1e-7 && sol.dual_residual <= 1e-7 &&
             sol.gap_residual <= 1e-7);
        if (sol.status == SolveStatus::PrimalInfeasible)
            throw std::runtime_error(
                "solve_sequential: restriction reported infeasible although the reference "
                "point is feasible by construction");
        if (!usable) {
            out.trace.stop = StopReason::SolverFailure;
            break;
        }

        const double t_k = sol.value(restr.t);
        IterateEntry entry;
        entry.k = k;
        entry.t = t_k;
        entry.solver_iterations = sol.iterations;
        entry.wall_ms = wall_ms;
        const CVector qw = prob.q_mat * w;
        entry.ratio = qw.norm() / vec_norm(qw, qprime);
        out.trace.entries.push_back(entry);

        BeamVector w_next(prob.r_hat.dim());
        for (Eigen::Index i = 0; i < w_next.size(); ++i)
            w_next(i) = std::complex<double>(sol.value(restr.w[static_cast<std::size_t>(i)].re),
                                             sol.value(restr.w[static_cast<std::size_t>(i)].im));

        if (t_k < t_prev - 1e-9)
            out.trace.monotone = false;
        if (t_k > out.t_star)
            out.t_star = t_k;
        const double obj_next = objective(prob, w_next);
        if (obj_next > best_obj) {
            best_obj = obj_next;
            out.w = w_next;
        }

        if (!exact_linearization && k > 0 && t_k < t_prev) {
            out.trace.stop = StopReason::NonAscent;
            break;
        }
        if (k > 0 && t_k - t_prev <= rule.alpha) {
            out.trace.stop = StopReason::AlphaReached;
            w = w_next;
            break;
        }
        t_prev = t_k;
        w = w_next;
    }
    return out;
}

} // namespace rabeam
