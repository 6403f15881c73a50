#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "rabeam/rab.hpp"
#include "rabeam/scenario.hpp"
#include "rabeam/socp_solver.hpp"

using namespace rabeam;
using Catch::Approx;

namespace {

CMatrix random_cmat(Eigen::Index m, Eigen::Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    CMatrix a(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = std::complex<double>(g(rng), g(rng));
    return a;
}

RabProblem random_problem(Eigen::Index n, const ExtRational& q, double eta_factor,
                          std::mt19937_64& rng)
{
    const CMatrix b = random_cmat(n + 1, n, rng);
    const HermitianMatrix r_hat(CMatrix(b.adjoint() * b + CMatrix::Identity(n, n)));
    const CMatrix q_mat = random_cmat(3, n, rng);
    const double gamma = 0.01 * r_hat.matrix().norm();
    const double eta =
        eta_factor * induced_norm(q_mat, ExtRational(2), ExtRational(2)).value;
    return RabProblem{r_hat, q_mat, gamma, UncertaintySpec(ExtRational(2), q, eta), {}};
}

double constraint_value(const RabProblem& prob, const CVector& w)
{
    const CMatrix m =
        prob.r_hat.matrix() + prob.gamma * CMatrix::Identity(prob.r_hat.dim(), prob.r_hat.dim());
    return (w.adjoint() * m * w)(0).real();
}

} // namespace

TEST_CASE("eta=0 reduces to the generalized eigenproblem", "[rab]")
{
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 5; ++trial) {
        RabProblem prob = random_problem(5, ExtRational(2), 0.0, rng);
        const CMatrix reg =
            prob.r_hat.matrix() + prob.gamma * CMatrix::Identity(5, 5);
        Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> ges(
            prob.q_mat.adjoint() * prob.q_mat, reg);
        const double t_expect = std::sqrt(ges.eigenvalues().maxCoeff());

        const RabResult res = solve_sequential(prob);
        CHECK(res.t_star == Approx(t_expect).epsilon(1e-5));
        CHECK(res.trace.stop == StopReason::AlphaReached);
    }
}

TEST_CASE("two-sensor optimum matches a phase-fixed grid search", "[rab]")
{
    std::mt19937_64 rng(67);
    for (const auto& q : {ExtRational(1), ExtRational::infinity()}) {
        RabProblem prob = random_problem(2, q, 0.1, rng);
        const RabResult res = solve_sequential(prob);

        double best = 0.0;
        const int axis = 400;
        const CMatrix reg = prob.r_hat.matrix() + prob.gamma * CMatrix::Identity(2, 2);
        for (int i = 0; i <= axis; ++i) {
            const double theta = 0.5 * M_PI * i / axis;
            for (int j = 0; j < 2 * axis; ++j) {
                const double phi = M_PI * j / axis;
                CVector w(2);
                w << std::cos(theta),
                    std::sin(theta) * std::complex<double>(std::cos(phi), std::sin(phi));
                w /= std::sqrt((w.adjoint() * reg * w)(0).real());
                best = std::max(best, objective(prob, w));
            }
        }
        CHECK(res.t_star == Approx(best).margin(5e-3));
        CHECK(res.t_star >= best - 5e-3); // never below the grid's lower bound
    }
}

TEST_CASE("trace ascends monotonically to the alpha rule", "[rab]")
{
    std::mt19937_64 rng(71);
    RabProblem prob = random_problem(6, ExtRational(3, 2), 0.05, rng);
    const RabResult res = solve_sequential(prob, {1e-6, 300});
    CHECK(res.trace.stop == StopReason::AlphaReached);
    CHECK(res.trace.monotone);
    REQUIRE(res.trace.entries.size() >= 2);
    for (std::size_t k = 1; k < res.trace.entries.size(); ++k)
        CHECK(res.trace.entries[k].t >= res.trace.entries[k - 1].t - 1e-9);
    for (const IterateEntry& e : res.trace.entries) {
        CHECK(e.solver_iterations > 0);
        CHECK(e.wall_ms >= 0.0);
        CHECK(e.ratio >= 1.0 - 1e-12); // ||.||_2 over ||.||_{q'} with q' >= 2 here
    }
    CHECK(res.t_star == Approx(objective(prob, res.w)).margin(1e-9));
}

TEST_CASE("returned beamformer is feasible", "[rab]")
{
    std::mt19937_64 rng(73);
    for (const auto& q : {ExtRational(1), ExtRational(2), ExtRational(4)}) {
        RabProblem prob = random_problem(5, q, 0.05, rng);
        const RabResult res = solve_sequential(prob);
        CHECK(constraint_value(prob, res.w) <= 1.0 + 1e-7);
        CHECK(res.t_star > 0.0);
    }
}

TEST_CASE("initial point sits on the constraint along the pencil axis", "[rab]")
{
    std::mt19937_64 rng(79);
    RabProblem prob = random_problem(5, ExtRational(2), 0.05, rng);
    const BeamVector w0 = initial_point(prob);
    CHECK(constraint_value(prob, w0) == Approx(1.0).epsilon(1e-9));

    const CMatrix reg = prob.r_hat.matrix() + prob.gamma * CMatrix::Identity(5, 5);
    Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> ges(prob.q_mat.adjoint() * prob.q_mat,
                                                          reg);
    const CVector v = ges.eigenvectors().col(4); // ascending order in Eigen
    const double cosine = std::abs((w0.adjoint() * v)(0)) / (w0.norm() * v.norm());
    CHECK(cosine == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("worst_case_sinr is the clamped squared objective", "[rab]")
{
    std::mt19937_64 rng(83);
    RabProblem prob = random_problem(4, ExtRational(1), 0.05, rng);
    const BeamVector w = initial_point(prob);
    const double obj = objective(prob, w);
    CHECK(worst_case_sinr(prob, w) == Approx(std::max(obj, 0.0) * std::max(obj, 0.0))
                                          .epsilon(1e-12));

    // large eta drives the guarantee to zero
    prob.objective_spec.eta = 1e6;
    CHECK(worst_case_sinr(prob, w) == 0.0);
}

TEST_CASE("restriction is exact at its reference point for p=2", "[rab]")
{
    std::mt19937_64 rng(89);
    RabProblem prob = random_problem(5, ExtRational(3, 2), 0.05, rng);
    const BeamVector w_ref = initial_point(prob);

    Restriction r = build_restriction(prob, w_ref);
    CHECK(r.prog.frozen());
    const Solution sol = solve(r.prog, {1e-10, 100, 1e-12});
    REQUIRE(sol.status == SolveStatus::Optimal);

    // the restriction under-estimates the true objective, and at least the
    // reference point is feasible for it
    const double t_opt = sol.value(r.t);
    CHECK(t_opt >= objective(prob, w_ref) - 1e-7);
    CVector w_next(5);
    for (int i = 0; i < 5; ++i)
        w_next(i) = std::complex<double>(sol.value(r.w[static_cast<std::size_t>(i)].re),
                                         sol.value(r.w[static_cast<std::size_t>(i)].im));
    CHECK(objective(prob, w_next) >= t_opt - 1e-6);
}

TEST_CASE("robust-norm constraint mode is honored", "[rab]")
{
    std::mt19937_64 rng(97);
    RabProblem prob = random_problem(4, ExtRational(2), 0.05, rng);
    const CMatrix p_mat = gram_factor(prob.r_hat).q;
    const double eta1 = 0.05 * induced_norm(p_mat, ExtRational(2), ExtRational(2)).value;
    prob.robust = RabProblem::RobustNorm{p_mat, UncertaintySpec(ExtRational(2), ExtRational(1), eta1)};

    const RabResult res = solve_sequential(prob);
    CHECK(res.trace.stop == StopReason::AlphaReached);
    const double lhs = vec_norm((p_mat * res.w).eval(), ExtRational(2)) +
                       eta1 * vec_norm(res.w, ExtRational(1));
    CHECK(lhs <= 1.0 + 1e-7);

    const BeamVector w0 = initial_point(prob);
    CHECK(vec_norm((p_mat * w0).eval(), ExtRational(2)) + eta1 * vec_norm(w0, ExtRational(1)) <=
          1.0 + 1e-9);
}

TEST_CASE("warm start converges immediately", "[rab]")
{
    std::mt19937_64 rng(101);
    RabProblem prob = random_problem(5, ExtRational(2), 0.05, rng);
    const RabResult cold = solve_sequential(prob);
    const RabResult warm = solve_sequential(prob, {}, {1e-10, 100, 1e-12}, cold.w);
    CHECK(warm.trace.stop == StopReason::AlphaReached);
    CHECK(warm.trace.entries.size() <= 3);
    CHECK(warm.t_star == Approx(cold.t_star).epsilon(1e-6));
}

TEST_CASE("stop reasons have stable names", "[rab]")
{
    CHECK(to_string(StopReason::AlphaReached) == "alpha_reached");
    CHECK(to_string(StopReason::MaxIter) == "max_iter");
    CHECK(to_string(StopReason::NonAscent) == "non_ascent");
    CHECK(to_string(StopReason::SolverFailure) == "solver_failure");
}

TEST_CASE("worst-case SINR never exceeds the actual SINR under an exact model", "[rab]")
{
    // Model-exact self-test: the presumed signal covariance is the true one and
    // r_hat is the exact total covariance, so the worst-case figure must be a
    // valid lower bound on the SINR actually delivered.
    Scenario sc;
    sc.signal_true = {ScatteredSource::Density::Gaussian, 30.0, 4.0, 10.0};
    sc.signal_presumed = sc.signal_true;
    sc.interferers = {{ScatteredSource::Density::Uniform, 10.0, 10.0, 10.0}};
    std::mt19937_64 rng(4242);
    const CovarianceSet cov = build_covariances(sc, rng);

    const CMatrix q_mat = gram_factor(cov.r_s).q;
    const double gamma = 0.005 * cov.r_total.matrix().norm();
    const double eta = 0.05 * induced_norm(q_mat, ExtRational(2), ExtRational(2)).value;

    for (const ExtRational& q :
         {ExtRational(1), ExtRational(2), ExtRational::infinity()}) {
        const RabProblem prob{cov.r_total, q_mat, gamma,
                              UncertaintySpec(ExtRational(2), q, eta), {}};
        const RabResult res = solve_sequential(prob);
        const double wc = worst_case_sinr(prob, res.w);
        const double actual = sinr(res.w, cov.r_s, cov.r_ipn);
        REQUIRE(wc > 0.0);
        CHECK(10.0 * std::log10(wc) <= 10.0 * std::log10(actual) + 1e-6);
    }
}
