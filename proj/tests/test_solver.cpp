#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rabeam/linalg.hpp"
#include "rabeam/socp_solver.hpp"

using namespace rabeam;
using Catch::Approx;

namespace {

struct SocInstance {
    ConeProgram prog;
    std::vector<VarId> x;
    double optimal = 0.0;
};

// maximize c'x subject to ||W x - d|| <= r, W invertible:
// optimum c'W^{-1}d + r ||W^{-T} c||.
SocInstance ball_instance(int n, std::mt19937_64& rng, double scale = 1.0)
{
    std::normal_distribution<double> g;
    RMatrix w(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            w(i, j) = g(rng) + (i == j ? 3.0 : 0.0);
    RVector c(n), d(n);
    for (int i = 0; i < n; ++i) {
        c[i] = scale * g(rng);
        d[i] = g(rng);
    }
    const double r = 0.5 + std::abs(g(rng));

    SocInstance inst;
    inst.x = inst.prog.add_vars(static_cast<std::size_t>(n), "x");
    AffineExpr obj;
    for (int i = 0; i < n; ++i)
        obj.add_term(inst.x[static_cast<std::size_t>(i)], c[i]);
    inst.prog.set_objective(obj);
    std::vector<AffineExpr> u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            u[static_cast<std::size_t>(i)].add_term(inst.x[static_cast<std::size_t>(j)], w(i, j));
        u[static_cast<std::size_t>(i)] += AffineExpr(-d[i]);
    }
    inst.prog.add_soc(AffineExpr(r), std::move(u));
    inst.prog.freeze();

    const RMatrix winv = w.inverse();
    inst.optimal = c.dot(winv * d) + r * (winv.transpose() * c).norm();
    return inst;
}

} // namespace

TEST_CASE("bounded LP solves to the vertex", "[solver]")
{
    ConeProgram prog;
    const VarId x = prog.add_var("x");
    const VarId y = prog.add_var("y");
    prog.add_nonneg(x);
    prog.add_nonneg(y);
    prog.add_linear_le(AffineExpr(x), AffineExpr(2.0));
    prog.add_linear_le(AffineExpr(y), AffineExpr(3.0));
    prog.set_objective(AffineExpr(x) + AffineExpr(y));
    prog.freeze();

    const Solution sol = solve(prog);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == Approx(5.0).epsilon(1e-7));
    CHECK(sol.value(x) == Approx(2.0).epsilon(1e-7));
    CHECK(sol.value(y) == Approx(3.0).epsilon(1e-7));
    CHECK(sol.program_serial == prog.serial());
}

TEST_CASE("infeasible and unbounded problems are certified", "[solver]")
{
    SECTION("primal infeasible")
    {
        ConeProgram prog;
        const VarId x = prog.add_var("x");
        prog.add_nonneg(x);
        prog.add_linear_le(AffineExpr(1.0), AffineExpr(x)); // x >= 1
        prog.add_linear_le(AffineExpr(x), AffineExpr(0.0)); // x <= 0
        prog.set_objective(AffineExpr(x));
        prog.freeze();
        CHECK(solve(prog).status == SolveStatus::PrimalInfeasible);
    }
    SECTION("unbounded above")
    {
        ConeProgram prog;
        const VarId x = prog.add_var("x");
        prog.add_nonneg(x);
        prog.set_objective(AffineExpr(x));
        prog.freeze();
        CHECK(solve(prog).status == SolveStatus::DualInfeasible);
    }
}

TEST_CASE("single SOC golden value", "[solver]")
{
    ConeProgram prog;
    const VarId x = prog.add_var("x");
    const VarId y = prog.add_var("y");
    prog.add_soc(AffineExpr(std::sqrt(2.0)), {AffineExpr(x), AffineExpr(y)});
    prog.set_objective(AffineExpr(x) + AffineExpr(y));
    prog.freeze();

    const Solution sol = solve(prog);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == Approx(2.0).epsilon(1e-7));
    CHECK(sol.value(x) == Approx(1.0).epsilon(1e-6));
    CHECK(sol.value(y) == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("two active cones intersect correctly", "[solver]")
{
    // max x1 with ||(x1,x2)|| <= 1 and ||(x1-0.5, x3)|| <= 0.7: x1* = 1.
    ConeProgram prog;
    const VarId x1 = prog.add_var("x1");
    const VarId x2 = prog.add_var("x2");
    const VarId x3 = prog.add_var("x3");
    prog.add_soc(AffineExpr(1.0), {AffineExpr(x1), AffineExpr(x2)});
    prog.add_soc(AffineExpr(0.7), {AffineExpr(x1) - AffineExpr(0.5), AffineExpr(x3)});
    prog.set_objective(AffineExpr(x1));
    prog.freeze();

    const Solution sol = solve(prog);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.value(x1) == Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(sol.value(x2)) < 1e-5);
}

TEST_CASE("norm-ball battery matches the closed form", "[solver]")
{
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        SocInstance inst = ball_instance(2 + trial % 4, rng);
        const Solution sol = solve(inst.prog);
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective ==
              Approx(inst.optimal).epsilon(1e-6).margin(1e-8));
        const ResidualReport rep = verify(inst.prog, sol);
        CHECK(rep.max_equality() < 1e-6);
        CHECK(rep.max_nonneg() < 1e-6);
        CHECK(rep.max_soc() < 1e-6);
        CHECK(rep.objective == Approx(sol.objective).margin(1e-9));
    }
}

TEST_CASE("solves are deterministic", "[solver]")
{
    std::mt19937_64 rng(7);
    SocInstance inst = ball_instance(4, rng);
    const Solution a = solve(inst.prog);
    const Solution b = solve(inst.prog);
    REQUIRE(a.status == b.status);
    CHECK(a.iterations == b.iterations);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        CHECK(a.values[i] == b.values[i]); // bitwise
}

TEST_CASE("solution quality survives data scaling", "[solver]")
{
    std::mt19937_64 rng(11);
    SocInstance inst = ball_instance(3, rng, 1e3);
    const Solution sol = solve(inst.prog);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == Approx(inst.optimal).epsilon(1e-6));
}

TEST_CASE("verify localizes an injected violation", "[solver]")
{
    ConeProgram prog;
    const VarId x1 = prog.add_var("x1");
    const VarId x2 = prog.add_var("x2");
    const VarId x3 = prog.add_var("x3");
    prog.add_soc(AffineExpr(1.0), {AffineExpr(x1), AffineExpr(x2)});
    prog.add_soc(AffineExpr(0.7), {AffineExpr(x1) - AffineExpr(0.5), AffineExpr(x3)});
    prog.set_objective(AffineExpr(x1));
    prog.freeze();

    Solution sol = solve(prog);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(verify(prog, sol).max_soc() < 1e-7);

    sol.values[x1.index] = 1.1; // breaks block 0, block 1 still slack
    const ResidualReport rep = verify(prog, sol);
    CHECK(rep.worst_soc() == 0);
    CHECK(rep.soc_violation[0] == Approx(0.1).epsilon(1e-9));
    CHECK(rep.soc_violation[1] == 0.0);
}

TEST_CASE("iterates stay interior and the gap closes from above", "[solver]")
{
    std::mt19937_64 rng(13);
    SocInstance inst = ball_instance(3, rng);
    const Solution sol = solve(inst.prog);
    REQUIRE(sol.status == SolveStatus::Optimal);
    REQUIRE_FALSE(sol.trace.empty());
    for (const IterationStat& it : sol.trace) {
        CHECK(it.tau > 0.0);
        CHECK(it.kappa > 0.0);
        CHECK(it.mu > 0.0);
    }
    CHECK(sol.trace.back().mu < sol.trace.front().mu);
    // weak duality within residual tolerance at the returned point
    CHECK(sol.trace.back().pobj <= sol.trace.back().dobj + 1e-6 * (1.0 + std::abs(sol.objective)));
    CHECK(sol.gap_residual < 1e-7);
    CHECK(sol.primal_residual < 1e-7);
    CHECK(sol.dual_residual < 1e-7);
}

TEST_CASE("iteration cap reports best-effort values", "[solver]")
{
    std::mt19937_64 rng(17);
    SocInstance inst = ball_instance(4, rng);
    const Solution sol = solve(inst.prog, {1e-8, 3, 1e-12});
    CHECK(sol.status == SolveStatus::MaxIterations);
    CHECK(sol.iterations <= 3);
    CHECK(sol.values.size() == inst.prog.num_vars());
    CHECK(std::isfinite(sol.primal_residual));
    CHECK(std::isfinite(sol.dual_residual));
}

TEST_CASE("value() rejects foreign variables", "[solver]")
{
    ConeProgram prog;
    const VarId x = prog.add_var("x");
    prog.add_nonneg(x);
    prog.add_linear_le(AffineExpr(x), AffineExpr(1.0));
    prog.set_objective(AffineExpr(x));
    prog.freeze();
    const Solution sol = solve(prog);

    ConeProgram other;
    const VarId z = other.add_var("z");
    CHECK_THROWS_AS(sol.value(z), std::invalid_argument);
}

TEST_CASE("backend reports its name and matches the free function", "[solver]")
{
    DenseIpmBackend backend;
    CHECK(backend.name() == "dense-ipm");

    ConeProgram prog;
    const VarId x = prog.add_var("x");
    prog.add_nonneg(x);
    prog.add_linear_le(AffineExpr(x), AffineExpr(2.0));
    prog.set_objective(AffineExpr(x));
    prog.freeze();
    const Solution a = backend.solve(prog, {});
    const Solution b = solve(prog);
    CHECK(a.objective == b.objective);
}
