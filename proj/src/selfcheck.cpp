#include "rabeam/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "rabeam/epigraphs.hpp"
#include "rabeam/rab.hpp"
#include "rabeam/scenario.hpp"
#include "rabeam/worst_case.hpp"

namespace rabeam {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

CVector random_cvec(Eigen::Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = std::complex<double>(nd(rng), nd(rng));
    return v;
}

CMatrix random_cmat(Eigen::Index m, Eigen::Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    CMatrix a(m, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < m; ++i)
            a(i, j) = std::complex<double>(nd(rng), nd(rng));
    return a;
}

HermitianMatrix random_psd(Eigen::Index n, std::mt19937_64& rng)
{
    const CMatrix g = random_cmat(n + 2, n, rng);
    return HermitianMatrix(g.adjoint() * g / static_cast<double>(n));
}

const std::vector<ExtRational>& order_set()
{
    static const std::vector<ExtRational> orders = {
        ExtRational(1), ExtRational(3, 2), ExtRational(2), ExtRational(4),
        ExtRational::infinity()};
    return orders;
}

// ---- criteria 1 & 2: worst-case oracle attainment and max-form bracketing ----

struct OracleStats {
    int instances = 0;
    int attainment_checks = 0;
    double max_attainment_err = 0.0;
    double worst_undercut = 0.0; // most negative sample - min margin
    double worst_overshoot = 0.0; // most positive sample - max margin
    double worst_membership = 0.0; // max ||Dv||_p - eta||v||_q over probes
    bool pass_attainment = true;
    bool pass_undercut = true;
    bool pass_overshoot = true;
    bool pass_membership = true;
};

OracleStats oracle_suite(const CheckParams& prm)
{
    std::mt19937_64 rng(prm.seed ^ 0x70726f7031ULL);
    const std::vector<double> etas = {0.0, 0.3, 3.0};
    const auto& orders = order_set();

    std::vector<UncertaintySpec> combos;
    for (const auto& p : orders)
        for (const auto& q : orders)
            for (double eta : etas)
                combos.emplace_back(p, q, eta);

    OracleStats st;
    std::uniform_int_distribution<int> mdist(1, 4), ndist(1, 5);
    for (int inst = 0; inst < prm.oracle_instances; ++inst) {
        const Eigen::Index m = mdist(rng), n = ndist(rng);
        const CMatrix a = random_cmat(m, n, rng);
        CVector x = random_cvec(n, rng);
        if (x.norm() < 1e-6)
            x(0) += 1.0;
        const CVector b = random_cvec(m, rng);
        ++st.instances;

        for (const auto& spec : combos) {
            const double vmin = min_residual_value(a, x, b, spec);
            const PerturbationMatrix pert = worst_case_delta(a, x, b, spec);
            const double attained = vec_norm(((a + pert.delta) * x - b).eval(), spec.p);
            const double err = std::abs(attained - vmin);
            st.max_attainment_err = std::max(st.max_attainment_err, err);
            if (err > 1e-10)
                st.pass_attainment = false;
            ++st.attainment_checks;
        }

        // Sampling and membership run against one cycling combo per instance
        // to keep the suite inside its runtime budget.
        const UncertaintySpec& spec = combos[static_cast<std::size_t>(inst) % combos.size()];
        const double vmin = min_residual_value(a, x, b, spec);
        const double vmax = max_residual_value(a, x, b, spec);
        const SampleExtremes se = adversarial_sample(a, x, b, spec, prm.oracle_samples, rng);
        st.worst_undercut = std::min(st.worst_undercut, se.min - vmin);
        st.worst_overshoot = std::max(st.worst_overshoot, se.max - vmax);
        if (se.min < vmin - 1e-8)
            st.pass_undercut = false;
        if (se.max > vmax + 1e-8)
            st.pass_overshoot = false;

        const CMatrix delta = worst_case_delta(a, x, b, spec).delta;
        for (int probe = 0; probe < prm.oracle_probes; ++probe) {
            const CVector v = random_cvec(n, rng);
            const double lhs = vec_norm((delta * v).eval(), spec.p);
            const double rhs = spec.eta * vec_norm(v, spec.q);
            st.worst_membership = std::max(st.worst_membership, lhs - rhs);
            if (lhs > rhs + 1e-10 * (1.0 + rhs))
                st.pass_membership = false;
        }
    }
    return st;
}

CheckOutcome criterion1(const OracleStats& st)
{
    CheckOutcome out{"criterion-1 worst-case-attainment", st.pass_attainment && st.pass_undercut &&
                                                     st.pass_membership,
                     ""};
    std::ostringstream os;
    os << st.instances << " instances, " << st.attainment_checks
       << " attainment checks, max |res(delta_hat) - min| = "
       << fmt("%.3e", st.max_attainment_err)
       << ", worst sample undercut = " << fmt("%.3e", -std::min(st.worst_undercut, 0.0))
       << ", worst membership excess = " << fmt("%.3e", std::max(st.worst_membership, 0.0));
    out.detail = os.str();
    return out;
}

CheckOutcome criterion2(const OracleStats& st)
{
    CheckOutcome out{"criterion-2 max-form-bracketing", st.pass_overshoot, ""};
    out.detail = "worst sample overshoot above max_residual_value = " +
                 fmt("%.3e", std::max(st.worst_overshoot, 0.0)) + " (allowed 1e-8)";
    return out;
}

CheckOutcome criterion3(const CheckParams& prm)
{
    std::mt19937_64 rng(prm.seed ^ 0x65713134ULL);
    std::uniform_int_distribution<int> mdist(1, 6), ndist(1, 6);
    std::uniform_real_distribution<double> ed(0.0, 2.0);
    int exact = 0;
    for (int inst = 0; inst < prm.coincidence_instances; ++inst) {
        const Eigen::Index m = mdist(rng), n = ndist(rng);
        const CMatrix a = random_cmat(m, n, rng);
        const CVector x = random_cvec(n, rng);
        const CVector b = random_cvec(m, rng);
        const double eta = ed(rng);
        const UncertaintySpec spec(ExtRational(2), ExtRational(2), eta);
        const double lhs = min_residual_value(a, x, b, spec);
        const double frob = std::max((a * x - b).norm() - eta * x.norm(), 0.0);
        if (lhs == frob)
            ++exact;
    }
    CheckOutcome out{"criterion-3 frobenius-coincidence",
                     exact == prm.coincidence_instances, ""};
    out.detail = std::to_string(exact) + "/" + std::to_string(prm.coincidence_instances) +
                 " instances identical to the Frobenius-ball closed form (tolerance 0)";
    return out;
}

CheckOutcome criterion4(const CheckParams& prm)
{
    std::mt19937_64 rng(prm.seed ^ 0x746f776572ULL);
    const std::vector<ExtRational> qs = {ExtRational(1),    ExtRational(3, 2),
                                         ExtRational(2),    ExtRational(7, 3),
                                         ExtRational(4),    ExtRational::infinity()};
    double max_rel = 0.0;
    int solves = 0;
    for (int inst = 0; inst < prm.tower_vectors; ++inst) {
        const CVector w = random_cvec(10, rng);
        for (const auto& q : qs) {
            ConeProgram prog;
            std::vector<ComplexVarRef> wv;
            for (Eigen::Index i = 0; i < w.size(); ++i) {
                wv.push_back(prog.add_complex_var("w" + std::to_string(i)));
                prog.add_equality(AffineExpr(wv.back().re) - AffineExpr(w(i).real()));
                prog.add_equality(AffineExpr(wv.back().im) - AffineExpr(w(i).imag()));
            }
            const VarId s = prog.add_var("s");
            prog.set_objective(AffineExpr() - AffineExpr(s));
            lq_epigraph(prog, wv, s, q);
            prog.freeze();
            const Solution sol = solve(prog, SolverConfig{1e-10, 100, 1e-12});
            const double truth = vec_norm(w, q);
            const double rel = std::abs(sol.value(s) - truth) / truth;
            max_rel = std::max(max_rel, rel);
            ++solves;
        }
    }
    CheckOutcome out{"criterion-4 soc-tower-exactness", max_rel <= 1e-6, ""};
    out.detail = std::to_string(solves) + " epigraph minimizations, max relative error vs " +
                 "||w||_q = " + fmt("%.3e", max_rel) + " (allowed 1e-6)";
    return out;
}

RabProblem random_protocol_problem(double snr_db, const ExtRational& p, const ExtRational& q,
                                   std::mt19937_64& rng)
{
    Scenario sc = default_experiment_config().scenario;
    sc.signal_true.power = std::pow(10.0, snr_db / 10.0);
    sc.signal_presumed.power = sc.signal_true.power;
    const CovarianceSet cov = build_covariances(sc, rng);
    const CMatrix q_mat = gram_factor(cov.r_s_presumed).q;
    const double eta = 0.05 * induced_norm(q_mat, ExtRational(2), ExtRational(2)).value;
    const double gamma = 0.005 * cov.r_sample.matrix().norm();
    return RabProblem{cov.r_sample, q_mat, gamma, UncertaintySpec(p, q, eta), {}};
}

CheckOutcome criterion5(const CheckParams& prm)
{
    std::mt19937_64 rng(prm.seed ^ 0x6d6f6e6fULL);
    std::uniform_real_distribution<double> snr(0.0, 40.0);
    int traces = 0, monotone = 0, alpha_stopped = 0;
    double worst_drop = 0.0;
    for (int inst = 0; inst < prm.ascent_scenarios; ++inst) {
        const double snr_db = snr(rng);
        for (const auto& q : order_set()) {
            const RabProblem prob = random_protocol_problem(snr_db, ExtRational(2), q, rng);
            const RabResult res = solve_sequential(prob);
            ++traces;
            double prev = -std::numeric_limits<double>::infinity();
            bool mono = true;
            for (const auto& e : res.trace.entries) {
                if (e.t < prev - 1e-9) {
                    mono = false;
                    worst_drop = std::max(worst_drop, prev - e.t);
                }
                prev = std::max(prev, e.t);
            }
            if (mono)
                ++monotone;
            if (res.trace.stop == StopReason::AlphaReached &&
                res.trace.entries.size() <= 300)
                ++alpha_stopped;
        }
    }
    CheckOutcome out{"criterion-5 monotone-ascent",
                     monotone == traces && alpha_stopped == traces, ""};
    std::ostringstream os;
    os << traces << " traces (p=2), monotone within 1e-9: " << monotone
       << ", alpha-terminated within 300: " << alpha_stopped;
    if (worst_drop > 0.0)
        os << ", worst drop = " << fmt("%.3e", worst_drop);
    out.detail = os.str();
    return out;
}

CheckOutcome criterion6(const CheckParams& prm)
{
    std::mt19937_64 rng(prm.seed ^ 0x657461300aULL);
    std::uniform_int_distribution<int> ndist(3, 8);
    std::uniform_real_distribution<double> gd(0.01, 0.2);
    double max_rel = 0.0;
    for (int inst = 0; inst < prm.degenerate_instances; ++inst) {
        const Eigen::Index n = ndist(rng);
        const HermitianMatrix r_hat = random_psd(n, rng);
        const CMatrix q_mat = gram_factor(random_psd(n, rng)).q;
        const double gamma = gd(rng);
        const RabProblem prob{r_hat, q_mat, gamma,
                              UncertaintySpec(ExtRational(2), ExtRational(2), 0.0), {}};
        const RabResult res = solve_sequential(prob);

        const CMatrix lhs = q_mat.adjoint() * q_mat;
        const CMatrix rhs = r_hat.matrix() + gamma * CMatrix::Identity(n, n);
        Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> ges(lhs, rhs);
        const double t_true = std::sqrt(ges.eigenvalues().maxCoeff());
        const double rel = std::abs(res.t_star - t_true) / t_true;
        max_rel = std::max(max_rel, rel);
    }
    CheckOutcome out{"criterion-6 eta0-pencil-exactness", max_rel <= 1e-5, ""};
    out.detail = std::to_string(prm.degenerate_instances) +
                 " eta=0 instances, max relative gap to sqrt(lambda_max) = " +
                 fmt("%.3e", max_rel) + " (allowed 1e-5)";
    return out;
}

CheckOutcome criterion7(const CheckParams& prm)
{
    std::mt19937_64 rng(prm.seed ^ 0x4e325f32ULL);
    const std::vector<ExtRational> qs = {ExtRational(1), ExtRational(2),
                                         ExtRational::infinity()};
    const int axis = prm.global_grid_axis;
    double max_err = 0.0;
    int checks = 0;
    for (int inst = 0; inst < prm.global_instances; ++inst) {
        const HermitianMatrix r_hat = random_psd(2, rng);
        const CMatrix q_mat = random_cmat(3, 2, rng);
        const double gamma = 0.05;
        const double eta =
            0.1 * induced_norm(q_mat, ExtRational(2), ExtRational(2)).value;
        const CMatrix shaped = r_hat.matrix() + gamma * CMatrix::Identity(2, 2);

        for (const auto& q : qs) {
            const UncertaintySpec spec(ExtRational(2), q, eta);
            const RabProblem prob{r_hat, q_mat, gamma, spec, {}};
            const RabResult res = solve_sequential(prob);

            // Global phase is immaterial, so fix w1 real >= 0 and sweep the
            // normalized direction (cos th, sin th e^{j ph}).
            double best = 0.0;
            for (int it = 0; it < axis; ++it) {
                const double th = (std::numbers::pi / 2.0) * it / (axis - 1);
                const double c = std::cos(th), sn = std::sin(th);
                for (int ip = 0; ip < axis; ++ip) {
                    const double ph = 2.0 * std::numbers::pi * ip / axis;
                    CVector w(2);
                    w(0) = c;
                    w(1) = std::polar(sn, ph);
                    const double denom = std::sqrt(std::real(w.dot(shaped * w)));
                    w /= denom;
                    best = std::max(best, objective(prob, w));
                }
            }
            max_err = std::max(max_err, std::abs(res.t_star - best));
            ++checks;
        }
    }
    CheckOutcome out{"criterion-7 small-instance-global", max_err <= 1e-3, ""};
    out.detail = std::to_string(checks) + " N=2 problems vs " +
                 std::to_string(axis) + "x" + std::to_string(axis) +
                 " phase-fixed grid, max |t* - grid| = " + fmt("%.3e", max_err) +
                 " (allowed 1e-3)";
    return out;
}

// ---- criterion 8: planted-KKT solver contract ----

struct PlantedInstance {
    ConeProgram prog;
    double objective = 0.0;
};

PlantedInstance plant_socp(std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    std::uniform_int_distribution<int> nd_vars(3, 7), nd_eqs(1, 2), nd_socs(1, 2),
        nd_dim(2, 4), coin(0, 1);

    const Eigen::Index n = nd_vars(rng);
    const Eigen::Index p = std::min<Eigen::Index>(nd_eqs(rng), n - 1);
    const int n_soc = nd_socs(rng);
    const Eigen::Index n_nonneg = 2;

    ConeProgram prog;
    std::vector<VarId> xs;
    for (Eigen::Index i = 0; i < n; ++i)
        xs.push_back(prog.add_var("x" + std::to_string(i)));

    Eigen::VectorXd xstar(n);
    for (Eigen::Index i = 0; i < n; ++i)
        xstar(i) = nd(rng);

    Eigen::Index m = n_nonneg;
    std::vector<Eigen::Index> soc_dims;
    for (int k = 0; k < n_soc; ++k) {
        soc_dims.push_back(nd_dim(rng));
        m += soc_dims.back();
    }

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, n);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd sstar = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd zstar = Eigen::VectorXd::Zero(m);

    // Nonnegative variables first: one strictly interior (s>0, z=0) and one
    // active (s=0, z>0), matching the builder's cone row order.
    xstar(0) = std::abs(xstar(0)) + 0.5;
    xstar(1) = 0.0;
    prog.add_nonneg(xs[0]);
    prog.add_nonneg(xs[1]);
    g(0, 0) = -1.0;
    g(1, 1) = -1.0;
    sstar(0) = xstar(0);
    zstar(0) = 0.0;
    sstar(1) = 0.0;
    zstar(1) = std::abs(nd(rng)) + 0.5;

    Eigen::Index row = n_nonneg;
    for (int k = 0; k < n_soc; ++k) {
        const Eigen::Index dim = soc_dims[static_cast<std::size_t>(k)];
        Eigen::MatrixXd cmat(dim, n);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                cmat(i, j) = nd(rng);

        Eigen::VectorXd sblk(dim), zblk(dim);
        if (coin(rng)) {
            // Boundary pair: s = alpha (1, u), z = beta (1, -u), strictly
            // complementary on the cone boundary.
            Eigen::VectorXd u(dim - 1);
            for (Eigen::Index i = 0; i < dim - 1; ++i)
                u(i) = nd(rng);
            u.normalize();
            const double alpha = std::abs(nd(rng)) + 0.5;
            const double beta = std::abs(nd(rng)) + 0.5;
            sblk(0) = alpha;
            sblk.tail(dim - 1) = alpha * u;
            zblk(0) = beta;
            zblk.tail(dim - 1) = -beta * u;
        } else {
            // Interior s, zero z.
            for (Eigen::Index i = 1; i < dim; ++i)
                sblk(i) = nd(rng);
            sblk(0) = sblk.tail(dim - 1).norm() + std::abs(nd(rng)) + 0.5;
            zblk.setZero();
        }
        const Eigen::VectorXd dvec = sblk - cmat * xstar;

        std::vector<AffineExpr> us;
        AffineExpr t_expr(dvec(0));
        for (Eigen::Index j = 0; j < n; ++j)
            t_expr += cmat(0, j) * AffineExpr(xs[j]);
        for (Eigen::Index i = 1; i < dim; ++i) {
            AffineExpr e(dvec(i));
            for (Eigen::Index j = 0; j < n; ++j)
                e += cmat(i, j) * AffineExpr(xs[j]);
            us.push_back(e);
        }
        prog.add_soc(t_expr, us);

        g.block(row, 0, dim, n) = -cmat;
        h.segment(row, dim) = dvec;
        sstar.segment(row, dim) = sblk;
        zstar.segment(row, dim) = zblk;
        row += dim;
    }

    Eigen::MatrixXd a(p, n);
    Eigen::VectorXd ystar(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        ystar(i) = nd(rng);
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = nd(rng);
    }
    const Eigen::VectorXd b = a * xstar;
    for (Eigen::Index i = 0; i < p; ++i) {
        AffineExpr e(-b(i));
        for (Eigen::Index j = 0; j < n; ++j)
            e += a(i, j) * AffineExpr(xs[j]);
        prog.add_equality(e);
    }

    // Dual feasibility pins the objective: the std-form minimization cost is
    // c = -f = -(A'y* + G'z*), so f'x* is the planted optimal value.
    const Eigen::VectorXd fvec = a.transpose() * ystar + g.transpose() * zstar;
    AffineExpr obj;
    for (Eigen::Index j = 0; j < n; ++j)
        obj += fvec(j) * AffineExpr(xs[j]);
    prog.set_objective(obj);
    prog.freeze();
    return PlantedInstance{std::move(prog), fvec.dot(xstar)};
}

ConeProgram infeasible_instance(int kind)
{
    ConeProgram prog;
    switch (kind % 5) {
    case 0: {
        const VarId x = prog.add_var("x");
        prog.add_nonneg(x);
        prog.add_equality(AffineExpr(x) + AffineExpr(1.0));
        prog.set_objective(AffineExpr(x));
        break;
    }
    case 1: {
        const VarId t = prog.add_var("t");
        const VarId u = prog.add_var("u");
        prog.add_soc(AffineExpr(t), {AffineExpr(u)});
        prog.add_equality(AffineExpr(t) + AffineExpr(1.0));
        prog.set_objective(AffineExpr(u));
        break;
    }
    case 2: {
        const VarId x = prog.add_var("x");
        prog.add_equality(AffineExpr(x));
        prog.add_equality(AffineExpr(x) - AffineExpr(1.0));
        prog.set_objective(AffineExpr(x));
        break;
    }
    case 3: {
        const VarId x = prog.add_var("x");
        const VarId y = prog.add_var("y");
        prog.add_nonneg(x);
        prog.add_nonneg(y);
        prog.add_equality(AffineExpr(x) + AffineExpr(y) + AffineExpr(5.0));
        prog.set_objective(AffineExpr(x) - AffineExpr(y));
        break;
    }
    default: {
        const VarId t = prog.add_var("t");
        const VarId u = prog.add_var("u");
        prog.add_soc(AffineExpr(t), {AffineExpr(u)});
        prog.add_equality(AffineExpr(u) - AffineExpr(5.0));
        prog.add_equality(AffineExpr(t) - AffineExpr(1.0));
        prog.set_objective(AffineExpr(t));
        break;
    }
    }
    prog.freeze();
    return prog;
}

CheckOutcome criterion8(const CheckParams& prm)
{
    std::mt19937_64 rng(prm.seed ^ 0x6b6b74ULL);
    double max_rel = 0.0;
    int solved = 0;
    for (int inst = 0; inst < prm.planted_instances; ++inst) {
        PlantedInstance pi = plant_socp(rng);
        const Solution sol = solve(pi.prog);
        const double rel =
            std::abs(sol.objective - pi.objective) / (1.0 + std::abs(pi.objective));
        max_rel = std::max(max_rel, rel);
        if (sol.status == SolveStatus::Optimal && rel <= 1e-6)
            ++solved;
    }
    int flagged = 0;
    for (int k = 0; k < prm.infeasible_instances; ++k) {
        const ConeProgram prog = infeasible_instance(k);
        if (solve(prog).status == SolveStatus::PrimalInfeasible)
            ++flagged;
    }
    CheckOutcome out{"criterion-8 solver-contract",
                     solved == prm.planted_instances && flagged == prm.infeasible_instances,
                     ""};
    std::ostringstream os;
    os << solved << "/" << prm.planted_instances
       << " planted SOCPs within 1e-6 relative (max rel err = " << fmt("%.3e", max_rel)
       << "), " << flagged << "/" << prm.infeasible_instances
       << " infeasible instances flagged";
    out.detail = os.str();
    return out;
}

CheckOutcome criterion9(const CheckParams& prm)
{
    if (!prm.run_protocol)
        return CheckOutcome{"criterion-9 protocol-smoke", true, "skipped by configuration"};

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<ResultRow> rows = run_experiment(prm.protocol);
    if (!prm.protocol.out_csv.empty())
        emit_csv(rows, prm.protocol.out_csv);
    if (!prm.protocol.out_svg.empty())
        emit_svg_lines(rows, SvgMetric::MeanSinrDb, prm.protocol.out_svg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool bound_ok = true;
    double worst_excess = -std::numeric_limits<double>::infinity();
    std::map<double, std::pair<double, int>> per_snr;
    std::map<std::string, std::pair<double, double>> per_q; // q -> (sum sinr, sum cpu)
    std::map<std::string, int> per_q_count;
    for (const auto& r : rows) {
        if (!(r.sinr_db <= r.opt_bound_db + 1e-6))
            bound_ok = false;
        worst_excess = std::max(worst_excess, r.sinr_db - r.opt_bound_db);
        auto& slot = per_snr[r.snr_db];
        slot.first += r.sinr_db;
        slot.second += 1;
        per_q[r.q.str()].first += r.sinr_db;
        per_q[r.q.str()].second += r.cpu_ms;
        per_q_count[r.q.str()] += 1;
    }
    bool mean_ok = true;
    std::ostringstream means;
    for (const auto& [snr, slot] : per_snr) {
        const double mean = slot.first / slot.second;
        const double opt = [&] {
            for (const auto& r : rows)
                if (r.snr_db == snr)
                    return r.opt_bound_db;
            return 0.0;
        }();
        if (!std::isfinite(mean) || mean < opt - 20.0 || mean > opt + 1e-6)
            mean_ok = false;
        means << " snr=" << snr << ": mean=" << fmt("%.2f", mean) << "/opt=" << fmt("%.2f", opt)
              << ";";
    }

    std::ostringstream qual;
    qual << " per-q mean sinr_db (cpu_ms):";
    for (const auto& [q, sums] : per_q) {
        const int cnt = per_q_count[q];
        qual << " q=" << q << " " << fmt("%.2f", sums.first / cnt) << " ("
             << fmt("%.1f", sums.second / cnt) << ")";
    }

    CheckOutcome out{"criterion-9 protocol-smoke", bound_ok && mean_ok, ""};
    std::ostringstream os;
    os << rows.size() << " rows in " << fmt("%.1f", secs) << " s, max sinr-opt = "
       << fmt("%.3e", worst_excess) << " dB (bound " << (bound_ok ? "held" : "VIOLATED")
       << ");" << means.str() << qual.str();
    out.detail = os.str();
    return out;
}

CheckOutcome criterion10(const CheckParams& prm)
{
    std::mt19937_64 rng(prm.seed ^ 0x7068617365ULL);
    std::uniform_real_distribution<double> logr(-3.0, 3.0), th(0.0, 2.0 * std::numbers::pi);
    double max_rel = 0.0;
    for (int inst = 0; inst < prm.phase_instances; ++inst) {
        const HermitianMatrix r_s = random_psd(6, rng);
        const HermitianMatrix r_ipn = random_psd(6, rng);
        const CVector w = random_cvec(6, rng);
        const double base = sinr(w, r_s, r_ipn);
        const CVector w2 = std::polar(std::pow(10.0, logr(rng)), th(rng)) * w;
        const double scaled = sinr(w2, r_s, r_ipn);
        max_rel = std::max(max_rel, std::abs(scaled - base) / base);
    }
    CheckOutcome out{"criterion-10 phase-scale-invariance", max_rel <= 1e-12, ""};
    out.detail = std::to_string(prm.phase_instances) +
                 " random (w, r, theta), max relative sinr change = " + fmt("%.3e", max_rel) +
                 " (allowed 1e-12)";
    return out;
}

} // namespace

std::vector<CheckOutcome> acceptance_checks(const CheckParams& params)
{
    std::vector<CheckOutcome> outcomes;
    auto guard = [&](const char* name, const std::function<CheckOutcome()>& fn) {
        try {
            outcomes.push_back(fn());
        } catch (const std::exception& e) {
            outcomes.push_back({name, false, std::string("exception: ") + e.what()});
        }
    };

    OracleStats oracle;
    bool oracle_ok = false;
    try {
        oracle = oracle_suite(params);
        oracle_ok = true;
    } catch (const std::exception& e) {
        outcomes.push_back({"criterion-1 worst-case-attainment", false,
                            std::string("exception: ") + e.what()});
        outcomes.push_back({"criterion-2 max-form-bracketing", false,
                            std::string("exception: ") + e.what()});
    }
    if (oracle_ok) {
        outcomes.push_back(criterion1(oracle));
        outcomes.push_back(criterion2(oracle));
    }
    guard("criterion-3 frobenius-coincidence", [&] { return criterion3(params); });
    guard("criterion-4 soc-tower-exactness", [&] { return criterion4(params); });
    guard("criterion-5 monotone-ascent", [&] { return criterion5(params); });
    guard("criterion-6 eta0-pencil-exactness", [&] { return criterion6(params); });
    guard("criterion-7 small-instance-global", [&] { return criterion7(params); });
    guard("criterion-8 solver-contract", [&] { return criterion8(params); });
    guard("criterion-9 protocol-smoke", [&] { return criterion9(params); });
    guard("criterion-10 phase-scale-invariance", [&] { return criterion10(params); });
    return outcomes;
}

} // namespace rabeam
