#include "rabeam/socp_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rabeam {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::PrimalInfeasible: return "primal_infeasible";
    case SolveStatus::DualInfeasible: return "dual_infeasible";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

double Solution::value(VarId v) const
{
    if (v.prog != program_serial || v.index >= values.size())
        throw std::invalid_argument("Solution::value: VarId does not belong to the solved program");
    return values[v.index];
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// min c'x  s.t.  A x = b,  G x + s = h,  s in (R_+^nlp) x (SOC blocks).
struct StdForm {
    VectorXd c;
    double obj_const = 0.0; // maximize f'x + f0 <=> minimize c'x with c = -f
    MatrixXd a;
    VectorXd b;
    MatrixXd g;
    VectorXd h;
    Eigen::Index nlp = 0;
    std::vector<Eigen::Index> soc_dims;
};

void scatter(const AffineExpr& e, double sign, MatrixXd& m, Eigen::Index row)
{
    for (const auto& [v, coeff] : e.terms())
        m(row, v.index) += sign * coeff;
}

StdForm build_std_form(const ConeProgram& prog)
{
    const Eigen::Index n = static_cast<Eigen::Index>(prog.num_vars());
    StdForm f;
    f.c = VectorXd::Zero(n);
    for (const auto& [v, coeff] : prog.objective().terms())
        f.c(v.index) -= coeff;
    f.obj_const = prog.objective().constant();

    const auto& eqs = prog.equalities();
    f.a = MatrixXd::Zero(static_cast<Eigen::Index>(eqs.size()), n);
    f.b = VectorXd::Zero(static_cast<Eigen::Index>(eqs.size()));
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        scatter(eqs[i], 1.0, f.a, static_cast<Eigen::Index>(i));
        f.b(static_cast<Eigen::Index>(i)) = -eqs[i].constant();
    }

    const auto nonneg = prog.nonneg_list();
    f.nlp = static_cast<Eigen::Index>(nonneg.size());
    Eigen::Index m = f.nlp;
    for (const auto& blk : prog.soc_blocks()) {
        f.soc_dims.push_back(1 + static_cast<Eigen::Index>(blk.u.size()));
        m += f.soc_dims.back();
    }
    // A program with no cone rows gets one vacuous slack row 0'x <= 1 so the
    // homogeneous embedding always has a nonempty cone.
    const bool pad = (m == 0);
    if (pad)
        m = f.nlp = 1;
    f.g = MatrixXd::Zero(m, n);
    f.h = VectorXd::Zero(m);
    Eigen::Index r = 0;
    if (pad) {
        f.h(r++) = 1.0;
    } else {
        for (std::uint32_t idx : nonneg) {
            f.g(r, static_cast<Eigen::Index>(idx)) = -1.0;
            ++r;
        }
        for (const auto& blk : prog.soc_blocks()) {
            scatter(blk.t, -1.0, f.g, r);
            f.h(r) = blk.t.constant();
            ++r;
            for (const auto& u : blk.u) {
                scatter(u, -1.0, f.g, r);
                f.h(r) = u.constant();
                ++r;
            }
        }
    }
    if (!f.c.allFinite() || !f.a.allFinite() || !f.b.allFinite() || !f.g.allFinite() ||
        !f.h.allFinite())
        throw std::invalid_argument("solve: program data contains NaN or Inf");
    return f;
}

// ---- cone utilities on stacked (nlp, soc blocks) vectors ----

struct ConeLayout {
    Eigen::Index nlp = 0;
    std::vector<Eigen::Index> socs;
    Eigen::Index m = 0;
    Eigen::Index degree() const { return nlp + static_cast<Eigen::Index>(socs.size()); }
};

double cone_margin(const ConeLayout& lay, const VectorXd& u)
{
    double margin = kInf;
    if (lay.nlp > 0)
        margin = u.head(lay.nlp).minCoeff();
    Eigen::Index off = lay.nlp;
    for (Eigen::Index dim : lay.socs) {
        margin = std::min(margin, u(off) - u.segment(off + 1, dim - 1).norm());
        off += dim;
    }
    return margin;
}

VectorXd cone_identity(const ConeLayout& lay)
{
    VectorXd e = VectorXd::Zero(lay.m);
    e.head(lay.nlp).setOnes();
    Eigen::Index off = lay.nlp;
    for (Eigen::Index dim : lay.socs) {
        e(off) = 1.0;
        off += dim;
    }
    return e;
}

VectorXd jordan_prod(const ConeLayout& lay, const VectorXd& u, const VectorXd& v)
{
    VectorXd out(lay.m);
    out.head(lay.nlp) = u.head(lay.nlp).cwiseProduct(v.head(lay.nlp));
    Eigen::Index off = lay.nlp;
    for (Eigen::Index dim : lay.socs) {
        const auto ub = u.segment(off + 1, dim - 1);
        const auto vb = v.segment(off + 1, dim - 1);
        out(off) = u.segment(off, dim).dot(v.segment(off, dim));
        out.segment(off + 1, dim - 1) = u(off) * vb + v(off) * ub;
        off += dim;
    }
    return out;
}

// Largest alpha in [0, cap] with u + alpha*du staying in the cone.
double step_to_boundary(const ConeLayout& lay, const VectorXd& u, const VectorXd& du, double cap)
{
    double alpha = cap;
    for (Eigen::Index i = 0; i < lay.nlp; ++i)
        if (du(i) < 0.0)
            alpha = std::min(alpha, -u(i) / du(i));
    Eigen::Index off = lay.nlp;
    for (Eigen::Index dim : lay.socs) {
        const auto ub = u.segment(off + 1, dim - 1);
        const auto db = du.segment(off + 1, dim - 1);
        const double a = du(off) * du(off) - db.squaredNorm();
        const double b = 2.0 * (u(off) * du(off) - ub.dot(db));
        const double c = u(off) * u(off) - ub.squaredNorm();
        if (du(off) < 0.0)
            alpha = std::min(alpha, -u(off) / du(off));
        // First positive root of a*alpha^2 + b*alpha + c with c = margin > 0.
        const double disc = std::max(0.0, b * b - 4.0 * a * c);
        if (a == 0.0) {
            if (b < 0.0)
                alpha = std::min(alpha, -c / b);
        } else if (a > 0.0) {
            if (b * b - 4.0 * a * c >= 0.0) {
                const double r1 = (-b - std::sqrt(disc)) / (2.0 * a);
                if (r1 > 0.0)
                    alpha = std::min(alpha, r1);
            }
        } else {
            const double r = (-b - std::sqrt(disc)) / (2.0 * a);
            if (r > 0.0)
                alpha = std::min(alpha, r);
        }
        off += dim;
    }
    return alpha;
}

// ---- Nesterov-Todd scaling ----

struct SocScale {
    double eta = 1.0;
    VectorXd wbar; // unit hyperbolic vector, wbar0^2 - ||wbar_rest||^2 = 1
};

struct Scaling {
    VectorXd wlp; // w_i = sqrt(s_i / z_i)
    std::vector<SocScale> socs;
    VectorXd lambda; // W z = W^{-1} s
};

void apply_wbar(const VectorXd& wbar, double sign, Eigen::Ref<VectorXd> v)
{
    // sign=+1: Wbar v; sign=-1: Wbar^{-1} v (= J Wbar J v).
    const Eigen::Index k = wbar.size();
    const double w0 = wbar(0);
    const auto wr = wbar.tail(k - 1);
    const double v0 = v(0);
    const double dot = sign * wr.dot(v.tail(k - 1));
    v(0) = w0 * v0 + dot;
    v.tail(k - 1) += sign * (v0 + dot / (1.0 + w0)) * wr;
}

bool update_scaling(const ConeLayout& lay, const VectorXd& s, const VectorXd& z, Scaling& sc)
{
    sc.wlp.resize(lay.nlp);
    sc.socs.assign(lay.socs.size(), {});
    sc.lambda.resize(lay.m);
    for (Eigen::Index i = 0; i < lay.nlp; ++i) {
        if (!(s(i) > 0.0) || !(z(i) > 0.0))
            return false;
        sc.wlp(i) = std::sqrt(s(i) / z(i));
        sc.lambda(i) = std::sqrt(s(i) * z(i));
    }
    Eigen::Index off = lay.nlp;
    for (std::size_t k = 0; k < lay.socs.size(); ++k) {
        const Eigen::Index dim = lay.socs[k];
        const auto sb = s.segment(off, dim);
        const auto zb = z.segment(off, dim);
        const double rho_s = sb(0) * sb(0) - sb.tail(dim - 1).squaredNorm();
        const double rho_z = zb(0) * zb(0) - zb.tail(dim - 1).squaredNorm();
        if (!(rho_s > 0.0) || !(rho_z > 0.0) || !(sb(0) > 0.0) || !(zb(0) > 0.0))
            return false;
        const VectorXd sn = sb / std::sqrt(rho_s);
        VectorXd znj = zb / std::sqrt(rho_z);
        const double gamma = std::sqrt((1.0 + sn.dot(znj)) / 2.0);
        znj.tail(dim - 1) *= -1.0; // J z_normalized
        SocScale& ss = sc.socs[k];
        ss.wbar = (sn + znj) / (2.0 * gamma);
        ss.eta = std::pow(rho_s / rho_z, 0.25);
        VectorXd lam = zb;
        apply_wbar(ss.wbar, +1.0, lam);
        sc.lambda.segment(off, dim) = ss.eta * lam;
        off += dim;
    }
    return true;
}

void apply_w(const ConeLayout& lay, const Scaling& sc, VectorXd& v, int power)
{
    // power in {+1, -1}: multiply by W or W^{-1} in place.
    if (power > 0)
        v.head(lay.nlp).array() *= sc.wlp.array();
    else
        v.head(lay.nlp).array() /= sc.wlp.array();
    Eigen::Index off = lay.nlp;
    for (std::size_t k = 0; k < lay.socs.size(); ++k) {
        const Eigen::Index dim = lay.socs[k];
        VectorXd blk = v.segment(off, dim);
        apply_wbar(sc.socs[k].wbar, power > 0 ? +1.0 : -1.0, blk);
        v.segment(off, dim) = (power > 0 ? sc.socs[k].eta : 1.0 / sc.socs[k].eta) * blk;
        off += dim;
    }
}

VectorXd lambda_solve(const ConeLayout& lay, const VectorXd& lam, const VectorXd& d)
{
    // x with lam o x = d.
    VectorXd x(lay.m);
    x.head(lay.nlp) = d.head(lay.nlp).cwiseQuotient(lam.head(lay.nlp));
    Eigen::Index off = lay.nlp;
    for (Eigen::Index dim : lay.socs) {
        const auto lb = lam.segment(off + 1, dim - 1);
        const auto db = d.segment(off + 1, dim - 1);
        const double det = lam(off) * lam(off) - lb.squaredNorm();
        const double x0 = (lam(off) * d(off) - lb.dot(db)) / det;
        x(off) = x0;
        x.segment(off + 1, dim - 1) = (db - x0 * lb) / lam(off);
        off += dim;
    }
    return x;
}

// ---- quasi-definite LDL' with fixed order, dynamic pivots, refinement ----

class KktSolver {
  public:
    void factor(const MatrixXd& k0, Eigen::Index n_pos, double delta)
    {
        const Eigen::Index nn = k0.rows();
        n_pos_ = n_pos;
        f_ = k0;
        for (Eigen::Index i = 0; i < nn; ++i)
            f_(i, i) += (i < n_pos ? delta : -delta);
        d_.resize(nn);
        const double floor =
            std::max(delta, 1e-14 * (1.0 + k0.diagonal().cwiseAbs().maxCoeff()));
        VectorXd v(nn);
        for (Eigen::Index j = 0; j < nn; ++j) {
            v.head(j) = f_.row(j).head(j).transpose().cwiseProduct(d_.head(j));
            double dj = f_(j, j) - f_.row(j).head(j).dot(v.head(j));
            if (j < n_pos_)
                dj = std::max(dj, floor);
            else
                dj = std::min(dj, -floor);
            d_(j) = dj;
            if (j + 1 < nn)
                f_.col(j).tail(nn - j - 1) =
                    (f_.col(j).tail(nn - j - 1) - f_.bottomLeftCorner(nn - j - 1, j) * v.head(j)) /
                    dj;
        }
    }

    VectorXd solve(const VectorXd& rhs) const
    {
        VectorXd x = f_.triangularView<Eigen::UnitLower>().solve(rhs);
        x.array() /= d_.array();
        f_.transpose().triangularView<Eigen::UnitUpper>().solveInPlace(x);
        return x;
    }

  private:
    MatrixXd f_;
    VectorXd d_;
    Eigen::Index n_pos_ = 0;
};

struct Direction {
    VectorXd dx, dy, dz;
};

} // namespace

Solution DenseIpmBackend::solve(const ConeProgram& prog, const SolverConfig& cfg) const
{
    if (!(cfg.tolerance > 0.0))
        throw std::invalid_argument("SolverConfig: tolerance must be positive");
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("SolverConfig: max_iterations must be at least 1");
    if (!prog.frozen())
        throw std::invalid_argument("solve: program must be frozen");
    if (prog.num_vars() == 0)
        throw std::invalid_argument("solve: structurally empty program");

    const StdForm f = build_std_form(prog);
    const Eigen::Index n = f.c.size();
    const Eigen::Index p = f.b.size();
    ConeLayout lay;
    lay.nlp = f.nlp;
    lay.socs = f.soc_dims;
    lay.m = f.g.rows();

    const double bnorm = p > 0 ? f.b.lpNorm<Eigen::Infinity>() : 0.0;
    const double hnorm = f.h.lpNorm<Eigen::Infinity>();
    const double cnorm = f.c.lpNorm<Eigen::Infinity>();
    const double certscale = 1.0 + std::max({bnorm, hnorm, cnorm});
    const Eigen::Index nu = lay.degree();

    Solution sol;
    sol.program_serial = prog.serial();
    sol.values.assign(static_cast<std::size_t>(n), 0.0);

    Scaling sc;
    KktSolver kkt;
    MatrixXd winv_g;

    auto assemble = [&]() {
        winv_g = f.g;
        for (Eigen::Index i = 0; i < lay.nlp; ++i)
            winv_g.row(i) /= sc.wlp(i);
        Eigen::Index off = lay.nlp;
        for (const SocScale& ss : sc.socs) {
            const Eigen::Index dim = ss.wbar.size();
            auto blk = winv_g.middleRows(off, dim);
            const double w0 = ss.wbar(0);
            const auto wr = ss.wbar.tail(dim - 1);
            const Eigen::RowVectorXd top = blk.row(0);
            const Eigen::RowVectorXd dot = wr.transpose() * blk.bottomRows(dim - 1);
            blk.row(0) = w0 * top - dot;
            blk.bottomRows(dim - 1) += wr * ((dot / (1.0 + w0)) - top);
            blk /= ss.eta;
            off += dim;
        }
        MatrixXd k0 = MatrixXd::Zero(n + p, n + p);
        k0.topLeftCorner(n, n) = winv_g.transpose() * winv_g;
        if (p > 0) {
            k0.topRightCorner(n, p) = f.a.transpose();
            k0.bottomLeftCorner(p, n) = f.a;
        }
        kkt.factor(k0, n, cfg.regularization);
    };

    // One pass through the z-eliminated 2x2 factorization.
    auto reduced = [&](const VectorXd& r1, const VectorXd& r2, const VectorXd& r3) {
        VectorXd w2r3 = r3;
        apply_w(lay, sc, w2r3, -1);
        apply_w(lay, sc, w2r3, -1);
        VectorXd rhs(n + p);
        rhs.head(n) = r1 + f.g.transpose() * w2r3;
        rhs.tail(p) = r2;
        const VectorXd xy = kkt.solve(rhs);
        Direction d;
        d.dx = xy.head(n);
        d.dy = xy.tail(p);
        d.dz = f.g * d.dx - r3;
        apply_w(lay, sc, d.dz, -1);
        apply_w(lay, sc, d.dz, -1);
        return d;
    };

    // Solve [0 A' G'; A 0 0; G 0 -W^2][dx;dy;dz] = [r1;r2;r3], refining
    // against the full system: the Schur back-substitution alone leaves an
    // eps*cond(W^2) dual residual that grows as mu shrinks.
    auto solve3 = [&](const VectorXd& r1, const VectorXd& r2, const VectorXd& r3) {
        Direction d = reduced(r1, r2, r3);
        const double rnorm = std::max({r1.lpNorm<Eigen::Infinity>(),
                                       p > 0 ? r2.lpNorm<Eigen::Infinity>() : 0.0,
                                       r3.lpNorm<Eigen::Infinity>()});
        for (int round = 0; round < 3; ++round) {
            VectorXd w2dz = d.dz;
            apply_w(lay, sc, w2dz, +1);
            apply_w(lay, sc, w2dz, +1);
            VectorXd e1 = r1 - f.g.transpose() * d.dz;
            if (p > 0)
                e1 -= f.a.transpose() * d.dy;
            const VectorXd e2 = r2 - f.a * d.dx;
            const VectorXd e3 = r3 - f.g * d.dx + w2dz;
            const double enorm = std::max({e1.lpNorm<Eigen::Infinity>(),
                                           p > 0 ? e2.lpNorm<Eigen::Infinity>() : 0.0,
                                           e3.lpNorm<Eigen::Infinity>()});
            if (enorm <= 1e-14 * (1.0 + rnorm))
                break;
            const Direction c = reduced(e1, e2, e3);
            d.dx += c.dx;
            d.dy += c.dy;
            d.dz += c.dz;
        }
        return d;
    };

    // Identity-scaling initialization: primal part from [0;b;h], dual part
    // from [-c;0;0], then shift s and z into the cone interior.
    sc.wlp = VectorXd::Ones(lay.nlp);
    sc.socs.assign(lay.socs.size(), {});
    {
        Eigen::Index off = 0;
        for (std::size_t k = 0; k < lay.socs.size(); ++k) {
            sc.socs[k].wbar = VectorXd::Zero(lay.socs[k]);
            sc.socs[k].wbar(0) = 1.0;
            sc.socs[k].eta = 1.0;
            off += lay.socs[k];
        }
    }
    assemble();
    const Direction prim = solve3(VectorXd::Zero(n), f.b, f.h);
    const Direction dual = solve3(-f.c, VectorXd::Zero(p), VectorXd::Zero(lay.m));
    VectorXd x = prim.dx;
    VectorXd y = dual.dy;
    VectorXd s = -prim.dz;
    VectorXd z = dual.dz;
    const VectorXd e = cone_identity(lay);
    if (const double margin = cone_margin(lay, s); margin <= 0.0)
        s += (1.0 - margin) * e;
    if (const double margin = cone_margin(lay, z); margin <= 0.0)
        z += (1.0 - margin) * e;
    double tau = 1.0;
    double kappa = 1.0;

    const double tol = cfg.tolerance;
    SolveStatus status = SolveStatus::MaxIterations;
    double pres = kInf, dres = kInf, relgap = kInf;

    // Iterates can disintegrate once mu shrinks past the double-precision
    // floor; keep the best-scored one to report on non-optimal exits.
    double best_score = kInf;
    VectorXd best_x = x;
    double best_tau = tau, best_pres = kInf, best_dres = kInf, best_relgap = kInf;

    for (int iter = 0;; ++iter) {
        const VectorXd d1 = f.a.transpose() * y + f.g.transpose() * z + f.c * tau;
        const VectorXd d2 = f.a * x - f.b * tau;
        const VectorXd d3 = f.g * x + s - f.h * tau;
        const double d4 = f.c.dot(x) + f.b.dot(y) + f.h.dot(z) + kappa;

        const double pobj_min = f.c.dot(x) / tau;
        const double dobj_min = -(f.b.dot(y) + f.h.dot(z)) / tau;
        pres = std::max(p > 0 ? d2.lpNorm<Eigen::Infinity>() / (1.0 + bnorm) : 0.0,
                        d3.lpNorm<Eigen::Infinity>() / (1.0 + hnorm)) /
               tau;
        dres = d1.lpNorm<Eigen::Infinity>() / (1.0 + cnorm) / tau;
        const double gap_abs = std::abs(pobj_min - dobj_min);
        relgap = gap_abs / std::max(1.0, 0.5 * (std::abs(pobj_min) + std::abs(dobj_min)));

        if (const double score = std::max({pres, dres, relgap}); score < best_score) {
            best_score = score;
            best_x = x;
            best_tau = tau;
            best_pres = pres;
            best_dres = dres;
            best_relgap = relgap;
        }

        sol.iterations = iter;
        if (pres <= tol && dres <= tol && relgap <= tol) {
            status = SolveStatus::Optimal;
            break;
        }
        const double by_hz = f.b.dot(y) + f.h.dot(z);
        if (by_hz < 0.0) {
            const VectorXd cert = f.a.transpose() * y + f.g.transpose() * z;
            if (cert.lpNorm<Eigen::Infinity>() / (-by_hz) <= tol * certscale) {
                status = SolveStatus::PrimalInfeasible;
                break;
            }
        }
        const double cx = f.c.dot(x);
        if (cx < 0.0) {
            const double vio = std::max(p > 0 ? (f.a * x).lpNorm<Eigen::Infinity>() : 0.0,
                                        (f.g * x + s).lpNorm<Eigen::Infinity>());
            if (vio / (-cx) <= tol * certscale) {
                status = SolveStatus::DualInfeasible;
                break;
            }
        }
        if (iter >= cfg.max_iterations) {
            status = SolveStatus::MaxIterations;
            break;
        }

        const double mu = (s.dot(z) + tau * kappa) / static_cast<double>(nu + 1);
        if (!(mu > 0.0) || !update_scaling(lay, s, z, sc)) {
            status = SolveStatus::NumericalFailure;
            break;
        }
        assemble();

        const Direction u1 = solve3(-f.c, f.b, f.h);
        const double rho1 = f.c.dot(u1.dx) + f.b.dot(u1.dy) + f.h.dot(u1.dz);

        auto combine = [&](double sigma, const VectorXd& lam_ds, double dkappa_rhs,
                           Direction& dir, double& dtau, double& dkappa, VectorXd& dsv) {
            VectorXd wld = lam_ds;
            apply_w(lay, sc, wld, +1);
            const Direction u2 =
                solve3(-(1.0 - sigma) * d1, -(1.0 - sigma) * d2, -(1.0 - sigma) * d3 - wld);
            const double rho2 = f.c.dot(u2.dx) + f.b.dot(u2.dy) + f.h.dot(u2.dz);
            const double den = rho1 - kappa / tau;
            dtau = (-(1.0 - sigma) * d4 - rho2 - dkappa_rhs / tau) / den;
            dir.dx = u2.dx + dtau * u1.dx;
            dir.dy = u2.dy + dtau * u1.dy;
            dir.dz = u2.dz + dtau * u1.dz;
            VectorXd w2dz = dir.dz;
            apply_w(lay, sc, w2dz, +1);
            apply_w(lay, sc, w2dz, +1);
            dsv = wld - w2dz;
            dkappa = (dkappa_rhs - kappa * dtau) / tau;
        };

        // Affine predictor.
        Direction aff;
        double dtau_a, dkappa_a;
        VectorXd ds_a;
        combine(0.0, -sc.lambda, -tau * kappa, aff, dtau_a, dkappa_a, ds_a);
        double alpha_a = std::min(step_to_boundary(lay, s, ds_a, 1.0),
                                  step_to_boundary(lay, z, aff.dz, 1.0));
        if (dtau_a < 0.0)
            alpha_a = std::min(alpha_a, -tau / dtau_a);
        if (dkappa_a < 0.0)
            alpha_a = std::min(alpha_a, -kappa / dkappa_a);
        const double mu_aff = ((s + alpha_a * ds_a).dot(z + alpha_a * aff.dz) +
                               (tau + alpha_a * dtau_a) * (kappa + alpha_a * dkappa_a)) /
                              static_cast<double>(nu + 1);
        const double sigma = std::clamp(std::pow(std::max(0.0, mu_aff / mu), 3.0), 0.0, 0.999);

        // Mehrotra corrector.
        VectorXd winv_ds = ds_a;
        apply_w(lay, sc, winv_ds, -1);
        VectorXd wdz = aff.dz;
        apply_w(lay, sc, wdz, +1);
        const VectorXd gamma = jordan_prod(lay, winv_ds, wdz);
        const VectorXd ds_rhs =
            sigma * mu * e - jordan_prod(lay, sc.lambda, sc.lambda) - gamma;
        const double dkappa_rhs = sigma * mu - tau * kappa - dtau_a * dkappa_a;

        Direction dir;
        double dtau, dkappa;
        VectorXd ds;
        combine(sigma, lambda_solve(lay, sc.lambda, ds_rhs), dkappa_rhs, dir, dtau, dkappa, ds);

        double alpha = std::min(step_to_boundary(lay, s, ds, 1.0 / 0.99),
                                step_to_boundary(lay, z, dir.dz, 1.0 / 0.99));
        if (dtau < 0.0)
            alpha = std::min(alpha, -tau / dtau);
        if (dkappa < 0.0)
            alpha = std::min(alpha, -kappa / dkappa);
        alpha = std::min(1.0, 0.99 * alpha);
        if (!(alpha > 1e-10) || !dir.dx.allFinite() || !ds.allFinite()) {
            status = SolveStatus::NumericalFailure;
            break;
        }

        x += alpha * dir.dx;
        y += alpha * dir.dy;
        z += alpha * dir.dz;
        s += alpha * ds;
        tau += alpha * dtau;
        kappa += alpha * dkappa;

        IterationStat st;
        st.mu = mu;
        st.step = alpha;
        st.sigma = sigma;
        st.primal_residual = pres;
        st.dual_residual = dres;
        st.pobj = -pobj_min + f.obj_const;
        st.dobj = -dobj_min + f.obj_const;
        st.gap = gap_abs;
        st.tau = tau;
        st.kappa = kappa;
        sol.trace.push_back(st);
    }

    sol.status = status;
    sol.primal_residual = pres;
    sol.dual_residual = dres;
    sol.gap_residual = relgap;
    if (status == SolveStatus::Optimal) {
        for (Eigen::Index i = 0; i < n; ++i)
            sol.values[static_cast<std::size_t>(i)] = x(i) / tau;
        sol.objective = -f.c.dot(x) / tau + f.obj_const;
    } else if (status == SolveStatus::MaxIterations || status == SolveStatus::NumericalFailure) {
        sol.primal_residual = best_pres;
        sol.dual_residual = best_dres;
        sol.gap_residual = best_relgap;
        for (Eigen::Index i = 0; i < n; ++i)
            sol.values[static_cast<std::size_t>(i)] = best_x(i) / best_tau;
        sol.objective = -f.c.dot(best_x) / best_tau + f.obj_const;
    } else {
        for (Eigen::Index i = 0; i < n; ++i)
            sol.values[static_cast<std::size_t>(i)] = x(i);
    }
    return sol;
}

Solution solve(const ConeProgram& prog, const SolverConfig& cfg)
{
    static const DenseIpmBackend backend;
    return backend.solve(prog, cfg);
}

namespace {
double eval(const AffineExpr& e, const Solution& sol)
{
    double v = e.constant();
    for (const auto& [var, coeff] : e.terms())
        v += coeff * sol.value(var);
    return v;
}
} // namespace

double ResidualReport::max_equality() const
{
    double m = 0.0;
    for (double v : equality_violation)
        m = std::max(m, v);
    return m;
}

double ResidualReport::max_nonneg() const
{
    double m = 0.0;
    for (double v : nonneg_violation)
        m = std::max(m, v);
    return m;
}

double ResidualReport::max_soc() const
{
    double m = 0.0;
    for (double v : soc_violation)
        m = std::max(m, v);
    return m;
}

int ResidualReport::worst_soc() const
{
    int idx = -1;
    double m = -1.0;
    for (std::size_t i = 0; i < soc_violation.size(); ++i)
        if (soc_violation[i] > m) {
            m = soc_violation[i];
            idx = static_cast<int>(i);
        }
    return idx;
}

ResidualReport verify(const ConeProgram& prog, const Solution& sol)
{
    if (sol.values.size() != prog.num_vars())
        throw std::invalid_argument("verify: solution does not cover all variables");
    ResidualReport rep;
    for (const auto& eq : prog.equalities())
        rep.equality_violation.push_back(std::abs(eval(eq, sol)));
    for (std::uint32_t idx : prog.nonneg_list())
        rep.nonneg_violation.push_back(
            std::max(0.0, -sol.values[static_cast<std::size_t>(idx)]));
    for (const auto& blk : prog.soc_blocks()) {
        double un = 0.0;
        for (const auto& u : blk.u) {
            const double v = eval(u, sol);
            un += v * v;
        }
        rep.soc_violation.push_back(std::max(0.0, std::sqrt(un) - eval(blk.t, sol)));
    }
    rep.objective = eval(prog.objective(), sol);
    return rep;
}

} // namespace rabeam
