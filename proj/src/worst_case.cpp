#include "rabeam/worst_case.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rabeam {

namespace {

std::complex<double> phase_of(std::complex<double> v)
{
    const double a = std::abs(v);
    return a > 0.0 ? v / a : std::complex<double>(1.0, 0.0); // arg(0) = 0
}

} // namespace

CVector dual_norm_maximizer(const CVector& x, const ExtRational& q)
{
    const double xq = vec_norm(x, q);
    if (xq == 0.0)
        throw std::invalid_argument("dual_norm_maximizer: x must be nonzero");
    const Eigen::Index n = x.size();
    CVector y = CVector::Zero(n);
    if (q.is_one()) {
        for (Eigen::Index i = 0; i < n; ++i)
            if (std::abs(x(i)) > 0.0)
                y(i) = phase_of(x(i));
        return y;
    }
    if (q.is_infinite()) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (std::abs(x(i)) > best) {
                best = std::abs(x(i));
                imax = i;
            }
        y(imax) = phase_of(x(imax));
        return y;
    }
    const double e = q.value() - 1.0;
    const double scale = std::pow(xq, e);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = std::abs(x(i));
        if (a > 0.0)
            y(i) = phase_of(x(i)) * std::pow(a, e) / scale;
    }
    return y;
}

double min_residual_value(const CMatrix& a, const CVector& x, const CVector& b,
                          const UncertaintySpec& spec)
{
    if (x.isZero(0.0))
        return vec_norm(b, spec.p);
    return std::max(vec_norm(a * x - b, spec.p) - spec.eta * vec_norm(x, spec.q), 0.0);
}

double max_residual_value(const CMatrix& a, const CVector& x, const CVector& b,
                          const UncertaintySpec& spec)
{
    if (x.isZero(0.0))
        return vec_norm(b, spec.p);
    return vec_norm(a * x - b, spec.p) + spec.eta * vec_norm(x, spec.q);
}

PerturbationMatrix worst_case_delta(const CMatrix& a, const CVector& x, const CVector& b,
                                    const UncertaintySpec& spec)
{
    if (x.isZero(0.0))
        throw std::invalid_argument("worst_case_delta: x must be nonzero");
    const CVector r = a * x - b;
    const double rp = vec_norm(r, spec.p);
    const double xq = vec_norm(x, spec.q);
    const CVector y = dual_norm_maximizer(x, spec.q);
    // y^H x = ||x||_q > 0 by construction, so the phase factor is unity;
    // computed anyway to mirror the general formula.
    const std::complex<double> ph = std::conj(phase_of(y.dot(x)));

    PerturbationMatrix out;
    if (rp >= spec.eta * xq) {
        if (rp == 0.0) {
            out.delta = CMatrix::Zero(a.rows(), a.cols());
            out.branch = PerturbationBranch::Zero;
            return out;
        }
        out.delta = -(spec.eta / rp) * ph * r * y.adjoint();
        out.branch = PerturbationBranch::BranchA;
        return out;
    }
    out.delta = -(1.0 / xq) * ph * r * y.adjoint();
    out.branch = PerturbationBranch::BranchB;
    return out;
}

SampleExtremes adversarial_sample(const CMatrix& a, const CVector& x, const CVector& b,
                                  const UncertaintySpec& spec, int count, std::mt19937_64& rng)
{
    if (count < 1)
        throw std::invalid_argument("adversarial_sample: count must be at least 1");
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    const ExtRational qs = spec.q.conjugate();

    auto random_cvec = [&](Eigen::Index len) {
        CVector v(len);
        for (Eigen::Index i = 0; i < len; ++i)
            v(i) = std::complex<double>(gauss(rng), gauss(rng));
        return v;
    };

    SampleExtremes ex;
    ex.min = std::numeric_limits<double>::infinity();
    ex.max = 0.0;
    for (int k = 0; k < count; ++k) {
        CMatrix delta;
        const double scale = (k % 2 == 0) ? 1.0 : unif(rng);
        if (k % 3 != 2) {
            // Rank-one tight family: ||u y(v)^H||_{p,q} = 1 exactly.
            const CVector u = random_cvec(m);
            const CVector v = (k % 3 == 0 && !x.isZero(0.0)) ? x : random_cvec(n);
            const CVector y = dual_norm_maximizer(v, spec.q);
            delta = (scale * spec.eta / vec_norm(u, spec.p)) * u * y.adjoint();
        } else {
            // Dense draw scaled by the all-p valid row-norm upper bound
            // ||( ||row_i||_{q*} )_i||_p >= ||Delta||_{p,q}.
            delta = random_cvec(m * n).reshaped(m, n);
            Eigen::VectorXd rows(m);
            for (Eigen::Index i = 0; i < m; ++i)
                rows(i) = vec_norm(delta.row(i).conjugate(), qs);
            const double bound = vec_norm(rows, spec.p);
            delta *= scale * spec.eta / bound;
        }
        const double res = vec_norm((a + delta) * x - b, spec.p);
        ex.min = std::min(ex.min, res);
        ex.max = std::max(ex.max, res);
    }
    return ex;
}

} // namespace rabeam
