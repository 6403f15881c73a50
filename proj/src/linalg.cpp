#include "rabeam/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>

namespace rabeam {

EigDecomposition hermitian_eig(const HermitianMatrix& h)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: eigensolver did not converge");
    const Eigen::Index n = h.dim();
    EigDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) { // ascending -> descending
        out.eigenvalues(i) = es.eigenvalues()(n - 1 - i);
        out.eigenvectors.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    const CMatrix rec = out.eigenvectors * out.eigenvalues.asDiagonal() *
                        out.eigenvectors.adjoint();
    const double scale = h.matrix().norm();
    if ((rec - h.matrix()).norm() > 1e-10 * std::max(scale, 1e-300))
        throw std::runtime_error("hermitian_eig: reconstruction error exceeds tolerance");
    return out;
}

CMatrix cholesky_psd(const HermitianMatrix& h)
{
    const CMatrix& a = h.matrix();
    const Eigen::Index n = a.rows();
    CMatrix l = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (Eigen::Index k = 0; k < j; ++k)
            d -= std::norm(l(j, k));
        if (!(d > 0.0))
            throw NotPositiveDefiniteError(j);
        l(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            std::complex<double> s = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / l(j, j).real();
        }
    }
    return l;
}

GramFactor gram_factor(const HermitianMatrix& h, double rank_tol)
{
    const EigDecomposition eig = hermitian_eig(h);
    const double lmax = eig.eigenvalues(0);
    if (!(lmax > 0.0))
        throw std::invalid_argument("gram_factor: matrix has no positive eigenvalue");
    Eigen::Index m = 0;
    while (m < eig.eigenvalues.size() && eig.eigenvalues(m) > rank_tol * lmax)
        ++m;
    GramFactor out;
    out.rank = m;
    out.q.resize(m, h.dim());
    for (Eigen::Index i = 0; i < m; ++i)
        out.q.row(i) = std::sqrt(eig.eigenvalues(i)) * eig.eigenvectors.col(i).adjoint();
    return out;
}

namespace {

// v with unit q-norm maximizing |r^H v| for a fixed row r (Holder equality case).
CVector holder_aligned(const CVector& r, const ExtRational& q)
{
    const Eigen::Index n = r.size();
    CVector v = CVector::Zero(n);
    const ExtRational qs = q.conjugate();
    if (q.is_one()) {
        Eigen::Index imax = 0;
        r.cwiseAbs().maxCoeff(&imax);
        const double a = std::abs(r(imax));
        v(imax) = a > 0.0 ? r(imax) / a : std::complex<double>(1.0, 0.0);
        return v;
    }
    if (q.is_infinite()) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = std::abs(r(i));
            v(i) = a > 0.0 ? r(i) / a : std::complex<double>(1.0, 0.0);
        }
        return v;
    }
    // |v_i| proportional to |r_i|^{q*-1}, phases aligned with r.
    const double e = qs.value() - 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = std::abs(r(i));
        if (a > 0.0)
            v(i) = std::pow(a, e) * (r(i) / a);
    }
    const double nv = vec_norm(v, q);
    if (nv > 0.0)
        v /= nv;
    else
        v(0) = 1.0;
    return v;
}

} // namespace

InducedNorm induced_norm(const CMatrix& d, const ExtRational& p, const ExtRational& q,
                         std::uint64_t probe_seed, int probes)
{
    if (d.size() == 0)
        throw std::invalid_argument("induced_norm: empty matrix");
    InducedNorm out;
    if (q.is_one()) {
        for (Eigen::Index j = 0; j < d.cols(); ++j)
            out.value = std::max(out.value, vec_norm(d.col(j), p));
        out.exact = true;
        return out;
    }
    if (p.is_infinite()) {
        const ExtRational qs = q.conjugate();
        for (Eigen::Index i = 0; i < d.rows(); ++i)
            out.value = std::max(out.value, vec_norm(d.row(i).conjugate(), qs));
        out.exact = true;
        return out;
    }
    if (p.is_two() && q.is_two()) {
        const EigDecomposition eig = hermitian_eig(HermitianMatrix(d.adjoint() * d));
        out.value = std::sqrt(std::max(0.0, eig.eigenvalues(0)));
        out.exact = true;
        return out;
    }

    // Lower bound: closed-form candidates plus random unit-q-norm probes.
    auto consider = [&](const CVector& v) {
        const double nv = vec_norm(v, q);
        if (nv > 0.0)
            out.value = std::max(out.value, vec_norm(d * v, p) / nv);
    };
    for (Eigen::Index j = 0; j < d.cols(); ++j)
        consider(CVector::Unit(d.cols(), j));
    for (Eigen::Index i = 0; i < d.rows(); ++i)
        consider(holder_aligned(d.row(i).adjoint(), q));
    const EigDecomposition eig = hermitian_eig(HermitianMatrix(d.adjoint() * d));
    consider(eig.eigenvectors.col(0));

    std::mt19937_64 rng(probe_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVector v(d.cols());
    for (int k = 0; k < probes; ++k) {
        for (Eigen::Index i = 0; i < v.size(); ++i)
            v(i) = std::complex<double>(gauss(rng), gauss(rng));
        consider(v);
    }
    out.exact = false;
    return out;
}

} // namespace rabeam
