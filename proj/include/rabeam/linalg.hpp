#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "rabeam/ext_rational.hpp"

namespace rabeam {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// N x N complex matrix kept exactly Hermitian. Construction symmetrizes the
/// input and rejects it when the skew part exceeds 1e-12 * ||H||_F.
class HermitianMatrix {
  public:
    explicit HermitianMatrix(const CMatrix& m)
    {
        if (m.rows() != m.cols())
            throw std::invalid_argument("HermitianMatrix: matrix must be square");
        const double scale = m.norm();
        const double skew = (m - m.adjoint()).norm();
        if (skew > 1e-12 * scale && scale > 0.0)
            throw std::invalid_argument("HermitianMatrix: skew part " + std::to_string(skew) +
                                        " exceeds tolerance relative to ||H||_F");
        h_ = 0.5 * (m + m.adjoint());
    }

    const CMatrix& matrix() const { return h_; }
    Eigen::Index dim() const { return h_.rows(); }

  private:
    CMatrix h_;
};

/// l_q norm of a complex vector for q in [1, inf]. Exact formulas for
/// q in {1, 2, inf}; moduli and real powers otherwise, rescaled by the
/// max modulus to avoid overflow.
template <typename Derived>
double vec_norm(const Eigen::MatrixBase<Derived>& v, const ExtRational& q)
{
    if (v.size() == 0)
        throw std::invalid_argument("vec_norm: empty vector");
    if (q.is_infinite())
        return v.cwiseAbs().maxCoeff();
    if (q.is_one())
        return v.cwiseAbs().sum();
    if (q.is_two())
        return v.norm();
    const double qd = q.value();
    const double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0)
        return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        acc += std::pow(std::abs(v.derived()(i)) / m, qd);
    return m * std::pow(acc, 1.0 / qd);
}

struct EigDecomposition {
    RVector eigenvalues; // descending
    CMatrix eigenvectors; // columns, unitary, ordered to match
};

/// Spectral decomposition H = U diag(lambda) U^H with eigenvalues sorted
/// descending. Throws on LAPACK-style convergence failure or when the
/// reconstruction error exceeds 1e-10 * ||H||_F.
EigDecomposition hermitian_eig(const HermitianMatrix& h);

struct NotPositiveDefiniteError : std::runtime_error {
    explicit NotPositiveDefiniteError(Eigen::Index pivot_index)
        : std::runtime_error("cholesky_psd: nonpositive pivot at index " + std::to_string(pivot_index)),
          pivot(pivot_index)
    {
    }
    Eigen::Index pivot;
};

/// Lower-triangular L with L L^H = H for positive definite H.
CMatrix cholesky_psd(const HermitianMatrix& h);

struct GramFactor {
    CMatrix q; // M x N with Q^H Q = H up to the rank cutoff
    Eigen::Index rank = 0;
};

/// Q = Lambda_M^{1/2} U_M^H from the eigenpairs with lambda > rank_tol * lambda_max.
/// Throws when lambda_max <= 0 (no signal subspace to factor).
GramFactor gram_factor(const HermitianMatrix& h, double rank_tol = 1e-8);

struct InducedNorm {
    double value = 0.0;
    bool exact = false;
};

/// Matrix induced norm max{ ||D v||_p : ||v||_q = 1 }. Closed forms for
/// q = 1 (max column p-norm), p = inf (max row q*-norm) and (p,q) = (2,2)
/// (spectral norm). Other orders return the best lower bound found from
/// closed-form candidate vectors plus seeded random unit-q-norm probes,
/// flagged inexact.
InducedNorm induced_norm(const CMatrix& d, const ExtRational& p, const ExtRational& q,
                         std::uint64_t probe_seed = 0x5eedULL, int probes = 10000);

} // namespace rabeam
