#include "rabeam/scenario.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rabeam {

CVector steering_vector(const ULAConfig& ula, double theta_deg)
{
    if (ula.n < 2 || !(ula.spacing > 0.0))
        throw std::invalid_argument("ULAConfig: need N >= 2 sensors and positive spacing");
    if (!(std::abs(theta_deg) < 90.0))
        throw std::invalid_argument("steering_vector: |theta| must be below 90 degrees");
    const double phase = 2.0 * std::numbers::pi * ula.spacing *
                         std::sin(theta_deg * std::numbers::pi / 180.0);
    CVector a(ula.n);
    for (int i = 0; i < ula.n; ++i)
        a(i) = std::polar(1.0, phase * i);
    return a;
}

HermitianMatrix scattered_covariance(const ULAConfig& ula, const ScatteredSource& source,
                                     int grid_points)
{
    if (grid_points < 64)
        throw std::invalid_argument("scattered_covariance: grid too coarse (< 64 points)");
    if (!(source.power > 0.0) || !(source.spread_deg >= 0.0))
        throw std::invalid_argument("ScatteredSource: power must be positive, spread nonnegative");
    if (!(std::abs(source.center_deg) < 90.0))
        throw std::invalid_argument("ScatteredSource: center must lie in (-90, 90) degrees");

    if (source.spread_deg == 0.0) {
        const CVector a = steering_vector(ula, source.center_deg);
        return HermitianMatrix(source.power * (a * a.adjoint()));
    }

    double lo, hi;
    if (source.density == ScatteredSource::Density::Gaussian) {
        lo = source.center_deg - 4.0 * source.spread_deg;
        hi = source.center_deg + 4.0 * source.spread_deg;
    } else {
        lo = source.center_deg - 0.5 * source.spread_deg;
        hi = source.center_deg + 0.5 * source.spread_deg;
    }
    const double cap = 90.0 - 1e-9;
    lo = std::max(lo, -cap);
    hi = std::min(hi, cap);

    CMatrix r = CMatrix::Zero(ula.n, ula.n);
    double wsum = 0.0;
    for (int g = 0; g < grid_points; ++g) {
        const double theta = lo + (hi - lo) * (g + 0.5) / grid_points;
        double rho = 1.0;
        if (source.density == ScatteredSource::Density::Gaussian) {
            const double zscore = (theta - source.center_deg) / source.spread_deg;
            rho = std::exp(-0.5 * zscore * zscore);
        }
        const CVector a = steering_vector(ula, theta);
        r.selfadjointView<Eigen::Lower>().rankUpdate(a, rho);
        wsum += rho;
    }
    r = r.selfadjointView<Eigen::Lower>();
    return HermitianMatrix((source.power / wsum) * r);
}

HermitianMatrix sample_covariance(const HermitianMatrix& r_total, int t, std::mt19937_64& rng)
{
    if (t < 1)
        throw std::invalid_argument("sample_covariance: need at least one snapshot");
    const EigDecomposition eig = hermitian_eig(r_total);
    const Eigen::Index n = r_total.dim();
    CMatrix c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        c.col(i) = std::sqrt(std::max(0.0, eig.eigenvalues(i))) * eig.eigenvectors.col(i);
    // y = C z with z circular standard normal: E[yy^H] = C C^H = r_total.
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix acc = CMatrix::Zero(n, n);
    CVector z(n), y(n);
    for (int snap = 0; snap < t; ++snap) {
        for (Eigen::Index i = 0; i < n; ++i)
            z(i) = std::complex<double>(gauss(rng), gauss(rng)) / std::numbers::sqrt2;
        y.noalias() = c * z;
        acc.selfadjointView<Eigen::Lower>().rankUpdate(y, 1.0);
    }
    acc = acc.selfadjointView<Eigen::Lower>();
    return HermitianMatrix(acc / static_cast<double>(t));
}

CovarianceSet build_covariances(const Scenario& sc, std::mt19937_64& rng)
{
    if (sc.snapshots < 1)
        throw std::invalid_argument("Scenario: need at least one snapshot");
    HermitianMatrix r_s = scattered_covariance(sc.ula, sc.signal_true);
    HermitianMatrix r_sp = scattered_covariance(sc.ula, sc.signal_presumed);
    CMatrix ipn = sc.noise_power * CMatrix::Identity(sc.ula.n, sc.ula.n);
    for (const ScatteredSource& src : sc.interferers)
        ipn += scattered_covariance(sc.ula, src).matrix();
    HermitianMatrix r_ipn{ipn};
    HermitianMatrix r_total{r_s.matrix() + r_ipn.matrix()};
    HermitianMatrix r_sample = sample_covariance(r_total, sc.snapshots, rng);
    return CovarianceSet{std::move(r_s), std::move(r_sp), std::move(r_ipn),
                         std::move(r_total), std::move(r_sample)};
}

double sinr(const CVector& w, const HermitianMatrix& r_s, const HermitianMatrix& r_ipn)
{
    if (w.isZero(0.0))
        throw std::invalid_argument("sinr: w must be nonzero");
    const double num = (w.adjoint() * r_s.matrix() * w).value().real();
    const double den = (w.adjoint() * r_ipn.matrix() * w).value().real();
    return num / den;
}

double optimal_sinr(const HermitianMatrix& r_s, const HermitianMatrix& r_ipn)
{
    const EigDecomposition noise = hermitian_eig(r_ipn);
    if (!(noise.eigenvalues(noise.eigenvalues.size() - 1) > 0.0))
        throw std::invalid_argument("optimal_sinr: interference+noise covariance is singular");
    Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> ges(r_s.matrix(), r_ipn.matrix());
    if (ges.info() != Eigen::Success)
        throw std::runtime_error("optimal_sinr: generalized eigensolver failed");
    return ges.eigenvalues()(ges.eigenvalues().size() - 1);
}

} // namespace rabeam
