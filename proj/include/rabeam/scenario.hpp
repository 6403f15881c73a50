#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rabeam/linalg.hpp"

namespace rabeam {

struct ULAConfig {
    int n = 10;
    double spacing = 0.5; // in wavelengths
};

struct ScatteredSource {
    enum class Density { Gaussian, Uniform };

    Density density = Density::Gaussian;
    double center_deg = 0.0;
    double spread_deg = 0.0; // std dev (Gaussian) or full support width (Uniform)
    double power = 1.0; // linear scale
};

struct Scenario {
    ULAConfig ula;
    ScatteredSource signal_true;
    ScatteredSource signal_presumed;
    std::vector<ScatteredSource> interferers;
    double noise_power = 1.0;
    int snapshots = 50;
};

struct CovarianceSet {
    HermitianMatrix r_s; // true signal
    HermitianMatrix r_s_presumed;
    HermitianMatrix r_ipn; // interference + noise
    HermitianMatrix r_total; // r_s + r_ipn
    HermitianMatrix r_sample; // T-snapshot estimate of r_total
};

/// a_n = exp(j 2*pi*spacing*(n-1)*sin(theta)), so ||a||^2 = N.
CVector steering_vector(const ULAConfig& ula, double theta_deg);

/// Covariance of an incoherently scattered source, gridded over the angular
/// density (Gaussian: center +- 4 spreads; Uniform: the exact support);
/// trace equals N * power.
HermitianMatrix scattered_covariance(const ULAConfig& ula, const ScatteredSource& source,
                                     int grid_points = 2048);

/// (1/T) sum y y^H with y = C z, C a PSD square root of r_total and z
/// circular complex standard normal.
HermitianMatrix sample_covariance(const HermitianMatrix& r_total, int t, std::mt19937_64& rng);

/// All five covariances of the scenario; snapshots drawn from rng.
CovarianceSet build_covariances(const Scenario& sc, std::mt19937_64& rng);

/// (w^H r_s w) / (w^H r_ipn w).
double sinr(const CVector& w, const HermitianMatrix& r_s, const HermitianMatrix& r_ipn);

/// lambda_max(r_ipn^{-1/2} r_s r_ipn^{-1/2}), the SINR upper bound.
double optimal_sinr(const HermitianMatrix& r_s, const HermitianMatrix& r_ipn);

} // namespace rabeam
