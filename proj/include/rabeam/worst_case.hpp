#pragma once

#include <random>

#include "rabeam/ext_rational.hpp"
#include "rabeam/linalg.hpp"

namespace rabeam {

/// Induced-norm uncertainty ball U_{p,q} = {Delta : ||Delta v||_p <= eta ||v||_q}.
struct UncertaintySpec {
    ExtRational p{2};
    ExtRational q{2};
    double eta = 0.0;

    UncertaintySpec() = default;
    UncertaintySpec(ExtRational p_, ExtRational q_, double eta_) : p(p_), q(q_), eta(eta_)
    {
        if (!(eta >= 0.0))
            throw std::invalid_argument("UncertaintySpec: eta must be nonnegative");
    }
};

enum class PerturbationBranch { BranchA, BranchB, Zero };

struct PerturbationMatrix {
    CMatrix delta;
    PerturbationBranch branch = PerturbationBranch::Zero;
};

/// y with ||y||_{p'} = 1 (1/p' + 1/q = 1) and y^H x = ||x||_q exactly.
/// q = inf ties break to the lowest attaining index; arg(0) is taken as 0.
CVector dual_norm_maximizer(const CVector& x, const ExtRational& q);

/// min over Delta in U_{p,q} of ||(A+Delta)x - b||_p
/// = max{ ||Ax-b||_p - eta ||x||_q, 0 }; x = 0 gives ||b||_p.
double min_residual_value(const CMatrix& a, const CVector& x, const CVector& b,
                          const UncertaintySpec& spec);

/// max over Delta in U_{p,q} of ||(A+Delta)x - b||_p = ||Ax-b||_p + eta ||x||_q.
double max_residual_value(const CMatrix& a, const CVector& x, const CVector& b,
                          const UncertaintySpec& spec);

/// The rank-one minimizer attaining min_residual_value (x != 0).
PerturbationMatrix worst_case_delta(const CMatrix& a, const CVector& x, const CVector& b,
                                    const UncertaintySpec& spec);

struct SampleExtremes {
    double min = 0.0;
    double max = 0.0;
};

/// Extremal residuals over `count` sampled members of U_{p,q}: rank-one
/// candidates u y(v)^H built from dual-norm maximizers (the tight family)
/// plus dense Gaussian draws rescaled by a certified induced-norm upper bound.
SampleExtremes adversarial_sample(const CMatrix& a, const CVector& x, const CVector& b,
                                  const UncertaintySpec& spec, int count, std::mt19937_64& rng);

} // namespace rabeam
