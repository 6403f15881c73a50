#pragma once

#include <vector>

#include "rabeam/cone_program.hpp"
#include "rabeam/ext_rational.hpp"
#include "rabeam/linalg.hpp"

namespace rabeam {

/// Re(c^H w) as an affine expression over the real embedding of w.
AffineExpr re_inner(const CVector& c, const std::vector<ComplexVarRef>& w);

/// Real embedding of the complex matrix-vector product A w, stacked as
/// [Re(A w); Im(A w)] (2M expressions for an M x N matrix).
std::vector<AffineExpr> complex_matvec(const CMatrix& a, const std::vector<ComplexVarRef>& w);

/// xi >= |z| as the 3-dim SOC ||(z.re, z.im)|| <= xi.
void modulus_epigraph(ConeProgram& prog, ComplexVarRef z, VarId xi);

/// Binary-tree geometric-mean cone: xi <= (prod leaves)^{1/|leaves|} for a
/// power-of-two leaf multiset. Equal leaves are grouped (rarest first) so
/// identical pairs collapse without a constraint; each remaining pair (a, b)
/// becomes one standard SOC sqrt(y^2 + ((a-b)/2)^2) <= (a+b)/2.
void geo_mean_tower(ConeProgram& prog, VarId xi, std::vector<VarId> leaves);

/// xi <= s^{(a-b)/a} v^{b/a} for finite rational q = a/b > 1, via
/// geo_mean_tower over the multiset {s x (a-b), v x b, xi x (2^L - a)}
/// with 2^L the smallest power of two >= a.
void power_epigraph(ConeProgram& prog, VarId xi, VarId s, VarId v, const ExtRational& q);

/// ||w||_q <= s for rational q >= 1 or q = inf. The projection of the
/// feasible set onto (w, s) is exactly the norm epigraph.
void lq_epigraph(ConeProgram& prog, const std::vector<ComplexVarRef>& w, VarId s,
                 const ExtRational& q);

/// w^H (R+gI) w <= 1 written as the SOC ||[Re(L^H w); Im(L^H w)]|| <= 1,
/// with L the lower-triangular factor satisfying L L^H = R + gI.
void quad_constraint(ConeProgram& prog, const std::vector<ComplexVarRef>& w, const CMatrix& l);

} // namespace rabeam
