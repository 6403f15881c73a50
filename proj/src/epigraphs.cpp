#include "rabeam/epigraphs.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace rabeam {

AffineExpr re_inner(const CVector& c, const std::vector<ComplexVarRef>& w)
{
    if (static_cast<std::size_t>(c.size()) != w.size())
        throw std::invalid_argument("re_inner: dimension mismatch");
    AffineExpr e;
    for (std::size_t j = 0; j < w.size(); ++j) {
        e.add_term(w[j].re, c(j).real());
        e.add_term(w[j].im, c(j).imag());
    }
    return e;
}

std::vector<AffineExpr> complex_matvec(const CMatrix& a, const std::vector<ComplexVarRef>& w)
{
    if (static_cast<std::size_t>(a.cols()) != w.size())
        throw std::invalid_argument("complex_matvec: dimension mismatch");
    const Eigen::Index m = a.rows();
    std::vector<AffineExpr> out(2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            const double re = a(i, j).real();
            const double im = a(i, j).imag();
            out[i].add_term(w[j].re, re);
            out[i].add_term(w[j].im, -im);
            out[m + i].add_term(w[j].re, im);
            out[m + i].add_term(w[j].im, re);
        }
    }
    return out;
}

void modulus_epigraph(ConeProgram& prog, ComplexVarRef z, VarId xi)
{
    prog.check_owned(z.re);
    prog.check_owned(z.im);
    prog.check_owned(xi);
    prog.add_soc(AffineExpr(xi), {AffineExpr(z.re), AffineExpr(z.im)});
}

namespace {

// Rotated constraint y <= sqrt(a*b) lowered to the standard SOC
// sqrt(y^2 + ((a-b)/2)^2) <= (a+b)/2.
void add_geomean_pair(ConeProgram& prog, const AffineExpr& y, VarId a, VarId b)
{
    AffineExpr half_sum = 0.5 * (AffineExpr(a) + AffineExpr(b));
    AffineExpr half_diff = 0.5 * (AffineExpr(a) - AffineExpr(b));
    prog.add_soc(std::move(half_sum), {y, std::move(half_diff)});
}

} // namespace

void geo_mean_tower(ConeProgram& prog, VarId xi, std::vector<VarId> leaves)
{
    prog.check_owned(xi);
    if (leaves.empty())
        throw std::invalid_argument("geo_mean_tower: no leaves");
    if ((leaves.size() & (leaves.size() - 1)) != 0)
        throw std::invalid_argument("geo_mean_tower: leaf count must be a power of two");
    for (VarId v : leaves)
        prog.check_owned(v);

    // Group identical leaves, rarest group first (stable on ties), so that
    // repeated variables pair with themselves and collapse.
    std::map<std::uint32_t, std::size_t> mult;
    for (VarId v : leaves)
        ++mult[v.index];
    std::stable_sort(leaves.begin(), leaves.end(), [&](VarId a, VarId b) {
        if (mult[a.index] != mult[b.index])
            return mult[a.index] < mult[b.index];
        return a.index < b.index;
    });

    std::size_t node = 0;
    while (leaves.size() > 2) {
        std::vector<VarId> next;
        next.reserve(leaves.size() / 2);
        for (std::size_t i = 0; i < leaves.size(); i += 2) {
            if (leaves[i] == leaves[i + 1]) {
                next.push_back(leaves[i]);
                continue;
            }
            const VarId y = prog.add_var("gm" + std::to_string(prog.num_vars()) + "_" +
                                         std::to_string(node++));
            prog.add_nonneg(y);
            add_geomean_pair(prog, AffineExpr(y), leaves[i], leaves[i + 1]);
            next.push_back(y);
        }
        leaves = std::move(next);
    }
    if (leaves.size() == 1 || leaves[0] == leaves[1]) {
        prog.add_linear_le(AffineExpr(xi), AffineExpr(leaves[0]));
        return;
    }
    add_geomean_pair(prog, AffineExpr(xi), leaves[0], leaves[1]);
}

void power_epigraph(ConeProgram& prog, VarId xi, VarId s, VarId v, const ExtRational& q)
{
    if (q.is_infinite() || q.is_one())
        throw std::invalid_argument("power_epigraph: requires finite q > 1");
    const std::int64_t a = q.num();
    const std::int64_t b = q.den();
    std::size_t pow2 = 1;
    while (pow2 < static_cast<std::size_t>(a))
        pow2 *= 2;
    std::vector<VarId> leaves;
    leaves.reserve(pow2);
    leaves.insert(leaves.end(), static_cast<std::size_t>(a - b), s);
    leaves.insert(leaves.end(), static_cast<std::size_t>(b), v);
    leaves.insert(leaves.end(), pow2 - static_cast<std::size_t>(a), xi);
    geo_mean_tower(prog, xi, std::move(leaves));
}

void lq_epigraph(ConeProgram& prog, const std::vector<ComplexVarRef>& w, VarId s,
                 const ExtRational& q)
{
    if (w.empty())
        throw std::invalid_argument("lq_epigraph: empty variable list");
    prog.check_owned(s);

    if (q.is_infinite()) {
        for (const ComplexVarRef& z : w)
            modulus_epigraph(prog, z, s);
        return;
    }
    if (q.is_two()) {
        std::vector<AffineExpr> u;
        u.reserve(2 * w.size());
        for (const ComplexVarRef& z : w)
            u.emplace_back(z.re);
        for (const ComplexVarRef& z : w)
            u.emplace_back(z.im);
        prog.add_soc(AffineExpr(s), std::move(u));
        return;
    }

    std::vector<VarId> xi = prog.add_vars(w.size(), "xi" + std::to_string(prog.num_vars()) + "_");
    for (std::size_t n = 0; n < w.size(); ++n) {
        prog.add_nonneg(xi[n]);
        modulus_epigraph(prog, w[n], xi[n]);
    }
    if (q.is_one()) {
        AffineExpr sum;
        for (VarId x : xi)
            sum += AffineExpr(x);
        prog.add_linear_le(sum, AffineExpr(s));
        return;
    }

    prog.add_nonneg(s);
    std::vector<VarId> v = prog.add_vars(w.size(), "v" + std::to_string(prog.num_vars()) + "_");
    AffineExpr sum;
    for (std::size_t n = 0; n < w.size(); ++n) {
        prog.add_nonneg(v[n]);
        sum += AffineExpr(v[n]);
    }
    prog.add_linear_le(sum, AffineExpr(s));
    for (std::size_t n = 0; n < w.size(); ++n)
        power_epigraph(prog, xi[n], s, v[n], q);
}

void quad_constraint(ConeProgram& prog, const std::vector<ComplexVarRef>& w, const CMatrix& l)
{
    if (l.rows() != l.cols() || static_cast<std::size_t>(l.rows()) != w.size())
        throw std::invalid_argument("quad_constraint: factor dimension mismatch");
    prog.add_soc(AffineExpr(1.0), complex_matvec(l.adjoint(), w));
}

} // namespace rabeam
