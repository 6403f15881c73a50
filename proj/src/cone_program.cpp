#include "rabeam/cone_program.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rabeam {

namespace {
std::atomic<std::uint32_t> next_serial{1};

void require_finite(double c)
{
    if (!std::isfinite(c))
        throw std::invalid_argument("AffineExpr: coefficient is not finite");
}

std::string format_coeff(double c)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", c);
    return buf;
}
} // namespace

void AffineExpr::add_term(VarId v, double coeff)
{
    require_finite(coeff);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), v.index,
                               [](const auto& t, std::uint32_t i) { return t.first.index < i; });
    if (it != terms_.end() && it->first == v) {
        it->second += coeff;
        if (it->second == 0.0)
            terms_.erase(it);
        return;
    }
    if (it != terms_.end() && it->first.index == v.index && it->first.prog != v.prog)
        throw std::invalid_argument("AffineExpr: mixing variables from different programs");
    if (coeff != 0.0)
        terms_.insert(it, {v, coeff});
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& o)
{
    for (const auto& [v, c] : o.terms_)
        add_term(v, c);
    constant_ += o.constant_;
    require_finite(constant_);
    return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& o)
{
    for (const auto& [v, c] : o.terms_)
        add_term(v, -c);
    constant_ -= o.constant_;
    require_finite(constant_);
    return *this;
}

AffineExpr& AffineExpr::operator*=(double c)
{
    require_finite(c);
    if (c == 0.0) {
        terms_.clear();
        constant_ = 0.0;
        return *this;
    }
    for (auto& t : terms_)
        t.second *= c;
    constant_ *= c;
    return *this;
}

ConeProgram::ConeProgram() : serial_(next_serial.fetch_add(1)) {}

void ConeProgram::require_mutable() const
{
    if (frozen_)
        throw std::logic_error("ConeProgram: frozen programs are immutable");
}

VarId ConeProgram::add_var(std::string name)
{
    require_mutable();
    const auto index = static_cast<std::uint32_t>(names_.size());
    if (name.empty())
        name = "x" + std::to_string(index);
    names_.push_back(std::move(name));
    nonneg_flags_.push_back(0);
    return {serial_, index};
}

std::vector<VarId> ConeProgram::add_vars(std::size_t n, const std::string& prefix)
{
    std::vector<VarId> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(add_var(prefix + std::to_string(i)));
    return out;
}

ComplexVarRef ConeProgram::add_complex_var(const std::string& name)
{
    ComplexVarRef ref;
    ref.re = add_var(name + ".re");
    ref.im = add_var(name + ".im");
    return ref;
}

void ConeProgram::check_owned(VarId v) const
{
    if (v.prog != serial_ || v.index >= names_.size())
        throw std::invalid_argument("ConeProgram: VarId does not belong to this program");
}

void ConeProgram::check_owned(const AffineExpr& e) const
{
    for (const auto& [v, c] : e.terms()) {
        check_owned(v);
        require_finite(c);
    }
    require_finite(e.constant());
}

void ConeProgram::set_objective(AffineExpr e)
{
    require_mutable();
    check_owned(e);
    objective_ = std::move(e);
}

void ConeProgram::add_equality(AffineExpr e)
{
    require_mutable();
    check_owned(e);
    equalities_.push_back(std::move(e));
}

void ConeProgram::add_nonneg(VarId v)
{
    require_mutable();
    check_owned(v);
    nonneg_flags_[v.index] = 1;
}

void ConeProgram::add_soc(AffineExpr t, std::vector<AffineExpr> u)
{
    require_mutable();
    check_owned(t);
    if (u.empty())
        throw std::invalid_argument("ConeProgram: SOC block needs at least one norm entry");
    for (const auto& e : u)
        check_owned(e);
    socs_.push_back({std::move(t), std::move(u)});
}

VarId ConeProgram::add_linear_le(const AffineExpr& lhs, const AffineExpr& rhs)
{
    const VarId slack = add_var("sl" + std::to_string(slack_count_++));
    add_nonneg(slack);
    AffineExpr e = rhs;
    e -= lhs;
    e.add_term(slack, -1.0);
    add_equality(std::move(e));
    return slack;
}

void ConeProgram::freeze()
{
    if (names_.empty())
        throw std::logic_error("ConeProgram: cannot freeze a program with no variables");
    frozen_ = true;
}

const std::string& ConeProgram::var_name(VarId v) const
{
    check_owned(v);
    return names_[v.index];
}

bool ConeProgram::is_nonneg(VarId v) const
{
    check_owned(v);
    return nonneg_flags_[v.index] != 0;
}

std::vector<std::uint32_t> ConeProgram::nonneg_list() const
{
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < nonneg_flags_.size(); ++i)
        if (nonneg_flags_[i])
            out.push_back(i);
    return out;
}

namespace {
std::string format_expr(const ConeProgram& prog, const AffineExpr& e)
{
    std::string out;
    for (const auto& [v, c] : e.terms()) {
        const double a = std::abs(c);
        if (out.empty())
            out += c < 0.0 ? "-" : "";
        else
            out += c < 0.0 ? " - " : " + ";
        if (a != 1.0)
            out += format_coeff(a) + "*";
        out += prog.var_name(v);
    }
    const double k = e.constant();
    if (out.empty())
        return format_coeff(k);
    if (k != 0.0)
        out += (k < 0.0 ? " - " : " + ") + format_coeff(std::abs(k));
    return out;
}
} // namespace

std::string ConeProgram::dump() const
{
    std::string out = "vars " + std::to_string(names_.size()) + "\n";
    out += "maximize " + format_expr(*this, objective_) + "\n";
    for (const auto& e : equalities_)
        out += "eq " + format_expr(*this, e) + " = 0\n";
    for (std::uint32_t i = 0; i < nonneg_flags_.size(); ++i)
        if (nonneg_flags_[i])
            out += "nonneg " + names_[i] + "\n";
    for (const auto& blk : socs_) {
        out += "soc " + format_expr(*this, blk.t) + " >= ||";
        for (std::size_t i = 0; i < blk.u.size(); ++i)
            out += (i ? " ; " : " ") + format_expr(*this, blk.u[i]);
        out += " ||\n";
    }
    return out;
}

} // namespace rabeam
