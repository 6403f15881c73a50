#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rabeam {

/// Handle to one real scalar variable of a ConeProgram. Ids are only valid
/// for the program that issued them; every consuming call re-checks ownership.
struct VarId {
    std::uint32_t prog = 0;
    std::uint32_t index = 0;

    friend bool operator==(VarId a, VarId b) { return a.prog == b.prog && a.index == b.index; }
    friend bool operator!=(VarId a, VarId b) { return !(a == b); }
};

/// One complex scalar decision variable, stored as a (re, im) pair.
struct ComplexVarRef {
    VarId re;
    VarId im;
};

/// Sparse affine expression sum_i c_i * x_i + constant. Terms are kept
/// sorted by variable index with duplicates merged and zeros dropped.
class AffineExpr {
  public:
    AffineExpr() = default;
    AffineExpr(double constant) : constant_(constant) {}
    AffineExpr(VarId v) { terms_.emplace_back(v, 1.0); }

    AffineExpr& operator+=(const AffineExpr& o);
    AffineExpr& operator-=(const AffineExpr& o);
    AffineExpr& operator*=(double c);

    void add_term(VarId v, double coeff);

    const std::vector<std::pair<VarId, double>>& terms() const { return terms_; }
    double constant() const { return constant_; }

    friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
    friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
    friend AffineExpr operator*(double c, AffineExpr a) { return a *= c; }
    friend AffineExpr operator*(AffineExpr a, double c) { return a *= c; }
    friend AffineExpr operator-(AffineExpr a) { return a *= -1.0; }

  private:
    std::vector<std::pair<VarId, double>> terms_;
    double constant_ = 0.0;
};

/// Solver-agnostic cone program: real variables, linear objective
/// (maximization sense), linear equalities (expr = 0), nonnegativity
/// declarations and second-order cone blocks ||u||_2 <= t. Mutated
/// single-threaded during construction; immutable once frozen.
class ConeProgram {
  public:
    struct SocBlock {
        AffineExpr t;
        std::vector<AffineExpr> u;
    };

    ConeProgram();

    VarId add_var(std::string name = {});
    std::vector<VarId> add_vars(std::size_t n, const std::string& prefix);
    ComplexVarRef add_complex_var(const std::string& name);

    void set_objective(AffineExpr e); // maximize e
    void add_equality(AffineExpr e); // e = 0
    void add_nonneg(VarId v);
    void add_soc(AffineExpr t, std::vector<AffineExpr> u);

    /// lhs <= rhs via a fresh nonnegative slack plus one equality; returns the slack.
    VarId add_linear_le(const AffineExpr& lhs, const AffineExpr& rhs);

    void freeze();
    bool frozen() const { return frozen_; }

    std::uint32_t serial() const { return serial_; }
    std::size_t num_vars() const { return names_.size(); }
    const std::string& var_name(VarId v) const;
    const AffineExpr& objective() const { return objective_; }
    const std::vector<AffineExpr>& equalities() const { return equalities_; }
    const std::vector<SocBlock>& soc_blocks() const { return socs_; }
    bool is_nonneg(VarId v) const;
    std::vector<std::uint32_t> nonneg_list() const;

    void check_owned(VarId v) const;
    void check_owned(const AffineExpr& e) const;

    /// Plain-text form, one declaration/constraint per line:
    ///   vars <n>
    ///   maximize <expr>
    ///   eq <expr> = 0
    ///   nonneg <name>
    ///   soc <expr> >= || <expr> ; ... ||
    /// Expressions print terms in variable order as [-]c*<name> with %.12g
    /// coefficients (unit coefficients elided), then the constant if nonzero.
    std::string dump() const;

  private:
    void require_mutable() const;

    std::uint32_t serial_;
    std::vector<std::string> names_;
    std::vector<std::uint8_t> nonneg_flags_;
    AffineExpr objective_;
    std::vector<AffineExpr> equalities_;
    std::vector<SocBlock> socs_;
    std::size_t slack_count_ = 0;
    bool frozen_ = false;
};

} // namespace rabeam
