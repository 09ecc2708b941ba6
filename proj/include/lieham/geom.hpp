#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lieham/expr.hpp"

namespace lieham {

/// Vector field sum_v comps[v] * d/dv; absent components are zero.
class VectorField {
  public:
    explicit VectorField(ChartPtr chart) : chart_(std::move(chart)) {}
    VectorField(ChartPtr chart, std::map<int, Expr> comps);

    const ChartPtr& chart() const { return chart_; }
    const std::map<int, Expr>& components() const { return comps_; }
    Expr component(int v) const;
    void set_component(int v, Expr e);

    bool is_zero() const { return comps_.empty(); }
    bool equals(const VectorField& other) const;
    VectorField operator-() const;
    friend VectorField operator+(const VectorField& a, const VectorField& b);
    friend VectorField operator-(const VectorField& a, const VectorField& b);
    friend VectorField operator*(const VectorField& a, const Rational& s);
    friend VectorField operator*(const Rational& s, const VectorField& a) { return a * s; }

    /// Componentwise numeric evaluation at a chart-ordered point.
    std::vector<double> eval(const std::vector<double>& point) const;

    std::string str() const;

  private:
    ChartPtr chart_;
    std::map<int, Expr> comps_;  // zero entries dropped
};

/// One-form sum_v comps[v] * dv.
class OneForm {
  public:
    explicit OneForm(ChartPtr chart) : chart_(std::move(chart)) {}
    OneForm(ChartPtr chart, std::map<int, Expr> comps);

    const ChartPtr& chart() const { return chart_; }
    const std::map<int, Expr>& components() const { return comps_; }
    Expr component(int v) const;
    void set_component(int v, Expr e);

    bool is_zero() const { return comps_.empty(); }
    bool equals(const OneForm& other) const;
    friend OneForm operator-(const OneForm& a, const OneForm& b);

    std::string str() const;

  private:
    ChartPtr chart_;
    std::map<int, Expr> comps_;
};

/// Bivector L = sum_{i<j} comps[(i,j)] d/di ^ d/dj, stored strictly
/// upper-triangular; the antisymmetric partner is derived on demand.
class Bivector {
  public:
    explicit Bivector(ChartPtr chart) : chart_(std::move(chart)) {}

    const ChartPtr& chart() const { return chart_; }
    const std::map<std::pair<int, int>, Expr>& components() const { return comps_; }
    /// Component for any index order; L(j,i) = -L(i,j).
    Expr component(int i, int j) const;
    /// Sets the (i,j) component, i != j, flipping sign when i > j.
    void set_component(int i, int j, Expr e);

    bool is_zero() const { return comps_.empty(); }
    bool equals(const Bivector& other) const;

    std::string str() const;

  private:
    ChartPtr chart_;
    std::map<std::pair<int, int>, Expr> comps_;  // keys i < j, zero entries dropped
};

/// The differential df = sum_v (df/dv) dv.
OneForm exterior_d(const Expr& f);

/// Directional derivative X(f) = sum_v X^v df/dv.
Expr apply_vf(const VectorField& X, const Expr& f);

/// Commutator [X,Y]^v = X(Y^v) - Y(X^v).
VectorField lie_bracket_vf(const VectorField& X, const VectorField& Y);

/// Bundle morphism: hat(L)(w)^j = sum_i L^{ij} w_i.
VectorField hat_lambda(const Bivector& L, const OneForm& w);

/// {f,g} = L(df,dg).
Expr poisson_bracket(const Bivector& L, const Expr& f, const Expr& g);

/// X_f = -hat(L)(df); satisfies apply_vf(X_f, g) == poisson_bracket(L, g, f).
VectorField hamiltonian_vf(const Bivector& L, const Expr& f);

struct JacobiWitness {
    int i, j, k;
    Expr residue;
};

struct JacobiResult {
    bool ok = true;
    std::optional<JacobiWitness> witness;
};

/// Coordinate Jacobi identity: for every triple i<j<k the cyclic sum
/// sum_l (L^{il} d_l L^{jk} + L^{jl} d_l L^{ki} + L^{kl} d_l L^{ij})
/// must vanish; equivalent to the Schouten self-bracket vanishing.
JacobiResult jacobi_check(const Bivector& L);

/// (L_X L)^{ij} = X(L^{ij}) - sum_l (L^{lj} d_l X^i + L^{il} d_l X^j);
/// zero exactly when X preserves the Poisson structure.
Bivector lie_derivative_bivector(const VectorField& X, const Bivector& L);

/// (L_X w)_i = X(w_i) + sum_j w_j d_i X^j.
OneForm lie_derivative_oneform(const VectorField& X, const OneForm& w);

/// Scalar L(w,u) = sum_{i<j} L^{ij} (w_i u_j - w_j u_i).
Expr bivector_pairing(const Bivector& L, const OneForm& w, const OneForm& u);

/// Lie algebroid bracket [w,u]_L = L_{hat(w)} u - L_{hat(u)} w - d L(w,u);
/// satisfies [df,dg]_L = d{f,g}.
OneForm oneform_bracket(const Bivector& L, const OneForm& w, const OneForm& u);

class StructureConstants;  // liealg.hpp

/// Linear Lie-Poisson bivector L^{ij} = sum_k c_{ijk} x_k on the dual of the
/// algebra with the given structure constants. Throws BadStructureConstants
/// when antisymmetry or the Jacobi identity fails.
Bivector lie_poisson_bivector(const StructureConstants& sc, const ChartPtr& chart);

/// Canonical bivector sum d/dx_i ^ d/dp_i for the given (position, momentum)
/// index pairs.
Bivector canonical_bivector(const ChartPtr& chart,
                            const std::vector<std::pair<int, int>>& pairs);

/// Recognises a canonical bivector: every nonzero component must be the
/// constant 1 or -1 and the index pairs must be disjoint. Returns the
/// (position, momentum) pairs, or nullopt when the shape does not match.
std::optional<std::vector<std::pair<int, int>>> detect_canonical(const Bivector& L);

/// Recovers h with hamiltonian_vf(L, h) == X on a canonical bivector by
/// coordinatewise antidifferentiation, normalised to zero additive constant;
/// unpaired chart variables are allowed when X has no component along them.
/// Errors: NotHamiltonian, LogarithmicTerm, DegenerateBivector.
Expr find_hamiltonian(const Bivector& L, const VectorField& X);

}  // namespace lieham
