#pragma once

#include <map>
#include <string>
#include <vector>

#include "lieham/chart.hpp"
#include "lieham/rational.hpp"

namespace lieham {

/// Exponent of one variable in a monomial. The integer part applies to the
/// variable itself, the fractional part (always in (0,1)) to the variable's
/// radical base, i.e. v for positive variables and -v for negative ones.
struct VarExp {
    long long ipow = 0;
    Rational rpow;

    bool is_zero() const { return ipow == 0 && rpow.is_zero(); }
    friend bool operator==(const VarExp&, const VarExp&) = default;
    friend std::strong_ordering operator<=>(const VarExp&, const VarExp&) = default;
};

/// coeff * prod v^ipow * prod base(v)^rpow, with exps sorted by variable
/// index and free of all-zero entries.
struct Monomial {
    Rational coeff;
    std::vector<std::pair<int, VarExp>> exps;

    /// Total exponent of variable v (ipow + rpow), as a rational.
    Rational total_exponent(int v) const;
};

/// Compares monomials by their exponent keys only (not coefficients).
int compare_keys(const Monomial& a, const Monomial& b);

/// Canonical sum of monomials over a chart: unique keys, no zero
/// coefficients, deterministic term order. Immutable; all operations return
/// new values, so concurrent use needs no synchronisation.
class Expr {
  public:
    Expr() = default;

    static Expr zero(ChartPtr chart);
    static Expr constant(ChartPtr chart, Rational value);
    static Expr variable(ChartPtr chart, int var);
    static Expr variable(ChartPtr chart, const std::string& name);
    /// v raised to a rational power. Integer exponents are literal powers of
    /// v; fractional exponents are powers of the radical base (v or -v per
    /// the domain sign) and throw IllegalRadical when no base exists.
    static Expr power(ChartPtr chart, int var, const Rational& exponent);
    /// Builds an expression from raw (coeff, exponent-map) pairs, with the
    /// same exponent convention as power().
    static Expr from_terms(ChartPtr chart,
                           const std::vector<std::pair<Rational, std::map<int, Rational>>>& terms);

    const ChartPtr& chart() const { return chart_; }
    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Nonempty constant term check: exactly one term with empty exponent key.
    bool is_constant() const;
    /// Value when the expression is a constant (zero included).
    Rational constant_value() const;

    Expr operator-() const;
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Rational& s);
    friend Expr operator*(const Rational& s, const Expr& b) { return b * s; }

    /// Integer power; negative exponents require a single-monomial base.
    Expr pow_int(long long n) const;
    /// Rational power of a single-monomial expression. Fractional exponents
    /// require the base to be exactly +v (positive domain) or -v (negative).
    Expr pow_rational(const Rational& q) const;

    /// Exact partial derivative with respect to chart variable v.
    Expr diff(int v) const;
    /// Exact antiderivative in v with zero integration constant. Throws
    /// LogarithmicTerm when a term has total v-exponent -1.
    Expr antiderivative(int v) const;

    /// Raw evaluation at a chart-ordered point, without sign checks (values
    /// that make a monomial undefined still throw DomainViolation).
    double eval(const std::vector<double>& point) const;

    bool equals(const Expr& other) const;

    /// Rewrites the expression onto another chart: var_map[i] is the index
    /// in new_chart of the old variable i, or -1 when fixed[i] supplies a
    /// rational value instead.
    Expr remap(const ChartPtr& new_chart, const std::vector<int>& var_map,
               const std::map<int, Rational>& fixed) const;

    /// Canonical text form; reparsing it over the same chart is the identity.
    std::string str() const;

  private:
    ChartPtr chart_;
    std::vector<Monomial> terms_;

    friend class ExprBuilder;
};

/// Accumulates monomials and finalises them into a canonical Expr.
class ExprBuilder {
  public:
    explicit ExprBuilder(ChartPtr chart) : chart_(std::move(chart)) {}

    /// Adds coeff * prod v^exps[v] with exponents renormalised onto radical
    /// bases; throws IllegalRadical for fractional exponents on variables
    /// without a radical base.
    void add_term(Rational coeff, const std::map<int, Rational>& exps);
    void add_monomial(const Monomial& m);
    void add(const Expr& e);
    void add_scaled(const Expr& e, const Rational& s);

    Expr build();

  private:
    ChartPtr chart_;
    std::map<std::vector<std::pair<int, VarExp>>, Rational> acc_;
};

/// Product of two monomials over a chart (handles radical-exponent carry).
Monomial mul_monomials(const ChartPtr& chart, const Monomial& a, const Monomial& b);

/// Checked evaluation: verifies every chart sign constraint at the point
/// before evaluating. point is chart-ordered.
double eval_num(const Expr& f, const std::vector<double>& point);
/// Convenience variant taking named values.
double eval_num_named(const Expr& f, const std::map<std::string, double>& point);

/// Exact structural equality; throws ChartMismatch on different charts.
bool expr_equal(const Expr& a, const Expr& b);

/// Parses the expression grammar over the chart. Errors: SyntaxError,
/// UnknownVariable, IllegalRadical, IllegalPower.
Expr parse_expr(const std::string& text, const ChartPtr& chart);

}  // namespace lieham
