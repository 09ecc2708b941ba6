#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lieham/rational.hpp"

namespace lieham {

/// Numeric time-coefficient b(t): an evaluable AST over t, literals, the
/// four arithmetic operations, rational-literal powers, and sin/cos/exp.
/// Never differentiated symbolically; brackets act on space variables only.
class CoeffFn {
  public:
    struct Node;  // opaque AST node

    CoeffFn();  // the constant 0

    static CoeffFn parse(const std::string& text);
    static CoeffFn constant(const Rational& value);
    static CoeffFn decimal(double value);
    static CoeffFn time();

    static CoeffFn sum(const CoeffFn& a, const CoeffFn& b);
    static CoeffFn difference(const CoeffFn& a, const CoeffFn& b);
    static CoeffFn product(const CoeffFn& a, const CoeffFn& b);
    static CoeffFn quotient(const CoeffFn& a, const CoeffFn& b);
    static CoeffFn power(const CoeffFn& base, const Rational& exponent);
    static CoeffFn negate(const CoeffFn& a);
    static CoeffFn apply(const std::string& fn, const CoeffFn& arg);  // sin|cos|exp

    /// Evaluates at time t; throws DomainViolation on division by zero or an
    /// undefined power.
    double eval(double t) const;

    /// Canonical text; parse(str()) reproduces the same tree.
    std::string str() const;

    bool same_as(const CoeffFn& other) const { return str() == other.str(); }

    /// True when the tree is literally the constant zero.
    bool is_zero_literal() const;

  private:
    explicit CoeffFn(std::shared_ptr<const Node> root);
    std::shared_ptr<const Node> root_;
};

}  // namespace lieham
