#include "lieham/coefffn.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "lieham/errors.hpp"

namespace lieham {

namespace {
enum class Op { literal, time, add, sub, mul, div, pow, neg, sin, cos, exp };
}

struct CoeffFn::Node {
    Op op = Op::literal;
    Rational value;        // literal value, or the exponent for pow
    double decimal = 0.0;  // literal value when is_decimal
    bool is_decimal = false;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const CoeffFn::Node>;

double eval_node(const CoeffFn::Node& n, double t) {
    switch (n.op) {
        case Op::literal: return n.is_decimal ? n.decimal : n.value.to_double();
        case Op::time: return t;
        case Op::add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
        case Op::sub: return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
        case Op::mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
        case Op::div: {
            double d = eval_node(*n.rhs, t);
            if (d == 0.0) raise(ErrorKind::domain_violation, "coefficient division by zero");
            return eval_node(*n.lhs, t) / d;
        }
        case Op::pow: {
            double b = eval_node(*n.lhs, t);
            if (n.value.is_integer()) {
                long long e = n.value.num().convert_to<long long>();
                if (b == 0.0 && e < 0)
                    raise(ErrorKind::domain_violation, "zero base with negative exponent");
                return std::pow(b, static_cast<double>(e));
            }
            if (b < 0.0)
                raise(ErrorKind::domain_violation, "fractional power of a negative value");
            return std::pow(b, n.value.to_double());
        }
        case Op::neg: return -eval_node(*n.lhs, t);
        case Op::sin: return std::sin(eval_node(*n.lhs, t));
        case Op::cos: return std::cos(eval_node(*n.lhs, t));
        case Op::exp: return std::exp(eval_node(*n.lhs, t));
    }
    return 0.0;
}

int precedence(Op op) {
    switch (op) {
        case Op::add:
        case Op::sub: return 1;
        case Op::mul:
        case Op::div: return 2;
        case Op::neg: return 3;
        case Op::pow: return 4;
        default: return 5;
    }
}

void print_node(std::ostream& os, const CoeffFn::Node& n, int parent_prec) {
    int prec = precedence(n.op);
    bool parens = prec < parent_prec;
    if (parens) os << "(";
    switch (n.op) {
        case Op::literal:
            if (n.is_decimal) {
                std::ostringstream tmp;
                tmp.precision(17);
                tmp << n.decimal;
                os << tmp.str();
            } else if (!n.value.is_integer()) {
                os << n.value.num().str() << "/" << n.value.den().str();
            } else {
                os << n.value.str();
            }
            break;
        case Op::time: os << "t"; break;
        case Op::add:
            print_node(os, *n.lhs, prec);
            os << " + ";
            print_node(os, *n.rhs, prec + 1);
            break;
        case Op::sub:
            print_node(os, *n.lhs, prec);
            os << " - ";
            print_node(os, *n.rhs, prec + 1);
            break;
        case Op::mul:
            print_node(os, *n.lhs, prec);
            os << "*";
            print_node(os, *n.rhs, prec + 1);
            break;
        case Op::div:
            print_node(os, *n.lhs, prec);
            os << "/";
            print_node(os, *n.rhs, prec + 1);
            break;
        case Op::pow:
            print_node(os, *n.lhs, prec + 1);
            os << "^";
            if (n.value.is_integer() && n.value.sign() >= 0)
                os << n.value.str();
            else
                os << "(" << n.value.str() << ")";
            break;
        case Op::neg:
            os << "-";
            print_node(os, *n.lhs, prec + 1);
            break;
        case Op::sin:
        case Op::cos:
        case Op::exp:
            os << (n.op == Op::sin ? "sin" : n.op == Op::cos ? "cos" : "exp") << "(";
            print_node(os, *n.lhs, 0);
            os << ")";
            break;
    }
    if (parens) os << ")";
}

NodePtr make_node(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<CoeffFn::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

struct CoeffParser {
    const std::string& text;
    std::size_t pos = 0;

    explicit CoeffParser(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& expected) {
        Error e(ErrorKind::syntax, "syntax error in coefficient at position " +
                                       std::to_string(pos) + ": expected " + expected);
        e.position = pos;
        throw e;
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("'") + c + "'");
    }

    CoeffFn parse_number() {
        skip_ws();
        std::string digits;
        bool decimal = false;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
            if (text[pos] == '.') decimal = true;
            digits += text[pos++];
        }
        if (digits.empty() || digits == ".") fail("number");
        if (!decimal) return CoeffFn::constant(Rational::from_string(digits));
        return CoeffFn::decimal(std::stod(digits));
    }

    Rational parse_rational_literal() {
        skip_ws();
        bool parens = accept('(');
        bool neg = parens && accept('-');
        std::string digits;
        skip_ws();
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            digits += text[pos++];
        if (digits.empty()) fail("integer exponent");
        std::string den;
        if (accept('/')) {
            skip_ws();
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                den += text[pos++];
            if (den.empty()) fail("positive integer");
        }
        if (parens) expect(')');
        Rational r = Rational::from_string(den.empty() ? digits : digits + "/" + den);
        return neg ? -r : r;
    }

    CoeffFn parse_primary() {
        skip_ws();
        if (accept('(')) {
            CoeffFn inner = parse_sum();
            expect(')');
            return inner;
        }
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name;
            while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos])))
                name += text[pos++];
            if (name == "t") return CoeffFn::time();
            if (name == "sin" || name == "cos" || name == "exp") {
                expect('(');
                CoeffFn arg = parse_sum();
                expect(')');
                return CoeffFn::apply(name, arg);
            }
            fail("'t', 'sin', 'cos' or 'exp'");
        }
        fail("number, 't', function or '('");
    }

    CoeffFn parse_factor() {
        CoeffFn base = parse_primary();
        if (accept('^')) return CoeffFn::power(base, parse_rational_literal());
        return base;
    }

    CoeffFn parse_product() {
        CoeffFn acc = parse_factor();
        while (true) {
            if (accept('*'))
                acc = CoeffFn::product(acc, parse_factor());
            else if (accept('/'))
                acc = CoeffFn::quotient(acc, parse_factor());
            else
                return acc;
        }
    }

    CoeffFn parse_sum() {
        skip_ws();
        bool neg = false;
        if (accept('-'))
            neg = true;
        else
            accept('+');
        CoeffFn acc = parse_product();
        if (neg) acc = CoeffFn::negate(acc);
        while (true) {
            if (accept('+'))
                acc = CoeffFn::sum(acc, parse_product());
            else if (accept('-'))
                acc = CoeffFn::difference(acc, parse_product());
            else
                return acc;
        }
    }

    CoeffFn run() {
        CoeffFn f = parse_sum();
        skip_ws();
        if (pos != text.size()) fail("end of input");
        return f;
    }
};

}  // namespace

CoeffFn::CoeffFn() : root_(std::make_shared<Node>()) {}
CoeffFn::CoeffFn(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

CoeffFn CoeffFn::constant(const Rational& value) {
    auto n = std::make_shared<Node>();
    n->value = value;
    return CoeffFn(n);
}

CoeffFn CoeffFn::decimal(double value) {
    auto n = std::make_shared<Node>();
    n->is_decimal = true;
    n->decimal = value;
    return CoeffFn(n);
}

CoeffFn CoeffFn::time() { return CoeffFn(make_node(Op::time)); }

CoeffFn CoeffFn::sum(const CoeffFn& a, const CoeffFn& b) {
    return CoeffFn(make_node(Op::add, a.root_, b.root_));
}

CoeffFn CoeffFn::difference(const CoeffFn& a, const CoeffFn& b) {
    return CoeffFn(make_node(Op::sub, a.root_, b.root_));
}

CoeffFn CoeffFn::product(const CoeffFn& a, const CoeffFn& b) {
    return CoeffFn(make_node(Op::mul, a.root_, b.root_));
}

CoeffFn CoeffFn::quotient(const CoeffFn& a, const CoeffFn& b) {
    return CoeffFn(make_node(Op::div, a.root_, b.root_));
}

CoeffFn CoeffFn::power(const CoeffFn& base, const Rational& exponent) {
    auto n = std::make_shared<Node>();
    n->op = Op::pow;
    n->value = exponent;
    n->lhs = base.root_;
    return CoeffFn(n);
}

CoeffFn CoeffFn::negate(const CoeffFn& a) { return CoeffFn(make_node(Op::neg, a.root_)); }

CoeffFn CoeffFn::apply(const std::string& fn, const CoeffFn& arg) {
    if (fn == "sin") return CoeffFn(make_node(Op::sin, arg.root_));
    if (fn == "cos") return CoeffFn(make_node(Op::cos, arg.root_));
    if (fn == "exp") return CoeffFn(make_node(Op::exp, arg.root_));
    raise(ErrorKind::bad_input, "unknown coefficient function '" + fn + "'");
}

bool CoeffFn::is_zero_literal() const {
    return root_->op == Op::literal && !root_->is_decimal && root_->value.is_zero();
}

CoeffFn CoeffFn::parse(const std::string& text) { return CoeffParser(text).run(); }

double CoeffFn::eval(double t) const {
    double v = eval_node(*root_, t);
    if (!std::isfinite(v))
        raise(ErrorKind::coefficient_domain, "coefficient evaluates non-finite");
    return v;
}

std::string CoeffFn::str() const {
    std::ostringstream os;
    print_node(os, *root_, 0);
    return os.str();
}

}  // namespace lieham
