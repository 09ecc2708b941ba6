#include <cctype>
#include <string>

#include "lieham/errors.hpp"
#include "lieham/expr.hpp"

namespace lieham {

namespace {

// Grammar:
//   expr            := ['+'|'-'] term (('+'|'-') term)*
//   term            := factor (('*'|'/') factor)*
//   factor          := base ('^' rational_literal)?
//   base            := number | identifier | '(' expr ')' | 'sqrt' '(' signed_var ')'
//   signed_var      := identifier | '-' identifier
//   rational_literal:= integer | integer '/' positive_integer
//                    | '(' '-'? integer ('/' positive_integer)? ')'
struct Parser {
    const std::string& text;
    const ChartPtr& chart;
    std::size_t pos = 0;

    Parser(const std::string& t, const ChartPtr& c) : text(t), chart(c) {}

    [[noreturn]] void fail(const std::string& expected) {
        Error e(ErrorKind::syntax,
                "syntax error at position " + std::to_string(pos) + ": expected " + expected);
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

    bool at_digit() {
        char c = peek();
        return c >= '0' && c <= '9';
    }

    bool at_ident() {
        char c = peek();
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }

    BigInt parse_integer() {
        skip_ws();
        if (!at_digit()) fail("integer");
        std::string digits;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            digits += text[pos++];
        return BigInt(digits);
    }

    std::string parse_identifier() {
        skip_ws();
        if (!at_ident()) fail("identifier");
        std::string name;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            name += text[pos++];
        return name;
    }

    Rational parse_rational_literal() {
        skip_ws();
        if (accept('(')) {
            bool neg = accept('-');
            BigInt n = parse_integer();
            BigInt d(1);
            if (accept('/')) d = parse_integer();
            expect(')');
            if (neg) n = -n;
            return Rational(n, d);
        }
        BigInt n = parse_integer();
        BigInt d(1);
        if (accept('/')) d = parse_integer();
        return Rational(n, d);
    }

    Expr parse_sqrt() {
        expect('(');
        bool neg = accept('-');
        std::string name = parse_identifier();
        expect(')');
        int v = chart->require(name);
        Expr arg = Expr::variable(chart, v);
        if (neg) arg = -arg;
        return arg.pow_rational(Rational(1, 2));
    }

    Expr parse_base() {
        skip_ws();
        if (accept('(')) {
            Expr inner = parse_expr_rule();
            expect(')');
            return inner;
        }
        if (at_digit()) return Expr::constant(chart, Rational(parse_integer(), 1));
        if (at_ident()) {
            std::size_t mark = pos;
            std::string name = parse_identifier();
            if (name == "sqrt" && peek() == '(') return parse_sqrt();
            int v = chart->find(name);
            if (v < 0) {
                Error e(ErrorKind::unknown_variable,
                        "unknown variable '" + name + "' at position " + std::to_string(mark));
                e.position = mark;
                throw e;
            }
            return Expr::variable(chart, v);
        }
        fail("number, identifier, '(' or 'sqrt'");
    }

    Expr parse_factor() {
        Expr base = parse_base();
        if (accept('^')) {
            Rational q = parse_rational_literal();
            return base.pow_rational(q);
        }
        return base;
    }

    Expr parse_term() {
        Expr acc = parse_factor();
        while (true) {
            if (accept('*')) {
                acc = acc * parse_factor();
            } else if (accept('/')) {
                Expr rhs = parse_factor();
                if (rhs.is_zero()) fail("nonzero divisor");
                acc = acc * rhs.pow_rational(Rational(-1));
            } else {
                return acc;
            }
        }
    }

    Expr parse_expr_rule() {
        skip_ws();
        bool neg = false;
        if (accept('-'))
            neg = true;
        else
            accept('+');
        Expr acc = parse_term();
        if (neg) acc = -acc;
        while (true) {
            if (accept('+'))
                acc = acc + parse_term();
            else if (accept('-'))
                acc = acc - parse_term();
            else
                return acc;
        }
    }

    Expr run() {
        Expr e = parse_expr_rule();
        skip_ws();
        if (pos != text.size()) fail("end of input");
        return e;
    }
};

}  // namespace

Expr parse_expr(const std::string& text, const ChartPtr& chart) {
    return Parser(text, chart).run();
}

}  // namespace lieham
