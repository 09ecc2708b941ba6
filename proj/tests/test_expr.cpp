#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieham/coefffn.hpp"
#include "lieham/errors.hpp"
#include "lieham/expr.hpp"
#include "test_support.hpp"

using namespace lieham;
using namespace lieham::testing;

namespace {

ChartPtr ks_chart() {
    return make_chart({{"x", DomainSign::nonzero}, {"p", DomainSign::any}, {"c0", DomainSign::any}});
}

ChartPtr riccati_chart() {
    return make_chart({{"x", DomainSign::any}, {"p", DomainSign::negative}});
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::bad_input;
}

}  // namespace

TEST_CASE("parse: Kummer-Schwarz h3 has two terms") {
    auto chart = ks_chart();
    Expr h3 = parse_expr("1/4 * p^2 * x^3 + 4*c0*x", chart);
    CHECK(h3.terms().size() == 2);
    CHECK(expr_equal(h3, parse_expr("4*x*c0 + (p^2*x^3)/4", chart)));
    // The exponent literal is greedy: x^3/4 reads as x^(3/4), not (x^3)/4.
    CHECK_THROWS_AS(parse_expr("x^3/4", chart), Error);
}

TEST_CASE("parse: zero gives the empty expression") {
    auto chart = ks_chart();
    CHECK(parse_expr("0", chart).is_zero());
    CHECK(parse_expr("x - x", chart).is_zero());
}

TEST_CASE("parse: -2*sqrt(-p) is a single radical monomial") {
    auto chart = riccati_chart();
    Expr h1 = parse_expr("-2*sqrt(-p)", chart);
    REQUIRE(h1.terms().size() == 1);
    const Monomial& m = h1.terms()[0];
    CHECK(m.coeff == Rational(-2));
    REQUIRE(m.exps.size() == 1);
    CHECK(m.exps[0].first == 1);
    CHECK(m.exps[0].second.ipow == 0);
    CHECK(m.exps[0].second.rpow == Rational(1, 2));
}

TEST_CASE("parse: errors carry position and kind") {
    auto chart = ks_chart();
    CHECK(kind_of([&] { parse_expr("x + ", chart); }) == ErrorKind::syntax);
    CHECK(kind_of([&] { parse_expr("x * q", chart); }) == ErrorKind::unknown_variable);
    CHECK(kind_of([&] { parse_expr("sqrt(x)", chart); }) == ErrorKind::illegal_radical);
    CHECK(kind_of([&] { parse_expr("sqrt(x+1)", chart); }) == ErrorKind::syntax);
    CHECK(kind_of([&] { parse_expr("(x+1)^(1/2)", chart); }) == ErrorKind::illegal_radical);
    CHECK(kind_of([&] { parse_expr("(x+1)^(-1)", chart); }) == ErrorKind::illegal_power);
    CHECK(kind_of([&] { parse_expr("2^(1/2)", chart); }) == ErrorKind::illegal_radical);
    // sqrt(p) on a negative-domain variable: the radicand sign is wrong.
    auto rchart = riccati_chart();
    CHECK(kind_of([&] { parse_expr("sqrt(p)", rchart); }) == ErrorKind::illegal_radical);
    CHECK(kind_of([&] { parse_expr("sqrt(-x)", rchart); }) == ErrorKind::illegal_radical);
}

TEST_CASE("print/parse round trip is the identity on canonical forms") {
    auto chart = riccati_chart();
    for (const char* text : {"-2*sqrt(-p)", "x^2*p - 2*x*p", "sqrt(-p)^(-1)",
                             "x*sqrt(-p)^(-3) + 1/3", "0", "-1/2", "x^(-2)*p^3"}) {
        Expr e = parse_expr(text, chart);
        CHECK(expr_equal(parse_expr(e.str(), chart), e));
    }
}

TEST_CASE("diff: radical derivative matches the finite-difference oracle") {
    auto chart = riccati_chart();
    Expr h1 = parse_expr("-2*sqrt(-p)", chart);
    Expr d = h1.diff(1);
    // d/dp(-2 sqrt(-p)) = (-p)^(-1/2)
    CHECK(expr_equal(d, parse_expr("sqrt(-p)^(-1)", chart)));
    for (double p : {-1.0, -4.0, -9.0}) {
        std::vector<double> pt{0.7, p};
        double fd = fd_derivative(h1, pt, 1);
        CHECK(close_rel(d.eval(pt), fd, 1e-9));
    }
}

TEST_CASE("diff: constants and simple powers") {
    auto chart = ks_chart();
    CHECK(parse_expr("c0", chart).diff(0).is_zero());
    Expr f = parse_expr("x^2*p", chart);
    CHECK(expr_equal(f.diff(0), parse_expr("2*x*p", chart)));
    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> pt = random_point(rng, chart);
        CHECK(close_rel(f.diff(0).eval(pt), fd_derivative(f, pt, 0), 1e-6));
    }
}

TEST_CASE("antiderivative: returns exact primitive, post-checked by diff") {
    auto chart = ks_chart();
    Expr f = parse_expr("4*x^(-2)", chart);
    Expr F = f.antiderivative(0);
    CHECK(expr_equal(F, parse_expr("-4*x^(-1)", chart)));
    CHECK(expr_equal(F.diff(0), f));

    CHECK(Expr::zero(chart).antiderivative(0).is_zero());

    CHECK(kind_of([&] { parse_expr("x^(-1)", chart).antiderivative(0); }) ==
          ErrorKind::logarithmic_term);
}

TEST_CASE("antiderivative on the radical base") {
    auto chart = riccati_chart();
    Expr f = parse_expr("sqrt(-p)^(-1)", chart);
    Expr F = f.antiderivative(1);
    CHECK(expr_equal(F, parse_expr("-2*sqrt(-p)", chart)));
    CHECK(expr_equal(F.diff(1), f));
}

TEST_CASE("eval_num: direct substitution and domain guards") {
    auto chart = ks_chart();
    Expr h1 = parse_expr("4/x", chart);
    CHECK(eval_num(h1, {2.0, 0.0, 0.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(eval_num(h1, {0.0, 1.0, 1.0}), Error);

    auto rchart = riccati_chart();
    Expr e = parse_expr("-2*sqrt(-p)", rchart);
    CHECK(eval_num(e, {1.0, -4.0}) == doctest::Approx(-4.0));
    CHECK_THROWS_AS(eval_num(e, {1.0, 4.0}), Error);
}

TEST_CASE("expr_equal: commutativity, radical contraction, inequality") {
    auto chart = riccati_chart();
    CHECK(expr_equal(parse_expr("x*p", chart), parse_expr("p*x", chart)));
    // (-p)^(1/2) * (-p)^(1/2) = -p, numeric spot check at p = -3
    Expr prod = parse_expr("sqrt(-p)*sqrt(-p)", chart);
    CHECK(expr_equal(prod, parse_expr("-p", chart)));
    CHECK(prod.eval({0.0, -3.0}) == doctest::Approx(3.0));
    CHECK(!expr_equal(parse_expr("x", chart), parse_expr("x+1", chart)));

    auto other = ks_chart();
    CHECK_THROWS_AS(expr_equal(parse_expr("x", chart), parse_expr("x", other)), Error);
}

TEST_CASE("coefficient functions evaluate and guard their domain") {
    CHECK(CoeffFn::parse("1 + t^2").eval(2.0) == doctest::Approx(5.0));
    CHECK(CoeffFn::parse("sin(t)").eval(0.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(CoeffFn::parse("1/t").eval(0.0), Error);
    CHECK(CoeffFn::parse("exp(2*t)*cos(t) - 3/2").eval(0.5) ==
          doctest::Approx(std::exp(1.0) * std::cos(0.5) - 1.5));
}

TEST_CASE("coefficient functions print and reparse to the same tree") {
    for (const char* text :
         {"1 + t^2", "sin(t)", "-(1 + t)", "exp(t)^2*cos(2*t) - 1/2", "t^(-2)", "0.5*t"}) {
        CoeffFn f = CoeffFn::parse(text);
        CoeffFn g = CoeffFn::parse(f.str());
        CHECK(f.same_as(g));
        for (double t : {0.3, 1.0, 2.7}) CHECK(f.eval(t) == doctest::Approx(g.eval(t)));
    }
}

TEST_CASE("property: canonicalisation is idempotent through print/parse") {
    std::mt19937 rng(11);
    auto chart = make_chart({{"x", DomainSign::positive}, {"p", DomainSign::negative},
                             {"k", DomainSign::any}});
    for (int i = 0; i < 200; ++i) {
        Expr e = random_poly(rng, chart, 4, true);
        // Mix in a radical factor now and then.
        if (i % 3 == 0) e = e * parse_expr("sqrt(x)", chart) * parse_expr("sqrt(-p)", chart);
        Expr reparsed = parse_expr(e.str(), chart);
        CHECK(expr_equal(reparsed, e));
        CHECK(expr_equal(parse_expr(reparsed.str(), chart), reparsed));
    }
}

TEST_CASE("property: ring axioms hold exactly") {
    std::mt19937 rng(13);
    auto chart = xy_chart();
    for (int i = 0; i < 300; ++i) {
        Expr a = random_poly(rng, chart), b = random_poly(rng, chart), c = random_poly(rng, chart);
        CHECK(expr_equal((a + b) + c, a + (b + c)));
        CHECK(expr_equal(a * (b + c), a * b + a * c));
        CHECK(expr_equal((a * b) * c, a * (b * c)));
        CHECK((a + (-a)).is_zero());
        CHECK(expr_equal(a * b, b * a));
    }
}

TEST_CASE("property: diff is linear and satisfies the Leibniz rule") {
    std::mt19937 rng(17);
    auto chart = xy_chart();
    for (int i = 0; i < 300; ++i) {
        Expr f = random_poly(rng, chart), g = random_poly(rng, chart);
        for (int v = 0; v < 2; ++v) {
            CHECK(expr_equal((f + g).diff(v), f.diff(v) + g.diff(v)));
            CHECK(expr_equal((f * g).diff(v), f.diff(v) * g + f * g.diff(v)));
        }
    }
}

TEST_CASE("property: symbolic derivative matches finite differences") {
    std::mt19937 rng(19);
    auto chart = make_chart({{"x", DomainSign::positive}, {"p", DomainSign::negative}});
    for (int i = 0; i < 200; ++i) {
        Expr f = random_poly(rng, chart, 3, true);
        if (i % 2 == 0) f = f * parse_expr("sqrt(-p)", chart);
        std::vector<double> pt = random_point(rng, chart);
        for (int v = 0; v < 2; ++v)
            CHECK(close_rel(f.diff(v).eval(pt), fd_derivative(f, pt, v), 1e-5));
    }
}

TEST_CASE("property: antiderivative then diff is the identity") {
    std::mt19937 rng(23);
    auto chart = xy_chart();
    for (int i = 0; i < 200; ++i) {
        Expr f = random_poly(rng, chart, 4, false);
        for (int v = 0; v < 2; ++v) CHECK(expr_equal(f.antiderivative(v).diff(v), f));
    }
}
