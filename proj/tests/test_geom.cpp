#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieham/errors.hpp"
#include "lieham/geom.hpp"
#include "lieham/liealg.hpp"
#include "test_support.hpp"

using namespace lieham;
using namespace lieham::testing;

namespace {

ChartPtr sigma_chart() {
    return make_chart({{"s1", DomainSign::any}, {"s2", DomainSign::any}, {"s3", DomainSign::any}});
}

/// The Gaudin magnet bivector: s3 d2^d1 - s1 d2^d3 + s2 d3^d1.
Bivector gaudin_bivector(const ChartPtr& chart) {
    Bivector L(chart);
    L.set_component(0, 1, parse_expr("-s3", chart));
    L.set_component(0, 2, parse_expr("-s2", chart));
    L.set_component(1, 2, parse_expr("-s1", chart));
    return L;
}

Bivector canonical_2d(const ChartPtr& chart) { return canonical_bivector(chart, {{0, 1}}); }

VectorField vf(const ChartPtr& chart, std::map<std::string, std::string> comps) {
    VectorField X(chart);
    for (const auto& [name, text] : comps)
        X.set_component(chart->require(name), parse_expr(text, chart));
    return X;
}

}  // namespace

TEST_CASE("exterior_d components are the partial derivatives") {
    auto chart = xp_chart();
    OneForm d = exterior_d(parse_expr("x*p", chart));
    CHECK(expr_equal(d.component(0), parse_expr("p", chart)));
    CHECK(expr_equal(d.component(1), parse_expr("x", chart)));

    CHECK(exterior_d(parse_expr("5", chart)).is_zero());

    auto schart = sigma_chart();
    OneForm dc = exterior_d(parse_expr("s1^2 - s2^2 + s3^2", schart));
    CHECK(expr_equal(dc.component(0), parse_expr("2*s1", schart)));
    CHECK(expr_equal(dc.component(1), parse_expr("-2*s2", schart)));
    CHECK(expr_equal(dc.component(2), parse_expr("2*s3", schart)));
}

TEST_CASE("apply_vf is the directional derivative") {
    auto schart = sigma_chart();
    VectorField d3 = vf(schart, {{"s3", "1"}});
    CHECK(apply_vf(d3, parse_expr("s1", schart)).is_zero());
    CHECK(apply_vf(VectorField(schart), parse_expr("s1*s2", schart)).is_zero());

    auto ks = make_chart({{"x", DomainSign::nonzero}, {"p", DomainSign::any}});
    VectorField X1 = vf(ks, {{"p", "4*x^(-2)"}});
    CHECK(expr_equal(apply_vf(X1, parse_expr("x*p", ks)), parse_expr("4/x", ks)));
}

TEST_CASE("lie_bracket_vf reproduces the Kummer-Schwarz and Riccati relations") {
    auto ks = make_chart(
        {{"x", DomainSign::nonzero}, {"p", DomainSign::any}, {"c0", DomainSign::any}});
    VectorField X1 = vf(ks, {{"p", "4*x^(-2)"}});
    VectorField X2 = vf(ks, {{"x", "x"}, {"p", "-p"}});
    VectorField X3 = vf(ks, {{"x", "1/2*p*x^3"}, {"p", "-3/4*p^2*x^2 - 4*c0"}});
    CHECK(lie_bracket_vf(X1, X2).equals(X1));
    CHECK(lie_bracket_vf(X1, X3).equals(X2 * Rational(2)));
    CHECK(lie_bracket_vf(X2, X3).equals(X3));
    CHECK(lie_bracket_vf(X1, X1).is_zero());

    auto ric = make_chart({{"x", DomainSign::any}, {"p", DomainSign::negative}});
    VectorField R2 = vf(ric, {{"x", "1"}});
    VectorField R3 = vf(ric, {{"x", "x"}, {"p", "-p"}});
    VectorField R4 = vf(ric, {{"x", "x^2"}, {"p", "-2*x*p"}});
    CHECK(lie_bracket_vf(R2, R4).equals(R3 * Rational(2)));
}

TEST_CASE("hat_lambda implements the bundle morphism") {
    auto chart = xp_chart();
    Bivector L = canonical_2d(chart);
    VectorField lifted = hat_lambda(L, exterior_d(parse_expr("x", chart)));
    CHECK(lifted.equals(vf(chart, {{"p", "1"}})));

    auto schart = sigma_chart();
    Bivector gm = gaudin_bivector(schart);
    VectorField y = hat_lambda(gm, exterior_d(parse_expr("s1", schart)));
    CHECK(y.equals(vf(schart, {{"s2", "-s3"}, {"s3", "-s2"}})));

    // Casimir differentials are in the kernel.
    CHECK(hat_lambda(gm, exterior_d(parse_expr("s1^2 - s2^2 + s3^2", schart))).is_zero());
}

TEST_CASE("poisson_bracket matches the paper's function relations") {
    auto ks = make_chart({{"x", DomainSign::nonzero}, {"p", DomainSign::any}});
    Bivector L = canonical_2d(ks);
    Expr h1 = parse_expr("4/x", ks), h2 = parse_expr("x*p", ks);
    CHECK(expr_equal(poisson_bracket(L, h1, h2), -h1));
    CHECK(poisson_bracket(L, h2, h2).is_zero());

    auto ric = make_chart({{"x", DomainSign::any}, {"p", DomainSign::negative}});
    Bivector Lr = canonical_2d(ric);
    Expr r1 = parse_expr("-2*sqrt(-p)", ric), r5 = parse_expr("-2*x*sqrt(-p)", ric);
    CHECK(expr_equal(poisson_bracket(Lr, r1, r5), parse_expr("2", ric)));
}

TEST_CASE("hamiltonian_vf pairs the catalog Hamiltonians with their fields") {
    auto ks = make_chart({{"x", DomainSign::nonzero}, {"p", DomainSign::any}});
    Bivector L = canonical_2d(ks);
    CHECK(hamiltonian_vf(L, parse_expr("4/x", ks)).equals(vf(ks, {{"p", "4*x^(-2)"}})));
    CHECK(hamiltonian_vf(L, parse_expr("7", ks)).is_zero());

    // Winternitz-Smorodinsky n = 2: h1 = (x1^2 + x2^2)/2 pairs with
    // X1 = -x1 d/dp1 - x2 d/dp2.
    auto sw = make_chart({{"x1", DomainSign::nonzero},
                          {"x2", DomainSign::nonzero},
                          {"p1", DomainSign::any},
                          {"p2", DomainSign::any}});
    Bivector Ls = canonical_bivector(sw, {{0, 2}, {1, 3}});
    VectorField X1 = hamiltonian_vf(Ls, parse_expr("1/2*x1^2 + 1/2*x2^2", sw));
    CHECK(X1.equals(vf(sw, {{"p1", "-x1"}, {"p2", "-x2"}})));
}

TEST_CASE("jacobi_check accepts Poisson bivectors and reports witnesses") {
    auto schart = sigma_chart();
    CHECK(jacobi_check(gaudin_bivector(schart)).ok);

    auto sw = make_chart({{"x1", DomainSign::any},
                          {"x2", DomainSign::any},
                          {"p1", DomainSign::any},
                          {"p2", DomainSign::any}});
    CHECK(jacobi_check(canonical_bivector(sw, {{0, 2}, {1, 3}})).ok);

    Bivector bad(schart);
    bad.set_component(0, 1, parse_expr("1", schart));
    bad.set_component(0, 2, parse_expr("s1", schart));
    auto result = jacobi_check(bad);
    REQUIRE(!result.ok);
    CHECK(result.witness->i == 0);
    CHECK(result.witness->j == 1);
    CHECK(result.witness->k == 2);
    CHECK(expr_equal(result.witness->residue, parse_expr("1", schart)));
}

TEST_CASE("lie_derivative_bivector detects non-Hamiltonian flows") {
    auto schart = sigma_chart();
    Bivector gm = gaudin_bivector(schart);
    Bivector moved = lie_derivative_bivector(vf(schart, {{"s3", "1"}}), gm);
    CHECK(!moved.is_zero());
    CHECK(expr_equal(moved.component(1, 0), parse_expr("1", schart)));

    CHECK(lie_derivative_bivector(VectorField(schart), gm).is_zero());

    // Hamiltonian fields preserve the structure.
    auto chart = xp_chart();
    Bivector L = canonical_2d(chart);
    std::mt19937 rng(31);
    for (int i = 0; i < 25; ++i) {
        Expr f = random_poly(rng, chart);
        CHECK(lie_derivative_bivector(hamiltonian_vf(L, f), L).is_zero());
    }
}

TEST_CASE("oneform_bracket satisfies [df,dg] = d{f,g} and antisymmetry") {
    auto chart = xp_chart();
    Bivector L = canonical_2d(chart);
    Expr f = parse_expr("x", chart), g = parse_expr("x*p", chart);
    OneForm lhs = oneform_bracket(L, exterior_d(f), exterior_d(g));
    OneForm rhs = exterior_d(poisson_bracket(L, f, g));
    CHECK(lhs.equals(rhs));

    OneForm w = exterior_d(g);
    CHECK(oneform_bracket(L, w, w).is_zero());

    // Casimir differentials of the Gaudin bivector commute (the Casimir
    // co-distribution is involutive).
    auto schart = sigma_chart();
    Bivector gm = gaudin_bivector(schart);
    Expr c = parse_expr("s1^2 - s2^2 + s3^2", schart);
    OneForm dc = exterior_d(c);
    OneForm dc2 = exterior_d(c * c);
    CHECK(oneform_bracket(gm, dc, dc2).is_zero());
}

TEST_CASE("lie_poisson_bivector builds linear Poisson structures") {
    auto schart = sigma_chart();
    StructureConstants so3(3);
    so3.set_pair(0, 1, 2, Rational(1));
    so3.set_pair(1, 2, 0, Rational(1));
    so3.set_pair(2, 0, 1, Rational(1));
    Bivector L = lie_poisson_bivector(so3, schart);
    CHECK(jacobi_check(L).ok);
    Expr s1 = parse_expr("s1", schart), s2 = parse_expr("s2", schart),
         s3 = parse_expr("s3", schart);
    CHECK(expr_equal(poisson_bracket(L, s1, s2), s3));
    CHECK(expr_equal(poisson_bracket(L, s2, s3), s1));
    CHECK(expr_equal(poisson_bracket(L, s3, s1), s2));

    StructureConstants abelian(3);
    CHECK(lie_poisson_bivector(abelian, schart).is_zero());

    StructureConstants sl2(3);
    sl2.set_pair(0, 2, 1, Rational(2));
    sl2.set_pair(0, 1, 0, Rational(1));
    sl2.set_pair(1, 2, 2, Rational(1));
    CHECK(jacobi_check(lie_poisson_bivector(sl2, schart)).ok);

    StructureConstants broken(3);
    broken.set(0, 1, 2, Rational(1));  // no antisymmetric partner
    CHECK_THROWS_AS(lie_poisson_bivector(broken, schart), Error);
}

TEST_CASE("find_hamiltonian inverts the canonical pairing") {
    auto ks = make_chart({{"x", DomainSign::nonzero}, {"p", DomainSign::any}});
    Bivector L = canonical_2d(ks);
    Expr h = find_hamiltonian(L, vf(ks, {{"p", "4*x^(-2)"}}));
    CHECK(expr_equal(h, parse_expr("4/x", ks)));

    CHECK_THROWS_AS(find_hamiltonian(L, vf(ks, {{"x", "x"}})), Error);
    try {
        find_hamiltonian(L, vf(ks, {{"x", "x"}}));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::not_hamiltonian);
    }
    try {
        find_hamiltonian(L, vf(ks, {{"p", "x^(-1)"}}));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::logarithmic_term);
    }

    auto schart = sigma_chart();
    try {
        find_hamiltonian(gaudin_bivector(schart), vf(schart, {{"s3", "1"}}));
        FAIL("expected DegenerateBivector");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::degenerate_bivector);
    }
}

TEST_CASE("find_hamiltonian handles unpaired parameter variables") {
    auto ks = make_chart(
        {{"x", DomainSign::nonzero}, {"p", DomainSign::any}, {"c0", DomainSign::any}});
    Bivector L = canonical_bivector(ks, {{0, 1}});
    VectorField X3 = vf(ks, {{"x", "1/2*p*x^3"}, {"p", "-3/4*p^2*x^2 - 4*c0"}});
    Expr h3 = find_hamiltonian(L, X3);
    CHECK(expr_equal(h3, parse_expr("1/4*p^2*x^3 + 4*c0*x", ks)));

    // A field moving the parameter is rejected.
    CHECK_THROWS_AS(find_hamiltonian(L, vf(ks, {{"c0", "1"}})), Error);
}

TEST_CASE("property: sign conventions hold simultaneously") {
    // X_f g = {g,f}, X_f = -hat(df), X_{f,g} = -[X_f, X_g], all at once,
    // plus the Leibniz rule of the bracket.
    std::mt19937 rng(37);
    auto chart = xp_chart();
    Bivector L = canonical_2d(chart);
    for (int i = 0; i < 60; ++i) {
        Expr f = random_poly(rng, chart), g = random_poly(rng, chart), h = random_poly(rng, chart);
        VectorField Xf = hamiltonian_vf(L, f);
        CHECK(expr_equal(apply_vf(Xf, g), poisson_bracket(L, g, f)));
        CHECK(hamiltonian_vf(L, poisson_bracket(L, f, g))
                  .equals(-lie_bracket_vf(Xf, hamiltonian_vf(L, g))));
        CHECK(expr_equal(poisson_bracket(L, f * g, h),
                         f * poisson_bracket(L, g, h) + poisson_bracket(L, f, h) * g));
    }
}

TEST_CASE("property: anti-homomorphism on a non-constant Poisson bivector") {
    std::mt19937 rng(41);
    auto schart = sigma_chart();
    Bivector gm = gaudin_bivector(schart);
    for (int i = 0; i < 40; ++i) {
        Expr f = random_poly(rng, schart, 3), g = random_poly(rng, schart, 3);
        VectorField Xf = hamiltonian_vf(gm, f), Xg = hamiltonian_vf(gm, g);
        CHECK(hamiltonian_vf(gm, poisson_bracket(gm, f, g)).equals(-lie_bracket_vf(Xf, Xg)));
        OneForm lhs = oneform_bracket(gm, exterior_d(f), exterior_d(g));
        CHECK(lhs.equals(exterior_d(poisson_bracket(gm, f, g))));
    }
}

TEST_CASE("property: vector-field Jacobi identity") {
    std::mt19937 rng(43);
    auto chart = xy_chart();
    for (int i = 0; i < 30; ++i) {
        VectorField X(chart), Y(chart), Z(chart);
        for (int v = 0; v < 2; ++v) {
            X.set_component(v, random_poly(rng, chart, 2));
            Y.set_component(v, random_poly(rng, chart, 2));
            Z.set_component(v, random_poly(rng, chart, 2));
        }
        VectorField total = lie_bracket_vf(X, lie_bracket_vf(Y, Z)) +
                            lie_bracket_vf(Y, lie_bracket_vf(Z, X)) +
                            lie_bracket_vf(Z, lie_bracket_vf(X, Y));
        CHECK(total.is_zero());
    }
}

TEST_CASE("property: Jacobi cyclic sum agrees with the triple-bracket identity") {
    std::mt19937 rng(47);
    auto schart = sigma_chart();
    for (int trial = 0; trial < 40; ++trial) {
        Bivector L(schart);
        // Random linear bivectors: some satisfy Jacobi, most do not.
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) L.set_component(i, j, random_poly(rng, schart, 1));
        bool cyclic = jacobi_check(L).ok;
        bool triple = true;
        for (int i = 0; i < 3 && triple; ++i)
            for (int j = 0; j < 3 && triple; ++j)
                for (int k = 0; k < 3 && triple; ++k) {
                    Expr xi = Expr::variable(schart, i);
                    Expr xj = Expr::variable(schart, j);
                    Expr xk = Expr::variable(schart, k);
                    Expr sum = poisson_bracket(L, xi, poisson_bracket(L, xj, xk)) +
                               poisson_bracket(L, xj, poisson_bracket(L, xk, xi)) +
                               poisson_bracket(L, xk, poisson_bracket(L, xi, xj));
                    if (!sum.is_zero()) triple = false;
                }
        CHECK(cyclic == triple);
    }
}
