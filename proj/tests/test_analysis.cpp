#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieham/analysis.hpp"
#include "lieham/catalog.hpp"
#include "lieham/errors.hpp"
#include "lieham/numint.hpp"
#include "test_support.hpp"

using namespace lieham;
using namespace lieham::testing;

namespace {

Expr sw_integral(const LHSystem& sw) {
    return sw.constants_of_motion.at(0);
}

/// The Lie symmetry of the two-dimensional oscillator displayed in the
/// literature, transcribed componentwise.
VectorField sw_symmetry_reference(const ChartPtr& chart) {
    VectorField Y(chart);
    Y.set_component(chart->require("x1"), parse_expr("2*(x1*p2 - p1*x2)*x2", chart));
    Y.set_component(chart->require("x2"), parse_expr("-2*(x1*p2 - p1*x2)*x1", chart));
    Y.set_component(chart->require("p1"),
                    parse_expr("2*((x1*p2 - p1*x2)*p2 + k*(x1^4 - x2^4)/(x1^3*x2^2))", chart));
    Y.set_component(chart->require("p2"),
                    parse_expr("-2*((x1*p2 - p1*x2)*p1 + k*(x1^4 - x2^4)/(x2^3*x1^2))", chart));
    return Y;
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

TEST_CASE("constant_of_motion_check: the oscillator integral and Gaudin first integrals") {
    LHSystem sw = get_system("sw");
    CHECK(constant_of_motion_check(sw, sw_integral(sw)).ok);

    LHSystem gx = get_system("gaudin_counterexample");
    CHECK(constant_of_motion_check(gx, parse_expr("s1", gx.chart)).ok);
    CHECK(constant_of_motion_check(gx, parse_expr("s2", gx.chart)).ok);
    CHECK(!constant_of_motion_check(gx, parse_expr("s3", gx.chart)).ok);

    LHSystem ks = get_system("ks2");
    auto check = constant_of_motion_check(ks, (*ks.hamiltonians)[2]);
    REQUIRE(!check.ok);
    CHECK(check.witness->first == "X1");
    // X1 h3 = {h3,h1} = 2 h2 = 2xp.
    CHECK(expr_equal(check.witness->second, parse_expr("2*x*p", ks.chart)));
}

TEST_CASE("poisson_commute_report: the integral commutes with the whole algebra") {
    LHSystem sw = get_system("sw");
    auto report = poisson_commute_report(sw, sw_integral(sw));
    CHECK(report.size() == 3);
    for (const auto& entry : report) CHECK(entry.zero);

    // A Casimir commutes with any function algebra.
    LHSystem euler = get_system("euler_so3");
    for (const auto& entry :
         poisson_commute_report(euler, parse_expr("s1^2 + s2^2 + s3^2", euler.chart)))
        CHECK(entry.zero);

    // sigma2 fails against the Gaudin Y algebra: {s2, s1} = s3.
    LHSystem gy = get_system("gaudin_counterexample", {{"field", "Y"}});
    auto gyr = poisson_commute_report(gy, parse_expr("s2", gy.chart));
    REQUIRE(gyr.size() == 1);
    CHECK(!gyr[0].zero);
    CHECK(expr_equal(gyr[0].bracket, parse_expr("s3", gy.chart)));
}

TEST_CASE("symmetry_from_constant reproduces the displayed oscillator symmetry") {
    LHSystem sw = get_system("sw");
    VectorField Y = symmetry_from_constant(sw, sw_integral(sw));
    CHECK(Y.equals(sw_symmetry_reference(sw.chart)));
    CHECK(Y.equals(hat_lambda(sw.poisson, exterior_d(sw_integral(sw)))));

    // A Casimir generates the zero field.
    LHSystem euler = get_system("euler_so3");
    CHECK(symmetry_from_constant(euler, parse_expr("s1^2 + s2^2 + s3^2", euler.chart)).is_zero());

    // Gaudin Y system: hat(dI) for I = s1 gives minus the flow field.
    LHSystem gy = get_system("gaudin_counterexample", {{"field", "Y"}});
    VectorField sym = symmetry_from_constant(gy, parse_expr("s1", gy.chart));
    CHECK(sym.equals(-gy.generators[0]));

    CHECK(kind_of([&] { symmetry_from_constant(gy, parse_expr("s2", gy.chart)); }) ==
          ErrorKind::not_a_constant);
}

TEST_CASE("symmetry_check: commutation against the closed basis") {
    LHSystem sw = get_system("sw");
    CHECK(symmetry_check(sw, sw_symmetry_reference(sw.chart)).ok);

    // In an abelian algebra every generator is a symmetry.
    LHSystem gy = get_system("gaudin_counterexample", {{"field", "Y"}});
    CHECK(symmetry_check(gy, gy.generators[0]).ok);

    // X2 is no symmetry of the KS system: [X2, X1] = -X1.
    LHSystem ks = get_system("ks2");
    auto check = symmetry_check(ks, ks.generators[1]);
    REQUIRE(!check.ok);
    CHECK(check.witness->first == "X1");
}

TEST_CASE("integrals_poisson_closed: Lie-Hamilton flows close, the Gaudin X does not") {
    LHSystem gy = get_system("gaudin_counterexample", {{"field", "Y"}});
    auto ok = integrals_poisson_closed(
        gy, {parse_expr("s1", gy.chart), parse_expr("s2^2 - s3^2", gy.chart)});
    CHECK(ok.ok);
    // {s1, s2^2 - s3^2} = 0, trivially a constant again.
    CHECK(ok.brackets[0][0].is_zero());

    auto single = integrals_poisson_closed(gy, {parse_expr("s1", gy.chart)});
    CHECK(single.ok);

    LHSystem gx = get_system("gaudin_counterexample");
    auto bad =
        integrals_poisson_closed(gx, {parse_expr("s1", gx.chart), parse_expr("s2", gx.chart)});
    REQUIRE(!bad.ok);
    REQUIRE(bad.failures.size() == 1);
    CHECK(expr_equal(bad.failures[0].second, parse_expr("-s3", gx.chart)));

    CHECK(kind_of([&] {
              integrals_poisson_closed(gx, {parse_expr("s3", gx.chart)});
          }) == ErrorKind::not_a_constant);
}

TEST_CASE("SW perfect-algebra property: the symmetry is Hamiltonian for -I") {
    LHSystem sw = get_system("sw");
    Expr I = sw_integral(sw);
    VectorField Y = symmetry_from_constant(sw, I);
    Expr h = find_hamiltonian(sw.poisson, Y);
    CHECK(expr_equal(h, -I));
    CHECK(constant_of_motion_check(sw, h).ok);
}

TEST_CASE("jacobian_determinant: affine coordinates are nondegenerate") {
    LHSystem affine = get_system("affine_linearizable");
    Expr det = jacobian_determinant(*affine.hamiltonians);
    CHECK(expr_equal(det, parse_expr("-p", affine.chart)));
}

TEST_CASE("linearize: the affine demo succeeds and matches the numeric oracle") {
    LHSystem sys = get_system("affine_linearizable");
    LinearizationResult lin = linearize(sys, sys.comomentum);
    REQUIRE(lin.new_coordinates.size() == 2);
    CHECK(expr_equal(lin.new_coordinates[0], parse_expr("p", sys.chart)));
    CHECK(expr_equal(lin.new_coordinates[1], parse_expr("x*p", sys.chart)));
    // {u1,u2} = -u1: the linear bivector is -u1 d/du1 ^ d/du2.
    CHECK(expr_equal(lin.linear_bivector.component(0, 1),
                     parse_expr("-u1", lin.new_chart)));
    CHECK(jacobi_check(lin.linear_bivector).ok);
    CHECK(lin.fn_structure.get(0, 1, 0) == Rational(-1));

    // Numeric oracle: integrate the original flow, push it through the new
    // coordinates, and compare with the linear system's own solution.
    IntegratorConfig cfg{0.0, 1.0, 1e-3, 10};
    std::vector<double> x0{1.0, 1.0};
    IntegrationResult original = integrate(sys, x0, cfg);

    Rhs linear_rhs = [&lin](double t, const std::vector<double>& y) {
        std::size_t n = y.size();
        std::vector<double> dy(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                dy[j] += lin.linear_system[j][k].eval(t) * y[k];
        return dy;
    };
    std::vector<double> y0;
    for (const auto& h : lin.new_coordinates) y0.push_back(h.eval(x0));
    Trajectory linear = rk4_solve(linear_rhs, y0, 0.0, 1.0, 5e-4, 20);
    double deviation = compare_trajectories(original.trajectory, linear, lin.new_coordinates);
    CHECK(deviation < 1e-6);
}

TEST_CASE("linearize: KS fails on dimensions, Euler on distribution rank") {
    LHSystem ks = get_system("ks2", {{"c0", "1"}});
    try {
        linearize(ks, ks.comomentum);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::dimension_mismatch);
        CHECK(std::string(e.what()).find("dim V^X = 3") != std::string::npos);
    }

    LHSystem euler = get_system("euler_so3");
    ComomentumAssignment lam;
    for (std::size_t a = 0; a < euler.generator_names.size(); ++a)
        lam.emplace(euler.generator_names[a], -(*euler.hamiltonians)[a]);
    try {
        linearize(euler, lam);
        FAIL("expected DimensionMismatch via rank");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::dimension_mismatch);
        CHECK(std::string(e.what()).find("rank") != std::string::npos);
    }
}

TEST_CASE("linearize: functionally dependent coordinates give DegenerateJacobian") {
    auto chart = make_chart({{"x", DomainSign::any}, {"p", DomainSign::any}});
    Bivector L = canonical_bivector(chart, {{0, 1}});
    std::vector<Expr> hams{parse_expr("p", chart), parse_expr("1/2*p^2", chart)};
    LHSystem sys = LHSystem::make(chart, L, {"X1", "X2"},
                                  {hamiltonian_vf(L, hams[0]), hamiltonian_vf(L, hams[1])},
                                  {CoeffFn::constant(Rational(1)), CoeffFn::constant(Rational(1))},
                                  hams);
    ComomentumAssignment lam{{"X1", -hams[0]}, {"X2", -hams[1]}};
    CHECK(kind_of([&] { linearize(sys, lam); }) == ErrorKind::degenerate_jacobian);
}

TEST_CASE("linearize: a non-morphism assignment is rejected") {
    LHSystem ric = get_system("riccati2");
    // Trim to two generators spanning a 2-dim solvable algebra on the plane:
    // X2 = d/dx, X3 = x d/dx - p d/dp with [X2,X3] = X2.
    LHSystem sub = LHSystem::make(
        ric.chart, ric.poisson, {"X2", "X3"}, {ric.generators[1], ric.generators[2]},
        {CoeffFn::constant(Rational(1)), CoeffFn::constant(Rational(1))},
        std::vector<Expr>{(*ric.hamiltonians)[1], (*ric.hamiltonians)[2]});
    // Shift lambda(X2) by a Casimir constant: the Hamiltonian pairing still
    // holds but the bracket relation lambda([X2,X3]) = {lambda2, lambda3}
    // picks up the constant as a defect.
    Expr one = parse_expr("1", ric.chart);
    ComomentumAssignment lam{{"X2", -(*ric.hamiltonians)[1] - one},
                             {"X3", -(*ric.hamiltonians)[2]}};
    CHECK(kind_of([&] { linearize(sub, lam); }) == ErrorKind::not_strong_comomentum);
}
