#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieham/catalog.hpp"
#include "lieham/errors.hpp"
#include "lieham/lieham.hpp"
#include "test_support.hpp"

using namespace lieham;
using namespace lieham::testing;

namespace {

ComomentumAssignment minus_hamiltonians(const LHSystem& sys) {
    ComomentumAssignment lam;
    for (std::size_t a = 0; a < sys.generator_names.size(); ++a)
        lam.emplace(sys.generator_names[a], -(*sys.hamiltonians)[a]);
    return lam;
}

}  // namespace

TEST_CASE("verify_lh_structure: ks2 gives 3 = 3 + 0") {
    LHReport report = verify_lh_structure(get_system("ks2"));
    CHECK(report.vf_dimension == 3);
    CHECK(report.fn_dimension == 3);
    CHECK(report.casimir_kernel_basis.empty());
    CHECK(report.exact_sequence_ok);
    for (const auto& v : report.hamiltonianity) CHECK(v.hamiltonian);
}

TEST_CASE("verify_lh_structure: riccati2 gives 6 = 5 + 1 with kernel {1}") {
    LHSystem sys = get_system("riccati2");
    LHReport report = verify_lh_structure(sys);
    CHECK(report.vf_dimension == 5);
    CHECK(report.fn_dimension == 6);
    REQUIRE(report.casimir_kernel_basis.size() == 1);
    CHECK(expr_equal(report.casimir_kernel_basis[0], parse_expr("1", sys.chart)));
    CHECK(report.exact_sequence_ok);
}

TEST_CASE("verify_lh_structure: the Gaudin X field is refuted with a witness") {
    LHSystem sys = get_system("gaudin_counterexample");
    try {
        verify_lh_structure(sys);
        FAIL("expected NotHamiltonianGenerator");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::not_hamiltonian_generator);
        REQUIRE(e.witness.has_value());
        CHECK(e.witness->find("d/ds") != std::string::npos);  // printed L_X Lambda
    }
}

TEST_CASE("verify_lh_structure: the Gaudin Y field is a Lie-Hamilton system") {
    LHSystem sys = get_system("gaudin_counterexample", {{"field", "Y"}});
    LHReport report = verify_lh_structure(sys);
    CHECK(report.vf_dimension == 1);
    CHECK(report.fn_dimension == 1);
    CHECK(report.exact_sequence_ok);
}

TEST_CASE("verify_lh_structure recovers Hamiltonians on canonical bivectors") {
    // The affine system without its Hamiltonians: find_hamiltonian fills
    // them back in.
    LHSystem full = get_system("affine_linearizable");
    LHSystem stripped = LHSystem::make(full.chart, full.poisson, full.generator_names,
                                       full.generators, full.coefficients);
    LHReport report = verify_lh_structure(stripped);
    CHECK(report.vf_dimension == 2);
    REQUIRE(report.hamiltonianity.size() == 2);
    for (std::size_t a = 0; a < 2; ++a) {
        REQUIRE(report.hamiltonianity[a].h.has_value());
        CHECK(expr_equal(*report.hamiltonianity[a].h, (*full.hamiltonians)[a]));
    }
}

TEST_CASE("casimir_check on the catalog bivectors") {
    LHSystem gaudin = get_system("gaudin_counterexample");
    CHECK(casimir_check(gaudin.poisson, parse_expr("s1^2 - s2^2 + s3^2", gaudin.chart)));
    CHECK(!casimir_check(gaudin.poisson, parse_expr("s1", gaudin.chart)));

    LHSystem euler = get_system("euler_so3");
    CHECK(casimir_check(euler.poisson, parse_expr("s1^2 + s2^2 + s3^2", euler.chart)));

    LHSystem affine = get_system("affine_linearizable");
    CHECK(!casimir_check(affine.poisson, parse_expr("x", affine.chart)));
    CHECK(casimir_check(affine.poisson, parse_expr("3", affine.chart)));
}

TEST_CASE("casimir_kernel picks out exactly the Casimir lines") {
    LHSystem ric = get_system("riccati2");
    std::vector<Expr> basis = *ric.hamiltonians;
    basis.push_back(get_entry("riccati2").expect.extra_hamiltonians.at("X5"));
    basis.push_back(parse_expr("1", ric.chart));
    auto kernel = casimir_kernel(ric.poisson, basis);
    REQUIRE(kernel.size() == 1);
    CHECK(expr_equal(kernel[0], parse_expr("1", ric.chart)));

    LHSystem ks = get_system("ks2");
    CHECK(casimir_kernel(ks.poisson, *ks.hamiltonians).empty());

    // A basis containing a known Casimir keeps its line.
    LHSystem euler = get_system("euler_so3");
    Expr c = parse_expr("s1^2 + s2^2 + s3^2", euler.chart);
    auto k2 = casimir_kernel(euler.poisson, {parse_expr("s1", euler.chart), c});
    REQUIRE(k2.size() == 1);
    CHECK(expr_equal(k2[0], c));
}

TEST_CASE("upsilon: KS vanishes identically, Riccati picks up the constant 2") {
    LHSystem ks = get_system("ks2");
    UpsilonResult uks = upsilon(ks, minus_hamiltonians(ks));
    CHECK(uks.all_zero());

    LHSystem ric = get_system("riccati2");
    VfClosure closure = closure_vf(ric.generators, ric.generator_names);
    REQUIRE(closure.converged);
    ComomentumAssignment lam = minus_hamiltonians(ric);
    // The gained element [X1,X4] equals X5 exactly; assign -h5 to it.
    lam.emplace("[X1,X4]", -get_entry("riccati2").expect.extra_hamiltonians.at("X5"));
    UpsilonResult ur = upsilon(ric, lam);
    CHECK(!ur.all_zero());
    std::size_t i5 = 4;
    REQUIRE(ur.basis_names[i5] == "[X1,X4]");
    CHECK(expr_equal(ur.entries[0][i5], parse_expr("2", ric.chart)));
    CHECK(expr_equal(ur.entries[i5][0], parse_expr("-2", ric.chart)));
    // Every other entry in the first row vanishes.
    for (std::size_t b = 1; b < 4; ++b) CHECK(ur.entries[0][b].is_zero());

    // extend_assignment reproduces the same completion via find_hamiltonian.
    ComomentumAssignment extended = extend_assignment(ric, closure, minus_hamiltonians(ric));
    CHECK(expr_equal(extended.at("[X1,X4]"), lam.at("[X1,X4]")));
}

TEST_CASE("upsilon on a single generator is the 1x1 zero matrix") {
    LHSystem gy = get_system("gaudin_counterexample", {{"field", "Y"}});
    UpsilonResult u = upsilon(gy, minus_hamiltonians(gy));
    REQUIRE(u.entries.size() == 1);
    CHECK(u.entries[0][0].is_zero());
}

TEST_CASE("build_extension: Riccati reaches dimension 6, KS stays at 3") {
    LHSystem ric = get_system("riccati2");
    VfClosure closure = closure_vf(ric.generators, ric.generator_names);
    ComomentumAssignment lam = extend_assignment(ric, closure, minus_hamiltonians(ric));
    ExtensionResult ext = build_extension(ric, lam);
    CHECK(ext.basis.size() == 6);
    CHECK(ext.w0_dimension == 5);
    CHECK(ext.casimir_dimension == 1);

    LHSystem ks = get_system("ks2");
    ExtensionResult eks = build_extension(ks, minus_hamiltonians(ks));
    CHECK(eks.basis.size() == 3);
    CHECK(eks.casimir_dimension == 0);
}

TEST_CASE("build_extension: central translations grow by one dimension") {
    // h1 = p, h2 = x on the canonical plane: [X1,X2] = 0 but {p,x} = -1, so
    // the extension gains the central constant.
    auto chart = make_chart({{"x", DomainSign::any}, {"p", DomainSign::any}});
    Bivector L = canonical_bivector(chart, {{0, 1}});
    std::vector<Expr> hams{parse_expr("p", chart), parse_expr("x", chart)};
    LHSystem sys = LHSystem::make(chart, L, {"X1", "X2"},
                                  {hamiltonian_vf(L, hams[0]), hamiltonian_vf(L, hams[1])},
                                  {CoeffFn::constant(Rational(1)), CoeffFn::constant(Rational(1))},
                                  hams);
    ExtensionResult ext = build_extension(sys, minus_hamiltonians(sys));
    CHECK(ext.w0_dimension == 2);
    CHECK(ext.basis.size() == 3);
    CHECK(ext.casimir_dimension == 1);
}

TEST_CASE("strong_comomentum_check: KS passes, Riccati fails on (X1,[X1,X4])") {
    LHSystem ks = get_system("ks2");
    CHECK(strong_comomentum_check(ks, minus_hamiltonians(ks)).ok);

    LHSystem ric = get_system("riccati2");
    VfClosure closure = closure_vf(ric.generators, ric.generator_names);
    ComomentumAssignment lam = extend_assignment(ric, closure, minus_hamiltonians(ric));
    ComomentumCheck check = strong_comomentum_check(ric, lam);
    REQUIRE(!check.ok);
    CHECK(check.witness->first.first == "X1");
    CHECK(check.witness->first.second == "[X1,X4]");
    CHECK(expr_equal(check.witness->second, parse_expr("2", ric.chart)));

    LHSystem gy = get_system("gaudin_counterexample", {{"field", "Y"}});
    CHECK(strong_comomentum_check(gy, minus_hamiltonians(gy)).ok);
}

TEST_CASE("property: strong comomentum agreement with upsilon on catalog systems") {
    for (const char* name : {"ks2", "sw", "euler_so3", "euler_sl2", "affine_linearizable"}) {
        LHSystem sys = get_system(name);
        ComomentumAssignment lam = minus_hamiltonians(sys);
        bool strong = strong_comomentum_check(sys, lam).ok;
        bool zero = upsilon(sys, lam).all_zero();
        CHECK(strong == zero);
    }
    LHSystem ric = get_system("riccati2");
    ComomentumAssignment lam =
        extend_assignment(ric, closure_vf(ric.generators, ric.generator_names),
                          minus_hamiltonians(ric));
    CHECK(strong_comomentum_check(ric, lam).ok == upsilon(ric, lam).all_zero());
}

TEST_CASE("property: exact-sequence dimension law on every converging catalog system") {
    for (const char* name : {"ks2", "riccati2", "sw", "euler_so3", "euler_sl2"}) {
        LHReport report = verify_lh_structure(get_system(name));
        CHECK(report.fn_dimension ==
              report.vf_dimension + static_cast<int>(report.casimir_kernel_basis.size()));
        CHECK(report.exact_sequence_ok);
    }
}

TEST_CASE("property: appending an independent Casimir raises fn_dim by one") {
    // Shift the KS Hamiltonian list by the Casimir constant: the vector
    // fields are untouched, the function algebra grows by the constant line.
    LHSystem ks = get_system("ks2");
    std::vector<Expr> shifted = *ks.hamiltonians;
    Expr casimir = parse_expr("5", ks.chart);
    shifted[2] = shifted[2] + casimir;
    LHSystem sys2 = LHSystem::make(ks.chart, ks.poisson, ks.generator_names, ks.generators,
                                   ks.coefficients, shifted);
    LHReport before = verify_lh_structure(ks);
    LHReport after = verify_lh_structure(sys2);
    CHECK(after.vf_dimension == before.vf_dimension);
    CHECK(after.fn_dimension == before.fn_dimension + 1);
    CHECK(after.casimir_kernel_basis.size() == before.casimir_kernel_basis.size() + 1);
    CHECK(after.exact_sequence_ok);
}

TEST_CASE("euler entries: Lie-Poisson pairing holds exactly") {
    for (const char* name : {"euler_so3", "euler_sl2"}) {
        LHSystem sys = get_system(name);
        for (std::size_t a = 0; a < sys.generators.size(); ++a)
            CHECK(hamiltonian_vf(sys.poisson, (*sys.hamiltonians)[a]).equals(sys.generators[a]));
        UpsilonResult u = upsilon(sys, minus_hamiltonians(sys));
        CHECK(u.all_zero());
    }
}
