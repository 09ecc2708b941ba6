#include "lieham/catalog.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "lieham/errors.hpp"

namespace lieham {

namespace {

/// Whole-word textual substitution of a symbolic parameter by a parenthesised
/// rational literal, applied before parsing.
std::string sub_param(const std::string& text, const std::string& name, const std::string& value) {
    std::string out;
    std::size_t i = 0;
    auto word_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    while (i < text.size()) {
        if (text.compare(i, name.size(), name) == 0 &&
            (i == 0 || !word_char(text[i - 1])) &&
            (i + name.size() == text.size() || !word_char(text[i + name.size()]))) {
            out += "(" + value + ")";
            i += name.size();
        } else {
            out += text[i++];
        }
    }
    return out;
}

void check_param_keys(const Params& params, const std::set<std::string>& allowed,
                      const std::string& system) {
    for (const auto& [key, value] : params) {
        (void)value;
        if (!allowed.count(key))
            raise(ErrorKind::bad_params, "unknown parameter '" + key + "' for system " + system);
    }
}

std::string param_or(const Params& params, const std::string& key, const std::string& fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

/// Validates that a parameter value is a rational literal.
void require_rational(const std::string& value, const std::string& key) {
    try {
        (void)Rational::from_string(value);
    } catch (const Error&) {
        raise(ErrorKind::bad_params, "parameter '" + key + "' must be rational, got '" + value + "'");
    }
}

CoeffFn coeff(const std::string& text, const std::string& key) {
    try {
        return CoeffFn::parse(text);
    } catch (const Error& e) {
        raise(ErrorKind::bad_params,
              "coefficient parameter '" + key + "' does not parse: " + e.what());
    }
}

VectorField field(const ChartPtr& chart, const std::map<std::string, std::string>& comps) {
    VectorField X(chart);
    for (const auto& [var, text] : comps) X.set_component(chart->require(var), parse_expr(text, chart));
    return X;
}

CatalogEntry make_riccati2(const Params& params) {
    check_param_keys(params, {"a0", "a1", "a2"}, "riccati2");
    ChartPtr chart = make_chart({{"x", DomainSign::any}, {"p", DomainSign::negative}});
    Bivector L = canonical_bivector(chart, {{0, 1}});

    std::vector<std::string> names{"X1", "X2", "X3", "X4"};
    std::vector<VectorField> gens{
        field(chart, {{"x", "sqrt(-p)^(-1)"}}),
        field(chart, {{"x", "1"}}),
        field(chart, {{"x", "x"}, {"p", "-p"}}),
        field(chart, {{"x", "x^2"}, {"p", "-2*x*p"}}),
    };
    std::vector<CoeffFn> coeffs{
        CoeffFn::constant(Rational(1)),
        CoeffFn::negate(coeff(param_or(params, "a0", "1"), "a0")),
        CoeffFn::negate(coeff(param_or(params, "a1", "1"), "a1")),
        CoeffFn::negate(coeff(param_or(params, "a2", "1"), "a2")),
    };
    std::vector<Expr> hams{
        parse_expr("-2*sqrt(-p)", chart),
        parse_expr("p", chart),
        parse_expr("x*p", chart),
        parse_expr("x^2*p", chart),
    };

    CatalogEntry entry{"riccati2",
                       LHSystem::make(chart, L, names, gens, coeffs, hams),
                       {}};
    entry.expect.vf_dimension = 5;
    entry.expect.fn_dimension = 6;
    entry.expect.extra_fields.push_back(
        {"X5", field(chart, {{"x", "x*sqrt(-p)^(-1)"}, {"p", "2*sqrt(-p)"}})});
    entry.expect.extra_hamiltonians.emplace("X5", parse_expr("-2*x*sqrt(-p)", chart));
    entry.expect.casimirs.push_back(parse_expr("1", chart));
    return entry;
}

CatalogEntry make_ks2(const Params& params) {
    check_param_keys(params, {"b1", "c0"}, "ks2");
    bool symbolic_c0 = !params.count("c0");
    std::vector<VarSpec> vars{{"x", DomainSign::nonzero}, {"p", DomainSign::any}};
    if (symbolic_c0) vars.push_back({"c0", DomainSign::any});
    ChartPtr chart = make_chart(vars);
    Bivector L = canonical_bivector(chart, {{0, 1}});

    auto expr_text = [&](std::string text) {
        if (!symbolic_c0) {
            require_rational(params.at("c0"), "c0");
            text = sub_param(text, "c0", params.at("c0"));
        }
        return text;
    };

    std::vector<std::string> names{"X1", "X2", "X3"};
    std::vector<VectorField> gens{
        field(chart, {{"p", "4*x^(-2)"}}),
        field(chart, {{"x", "x"}, {"p", "-p"}}),
        field(chart, {{"x", "1/2*p*x^3"}, {"p", expr_text("-3/4*p^2*x^2 - 4*c0")}}),
    };
    std::vector<CoeffFn> coeffs{
        coeff(param_or(params, "b1", "sin(t)"), "b1"),
        CoeffFn::constant(Rational(0)),
        CoeffFn::constant(Rational(1)),
    };
    std::vector<Expr> hams{
        parse_expr("4/x", chart),
        parse_expr("x*p", chart),
        parse_expr(expr_text("1/4*p^2*x^3 + 4*c0*x"), chart),
    };
    std::map<std::string, Expr> comomentum;
    for (std::size_t a = 0; a < names.size(); ++a) comomentum.emplace(names[a], -hams[a]);

    CatalogEntry entry{"ks2",
                       LHSystem::make(chart, L, names, gens, coeffs, hams, {}, comomentum),
                       {}};
    entry.expect.vf_dimension = 3;
    entry.expect.fn_dimension = 3;
    entry.expect.casimirs.push_back(parse_expr("1", chart));
    return entry;
}

CatalogEntry make_sw(const Params& params) {
    check_param_keys(params, {"n", "k", "omega"}, "sw");
    int n = 2;
    if (params.count("n")) {
        try {
            n = std::stoi(params.at("n"));
        } catch (...) {
            raise(ErrorKind::bad_params, "parameter 'n' must be a small integer");
        }
    }
    if (n < 1 || n > 8) raise(ErrorKind::bad_params, "sw dimension n must be in 1..8");
    bool symbolic_k = !params.count("k");
    if (!symbolic_k) require_rational(params.at("k"), "k");

    std::vector<VarSpec> vars;
    for (int i = 1; i <= n; ++i) vars.push_back({"x" + std::to_string(i), DomainSign::nonzero});
    for (int i = 1; i <= n; ++i) vars.push_back({"p" + std::to_string(i), DomainSign::any});
    if (symbolic_k) vars.push_back({"k", DomainSign::any});
    ChartPtr chart = make_chart(vars);

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) pairs.push_back({i, n + i});
    Bivector L = canonical_bivector(chart, pairs);

    auto expr_text = [&](std::string text) {
        if (!symbolic_k) text = sub_param(text, "k", params.at("k"));
        return text;
    };

    std::map<std::string, std::string> c1, c2, c3;
    std::ostringstream h1, h2, h3;
    for (int i = 1; i <= n; ++i) {
        std::string xi = "x" + std::to_string(i), pi = "p" + std::to_string(i);
        c1[pi] = "-" + xi;
        c2[xi] = "-1/2*" + xi;
        c2[pi] = "1/2*" + pi;
        c3[xi] = pi;
        c3[pi] = expr_text("k*" + xi + "^(-3)");
        if (i > 1) {
            h1 << " + ";
            h2 << " - ";
            h3 << " + ";
        }
        h1 << "1/2*" << xi << "^2";
        h2 << (i == 1 ? "-1/2*" : "1/2*") << xi << "*" << pi;
        h3 << "1/2*" << pi << "^2 + " << expr_text("1/2*k*" + xi + "^(-2)");
    }

    std::vector<std::string> names{"X1", "X2", "X3"};
    std::vector<VectorField> gens{field(chart, c1), field(chart, c2), field(chart, c3)};
    CoeffFn omega = coeff(param_or(params, "omega", "1"), "omega");
    std::vector<CoeffFn> coeffs{
        CoeffFn::power(omega, Rational(2)),
        CoeffFn::constant(Rational(0)),
        CoeffFn::constant(Rational(1)),
    };
    std::vector<Expr> hams{
        parse_expr(h1.str(), chart),
        parse_expr(h2.str(), chart),
        parse_expr(h3.str(), chart),
    };
    std::map<std::string, Expr> comomentum;
    for (std::size_t a = 0; a < names.size(); ++a) comomentum.emplace(names[a], -hams[a]);

    std::vector<Expr> integrals;
    if (n == 2) {
        integrals.push_back(parse_expr(
            expr_text("(x1*p2 - p1*x2)^2 + k*(x1^2*x2^(-2) + x2^2*x1^(-2))"), chart));
    }

    CatalogEntry entry{"sw",
                       LHSystem::make(chart, L, names, gens, coeffs, hams, integrals, comomentum),
                       {}};
    entry.expect.vf_dimension = 3;
    entry.expect.fn_dimension = 3;
    entry.expect.casimirs.push_back(parse_expr("1", chart));
    return entry;
}

StructureConstants so3_constants() {
    StructureConstants c(3);
    c.set_pair(0, 1, 2, Rational(1));
    c.set_pair(1, 2, 0, Rational(1));
    c.set_pair(2, 0, 1, Rational(1));
    return c;
}

StructureConstants sl2_constants() {
    // The bracket pattern [e1,e3] = 2 e2, [e1,e2] = e1, [e2,e3] = e3.
    StructureConstants c(3);
    c.set_pair(0, 2, 1, Rational(2));
    c.set_pair(0, 1, 0, Rational(1));
    c.set_pair(1, 2, 2, Rational(1));
    return c;
}

CatalogEntry make_euler(const std::string& name, const StructureConstants& sc,
                        const std::string& casimir, const Params& params) {
    check_param_keys(params, {"b1", "b2", "b3"}, name);
    ChartPtr chart = make_chart(
        {{"s1", DomainSign::any}, {"s2", DomainSign::any}, {"s3", DomainSign::any}});
    Bivector L = lie_poisson_bivector(sc, chart);

    // Coadjoint generators: Y_a^b = sum_c c_abc s_c, Hamiltonian for -s_a.
    std::vector<std::string> names{"Y1", "Y2", "Y3"};
    std::vector<VectorField> gens;
    for (int a = 0; a < 3; ++a) {
        VectorField Y(chart);
        for (int b = 0; b < 3; ++b) {
            ExprBuilder eb(chart);
            for (int c = 0; c < 3; ++c) eb.add_term(sc.get(a, b, c), {{c, Rational(1)}});
            Y.set_component(b, eb.build());
        }
        gens.push_back(std::move(Y));
    }
    std::vector<CoeffFn> coeffs{
        coeff(param_or(params, "b1", "1"), "b1"),
        coeff(param_or(params, "b2", "1"), "b2"),
        coeff(param_or(params, "b3", "1"), "b3"),
    };
    std::vector<Expr> hams;
    for (int a = 0; a < 3; ++a) hams.push_back(-Expr::variable(chart, a));

    CatalogEntry entry{name, LHSystem::make(chart, L, names, gens, coeffs, hams), {}};
    entry.expect.vf_dimension = 3;
    entry.expect.fn_dimension = 3;
    entry.expect.casimirs.push_back(parse_expr(casimir, chart));
    return entry;
}

CatalogEntry make_gaudin(const Params& params) {
    check_param_keys(params, {"field"}, "gaudin_counterexample");
    std::string which = param_or(params, "field", "X");
    if (which != "X" && which != "Y")
        raise(ErrorKind::bad_params, "gaudin field must be 'X' or 'Y'");

    ChartPtr chart = make_chart(
        {{"s1", DomainSign::any}, {"s2", DomainSign::any}, {"s3", DomainSign::any}});
    Bivector L(chart);
    L.set_component(0, 1, parse_expr("-s3", chart));
    L.set_component(0, 2, parse_expr("-s2", chart));
    L.set_component(1, 2, parse_expr("-s1", chart));

    CatalogEntry entry{"gaudin_counterexample",
                       which == "X"
                           ? LHSystem::make(chart, L, {"X"}, {field(chart, {{"s3", "1"}})},
                                            {CoeffFn::constant(Rational(1))}, std::nullopt,
                                            {parse_expr("s1", chart), parse_expr("s2", chart)})
                           : LHSystem::make(chart, L, {"Y"},
                                            {field(chart, {{"s2", "s3"}, {"s3", "s2"}})},
                                            {CoeffFn::constant(Rational(1))},
                                            std::vector<Expr>{parse_expr("s1", chart)},
                                            {parse_expr("s1", chart),
                                             parse_expr("s2^2 - s3^2", chart)}),
                       {}};
    entry.expect.lie_hamilton = which == "Y";
    if (which == "Y") {
        entry.expect.vf_dimension = 1;
        entry.expect.fn_dimension = 1;
    }
    entry.expect.casimirs.push_back(parse_expr("s1^2 - s2^2 + s3^2", chart));
    return entry;
}

CatalogEntry make_affine(const Params& params) {
    check_param_keys(params, {"b1", "b2"}, "affine_linearizable");
    ChartPtr chart = make_chart({{"x", DomainSign::any}, {"p", DomainSign::nonzero}});
    Bivector L = canonical_bivector(chart, {{0, 1}});

    std::vector<std::string> names{"X1", "X2"};
    std::vector<VectorField> gens{
        field(chart, {{"x", "1"}}),
        field(chart, {{"x", "x"}, {"p", "-p"}}),
    };
    std::vector<CoeffFn> coeffs{
        coeff(param_or(params, "b1", "1"), "b1"),
        coeff(param_or(params, "b2", "sin(t)"), "b2"),
    };
    std::vector<Expr> hams{parse_expr("p", chart), parse_expr("x*p", chart)};
    std::map<std::string, Expr> comomentum;
    for (std::size_t a = 0; a < names.size(); ++a) comomentum.emplace(names[a], -hams[a]);

    CatalogEntry entry{"affine_linearizable",
                       LHSystem::make(chart, L, names, gens, coeffs, hams, {}, comomentum),
                       {}};
    entry.expect.vf_dimension = 2;
    entry.expect.fn_dimension = 2;
    entry.expect.casimirs.push_back(parse_expr("1", chart));
    return entry;
}

}  // namespace

CatalogEntry get_entry(const std::string& name, const Params& params) {
    if (name == "riccati2") return make_riccati2(params);
    if (name == "ks2") return make_ks2(params);
    if (name == "sw") return make_sw(params);
    if (name == "euler_so3") return make_euler("euler_so3", so3_constants(), "s1^2 + s2^2 + s3^2", params);
    if (name == "euler_sl2") return make_euler("euler_sl2", sl2_constants(), "s2^2 - s1*s3", params);
    if (name == "gaudin_counterexample") return make_gaudin(params);
    if (name == "affine_linearizable") return make_affine(params);
    raise(ErrorKind::unknown_system, "unknown system '" + name + "'");
}

LHSystem get_system(const std::string& name, const Params& params) {
    return get_entry(name, params).system;
}

std::vector<std::string> catalog_names() {
    return {"riccati2", "ks2",    "sw",
            "euler_so3", "euler_sl2", "gaudin_counterexample",
            "affine_linearizable"};
}

}  // namespace lieham
