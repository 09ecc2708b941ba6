#include "lieham/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "lieham/analysis.hpp"
#include "lieham/errors.hpp"

namespace lieham {

namespace {

[[noreturn]] void bad(const std::string& message) { raise(ErrorKind::bad_input, message); }

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) bad("unknown key '" + key + "' in " + where);
    }
}

std::string get_string(const Json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string())
        bad("missing string field '" + key + "' in " + where);
    return obj[key].get<std::string>();
}

}  // namespace

LHSystem load_system(const Json& doc) {
    if (!doc.is_object()) bad("system definition must be a JSON object");
    check_keys(doc,
               {"variables", "parameters", "poisson", "generators", "coefficients",
                "hamiltonians", "constants_of_motion", "comomentum"},
               "system definition");

    if (!doc.contains("variables") || !doc["variables"].is_array())
        bad("'variables' must be an array");
    std::vector<VarSpec> vars;
    for (const auto& v : doc["variables"]) {
        check_keys(v, {"name", "domain"}, "variable");
        vars.push_back({get_string(v, "name", "variable"),
                        domain_sign_from_string(get_string(v, "domain", "variable"))});
    }
    ChartPtr chart = make_chart(vars);

    std::set<std::string> parameters;
    if (doc.contains("parameters")) {
        if (!doc["parameters"].is_array()) bad("'parameters' must be an array");
        for (const auto& p : doc["parameters"]) {
            if (!p.is_string()) bad("'parameters' entries must be strings");
            chart->require(p.get<std::string>());
            parameters.insert(p.get<std::string>());
        }
    }

    if (!doc.contains("poisson")) bad("missing 'poisson'");
    const Json& pj = doc["poisson"];
    std::string type = get_string(pj, "type", "poisson");
    Bivector poisson(chart);
    if (type == "canonical") {
        check_keys(pj, {"type", "pairs"}, "poisson");
        std::vector<std::pair<int, int>> pairs;
        if (pj.contains("pairs")) {
            for (const auto& pr : pj["pairs"]) {
                if (!pr.is_array() || pr.size() != 2) bad("canonical pair must be [x, p]");
                pairs.push_back({chart->require(pr[0].get<std::string>()),
                                 chart->require(pr[1].get<std::string>())});
            }
        } else {
            // Default: consecutive non-parameter variables pair up in order.
            std::vector<int> free_vars;
            for (int i = 0; i < chart->size(); ++i)
                if (!parameters.count(chart->var(i).name)) free_vars.push_back(i);
            if (free_vars.size() % 2 != 0)
                bad("canonical bivector needs an even number of non-parameter variables");
            for (std::size_t i = 0; i < free_vars.size(); i += 2)
                pairs.push_back({free_vars[i], free_vars[i + 1]});
        }
        poisson = canonical_bivector(chart, pairs);
    } else if (type == "explicit") {
        check_keys(pj, {"type", "components"}, "poisson");
        if (!pj.contains("components") || !pj["components"].is_object())
            bad("explicit poisson needs a 'components' object");
        for (const auto& [key, value] : pj["components"].items()) {
            auto comma = key.find(',');
            if (comma == std::string::npos) bad("poisson component key must be 'vi,vj'");
            int i = chart->require(key.substr(0, comma));
            int j = chart->require(key.substr(comma + 1));
            if (!value.is_string()) bad("poisson component must be an expression string");
            poisson.set_component(i, j, parse_expr(value.get<std::string>(), chart));
        }
    } else if (type == "lie_poisson") {
        check_keys(pj, {"type", "structure_constants"}, "poisson");
        if (!pj.contains("structure_constants") || !pj["structure_constants"].is_array())
            bad("lie_poisson needs 'structure_constants'");
        StructureConstants sc(chart->size());
        for (const auto& entry : pj["structure_constants"]) {
            if (!entry.is_array() || entry.size() != 4)
                bad("structure constant entries are [i, j, k, \"c\"] with 1-based indices");
            int i = entry[0].get<int>() - 1;
            int j = entry[1].get<int>() - 1;
            int k = entry[2].get<int>() - 1;
            if (i < 0 || j < 0 || k < 0 || i >= chart->size() || j >= chart->size() ||
                k >= chart->size())
                bad("structure constant index out of range");
            sc.set_pair(i, j, k, Rational::from_string(entry[3].get<std::string>()));
        }
        poisson = lie_poisson_bivector(sc, chart);
    } else {
        bad("unknown poisson type '" + type + "'");
    }

    if (!doc.contains("generators") || !doc["generators"].is_array() || doc["generators"].empty())
        bad("'generators' must be a nonempty array");
    std::vector<std::string> names;
    std::vector<VectorField> gens;
    for (const auto& g : doc["generators"]) {
        check_keys(g, {"name", "components"}, "generator");
        names.push_back(get_string(g, "name", "generator"));
        VectorField X(chart);
        if (!g.contains("components") || !g["components"].is_object())
            bad("generator needs a 'components' object");
        for (const auto& [var, text] : g["components"].items()) {
            if (!text.is_string()) bad("generator component must be an expression string");
            X.set_component(chart->require(var), parse_expr(text.get<std::string>(), chart));
        }
        gens.push_back(std::move(X));
    }

    auto index_of = [&](const std::string& gname, const std::string& where) -> std::size_t {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == gname) return i;
        bad("unknown generator '" + gname + "' in " + where);
    };

    if (!doc.contains("coefficients") || !doc["coefficients"].is_array())
        bad("'coefficients' must be an array");
    std::vector<CoeffFn> coeffs(names.size(), CoeffFn::constant(Rational(0)));
    std::vector<bool> seen(names.size(), false);
    for (const auto& c : doc["coefficients"]) {
        check_keys(c, {"generator", "fn"}, "coefficient");
        std::size_t i = index_of(get_string(c, "generator", "coefficient"), "coefficients");
        if (seen[i]) bad("duplicate coefficient for generator '" + names[i] + "'");
        seen[i] = true;
        coeffs[i] = CoeffFn::parse(get_string(c, "fn", "coefficient"));
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) bad("missing coefficient for generator '" + names[i] + "'");

    std::optional<std::vector<Expr>> hams;
    if (doc.contains("hamiltonians")) {
        if (!doc["hamiltonians"].is_array()) bad("'hamiltonians' must be an array");
        std::vector<Expr> hs(names.size(), Expr::zero(chart));
        std::vector<bool> hseen(names.size(), false);
        for (const auto& h : doc["hamiltonians"]) {
            check_keys(h, {"generator", "expr"}, "hamiltonian");
            std::size_t i = index_of(get_string(h, "generator", "hamiltonian"), "hamiltonians");
            if (hseen[i]) bad("duplicate hamiltonian for generator '" + names[i] + "'");
            hseen[i] = true;
            hs[i] = parse_expr(get_string(h, "expr", "hamiltonian"), chart);
        }
        for (std::size_t i = 0; i < hseen.size(); ++i)
            if (!hseen[i]) bad("missing hamiltonian for generator '" + names[i] + "'");
        hams = std::move(hs);
    }

    std::vector<Expr> constants;
    if (doc.contains("constants_of_motion")) {
        if (!doc["constants_of_motion"].is_array()) bad("'constants_of_motion' must be an array");
        for (const auto& f : doc["constants_of_motion"]) {
            if (!f.is_string()) bad("constants_of_motion entries must be expression strings");
            constants.push_back(parse_expr(f.get<std::string>(), chart));
        }
    }

    std::map<std::string, Expr> comomentum;
    if (doc.contains("comomentum")) {
        if (!doc["comomentum"].is_object()) bad("'comomentum' must be an object");
        for (const auto& [gname, text] : doc["comomentum"].items()) {
            if (!text.is_string()) bad("comomentum entries must be expression strings");
            comomentum.emplace(gname, parse_expr(text.get<std::string>(), chart));
        }
    }

    return LHSystem::make(chart, poisson, names, gens, coeffs, std::move(hams),
                          std::move(constants), std::move(comomentum));
}

LHSystem load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open '" + path + "'");
    Json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        bad("malformed JSON in '" + path + "': " + e.what());
    }
    return load_system(doc);
}

Json save_system(const LHSystem& sys) {
    Json doc;
    doc["variables"] = Json::array();
    for (const auto& v : sys.chart->vars())
        doc["variables"].push_back({{"name", v.name}, {"domain", domain_sign_name(v.sign)}});

    auto pairs = detect_canonical(sys.poisson);
    if (pairs && !pairs->empty()) {
        Json pj;
        pj["type"] = "canonical";
        pj["pairs"] = Json::array();
        for (auto [x, p] : *pairs)
            pj["pairs"].push_back({sys.chart->var(x).name, sys.chart->var(p).name});
        doc["poisson"] = pj;
    } else {
        Json comps = Json::object();
        for (const auto& [key, e] : sys.poisson.components())
            comps[sys.chart->var(key.first).name + "," + sys.chart->var(key.second).name] =
                e.str();
        doc["poisson"] = {{"type", "explicit"}, {"components", comps}};
    }

    doc["generators"] = Json::array();
    for (std::size_t i = 0; i < sys.generators.size(); ++i) {
        Json comps = Json::object();
        for (const auto& [v, e] : sys.generators[i].components())
            comps[sys.chart->var(v).name] = e.str();
        doc["generators"].push_back({{"name", sys.generator_names[i]}, {"components", comps}});
    }

    doc["coefficients"] = Json::array();
    for (std::size_t i = 0; i < sys.coefficients.size(); ++i)
        doc["coefficients"].push_back(
            {{"generator", sys.generator_names[i]}, {"fn", sys.coefficients[i].str()}});

    if (sys.hamiltonians) {
        doc["hamiltonians"] = Json::array();
        for (std::size_t i = 0; i < sys.hamiltonians->size(); ++i)
            doc["hamiltonians"].push_back(
                {{"generator", sys.generator_names[i]}, {"expr", (*sys.hamiltonians)[i].str()}});
    }
    if (!sys.constants_of_motion.empty()) {
        doc["constants_of_motion"] = Json::array();
        for (const auto& f : sys.constants_of_motion) doc["constants_of_motion"].push_back(f.str());
    }
    if (!sys.comomentum.empty()) {
        Json cm = Json::object();
        for (const auto& [name, e] : sys.comomentum) cm[name] = e.str();
        doc["comomentum"] = cm;
    }
    return doc;
}

Json structure_constants_json(const StructureConstants& sc,
                              const std::vector<std::string>& names) {
    Json out;
    out["basis"] = names;
    Json entries = Json::array();
    for (int i = 0; i < sc.dimension(); ++i)
        for (int j = i + 1; j < sc.dimension(); ++j)
            for (int k = 0; k < sc.dimension(); ++k)
                if (!sc.get(i, j, k).is_zero())
                    entries.push_back(Json::array({i + 1, j + 1, k + 1, sc.get(i, j, k).str()}));
    out["entries"] = entries;
    return out;
}

namespace {

template <typename Closure>
Json closure_json_impl(const Closure& closure, const char* kind) {
    Json out;
    out["kind"] = kind;
    out["converged"] = closure.converged;
    out["dimension"] = closure.dimension();
    out["rounds"] = closure.rounds;
    Json basis = Json::array();
    for (std::size_t i = 0; i < closure.basis.size(); ++i)
        basis.push_back({{"name", closure.names[i]}, {"value", closure.basis[i].str()}});
    out["basis"] = basis;
    if (closure.structure)
        out["structure_constants"] = structure_constants_json(*closure.structure, closure.names);
    return out;
}

}  // namespace

Json closure_json(const VfClosure& closure) { return closure_json_impl(closure, "vector_fields"); }
Json closure_json(const FnClosure& closure) { return closure_json_impl(closure, "functions"); }

Json drift_json(const MonitorReport& report) {
    Json out = Json::array();
    for (const auto& stat : report.stats)
        out.push_back({{"function", stat.function},
                       {"initial", stat.initial},
                       {"max_abs_drift", stat.max_abs_drift},
                       {"max_rel_drift", stat.max_rel_drift}});
    return out;
}

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::not_hamiltonian_generator: return 1;
        case ErrorKind::not_closed: return 3;
        case ErrorKind::not_strong_comomentum:
        case ErrorKind::dimension_mismatch:
        case ErrorKind::degenerate_jacobian: return 4;
        case ErrorKind::domain_violation:
        case ErrorKind::coefficient_domain: return 5;
        default: return 2;
    }
}

namespace {

Json error_json(const Error& e) {
    Json out;
    out["error"] = error_kind_name(e.kind());
    out["message"] = e.what();
    if (e.witness) out["witness"] = *e.witness;
    if (e.when) out["exit_time"] = *e.when;
    return out;
}

}  // namespace

CmdResult cmd_check(const LHSystem& sys, int cap) {
    CmdResult result;
    Json& report = result.report;
    report["command"] = "check";
    auto jac = jacobi_check(sys.poisson);
    report["jacobi_ok"] = jac.ok;
    try {
        LHReport lh = verify_lh_structure(sys, cap);
        report["verdict"] = "lie_hamilton";
        Json verdicts = Json::array();
        for (const auto& v : lh.hamiltonianity)
            verdicts.push_back({{"generator", v.name},
                                {"hamiltonian", v.hamiltonian},
                                {"h", v.h ? v.h->str() : ""}});
        report["generators"] = verdicts;
        report["vf_dimension"] = lh.vf_dimension;
        report["fn_dimension"] = lh.fn_dimension;
        Json kernel = Json::array();
        for (const auto& k : lh.casimir_kernel_basis) kernel.push_back(k.str());
        report["casimir_kernel"] = kernel;
        report["exact_sequence_ok"] = lh.exact_sequence_ok;
        report["vf_closure"] = closure_json(lh.vf_closure);
        report["fn_closure"] = closure_json(lh.fn_closure);
        result.exit_code = 0;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::not_hamiltonian_generator) {
            report["verdict"] = "not_lie_hamilton";
            report["refutation"] = error_json(e);
            result.exit_code = 1;
        } else {
            report["verdict"] = "error";
            report["refutation"] = error_json(e);
            result.exit_code = exit_code_for(e);
        }
    }
    return result;
}

CmdResult cmd_closure(const LHSystem& sys, int cap) {
    CmdResult result;
    Json& report = result.report;
    report["command"] = "closure";
    VfClosure vf = closure_vf(sys.generators, sys.generator_names, cap);
    report["vf_closure"] = closure_json(vf);
    bool fn_converged = true;
    if (sys.hamiltonians) {
        std::vector<std::string> h_names;
        for (const auto& n : sys.generator_names) h_names.push_back("h[" + n + "]");
        FnClosure fn = closure_fn(sys.poisson, *sys.hamiltonians, h_names, cap);
        report["fn_closure"] = closure_json(fn);
        fn_converged = fn.converged;
    }
    result.exit_code = (vf.converged && fn_converged) ? 0 : 3;
    return result;
}

CmdResult cmd_constants(const LHSystem& sys, const std::vector<std::string>& candidates, int cap) {
    CmdResult result;
    Json& report = result.report;
    report["command"] = "constants";
    Json items = Json::array();
    for (const auto& text : candidates) {
        Expr f = parse_expr(text, sys.chart);
        Json item;
        item["candidate"] = f.str();
        ConstantCheck check = constant_of_motion_check(sys, f, cap);
        item["constant_of_motion"] = check.ok;
        if (!check.ok) {
            item["witness"] = {{"field", check.witness->first},
                               {"derivative", check.witness->second.str()}};
        }
        if (sys.hamiltonians) {
            Json commute = Json::array();
            for (const auto& entry : poisson_commute_report(sys, f, cap))
                commute.push_back(
                    {{"with", entry.name}, {"bracket", entry.bracket.str()}, {"zero", entry.zero}});
            item["poisson_commute"] = commute;
        }
        if (check.ok) item["symmetry"] = symmetry_from_constant(sys, f, cap).str();
        items.push_back(item);
    }
    report["candidates"] = items;
    result.exit_code = 0;
    return result;
}

CmdResult cmd_linearize(const LHSystem& sys, int cap) {
    CmdResult result;
    Json& report = result.report;
    report["command"] = "linearize";
    try {
        ComomentumAssignment partial = sys.comomentum;
        if (partial.empty() && sys.hamiltonians) {
            for (std::size_t a = 0; a < sys.generator_names.size(); ++a)
                partial.emplace(sys.generator_names[a], -(*sys.hamiltonians)[a]);
        }
        VfClosure closure = closure_vf(sys.generators, sys.generator_names, cap);
        if (!closure.converged)
            raise(ErrorKind::not_closed, "vector-field closure did not converge");
        ComomentumAssignment lam = extend_assignment(sys, closure, partial);
        LinearizationResult lin = linearize(sys, lam, cap);
        report["status"] = "ok";
        Json coords = Json::array();
        for (std::size_t i = 0; i < lin.new_coordinates.size(); ++i)
            coords.push_back({{"name", lin.new_chart->var(static_cast<int>(i)).name},
                              {"value", lin.new_coordinates[i].str()}});
        report["new_coordinates"] = coords;
        std::vector<std::string> cnames;
        for (const auto& v : lin.new_chart->vars()) cnames.push_back(v.name);
        report["fn_structure"] = structure_constants_json(lin.fn_structure, cnames);
        report["linear_bivector"] = lin.linear_bivector.str();
        Json amatrix = Json::array();
        for (const auto& row : lin.linear_system) {
            Json jrow = Json::array();
            for (const auto& entry : row) jrow.push_back(entry.str());
            amatrix.push_back(jrow);
        }
        report["linear_system_matrix"] = amatrix;
        report["jacobian_det"] = lin.jacobian_det.str();
        report["sample_point"] = lin.sample_point;
        result.exit_code = 0;
    } catch (const Error& e) {
        report["status"] = "failed";
        report["failure"] = error_json(e);
        result.exit_code = exit_code_for(e);
    }
    return result;
}

CmdResult cmd_integrate(const LHSystem& sys, const IntegrateRequest& req) {
    CmdResult result;
    Json& report = result.report;
    report["command"] = "integrate";
    try {
        IntegrationResult run = integrate(sys, req.x0, req.cfg);
        report["steps_recorded"] = run.trajectory.size();
        report["error_estimate"] = run.error_estimate;

        std::vector<Expr> monitors;
        for (const auto& text : req.monitor_exprs) monitors.push_back(parse_expr(text, sys.chart));
        for (const auto& f : sys.constants_of_motion) monitors.push_back(f);
        if (!monitors.empty())
            report["monitor"] = drift_json(monitor(sys, run.trajectory, monitors));

        // Declared Casimirs among the constants get the leaf confinement test.
        std::vector<Expr> casimirs;
        for (const auto& f : sys.constants_of_motion)
            if (casimir_check(sys.poisson, f)) casimirs.push_back(f);
        if (!casimirs.empty()) {
            LeafReport leaf = leaf_check(sys, run.trajectory, casimirs, req.leaf_tolerance);
            report["leaf_check"] = {{"confined", leaf.confined},
                                    {"tolerance", leaf.tolerance},
                                    {"drift", drift_json(leaf.drift)}};
        }
        std::ostringstream csv;
        write_csv(run.trajectory, csv);
        result.csv = csv.str();
        result.exit_code = 0;
    } catch (const Error& e) {
        report["status"] = "failed";
        report["failure"] = error_json(e);
        result.exit_code = exit_code_for(e);
    }
    return result;
}

}  // namespace lieham
