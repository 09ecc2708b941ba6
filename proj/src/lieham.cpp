#include "lieham/lieham.hpp"

#include <algorithm>

#include "lieham/errors.hpp"

namespace lieham {

LHSystem LHSystem::make(ChartPtr chart, Bivector poisson, std::vector<std::string> names,
                        std::vector<VectorField> generators, std::vector<CoeffFn> coefficients,
                        std::optional<std::vector<Expr>> hamiltonians,
                        std::vector<Expr> constants_of_motion,
                        std::map<std::string, Expr> comomentum) {
    require_same_chart(chart, poisson.chart());
    if (names.size() != generators.size())
        raise(ErrorKind::bad_input, "generator names misaligned with generators");
    if (coefficients.size() != generators.size())
        raise(ErrorKind::bad_input, "coefficients misaligned with generators");
    for (const auto& g : generators) require_same_chart(chart, g.chart());
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j])
                raise(ErrorKind::bad_input, "duplicate generator name '" + names[i] + "'");

    auto jacobi = jacobi_check(poisson);
    if (!jacobi.ok) {
        Error e(ErrorKind::bad_structure_constants,
                "the bivector violates the Jacobi identity on triple (" +
                    chart->var(jacobi.witness->i).name + "," + chart->var(jacobi.witness->j).name +
                    "," + chart->var(jacobi.witness->k).name + ")");
        e.witness = jacobi.witness->residue.str();
        throw e;
    }

    if (hamiltonians) {
        if (hamiltonians->size() != generators.size())
            raise(ErrorKind::bad_input, "hamiltonians misaligned with generators");
        for (std::size_t a = 0; a < generators.size(); ++a) {
            require_same_chart(chart, (*hamiltonians)[a].chart());
            VectorField paired = hamiltonian_vf(poisson, (*hamiltonians)[a]);
            if (!paired.equals(generators[a])) {
                Error e(ErrorKind::not_hamiltonian_generator,
                        "hamiltonian_vf(poisson, h) differs from generator '" + names[a] + "'");
                e.witness = (paired - generators[a]).str();
                throw e;
            }
        }
    }
    for (const auto& f : constants_of_motion) require_same_chart(chart, f.chart());
    for (const auto& [name, f] : comomentum) {
        require_same_chart(chart, f.chart());
        (void)name;
    }

    LHSystem sys{std::move(chart),        std::move(poisson),      std::move(names),
                 std::move(generators),   std::move(coefficients), std::move(hamiltonians),
                 std::move(constants_of_motion), std::move(comomentum)};
    return sys;
}

std::vector<double> LHSystem::eval_field(double t, const std::vector<double>& point) const {
    std::vector<double> out(point.size(), 0.0);
    for (std::size_t a = 0; a < generators.size(); ++a) {
        double b = coefficients[a].eval(t);
        if (b == 0.0) continue;
        std::vector<double> g = generators[a].eval(point);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b * g[i];
    }
    return out;
}

namespace {

[[noreturn]] void throw_not_hamiltonian_generator(const LHSystem& sys, std::size_t a,
                                                  const std::string& detail) {
    Bivector moved = lie_derivative_bivector(sys.generators[a], sys.poisson);
    Error e(ErrorKind::not_hamiltonian_generator,
            "generator '" + sys.generator_names[a] + "' is not certified Hamiltonian: " + detail);
    e.witness = moved.str();
    throw e;
}

void require_converged(bool converged, const std::string& what) {
    if (!converged)
        raise(ErrorKind::not_closed, what + " did not converge below the cap");
}

}  // namespace

LHReport verify_lh_structure(const LHSystem& sys, int cap) {
    LHReport report;

    // Hamiltonian pairing per generator.
    std::vector<Expr> hams;
    for (std::size_t a = 0; a < sys.generators.size(); ++a) {
        GeneratorVerdict verdict{sys.generator_names[a], false, std::nullopt};
        if (sys.hamiltonians) {
            const Expr& h = (*sys.hamiltonians)[a];
            if (!hamiltonian_vf(sys.poisson, h).equals(sys.generators[a]))
                throw_not_hamiltonian_generator(sys, a, "supplied function fails the pairing");
            verdict.hamiltonian = true;
            verdict.h = h;
        } else {
            Bivector moved = lie_derivative_bivector(sys.generators[a], sys.poisson);
            if (!moved.is_zero()) {
                Error e(ErrorKind::not_hamiltonian_generator,
                        "generator '" + sys.generator_names[a] +
                            "' does not preserve the Poisson bivector");
                e.witness = moved.str();
                throw e;
            }
            try {
                Expr h = find_hamiltonian(sys.poisson, sys.generators[a]);
                verdict.hamiltonian = true;
                verdict.h = h;
            } catch (const Error& err) {
                throw_not_hamiltonian_generator(sys, a, err.what());
            }
        }
        hams.push_back(*verdict.h);
        report.hamiltonianity.push_back(std::move(verdict));
    }

    report.vf_closure = closure_vf(sys.generators, sys.generator_names, cap);
    require_converged(report.vf_closure.converged, "vector-field closure");
    report.vf_dimension = report.vf_closure.dimension();

    std::vector<std::string> h_names;
    for (const auto& n : sys.generator_names) h_names.push_back("h[" + n + "]");
    report.fn_closure = closure_fn(sys.poisson, hams, h_names, cap);
    require_converged(report.fn_closure.converged, "function closure");
    report.fn_dimension = report.fn_closure.dimension();

    report.casimir_kernel_basis = casimir_kernel(sys.poisson, report.fn_closure.basis);
    report.exact_sequence_ok =
        report.fn_dimension ==
        report.vf_dimension + static_cast<int>(report.casimir_kernel_basis.size());
    return report;
}

bool casimir_check(const Bivector& L, const Expr& f) {
    return hamiltonian_vf(L, f).is_zero();
}

std::vector<Expr> casimir_kernel(const Bivector& L, const std::vector<Expr>& fn_basis) {
    if (fn_basis.empty()) return {};
    CoordSpace space;
    std::vector<SparseVec> columns;
    for (const auto& f : fn_basis) columns.push_back(space.vector_of(hamiltonian_vf(L, f)));
    std::vector<Expr> kernel;
    for (const auto& combo : nullspace(columns)) {
        ExprBuilder b(L.chart());
        for (std::size_t a = 0; a < fn_basis.size(); ++a) b.add_scaled(fn_basis[a], combo[a]);
        Expr k = b.build();
        if (k.is_zero()) continue;  // dependent basis input
        // Normalise the leading canonical term to coefficient 1.
        kernel.push_back(k * k.terms().front().coeff.inverse());
    }
    return kernel;
}

namespace {

/// Shared core: the closed basis plus the function assigned to each element
/// as h_a = -T(X_a), with every basis element required in T.
struct AssignedClosure {
    VfClosure closure;
    std::vector<Expr> h;  // aligned with closure.basis
};

AssignedClosure assigned_closure(const LHSystem& sys, const ComomentumAssignment& T, int cap) {
    AssignedClosure out{closure_vf(sys.generators, sys.generator_names, cap), {}};
    require_converged(out.closure.converged, "vector-field closure");
    for (const auto& name : out.closure.names) {
        auto it = T.find(name);
        if (it == T.end())
            raise(ErrorKind::bad_input, "assignment missing basis element '" + name + "'");
        require_same_chart(sys.chart, it->second.chart());
        out.h.push_back(-it->second);
    }
    return out;
}

}  // namespace

bool UpsilonResult::all_zero() const {
    for (const auto& row : entries)
        for (const auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

UpsilonResult upsilon(const LHSystem& sys, const ComomentumAssignment& T, int cap) {
    AssignedClosure ac = assigned_closure(sys, T, cap);
    int dim = ac.closure.dimension();
    const StructureConstants& c = *ac.closure.structure;

    UpsilonResult result;
    result.basis_names = ac.closure.names;
    result.entries.assign(static_cast<std::size_t>(dim),
                          std::vector<Expr>(static_cast<std::size_t>(dim), Expr::zero(sys.chart)));
    for (int a = 0; a < dim; ++a)
        for (int b = a + 1; b < dim; ++b) {
            Expr entry = poisson_bracket(sys.poisson, ac.h[static_cast<std::size_t>(a)],
                                         ac.h[static_cast<std::size_t>(b)]);
            for (int g = 0; g < dim; ++g)
                entry = entry + ac.h[static_cast<std::size_t>(g)] * c.get(a, b, g);
            if (!casimir_check(sys.poisson, entry)) {
                Error e(ErrorKind::internal_inconsistency,
                        "Upsilon entry (" + result.basis_names[static_cast<std::size_t>(a)] + "," +
                            result.basis_names[static_cast<std::size_t>(b)] +
                            ") is not a Casimir function");
                e.witness = entry.str();
                throw e;
            }
            result.entries[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = entry;
            result.entries[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = -entry;
        }
    return result;
}

ExtensionResult build_extension(const LHSystem& sys, const ComomentumAssignment& T, int cap) {
    AssignedClosure ac = assigned_closure(sys, T, cap);
    UpsilonResult ups = upsilon(sys, T, cap);
    int dim = ac.closure.dimension();

    std::vector<Expr> w0 = ac.h;
    std::vector<Expr> wc;
    for (int a = 0; a < dim; ++a)
        for (int b = a + 1; b < dim; ++b) {
            const Expr& e = ups.entries[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            if (!e.is_zero()) wc.push_back(e);
        }

    std::vector<Expr> joint = w0;
    joint.insert(joint.end(), wc.begin(), wc.end());
    auto reduced = span_reduce(joint);

    ExtensionResult result;
    for (int idx : reduced.kept) result.basis.push_back(joint[static_cast<std::size_t>(idx)]);
    result.w0_dimension = static_cast<int>(span_reduce(w0).kept.size());
    result.casimir_dimension = static_cast<int>(result.basis.size()) - result.w0_dimension;

    auto expect_zero_bracket = [&](const Expr& a, const Expr& b, const char* what) {
        Expr br = poisson_bracket(sys.poisson, a, b);
        if (!br.is_zero()) {
            Error e(ErrorKind::inclusion_violated, std::string("bracket inclusion violated: ") + what);
            e.witness = "{" + a.str() + ", " + b.str() + "} = " + br.str();
            throw e;
        }
    };
    // {WC,WC} = 0 and {WC,W0} = 0.
    for (std::size_t i = 0; i < wc.size(); ++i) {
        for (std::size_t j = i + 1; j < wc.size(); ++j)
            expect_zero_bracket(wc[i], wc[j], "{WC,WC} != 0");
        for (const auto& h : w0) expect_zero_bracket(wc[i], h, "{WC,W0} != 0");
    }
    // {W0,W0} subset of W0 + WC: brackets must reduce against the joint basis.
    CoordSpace space;
    SpanBuilder span;
    for (const auto& e : result.basis) span.insert(space.vector_of(e));
    for (std::size_t i = 0; i < w0.size(); ++i)
        for (std::size_t j = i + 1; j < w0.size(); ++j) {
            Expr br = poisson_bracket(sys.poisson, w0[i], w0[j]);
            if (span.reduce(space.vector_of(br)).independent) {
                Error e(ErrorKind::inclusion_violated, "{W0,W0} escapes W0 + WC");
                e.witness = "{" + w0[i].str() + ", " + w0[j].str() + "} = " + br.str();
                throw e;
            }
        }
    return result;
}

ComomentumCheck strong_comomentum_check(const LHSystem& sys, const ComomentumAssignment& lam,
                                        int cap) {
    AssignedClosure ac = assigned_closure(sys, lam, cap);
    int dim = ac.closure.dimension();
    const StructureConstants& c = *ac.closure.structure;

    // (a) hat(L) d lambda(X_a) = X_a, i.e. hamiltonian_vf(L, h_a) = X_a.
    for (int a = 0; a < dim; ++a) {
        VectorField paired = hamiltonian_vf(sys.poisson, ac.h[static_cast<std::size_t>(a)]);
        if (!paired.equals(ac.closure.basis[static_cast<std::size_t>(a)])) {
            Error e(ErrorKind::not_hamiltonian_generator,
                    "lambda('" + ac.closure.names[static_cast<std::size_t>(a)] +
                        "') is not a Hamiltonian function for the field");
            e.witness = (paired - ac.closure.basis[static_cast<std::size_t>(a)]).str();
            throw e;
        }
    }

    // (b) lambda([X_a,X_b]) = {lambda(X_a), lambda(X_b)}, the left side
    // through the structure constants. With lambda = -h the defect equals
    // Upsilon_ab, so this test and upsilon() agree by construction.
    for (int a = 0; a < dim; ++a)
        for (int b = a + 1; b < dim; ++b) {
            Expr lhs = Expr::zero(sys.chart);
            for (int g = 0; g < dim; ++g)
                lhs = lhs + (-ac.h[static_cast<std::size_t>(g)]) * c.get(a, b, g);
            Expr rhs = poisson_bracket(sys.poisson, -ac.h[static_cast<std::size_t>(a)],
                                       -ac.h[static_cast<std::size_t>(b)]);
            Expr defect = rhs - lhs;
            if (!defect.is_zero()) {
                ComomentumCheck out;
                out.ok = false;
                out.witness = {{ac.closure.names[static_cast<std::size_t>(a)],
                                ac.closure.names[static_cast<std::size_t>(b)]},
                               defect};
                return out;
            }
        }
    return {};
}

ComomentumAssignment extend_assignment(const LHSystem& sys, const VfClosure& closure,
                                       const ComomentumAssignment& partial) {
    ComomentumAssignment out = partial;
    for (std::size_t a = 0; a < closure.basis.size(); ++a) {
        const std::string& name = closure.names[a];
        if (out.count(name)) continue;
        out.emplace(name, -find_hamiltonian(sys.poisson, closure.basis[a]));
    }
    return out;
}

}  // namespace lieham
