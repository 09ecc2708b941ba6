#include "lieham/analysis.hpp"

#include <cmath>
#include <functional>

#include "lieham/errors.hpp"

namespace lieham {

namespace {

VfClosure closed_basis(const LHSystem& sys, int cap) {
    VfClosure closure = closure_vf(sys.generators, sys.generator_names, cap);
    if (!closure.converged)
        raise(ErrorKind::not_closed, "vector-field closure did not converge below the cap");
    return closure;
}

}  // namespace

ConstantCheck constant_of_motion_check(const LHSystem& sys, const Expr& f, int cap) {
    require_same_chart(sys.chart, f.chart());
    VfClosure closure = closed_basis(sys, cap);
    for (std::size_t a = 0; a < closure.basis.size(); ++a) {
        Expr derivative = apply_vf(closure.basis[a], f);
        if (!derivative.is_zero()) return {false, {{closure.names[a], derivative}}};
    }
    return {};
}

std::vector<CommuteEntry> poisson_commute_report(const LHSystem& sys, const Expr& f, int cap) {
    require_same_chart(sys.chart, f.chart());
    if (!sys.hamiltonians)
        raise(ErrorKind::bad_input, "poisson_commute_report needs the system's Hamiltonians");
    std::vector<std::string> h_names;
    for (const auto& n : sys.generator_names) h_names.push_back("h[" + n + "]");
    FnClosure closure = closure_fn(sys.poisson, *sys.hamiltonians, h_names, cap);
    if (!closure.converged)
        raise(ErrorKind::not_closed, "function closure did not converge below the cap");
    std::vector<CommuteEntry> report;
    for (std::size_t a = 0; a < closure.basis.size(); ++a) {
        Expr bracket = poisson_bracket(sys.poisson, f, closure.basis[a]);
        report.push_back({closure.names[a], bracket, bracket.is_zero()});
    }
    return report;
}

VectorField symmetry_from_constant(const LHSystem& sys, const Expr& f, int cap) {
    ConstantCheck check = constant_of_motion_check(sys, f, cap);
    if (!check.ok) {
        Error e(ErrorKind::not_a_constant,
                "not a constant of motion; " + check.witness->first + " moves it");
        e.witness = check.witness->second.str();
        throw e;
    }
    VectorField symmetry = hat_lambda(sys.poisson, exterior_d(f));
    ConstantCheck commutes = symmetry_check(sys, symmetry, cap);
    if (!commutes.ok) {
        Error e(ErrorKind::internal_inconsistency,
                "generated field fails to commute with " + commutes.witness->first);
        e.witness = commutes.witness->second.str();
        throw e;
    }
    return symmetry;
}

ConstantCheck symmetry_check(const LHSystem& sys, const VectorField& Y, int cap) {
    require_same_chart(sys.chart, Y.chart());
    VfClosure closure = closed_basis(sys, cap);
    for (std::size_t a = 0; a < closure.basis.size(); ++a) {
        VectorField bracket = lie_bracket_vf(Y, closure.basis[a]);
        if (!bracket.is_zero()) {
            // Report the first nonzero component as the witness expression.
            return {false, {{closure.names[a], bracket.components().begin()->second}}};
        }
    }
    return {};
}

IntegralsClosureResult integrals_poisson_closed(const LHSystem& sys, const std::vector<Expr>& fs,
                                                int cap) {
    for (const auto& f : fs) {
        ConstantCheck check = constant_of_motion_check(sys, f, cap);
        if (!check.ok) {
            Error e(ErrorKind::not_a_constant,
                    "input '" + f.str() + "' is not a constant of motion");
            e.witness = check.witness->second.str();
            throw e;
        }
    }
    IntegralsClosureResult result;
    result.brackets.assign(fs.size(), {});
    for (std::size_t i = 0; i < fs.size(); ++i) {
        for (std::size_t j = i + 1; j < fs.size(); ++j) {
            Expr bracket = poisson_bracket(sys.poisson, fs[i], fs[j]);
            result.brackets[i].push_back(bracket);
            ConstantCheck check = constant_of_motion_check(sys, bracket, cap);
            if (!check.ok) {
                result.ok = false;
                result.failures.push_back(
                    {{static_cast<int>(i), static_cast<int>(j)}, bracket});
            }
        }
    }
    return result;
}

Expr jacobian_determinant(const std::vector<Expr>& fs) {
    if (fs.empty()) raise(ErrorKind::bad_input, "empty coordinate list");
    const ChartPtr& chart = fs[0].chart();
    int n = static_cast<int>(fs.size());
    if (chart->size() != n)
        raise(ErrorKind::dimension_mismatch, "coordinate count differs from chart dimension");
    // Laplace expansion over the first column; n is small here.
    std::vector<std::vector<Expr>> m(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m[static_cast<std::size_t>(i)].push_back(fs[static_cast<std::size_t>(i)].diff(j));

    std::function<Expr(std::vector<std::vector<Expr>>&)> det =
        [&](std::vector<std::vector<Expr>>& mat) -> Expr {
        std::size_t k = mat.size();
        if (k == 1) return mat[0][0];
        Expr acc = Expr::zero(chart);
        for (std::size_t r = 0; r < k; ++r) {
            if (mat[r][0].is_zero()) continue;
            std::vector<std::vector<Expr>> minor;
            for (std::size_t i = 0; i < k; ++i) {
                if (i == r) continue;
                minor.push_back(std::vector<Expr>(mat[i].begin() + 1, mat[i].end()));
            }
            Expr cof = mat[r][0] * det(minor);
            acc = (r % 2 == 0) ? acc + cof : acc - cof;
        }
        return acc;
    };
    return det(m);
}

namespace {

/// Lattice candidates per variable honouring its sign constraint.
std::vector<double> sample_values(DomainSign sign) {
    switch (sign) {
        case DomainSign::positive: return {1.0, 0.5, 2.0, 1.5};
        case DomainSign::negative: return {-1.0, -0.5, -2.0, -1.5};
        case DomainSign::nonzero: return {1.0, -1.0, 0.5, 2.0};
        case DomainSign::any: return {1.0, -1.0, 0.0, 2.0};
    }
    return {1.0};
}

template <typename Pred>
std::optional<std::vector<double>> search_point(const ChartPtr& chart, Pred&& good) {
    int n = chart->size();
    std::vector<std::vector<double>> values;
    for (int i = 0; i < n; ++i) values.push_back(sample_values(chart->var(i).sign));
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        std::vector<double> point;
        for (int i = 0; i < n; ++i)
            point.push_back(values[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]]);
        bool ok = false;
        try {
            ok = good(point);
        } catch (const Error&) {
            ok = false;  // poles on the lattice are skipped
        }
        if (ok) return point;
        int pos = 0;
        while (pos < n) {
            if (++idx[static_cast<std::size_t>(pos)] <
                values[static_cast<std::size_t>(pos)].size())
                break;
            idx[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n) return std::nullopt;
    }
}

}  // namespace

LinearizationResult linearize(const LHSystem& sys, const ComomentumAssignment& lam, int cap,
                              const std::vector<double>* sample_hint) {
    VfClosure closure = closed_basis(sys, cap);
    int dim = closure.dimension();
    int n = sys.chart->size();
    if (dim != n) {
        raise(ErrorKind::dimension_mismatch,
              "dim V^X = " + std::to_string(dim) + " but dim N = " + std::to_string(n));
    }

    ComomentumCheck strong = strong_comomentum_check(sys, lam, cap);
    if (!strong.ok) {
        Error e(ErrorKind::not_strong_comomentum,
                "assignment is not a Lie algebra morphism; defect on (" +
                    strong.witness->first.first + "," + strong.witness->first.second + ")");
        e.witness = strong.witness->second.str();
        throw e;
    }

    std::vector<Expr> coords;
    for (const auto& name : closure.names) coords.push_back(-lam.at(name));

    Expr det = jacobian_determinant(coords);
    if (det.is_zero())
        raise(ErrorKind::degenerate_jacobian, "the Jacobian determinant vanishes identically");
    auto admissible = [&](const std::vector<double>& point) {
        return std::fabs(det.eval(point)) > 1e-9 &&
               distribution_rank(closure.basis, point) == n;
    };
    std::optional<std::vector<double>> sample;
    if (sample_hint) {
        sys.chart->check_point(*sample_hint);
        if (admissible(*sample_hint)) sample = *sample_hint;
    }
    if (!sample) sample = search_point(sys.chart, admissible);
    if (!sample) {
        // Distinguish a rank-deficient distribution from a degenerate
        // Jacobian: the generic rank decides which hypothesis failed.
        auto det_ok = [&](const std::vector<double>& p) { return std::fabs(det.eval(p)) > 1e-9; };
        if (auto p = search_point(sys.chart, det_ok)) {
            int r = distribution_rank(closure.basis, *p);
            raise(ErrorKind::dimension_mismatch,
                  "distribution rank " + std::to_string(r) + " < dim N = " + std::to_string(n) +
                      " at generic points");
        }
        raise(ErrorKind::degenerate_jacobian,
              "no sample point with a nonzero Jacobian found in the search box");
    }

    // Closure of the coordinate functions; a strong comomentum map keeps it
    // inside the span, so the closure adds nothing and cbar = -c.
    std::vector<std::string> coord_names;
    for (int i = 1; i <= n; ++i) coord_names.push_back("u" + std::to_string(i));
    FnClosure fn = closure_fn(sys.poisson, coords, coord_names, cap);
    if (!fn.converged || fn.dimension() != n)
        raise(ErrorKind::internal_inconsistency, "coordinate functions do not close onto themselves");

    std::vector<VarSpec> new_vars;
    for (const auto& name : coord_names) new_vars.push_back({name, DomainSign::any});
    ChartPtr new_chart = make_chart(new_vars);

    LinearizationResult result(n, new_chart, Bivector(new_chart));
    result.new_coordinates = coords;
    result.fn_structure = *fn.structure;
    result.jacobian_det = det;
    result.sample_point = *sample;

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            ExprBuilder b(new_chart);
            for (int k = 0; k < n; ++k)
                b.add_term(result.fn_structure.get(i, j, k), {{k, Rational(1)}});
            result.linear_bivector.set_component(i, j, b.build());
        }

    // Expand every generator exactly in the closed basis, then assemble
    // A_jk(t) = -sum_l b_l(t) cbar_ljk over that expansion.
    CoordSpace space;
    SpanBuilder span;
    for (const auto& b : closure.basis) span.insert(space.vector_of(b));
    std::vector<std::vector<Rational>> gen_coords;
    for (const auto& g : sys.generators) {
        auto outcome = span.reduce(space.vector_of(g));
        if (outcome.independent)
            raise(ErrorKind::internal_inconsistency, "generator escapes its own closure");
        outcome.coords.resize(static_cast<std::size_t>(dim), Rational(0));
        gen_coords.push_back(std::move(outcome.coords));
    }
    result.linear_system.assign(static_cast<std::size_t>(n),
                                std::vector<CoeffFn>(static_cast<std::size_t>(n),
                                                     CoeffFn::constant(Rational(0))));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            CoeffFn acc = CoeffFn::constant(Rational(0));
            bool empty = true;
            for (std::size_t g = 0; g < sys.generators.size(); ++g) {
                Rational factor(0);
                for (int l = 0; l < n; ++l)
                    factor += gen_coords[g][static_cast<std::size_t>(l)] *
                              result.fn_structure.get(l, j, k);
                if (factor.is_zero() || sys.coefficients[g].is_zero_literal()) continue;
                CoeffFn piece = CoeffFn::product(CoeffFn::constant(-factor), sys.coefficients[g]);
                acc = empty ? piece : CoeffFn::sum(acc, piece);
                empty = false;
            }
            result.linear_system[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = acc;
        }
    return result;
}

}  // namespace lieham
