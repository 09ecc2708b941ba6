#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lieham/coefffn.hpp"
#include "lieham/liealg.hpp"

namespace lieham {

/// A time-dependent system X_t = sum_a b_a(t) X_a on a Poisson chart,
/// together with the optional data making it a Lie-Hamilton candidate.
/// Immutable after construction (use make()), so freely shareable.
struct LHSystem {
    ChartPtr chart;
    Bivector poisson;
    std::vector<std::string> generator_names;
    std::vector<VectorField> generators;
    std::vector<CoeffFn> coefficients;
    /// When present, aligned with generators and exactly paired:
    /// hamiltonian_vf(poisson, h_a) == X_a.
    std::optional<std::vector<Expr>> hamiltonians;
    std::vector<Expr> constants_of_motion;
    std::map<std::string, Expr> comomentum;  // generator name -> lambda(X_a)

    /// Validates alignment, the Jacobi identity of the bivector, and the
    /// Hamiltonian pairing when hamiltonians are given.
    static LHSystem make(ChartPtr chart, Bivector poisson, std::vector<std::string> names,
                         std::vector<VectorField> generators, std::vector<CoeffFn> coefficients,
                         std::optional<std::vector<Expr>> hamiltonians = std::nullopt,
                         std::vector<Expr> constants_of_motion = {},
                         std::map<std::string, Expr> comomentum = {});

    /// The frozen field X_t at a fixed time, evaluated numerically at a
    /// chart-ordered point.
    std::vector<double> eval_field(double t, const std::vector<double>& point) const;
};

struct GeneratorVerdict {
    std::string name;
    bool hamiltonian = false;
    /// The verified or recovered Hamiltonian for this generator.
    std::optional<Expr> h;
};

struct LHReport {
    int vf_dimension = 0;
    int fn_dimension = 0;
    std::vector<Expr> casimir_kernel_basis;
    bool exact_sequence_ok = false;
    std::vector<GeneratorVerdict> hamiltonianity;
    VfClosure vf_closure;
    FnClosure fn_closure;
};

/// Checks the Lie-Hamiltonian structure: exact pairing X_a = -hat(L)(dh_a)
/// per generator (recovering h_a via find_hamiltonian when absent on a
/// canonical bivector), both closures, the Casimir kernel, and the
/// dimension law fn_dim = vf_dim + |kernel|.
/// Errors: NotHamiltonianGenerator (witness: L_X Lambda), NotClosed.
LHReport verify_lh_structure(const LHSystem& sys, int cap = kDefaultCap);

/// True iff hamiltonian_vf(L, f) vanishes identically.
bool casimir_check(const Bivector& L, const Expr& f);

/// Exact basis of the Casimir subspace of span(fn_basis), each element
/// normalised so its first canonical term has coefficient 1.
std::vector<Expr> casimir_kernel(const Bivector& L, const std::vector<Expr>& fn_basis);

/// Assignment of functions to named basis fields; for comomentum maps the
/// convention is lambda(X_a) = -h_a.
using ComomentumAssignment = std::map<std::string, Expr>;

struct UpsilonResult {
    std::vector<std::string> basis_names;
    /// entries[a][b] = {h_a,h_b} + sum_c c_abc h_c with h_a = -T(X_a);
    /// antisymmetric, every entry is a Casimir.
    std::vector<std::vector<Expr>> entries;

    bool all_zero() const;
};

/// The obstruction for T to be a Lie algebra morphism. Requires a converged
/// vector-field closure and a T entry for every basis element (gained
/// elements included). Every entry must pass casimir_check; a violation
/// raises InternalInconsistency. Errors: NotClosed.
UpsilonResult upsilon(const LHSystem& sys, const ComomentumAssignment& T, int cap = kDefaultCap);

struct ExtensionResult {
    std::vector<Expr> basis;  // independent basis of span{h_a} + span{Upsilon}
    int w0_dimension = 0;     // dim span{h_a}
    int casimir_dimension = 0;
};

/// Builds the function algebra W = W0 + WC from the h's and the Upsilon
/// entries and verifies {WC,WC} = 0, {WC,W0} = 0, {W0,W0} in WC + W0
/// exactly. Errors: InclusionViolated (with witness pair).
ExtensionResult build_extension(const LHSystem& sys, const ComomentumAssignment& T,
                                int cap = kDefaultCap);

struct ComomentumCheck {
    bool ok = true;
    /// First failing basis pair and the nonzero defect
    /// {lambda_a, lambda_b} - lambda([X_a, X_b]).
    std::optional<std::pair<std::pair<std::string, std::string>, Expr>> witness;
};

/// Strong comomentum test: (a) hat(L) d lambda(X_a) = X_a for every basis
/// element and (b) lambda is a Lie algebra morphism. Agrees with upsilon
/// being identically zero. Errors: NotClosed, NotHamiltonianGenerator for (a).
ComomentumCheck strong_comomentum_check(const LHSystem& sys, const ComomentumAssignment& lam,
                                        int cap = kDefaultCap);

/// Completes a partial assignment over the closed basis by recovering the
/// missing functions through find_hamiltonian (canonical bivectors only):
/// lambda(X_a) = -find_hamiltonian(L, X_a).
ComomentumAssignment extend_assignment(const LHSystem& sys, const VfClosure& closure,
                                       const ComomentumAssignment& partial);

}  // namespace lieham
