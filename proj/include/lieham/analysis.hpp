#pragma once

#include "lieham/lieham.hpp"

namespace lieham {

struct ConstantCheck {
    bool ok = true;
    /// First failing basis field and the nonzero derivative Y(f).
    std::optional<std::pair<std::string, Expr>> witness;
};

/// f is a t-independent constant of motion iff every element of the closed
/// basis annihilates it. Errors: NotClosed.
ConstantCheck constant_of_motion_check(const LHSystem& sys, const Expr& f, int cap = kDefaultCap);

struct CommuteEntry {
    std::string name;
    Expr bracket;
    bool zero = false;
};

/// Brackets {f, h} against every element of the closed function algebra;
/// all-zero iff f is a t-independent constant of motion. Requires the
/// system's Hamiltonians. Errors: NotClosed.
std::vector<CommuteEntry> poisson_commute_report(const LHSystem& sys, const Expr& f,
                                                 int cap = kDefaultCap);

/// For a certified constant of motion f, returns the Lie symmetry
/// Y = hat(L)(df) and verifies [Y, X_a] = 0 on the closed basis.
/// Errors: NotAConstant, NotClosed.
VectorField symmetry_from_constant(const LHSystem& sys, const Expr& f, int cap = kDefaultCap);

/// True iff Y commutes with every element of the closed basis.
ConstantCheck symmetry_check(const LHSystem& sys, const VectorField& Y, int cap = kDefaultCap);

struct IntegralsClosureResult {
    bool ok = true;
    /// brackets[i][j] = {f_i, f_j} for i < j.
    std::vector<std::vector<Expr>> brackets;
    /// Failing pairs: ((i, j), the witness from the constant check on the
    /// bracket).
    std::vector<std::pair<std::pair<int, int>, Expr>> failures;
};

/// Checks that pairwise Poisson brackets of certified integrals are again
/// constants of motion. Errors: NotAConstant on input validation, NotClosed.
IntegralsClosureResult integrals_poisson_closed(const LHSystem& sys, const std::vector<Expr>& fs,
                                                int cap = kDefaultCap);

struct LinearizationResult {
    /// h_i = -lambda(X_i) on the original chart, in basis order.
    std::vector<Expr> new_coordinates;
    ChartPtr new_chart;  // u1..un, all signs free
    /// {h_i,h_j} = sum_k cbar_ijk h_k.
    StructureConstants fn_structure;
    /// The bivector (1/2) sum cbar_ijk u_k d/du_i ^ d/du_j on the new chart.
    Bivector linear_bivector;
    /// A_jk(t) = -sum_l b_l(t) cbar_ljk, so the image system is dy/dt = A y.
    std::vector<std::vector<CoeffFn>> linear_system;
    Expr jacobian_det;                // det d(h)/d(x), symbolically nonzero
    std::vector<double> sample_point; // a chart point where the det is nonzero

    LinearizationResult(int n, ChartPtr nc, Bivector lb)
        : new_chart(std::move(nc)), fn_structure(n), linear_bivector(std::move(lb)) {}
};

/// The simultaneous linearisation of the system and its Poisson bivector in
/// the coordinates h_i = -lambda(X_i). Preconditions: a strong comomentum
/// map, dim V^X = dim N, and an everywhere-defined nonzero Jacobian
/// certificate. Errors: NotStrongComomentum, DimensionMismatch,
/// DegenerateJacobian, NotClosed.
LinearizationResult linearize(const LHSystem& sys, const ComomentumAssignment& lam,
                              int cap = kDefaultCap,
                              const std::vector<double>* sample_hint = nullptr);

/// Exact determinant of the Jacobian matrix d(new_coords)/d(chart vars).
Expr jacobian_determinant(const std::vector<Expr>& fs);

}  // namespace lieham
