#pragma once

#include <functional>
#include <iosfwd>

#include "lieham/lieham.hpp"

namespace lieham {

struct IntegratorConfig {
    double t0 = 0.0;
    double t1 = 1.0;
    double dt = 1e-3;
    int record_every = 1;
};

struct Trajectory {
    std::vector<std::string> variables;  // chart order
    std::vector<double> times;           // strictly increasing
    std::vector<std::vector<double>> states;

    std::size_t size() const { return times.size(); }
};

struct IntegrationResult {
    Trajectory trajectory;  // computed at dt/2 (the refined pass)
    /// Max deviation between the dt and dt/2 passes over the recorded grid.
    double error_estimate = 0.0;
};

using Rhs = std::function<std::vector<double>(double, const std::vector<double>&)>;

/// Classical fixed-step RK4. The step count is n = ceil((t1-t0)/dt) with the
/// step adjusted to land exactly on t1; every record_every-th state is kept
/// (plus the endpoint). domain_guard, when given, is applied to each
/// accepted state and may throw.
Trajectory rk4_solve(const Rhs& rhs, std::vector<double> x0, double t0, double t1, double dt,
                     int record_every, const std::function<void(double, const std::vector<double>&)>&
                                           domain_guard = nullptr);

/// Integrates dx/dt = sum_a b_a(t) X_a(x) with RK4 at dt and at dt/2;
/// returns the refined trajectory and the two-pass deviation. The chart's
/// sign constraints are enforced every step; for nonzero variables the sign
/// of the initial value must persist. Errors: DomainViolation (with exit
/// time in Error::when), CoefficientDomain.
IntegrationResult integrate(const LHSystem& sys, const std::vector<double>& x0,
                            const IntegratorConfig& cfg);

struct DriftStat {
    std::string function;  // canonical text of the monitored expression
    double initial = 0.0;
    double max_abs_drift = 0.0;
    /// max_t |f(x(t)) - f(x0)| / (1 + |f(x0)|)
    double max_rel_drift = 0.0;
};

struct MonitorReport {
    std::vector<DriftStat> stats;
};

/// Per-function conservation drift along the trajectory.
MonitorReport monitor(const LHSystem& sys, const Trajectory& traj, const std::vector<Expr>& fs);

struct LeafReport {
    MonitorReport drift;
    bool confined = true;  // every Casimir stays below the tolerance
    double tolerance = 1e-6;
};

/// Casimir confinement along a trajectory: every listed function must pass
/// casimir_check (else NotACasimir), then its relative drift is compared to
/// the tolerance.
LeafReport leaf_check(const LHSystem& sys, const Trajectory& traj,
                      const std::vector<Expr>& casimirs, double tolerance = 1e-6);

/// Max Euclidean deviation over a's grid between map_fn(a-state) (or the raw
/// a-state when map_fn is empty) and b's state, with b linearly interpolated
/// onto a's times. Errors: GridMismatch when a's times leave b's range.
double compare_trajectories(const Trajectory& a, const Trajectory& b,
                            const std::vector<Expr>& map_fn = {});

/// CSV export: header "t,var1,...", 17 significant digits, one row per
/// recorded step.
void write_csv(const Trajectory& traj, std::ostream& os);

}  // namespace lieham
