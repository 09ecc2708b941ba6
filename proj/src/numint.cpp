#include "lieham/numint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "lieham/errors.hpp"

namespace lieham {

Trajectory rk4_solve(const Rhs& rhs, std::vector<double> x0, double t0, double t1, double dt,
                     int record_every,
                     const std::function<void(double, const std::vector<double>&)>& domain_guard) {
    if (!(t1 > t0)) raise(ErrorKind::bad_input, "t1 must exceed t0");
    if (!(dt > 0.0) || dt > (t1 - t0) * (1.0 + 1e-12))
        raise(ErrorKind::bad_input, "dt must be positive and at most t1 - t0");
    if (record_every < 1) raise(ErrorKind::bad_input, "record_every must be positive");

    long long steps = static_cast<long long>(std::ceil((t1 - t0) / dt - 1e-12));
    if (steps < 1) steps = 1;
    double h = (t1 - t0) / static_cast<double>(steps);

    Trajectory traj;
    traj.times.push_back(t0);
    traj.states.push_back(x0);

    std::size_t n = x0.size();
    std::vector<double> x = std::move(x0);
    std::vector<double> k1, k2, k3, k4, tmp(n);
    for (long long s = 0; s < steps; ++s) {
        double t = t0 + h * static_cast<double>(s);
        k1 = rhs(t, x);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
        k2 = rhs(t + 0.5 * h, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
        k3 = rhs(t + 0.5 * h, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
        k4 = rhs(t + h, tmp);
        for (std::size_t i = 0; i < n; ++i)
            x[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        double tn = t0 + h * static_cast<double>(s + 1);
        if (domain_guard) domain_guard(tn, x);
        if ((s + 1) % record_every == 0 || s + 1 == steps) {
            traj.times.push_back(tn);
            traj.states.push_back(x);
        }
    }
    return traj;
}

namespace {

/// Sign-persistence guard: positive/negative are plain sign checks, nonzero
/// variables must keep the sign they started with (crossing the puncture
/// means the trajectory left its connected component).
std::function<void(double, const std::vector<double>&)> make_guard(const LHSystem& sys,
                                                                   const std::vector<double>& x0) {
    std::vector<int> required(x0.size(), 0);
    for (int i = 0; i < sys.chart->size(); ++i) {
        switch (sys.chart->var(i).sign) {
            case DomainSign::positive: required[static_cast<std::size_t>(i)] = 1; break;
            case DomainSign::negative: required[static_cast<std::size_t>(i)] = -1; break;
            case DomainSign::nonzero:
                required[static_cast<std::size_t>(i)] =
                    x0[static_cast<std::size_t>(i)] > 0.0 ? 1 : -1;
                break;
            case DomainSign::any: break;
        }
    }
    ChartPtr chart = sys.chart;
    return [chart, required](double t, const std::vector<double>& x) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            bool bad = !std::isfinite(x[i]) || (required[i] > 0 && x[i] <= 0.0) ||
                       (required[i] < 0 && x[i] >= 0.0);
            if (bad) {
                Error e(ErrorKind::domain_violation,
                        "trajectory left the chart domain in '" +
                            chart->var(static_cast<int>(i)).name + "' at t = " +
                            std::to_string(t));
                e.when = t;
                throw e;
            }
        }
    };
}

}  // namespace

IntegrationResult integrate(const LHSystem& sys, const std::vector<double>& x0,
                            const IntegratorConfig& cfg) {
    sys.chart->check_point(x0);
    Rhs rhs = [&sys](double t, const std::vector<double>& x) { return sys.eval_field(t, x); };
    auto guard = make_guard(sys, x0);

    Trajectory coarse = rk4_solve(rhs, x0, cfg.t0, cfg.t1, cfg.dt, cfg.record_every, guard);
    Trajectory fine =
        rk4_solve(rhs, x0, cfg.t0, cfg.t1, cfg.dt / 2.0, cfg.record_every * 2, guard);

    double err = 0.0;
    std::size_t shared = std::min(coarse.size(), fine.size());
    for (std::size_t s = 0; s < shared; ++s) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < x0.size(); ++i) {
            double d = coarse.states[s][i] - fine.states[s][i];
            d2 += d * d;
        }
        err = std::max(err, std::sqrt(d2));
    }

    IntegrationResult result;
    result.trajectory = std::move(fine);
    for (int i = 0; i < sys.chart->size(); ++i)
        result.trajectory.variables.push_back(sys.chart->var(i).name);
    result.error_estimate = err;
    return result;
}

MonitorReport monitor(const LHSystem& sys, const Trajectory& traj, const std::vector<Expr>& fs) {
    MonitorReport report;
    for (const auto& f : fs) {
        require_same_chart(sys.chart, f.chart());
        if (traj.states.empty()) raise(ErrorKind::bad_input, "empty trajectory");
        DriftStat stat;
        stat.function = f.str();
        stat.initial = f.eval(traj.states.front());
        for (const auto& state : traj.states) {
            double drift = std::fabs(f.eval(state) - stat.initial);
            stat.max_abs_drift = std::max(stat.max_abs_drift, drift);
        }
        stat.max_rel_drift = stat.max_abs_drift / (1.0 + std::fabs(stat.initial));
        report.stats.push_back(std::move(stat));
    }
    return report;
}

LeafReport leaf_check(const LHSystem& sys, const Trajectory& traj,
                      const std::vector<Expr>& casimirs, double tolerance) {
    for (const auto& c : casimirs) {
        require_same_chart(sys.chart, c.chart());
        if (!casimir_check(sys.poisson, c)) {
            Error e(ErrorKind::not_a_casimir, "'" + c.str() + "' is not a Casimir function");
            e.witness = hamiltonian_vf(sys.poisson, c).str();
            throw e;
        }
    }
    LeafReport report;
    report.tolerance = tolerance;
    report.drift = monitor(sys, traj, casimirs);
    for (const auto& stat : report.drift.stats)
        if (stat.max_rel_drift > tolerance) report.confined = false;
    return report;
}

double compare_trajectories(const Trajectory& a, const Trajectory& b,
                            const std::vector<Expr>& map_fn) {
    if (a.times.empty() || b.times.empty()) raise(ErrorKind::bad_input, "empty trajectory");
    const double slack = 1e-9;
    double max_dev = 0.0;
    std::size_t cursor = 0;
    for (std::size_t s = 0; s < a.times.size(); ++s) {
        double t = a.times[s];
        if (t < b.times.front() - slack || t > b.times.back() + slack)
            raise(ErrorKind::grid_mismatch,
                  "time " + std::to_string(t) + " outside the comparison trajectory");
        while (cursor + 1 < b.times.size() && b.times[cursor + 1] < t) ++cursor;
        std::size_t hi = std::min(cursor + 1, b.times.size() - 1);
        std::vector<double> bstate(b.states[cursor].size());
        double span = b.times[hi] - b.times[cursor];
        double w = (span > 0.0) ? std::clamp((t - b.times[cursor]) / span, 0.0, 1.0) : 0.0;
        for (std::size_t i = 0; i < bstate.size(); ++i)
            bstate[i] = (1.0 - w) * b.states[cursor][i] + w * b.states[hi][i];

        std::vector<double> astate;
        if (map_fn.empty()) {
            astate = a.states[s];
        } else {
            for (const auto& f : map_fn) astate.push_back(f.eval(a.states[s]));
        }
        if (astate.size() != bstate.size())
            raise(ErrorKind::grid_mismatch, "state dimensions differ in comparison");
        double d2 = 0.0;
        for (std::size_t i = 0; i < astate.size(); ++i) {
            double d = astate[i] - bstate[i];
            d2 += d * d;
        }
        max_dev = std::max(max_dev, std::sqrt(d2));
    }
    return max_dev;
}

void write_csv(const Trajectory& traj, std::ostream& os) {
    os << "t";
    for (const auto& name : traj.variables) os << "," << name;
    os << "\n";
    char buf[64];
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        std::snprintf(buf, sizeof(buf), "%.17g", traj.times[s]);
        os << buf;
        for (double v : traj.states[s]) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            os << "," << buf;
        }
        os << "\n";
    }
}

}  // namespace lieham
