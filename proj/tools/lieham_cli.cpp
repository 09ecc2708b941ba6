#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "lieham/json_io.hpp"

namespace {

int default_cap() {
    if (const char* env = std::getenv("LIEHAM_CAP")) {
        int cap = std::atoi(env);
        if (cap > 0) return cap;
    }
    return lieham::kDefaultCap;
}

void emit(const lieham::CmdResult& result, const std::string& report_path) {
    std::string text = result.report.dump(2);
    if (report_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(report_path);
        out << text << "\n";
    }
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const lieham::Error& e) {
        lieham::Json j;
        j["error"] = lieham::error_kind_name(e.kind());
        j["message"] = e.what();
        if (e.witness) j["witness"] = *e.witness;
        if (e.when) j["exit_time"] = *e.when;
        std::cout << j.dump(2) << "\n";
        return lieham::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lie-Hamilton systems workbench"};
    app.require_subcommand(1);

    std::string file;
    std::string report_path;
    int cap = default_cap();

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", file, "system definition (JSON)")->required();
        cmd->add_option("--cap", cap, "closure dimension cap");
        cmd->add_option("--report", report_path, "write the JSON report here instead of stdout");
    };

    CLI::App* check = app.add_subcommand("check", "verify the Lie-Hamiltonian structure");
    add_common(check);

    CLI::App* closure = app.add_subcommand("closure", "iterated-bracket closures");
    add_common(closure);

    CLI::App* constants = app.add_subcommand("constants", "test candidate constants of motion");
    add_common(constants);
    std::vector<std::string> candidates;
    constants->add_option("--candidate", candidates, "expression to test")->required();

    CLI::App* linearize = app.add_subcommand("linearize", "simultaneous linearisation");
    add_common(linearize);

    CLI::App* integrate = app.add_subcommand("integrate", "RK4 integration with monitoring");
    add_common(integrate);
    std::vector<double> x0;
    double t0 = 0.0, t1 = 1.0, dt = 1e-3, leaf_tol = 1e-6;
    int record_every = 1;
    std::vector<std::string> monitors;
    std::string csv_path;
    integrate->add_option("--x0", x0, "initial state, chart order")->required();
    integrate->add_option("--t0", t0, "start time");
    integrate->add_option("--t1", t1, "end time");
    integrate->add_option("--dt", dt, "step size");
    integrate->add_option("--record-every", record_every, "record every n-th step");
    integrate->add_option("--monitor", monitors, "expression to monitor for drift");
    integrate->add_option("--leaf-tolerance", leaf_tol, "Casimir confinement tolerance");
    integrate->add_option("--out", csv_path, "trajectory CSV path");

    CLI11_PARSE(app, argc, argv);

    return guarded([&]() -> int {
        lieham::LHSystem sys = lieham::load_system_file(file);
        lieham::CmdResult result;
        if (check->parsed()) {
            result = lieham::cmd_check(sys, cap);
        } else if (closure->parsed()) {
            result = lieham::cmd_closure(sys, cap);
        } else if (constants->parsed()) {
            result = lieham::cmd_constants(sys, candidates, cap);
        } else if (linearize->parsed()) {
            result = lieham::cmd_linearize(sys, cap);
        } else if (integrate->parsed()) {
            lieham::IntegrateRequest req;
            req.x0 = x0;
            req.cfg = {t0, t1, dt, record_every};
            req.monitor_exprs = monitors;
            req.leaf_tolerance = leaf_tol;
            result = lieham::cmd_integrate(sys, req);
            if (!csv_path.empty() && !result.csv.empty()) {
                std::ofstream out(csv_path);
                out << result.csv;
            }
        }
        emit(result, report_path);
        return result.exit_code;
    });
}
