#pragma once

#include <json.hpp>
#include <string>

#include "lieham/errors.hpp"
#include "lieham/numint.hpp"

namespace lieham {

using Json = nlohmann::ordered_json;

/// Parses a system-definition document. Unknown keys are rejected; every
/// expression string goes through the expression grammar.
/// Layout:
///   {
///     "variables": [{"name": "x", "domain": "nonzero"}, ...],
///     "parameters": ["c0"],                        // optional, informational
///     "poisson": {"type": "canonical", "pairs": [["x","p"], ...]}
///              | {"type": "explicit", "components": {"s1,s2": "-s3", ...}}
///              | {"type": "lie_poisson",
///                 "structure_constants": [[1,2,3,"1"], ...]}   // 1-based
///     "generators": [{"name": "X1", "components": {"x": "..."}}, ...],
///     "coefficients": [{"generator": "X1", "fn": "sin(t)"}, ...],
///     "hamiltonians": [{"generator": "X1", "expr": "..."}, ...],   // optional
///     "constants_of_motion": ["...", ...],                         // optional
///     "comomentum": {"X1": "...", ...}                             // optional
///   }
LHSystem load_system(const Json& doc);
LHSystem load_system_file(const std::string& path);

/// Serialises a system back to the definition format; canonical bivectors
/// are written as type "canonical", everything else as "explicit".
Json save_system(const LHSystem& sys);

/// Report fragments shared by the CLI commands. Exact rationals are always
/// strings, never floats; expressions are canonical text.
Json structure_constants_json(const StructureConstants& sc,
                              const std::vector<std::string>& names);
Json closure_json(const VfClosure& closure);
Json closure_json(const FnClosure& closure);
Json drift_json(const MonitorReport& report);

struct CmdResult {
    Json report;
    int exit_code = 0;
    std::string csv;  // cmd_integrate only
};

/// Exit taxonomy: 0 verified, 1 mathematically refuted, 2 parse/validation,
/// 3 cap exceeded, 4 linearisation precondition, 5 domain violation.
int exit_code_for(const Error& e);

CmdResult cmd_check(const LHSystem& sys, int cap);
CmdResult cmd_closure(const LHSystem& sys, int cap);
CmdResult cmd_constants(const LHSystem& sys, const std::vector<std::string>& candidates, int cap);
CmdResult cmd_linearize(const LHSystem& sys, int cap);

struct IntegrateRequest {
    std::vector<double> x0;
    IntegratorConfig cfg;
    std::vector<std::string> monitor_exprs;
    double leaf_tolerance = 1e-6;
};

CmdResult cmd_integrate(const LHSystem& sys, const IntegrateRequest& req);

}  // namespace lieham
