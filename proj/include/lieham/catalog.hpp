#pragma once

#include "lieham/lieham.hpp"

namespace lieham {

/// Documented facts about a catalog system, used as test ground truth.
struct CatalogExpectations {
    std::optional<int> vf_dimension;
    std::optional<int> fn_dimension;
    bool lie_hamilton = true;
    /// Extra named fields completing the closed basis (e.g. the fifth
    /// Riccati field), with their Hamiltonians when known.
    std::vector<std::pair<std::string, VectorField>> extra_fields;
    std::map<std::string, Expr> extra_hamiltonians;
    std::vector<Expr> casimirs;
};

struct CatalogEntry {
    std::string name;
    LHSystem system;
    CatalogExpectations expect;
};

using Params = std::map<std::string, std::string>;

/// Builds a named system. Common params: coefficient functions ("a0", "a1",
/// "a2", "b1", "b2", "b3", "omega"), dimensions ("n"), and the symbolic
/// parameters "k" / "c0" which become concrete when given a rational value.
/// The Gaudin entry takes "field" = "X" (default) or "Y".
/// Errors: UnknownSystem, BadParams.
CatalogEntry get_entry(const std::string& name, const Params& params = {});
LHSystem get_system(const std::string& name, const Params& params = {});

std::vector<std::string> catalog_names();

}  // namespace lieham
