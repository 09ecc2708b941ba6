#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace lieham {

/// Machine-readable failure categories, used by the CLI to pick exit codes.
enum class ErrorKind {
    syntax,
    unknown_variable,
    illegal_radical,
    illegal_power,
    chart_mismatch,
    domain_violation,
    coefficient_domain,
    logarithmic_term,
    not_hamiltonian,
    not_hamiltonian_generator,
    degenerate_bivector,
    bad_structure_constants,
    not_closed,
    not_a_constant,
    not_a_casimir,
    inclusion_violated,
    internal_inconsistency,
    not_strong_comomentum,
    dimension_mismatch,
    degenerate_jacobian,
    grid_mismatch,
    unknown_system,
    bad_params,
    bad_input,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    /// Byte offset into the source text, set for parse errors.
    std::optional<std::size_t> position;
    /// Time of a domain exit, set when an integration leaves the chart.
    std::optional<double> when;
    /// Printed witness (an expression, a bivector component, ...), when one exists.
    std::optional<std::string> witness;

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace lieham
