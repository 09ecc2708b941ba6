#include "lieham/errors.hpp"

namespace lieham {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::syntax: return "SyntaxError";
        case ErrorKind::unknown_variable: return "UnknownVariable";
        case ErrorKind::illegal_radical: return "IllegalRadical";
        case ErrorKind::illegal_power: return "IllegalPower";
        case ErrorKind::chart_mismatch: return "ChartMismatch";
        case ErrorKind::domain_violation: return "DomainViolation";
        case ErrorKind::coefficient_domain: return "CoefficientDomain";
        case ErrorKind::logarithmic_term: return "LogarithmicTerm";
        case ErrorKind::not_hamiltonian: return "NotHamiltonian";
        case ErrorKind::not_hamiltonian_generator: return "NotHamiltonianGenerator";
        case ErrorKind::degenerate_bivector: return "DegenerateBivector";
        case ErrorKind::bad_structure_constants: return "BadStructureConstants";
        case ErrorKind::not_closed: return "NotClosed";
        case ErrorKind::not_a_constant: return "NotAConstant";
        case ErrorKind::not_a_casimir: return "NotACasimir";
        case ErrorKind::inclusion_violated: return "InclusionViolated";
        case ErrorKind::internal_inconsistency: return "InternalInconsistency";
        case ErrorKind::not_strong_comomentum: return "NotStrongComomentum";
        case ErrorKind::dimension_mismatch: return "DimensionMismatch";
        case ErrorKind::degenerate_jacobian: return "DegenerateJacobian";
        case ErrorKind::grid_mismatch: return "GridMismatch";
        case ErrorKind::unknown_system: return "UnknownSystem";
        case ErrorKind::bad_params: return "BadParams";
        case ErrorKind::bad_input: return "BadInput";
    }
    return "Error";
}

}  // namespace lieham
