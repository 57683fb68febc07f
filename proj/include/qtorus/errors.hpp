#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qtorus {

// Error kinds, grouped into the process exit-code categories used by the CLI:
//   validation errors -> exit 2, hypothesis failures -> exit 3,
//   inexact_kdim -> exit 4.  Oracle budget and internal errors are not
//   expected in normal operation.
enum class ErrorKind {
    parse,
    not_antisymmetric,
    non_unit_diagonal,
    torsion_scalar,
    non_unit_rational,
    unknown_generator,
    overlapping_generators,
    length_mismatch,
    hypothesis_failed,
    missing_v_set,
    inexact_kdim,
    budget_exceeded,
    internal,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::parse: return "ParseError";
        case ErrorKind::not_antisymmetric: return "NotAntisymmetric";
        case ErrorKind::non_unit_diagonal: return "NonUnitDiagonal";
        case ErrorKind::torsion_scalar: return "TorsionScalar";
        case ErrorKind::non_unit_rational: return "NonUnitRational";
        case ErrorKind::unknown_generator: return "UnknownGenerator";
        case ErrorKind::overlapping_generators: return "OverlappingGenerators";
        case ErrorKind::length_mismatch: return "LengthMismatch";
        case ErrorKind::hypothesis_failed: return "HypothesisFailed";
        case ErrorKind::missing_v_set: return "MissingVSet";
        case ErrorKind::inexact_kdim: return "InexactKdim";
        case ErrorKind::budget_exceeded: return "BudgetExceeded";
        case ErrorKind::internal: return "InternalError";
    }
    return "UnknownError";
}

class QtError : public std::runtime_error {
  public:
    QtError(ErrorKind kind, std::string message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind), message_(std::move(message)) {}

    // Parse errors carry a 1-based line/column position.
    QtError(ErrorKind kind, std::string message, std::size_t line, std::size_t column)
        : std::runtime_error(std::string(error_kind_name(kind)) + " at line " +
                             std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + message),
          kind_(kind), message_(std::move(message)), line_(line), column_(column) {}

    ErrorKind kind() const noexcept { return kind_; }
    // the description without the kind/position prefix
    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    ErrorKind kind_;
    std::string message_;
    std::size_t line_ = 0;
    std::size_t column_ = 0;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw QtError(kind, message);
}

}  // namespace qtorus
