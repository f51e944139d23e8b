#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fockent {

enum class ErrorKind {
  MixedParticleNumber,
  PauliViolation,
  ZeroState,
  IncompatibleStates,
  NotSymmetric,
  NotAntisymmetric,
  CapacityExceeded,
  BadOrder,
  BadPartition,
  NotHermitian,
  NotPSD,
  NotTwoParticle,
  NotHalfFilled,
  NotUnitary,
  ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MixedParticleNumber: return "MixedParticleNumber";
    case ErrorKind::PauliViolation: return "PauliViolation";
    case ErrorKind::ZeroState: return "ZeroState";
    case ErrorKind::IncompatibleStates: return "IncompatibleStates";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::CapacityExceeded: return "CapacityExceeded";
    case ErrorKind::BadOrder: return "BadOrder";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotTwoParticle: return "NotTwoParticle";
    case ErrorKind::NotHalfFilled: return "NotHalfFilled";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Numerical failures (as opposed to bad input) map to CLI exit code 2.
inline bool is_numerical(ErrorKind kind) { return kind == ErrorKind::NotPSD; }

/// Single exception type for the library; `kind()` carries the typed error.
/// `term()` is the 1-based number of the offending input term, when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> term = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), term_(term) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> term() const noexcept { return term_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> term_;
};

}  // namespace fockent
