#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dnev {

enum class ErrorKind {
  // diffpoly
  SymbolicDuplicate,
  EmptyPolynomial,
  BadIndex,
  SymbolicCoefficient,
  PoleHit,
  // eqparse
  SyntaxError,
  ZeroShift,
  MixedMode,
  ShiftInUQ,
  NonlinearCoefficient,
  DuplicateSymbol,
  CommonFactor,
  // clunie
  HypothesesViolated,
  NotAdmissible,
  WrongBenchmark,
  // growth
  TooSmall,
  HypothesisViolation,
  NotLogConvex,
  // charfn
  RootIsolationFailure,
  PoleOnCircle,
  QuadratureNonConvergence,
  Overflow,
  // shared
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::SymbolicDuplicate: return "SymbolicDuplicate";
    case ErrorKind::EmptyPolynomial: return "EmptyPolynomial";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::SymbolicCoefficient: return "SymbolicCoefficient";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ZeroShift: return "ZeroShift";
    case ErrorKind::MixedMode: return "MixedMode";
    case ErrorKind::ShiftInUQ: return "ShiftInUQ";
    case ErrorKind::NonlinearCoefficient: return "NonlinearCoefficient";
    case ErrorKind::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorKind::CommonFactor: return "CommonFactor";
    case ErrorKind::HypothesesViolated: return "HypothesesViolated";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::WrongBenchmark: return "WrongBenchmark";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::NotLogConvex: return "NotLogConvex";
    case ErrorKind::RootIsolationFailure: return "RootIsolationFailure";
    case ErrorKind::PoleOnCircle: return "PoleOnCircle";
    case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library. Parser errors carry a byte offset.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(compose(kind, what, position)),
        kind_(kind),
        position_(position) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  static std::string compose(ErrorKind kind, const std::string& what,
                             std::optional<std::size_t> position) {
    std::string s(to_string(kind));
    if (position) s += " at " + std::to_string(*position);
    if (!what.empty()) s += ": " + what;
    return s;
  }

  ErrorKind kind_;
  std::optional<std::size_t> position_;
};

}  // namespace dnev
