#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cchain {

enum class ErrorKind {
  NotHermitian,
  NotPSD,
  InvalidSpec,
  DecompositionFailed,
  FactorizationFailed,
  NotCommuting,
  NotScaleInvariant,
  DegenerateLoopKernel,
  InvalidK,
  CommutificationFailed,
  SingularS,
  TooLarge,
  NonIntegerSpectrum,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so the CLI can map it
/// onto a stable JSON "error" field.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::DecompositionFailed: return "DecompositionFailed";
    case ErrorKind::FactorizationFailed: return "FactorizationFailed";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::NotScaleInvariant: return "NotScaleInvariant";
    case ErrorKind::DegenerateLoopKernel: return "DegenerateLoopKernel";
    case ErrorKind::InvalidK: return "InvalidK";
    case ErrorKind::CommutificationFailed: return "CommutificationFailed";
    case ErrorKind::SingularS: return "SingularS";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NonIntegerSpectrum: return "NonIntegerSpectrum";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace cchain
