#pragma once

#include <stdexcept>
#include <string>

namespace saddle {

enum class ErrorKind {
  NotSymmetric,
  NoConvergence,
  DimensionTooLarge,
  DimensionMismatch,
  NonFinite,
  NotComplementary,
  NonPositiveScale,
  InvalidRatio,
  EmptyNashSet,
  ZeroMatrix,
  DivergentRegime,
  InsufficientData,
  NotConverged,
  RegimeWithoutConstant,
  Config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace saddle
