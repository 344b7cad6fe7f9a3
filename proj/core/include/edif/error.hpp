#pragma once

#include <stdexcept>
#include <string>

namespace edif {

enum class ErrorKind {
  EqualWithinDepth,
  InsufficientDepth,
  DepthExhausted,
  ScheduleViolation,
  NotInTree,
  SameLeaf,
  DegenerateInterval,
  NegativeValueDetected,
  NegativeAmplitude,
  CrossingIsolationFailure,
  StageNotFound,
  Indeterminate,
  MassOutOfRange,
  PinnedPointConflict,
  NotClose,
  ValidationFailed,
  NoAdmissiblePoint,
  HeightConflict,
  DivisionByZero,
  PreconditionViolated,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace edif
