#pragma once

#include <stdexcept>
#include <string>

namespace sobext {

enum class ErrorKind {
  WindowTooCoarse,
  PointOnGamma,
  Unresolved,
  DegenerateCube,
  ZeroDenominator,
  HypothesisViolated,
  ReflectionIncomplete,
  UnresolvedQuery,
  NotASuperset,
  NoReflection,
  NoChain,
  Parse,
  Usage,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::WindowTooCoarse: return "WindowTooCoarse";
    case ErrorKind::PointOnGamma: return "PointOnGamma";
    case ErrorKind::Unresolved: return "Unresolved";
    case ErrorKind::DegenerateCube: return "DegenerateCube";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::ReflectionIncomplete: return "ReflectionIncomplete";
    case ErrorKind::UnresolvedQuery: return "UnresolvedQuery";
    case ErrorKind::NotASuperset: return "NotASuperset";
    case ErrorKind::NoReflection: return "NoReflection";
    case ErrorKind::NoChain: return "NoChain";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  /// True for failures caused by domain geometry rather than bad input.
  bool is_geometry() const {
    return kind_ == ErrorKind::NoReflection || kind_ == ErrorKind::NoChain ||
           kind_ == ErrorKind::ReflectionIncomplete || kind_ == ErrorKind::WindowTooCoarse ||
           kind_ == ErrorKind::NotASuperset;
  }

 private:
  ErrorKind kind_;
};

}  // namespace sobext
