#pragma once

#include <stdexcept>
#include <string>

namespace qwire {

enum class ErrorKind {
  config,
  degenerate_frame,
  grid_mismatch,
  convergence_failure,
  gap_collapse,
  overlap_too_small,
  non_unitarizable,
  norm_drift,
  adiabaticity_loss,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "ConfigError";
    case ErrorKind::degenerate_frame: return "DegenerateFrame";
    case ErrorKind::grid_mismatch: return "GridMismatch";
    case ErrorKind::convergence_failure: return "ConvergenceFailure";
    case ErrorKind::gap_collapse: return "GapCollapse";
    case ErrorKind::overlap_too_small: return "OverlapTooSmall";
    case ErrorKind::non_unitarizable: return "NonUnitarizable";
    case ErrorKind::norm_drift: return "NormDrift";
    case ErrorKind::adiabaticity_loss: return "AdiabaticityLoss";
  }
  return "Unknown";
}

/// Base of every error raised by the engine. `kind()` distinguishes
/// configuration problems from numerical failures.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  bool is_numerical() const noexcept { return kind_ != ErrorKind::config; }

 private:
  ErrorKind kind_;
};

}  // namespace qwire
