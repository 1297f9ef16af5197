#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpkernel {

enum class errc {
  dimension_mismatch,
  numerical,
  not_psd,
  unknown_label,
  too_many_strings,
  lift_inadmissible,
  certificate_failed,
  not_converged,
  precondition_failed,
  not_dominated,
  not_subunital,
  bad_distribution,
  underflow,
  validation,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

/// Thrown by limit iterations that fail to settle. Carries the oscillation
/// diagnostic: `period` is 0 when no short cycle was detected, otherwise the
/// smallest recurrence period found in the direct kernel orbit.
class NotConvergedError : public Error {
 public:
  NotConvergedError(const std::string& what, std::size_t iterations, double step_residual,
                    double direct_residual, std::size_t period, double period_gap)
      : Error(errc::not_converged, what),
        iterations(iterations),
        step_residual(step_residual),
        direct_residual(direct_residual),
        period(period),
        period_gap(period_gap) {}

  std::size_t iterations;
  double step_residual;
  double direct_residual;
  std::size_t period;
  double period_gap;
};

}  // namespace cpkernel
