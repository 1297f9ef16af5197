#include "cpkernel/errors.hpp"

namespace cpkernel {

const char* errc_name(errc code) {
  switch (code) {
    case errc::dimension_mismatch: return "ErrDimensionMismatch";
    case errc::numerical: return "ErrNumerical";
    case errc::not_psd: return "ErrNotPSD";
    case errc::unknown_label: return "ErrUnknownLabel";
    case errc::too_many_strings: return "ErrTooManyStrings";
    case errc::lift_inadmissible: return "ErrLiftInadmissible";
    case errc::certificate_failed: return "ErrCertificateFailed";
    case errc::not_converged: return "ErrNotConverged";
    case errc::precondition_failed: return "ErrPreconditionFailed";
    case errc::not_dominated: return "ErrNotDominated";
    case errc::not_subunital: return "ErrNotSubunital";
    case errc::bad_distribution: return "ErrBadDistribution";
    case errc::underflow: return "ErrUnderflow";
    case errc::validation: return "ErrValidation";
  }
  return "ErrUnknown";
}

}  // namespace cpkernel
