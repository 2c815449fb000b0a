#include "qse/error.hpp"

namespace qse {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotUnitTrace: return "NotUnitTrace";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::SingularMarginal: return "SingularMarginal";
    case ErrorCode::DegenerateSteerer: return "DegenerateSteerer";
    case ErrorCode::DegenerateEllipsoid: return "DegenerateEllipsoid";
    case ErrorCode::NonUnitDirection: return "NonUnitDirection";
    case ErrorCode::NotCollinear: return "NotCollinear";
    case ErrorCode::CoincidentEndpoints: return "CoincidentEndpoints";
    case ErrorCode::PointOutsideEllipsoid: return "PointOutsideEllipsoid";
    case ErrorCode::NumericFailure: return "NumericFailure";
    case ErrorCode::InconsistentWithClassification: return "InconsistentWithClassification";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::CollinearPoints: return "CollinearPoints";
    case ErrorCode::NotTangentAtP: return "NotTangentAtP";
    case ErrorCode::DegenerateEllipse: return "DegenerateEllipse";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::PositivityViolated: return "PositivityViolated";
    }
    return "Unknown";
}

bool is_numeric_failure(ErrorCode code) noexcept {
    return code == ErrorCode::NumericFailure ||
           code == ErrorCode::InconsistentWithClassification ||
           code == ErrorCode::CountMismatch;
}

Error::Error(ErrorCode code, const std::string& what, double magnitude)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code), magnitude_(magnitude) {}

} // namespace qse
