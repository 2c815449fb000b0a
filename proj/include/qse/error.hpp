#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qse {

enum class ErrorCode {
    InvalidInput,
    NotHermitian,
    NotUnitTrace,
    NotPositive,
    SingularMarginal,
    DegenerateSteerer,
    DegenerateEllipsoid,
    NonUnitDirection,
    NotCollinear,
    CoincidentEndpoints,
    PointOutsideEllipsoid,
    NumericFailure,
    InconsistentWithClassification,
    CountMismatch,
    OutOfRange,
    CollinearPoints,
    NotTangentAtP,
    DegenerateEllipse,
    ParamOutOfRange,
    PositivityViolated,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for failures of the numerics rather than of the input (CLI exit code 3).
bool is_numeric_failure(ErrorCode code) noexcept;

/// Every failure in the library is reported through this exception. `magnitude`
/// carries the size of the violation when one is meaningful (asymmetry, trace
/// error, most negative eigenvalue, ...), NaN otherwise.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what,
          double magnitude = std::numeric_limits<double>::quiet_NaN());

    ErrorCode code() const noexcept { return code_; }
    double magnitude() const noexcept { return magnitude_; }

private:
    ErrorCode code_;
    double magnitude_;
};

} // namespace qse
