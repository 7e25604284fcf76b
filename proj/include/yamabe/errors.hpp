#pragma once

#include <stdexcept>
#include <string>

namespace yamabe {

// Precondition and domain failures. Each maps to one named error condition of
// the library contract; messages carry the offending values.
struct NonIntegrableError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct UnsupportedDegreeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ToleranceNotReachedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SymmetryViolationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DimensionTooLowError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct IndexOutOfRangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct NonMonotoneScalesError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DegenerateWeylError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct StepTooSmallError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NonPositiveValueError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct OutOfDomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SingularMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FixedPointViolationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ConfigInvalidError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace yamabe
