#pragma once

#include <stdexcept>

namespace gcon {

// Optimizer failed to reach the gradient tolerance. The objective is
// strongly convex, so this signals a bad step size, not a warning.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal inconsistency in the privacy parameter cascade.
struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gcon
