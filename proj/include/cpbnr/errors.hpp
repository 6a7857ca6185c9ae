// errors.hpp — exception types shared across the library
#pragma once

#include <stdexcept>

namespace cpbnr {

// Invalid or inconsistent user-facing configuration (bad key, bad value,
// violated parameter invariant).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The adaptive integrator could not proceed (step-size underflow).
struct integration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computed quantity violated a bound that should hold by construction.
struct consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cpbnr
