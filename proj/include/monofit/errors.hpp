#pragma once

#include <stdexcept>

namespace monofit {

// Resource limits (table too wide, spectral set too large, ...). CLI exit 2.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed config / unusable arguments at the tool boundary. CLI exit 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A requested construction cannot exist or could not be completed. CLI exit 3.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace monofit
