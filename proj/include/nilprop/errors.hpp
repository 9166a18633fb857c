#pragma once

#include <stdexcept>

namespace nilprop {

/// Input exceeds a configured resource cap (sieve memory limit, oracle order cap).
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Population has zero standard deviation; standardized means are undefined.
class DegeneratePopulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nilprop
