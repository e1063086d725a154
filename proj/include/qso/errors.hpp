#pragma once

#include <stdexcept>

namespace qso {

// Raised when a numeric invariant breaks at runtime (round-off beyond the
// clamp tolerance, mass drifting off the simplex). Kept distinct from
// argument errors so callers can map it to a dedicated exit code.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qso
