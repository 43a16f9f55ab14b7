#pragma once

#include <stdexcept>

namespace osl {

// A structural postcondition or invariant failed mid-computation.
struct InvariantFailure : std::logic_error {
  using std::logic_error::logic_error;
};

// Instance exceeds a size/iteration budget (distinct from bad input).
struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace osl
