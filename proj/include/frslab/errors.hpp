#pragma once

#include <stdexcept>
#include <string>

namespace frslab {

// Malformed user input: bad scheme files, non-prime p, arity mismatches.
struct invalid_input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A computation exceeded a configured cap (enumeration size, live node
// count, machine-word level range).
struct resource_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A claimed witness failed to verify (cover identity, CIA witness shape).
struct certificate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace frslab
