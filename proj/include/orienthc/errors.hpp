#pragma once

#include <stdexcept>
#include <string>

namespace ohc {

// Malformed input: bad edge pairs, unparsable files or patterns.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An exact-mode operation was asked to run above its size cap.
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A bounded search or sampling budget ran out.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ohc
