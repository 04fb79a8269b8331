#pragma once

#include <stdexcept>
#include <string>

namespace mlgw {

/* Error taxonomy mirrored by the CLI exit codes:
   input errors -> 2, consistency errors -> 3, numerical divergence -> 4. */

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: missing/malformed files, unknown ids, invalid flag values.
class InputError : public Error {
public:
  explicit InputError(const std::string& what) : Error(what) {}
};

// Internally inconsistent state: dimension or vocabulary mismatches between
// otherwise well-formed artifacts (graph vs. checkpoint vs. traces).
class ConsistencyError : public Error {
public:
  explicit ConsistencyError(const std::string& what) : Error(what) {}
};

// Numerical divergence: NaN/Inf loss or gradients during training.
class DivergenceError : public Error {
public:
  explicit DivergenceError(const std::string& what) : Error(what) {}
};

inline int exit_code_for(const Error& e) {
  if (dynamic_cast<const DivergenceError*>(&e)) return 4;
  if (dynamic_cast<const ConsistencyError*>(&e)) return 3;
  if (dynamic_cast<const InputError*>(&e)) return 2;
  return 1;
}

}  // namespace mlgw
