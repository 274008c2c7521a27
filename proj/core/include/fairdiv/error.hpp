#pragma once

#include <stdexcept>
#include <string>

namespace fairdiv {

// Violated precondition on a public operation: the caller passed bad input.
struct ContractError : std::invalid_argument {
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// Broken internal invariant: a bug in the engine itself, never a user error.
struct InvariantError : std::logic_error {
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace fairdiv
