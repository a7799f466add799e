#pragma once

#include <stdexcept>
#include <string>

namespace ddfair {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: unknown items, non-permutation rankings, bad JSON, ...
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An extension was requested that does not match the instance kind
// (DD-family on chores, ID-family on goods).
class KindMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// The request is well-formed but no decision procedure exists for it.
class Unsupported : public Error {
 public:
  using Error::Error;
};

// A search ran out of states. The question stays undecided.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace ddfair
