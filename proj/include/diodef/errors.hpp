#pragma once

#include <stdexcept>
#include <string>

namespace diodef {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Violated precondition, malformed literal, mixed-field operands, and the like.
struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what) : Error(what) {}
};

// A bounded search (algebra construction, coset enumeration cap, ...) ran out
// of budget. Callers map this to exit code 3.
struct SearchBoundError : Error {
  explicit SearchBoundError(const std::string& what) : Error(what) {}
};

// The local solvability oracle could not certify a verdict at the requested
// precision. It refuses rather than guessing.
struct PrecisionError : Error {
  explicit PrecisionError(const std::string& what) : Error(what) {}
};

// A self-check that is supposed to hold by construction failed. This always
// indicates a bug, never user error.
struct VerificationError : Error {
  explicit VerificationError(const std::string& what) : Error(what) {}
};

}  // namespace diodef
