#pragma once

#include <stdexcept>
#include <string>

namespace spot {

// Malformed encodings, shape mismatches and other inputs that cannot be
// evaluated at all. A well-formed input that fails a check is reported as a
// `false` verdict instead.
class MalformedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedSecurityLevel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The prover was asked to prove a statement its witness does not satisfy.
class UnsatisfiedWitness : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A protocol precondition was violated (invalid credential, unknown user,
// zero EBID, ...).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spot
