#pragma once

#include <stdexcept>
#include <string>

namespace ktower {

// Base of every error the library raises. The CLI maps all of them to
// exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension mismatches, ragged matrices, malformed JSON payloads.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

// A matrix that does not define a well-defined map between the declared groups.
class InvalidHomomorphism : public Error {
 public:
  using Error::Error;
};

// Parameters outside their documented range (n < 2, level 0, ...).
class OutOfRange : public Error {
 public:
  using Error::Error;
};

// The minor-enumeration oracle refuses matrices above its size limit.
class OracleLimitExceeded : public Error {
 public:
  using Error::Error;
};

// A tower was queried above its certification bound.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

// A tower level (or connecting map) that the model does not determine.
class Unresolved : public Error {
 public:
  using Error::Error;
};

}  // namespace ktower
