#pragma once

#include <stdexcept>
#include <string>

namespace ballcover {

// Base for every error raised by the library. Callers that only need to know
// "the request was invalid" can catch this one type.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(got)) {}
};

// A motion or shape variant used in a space whose norm does not support it
// (planar rotations and ommatidia need the Euclidean norm).
class NormIncompatible : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

// Rejection sampling gave up after its documented attempt budget.
class SamplingBudgetExceeded : public Error {
public:
  using Error::Error;
};

// Antipodal search found a sphere probe that no set contains.
class CoverageGap : public Error {
public:
  using Error::Error;
};

class FormatError : public Error {
public:
  using Error::Error;
};

}  // namespace ballcover
