#pragma once

#include <stdexcept>
#include <string>

namespace toric_hk {

// Base of every error raised by the library. Input problems and numerical
// failures are distinguished so the CLI can map them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invalid user data (bad normals, duplicate flats, shapes).
class InputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

// F is coordinate-singular: s_k + r_k vanishes for some flat.
class BranchLocusError : public Error {
 public:
  using Error::Error;
};

// Point lies (within tolerance) on a flat, where Phi blows up.
class OnFlatError : public Error {
 public:
  using Error::Error;
};

class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

// Newton iterate hit the branch locus of F.
class DomainEscapeError : public Error {
 public:
  using Error::Error;
};

// A finite-difference stencil would reach too close to a flat.
class StencilClippedError : public Error {
 public:
  using Error::Error;
};

class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

class NotSmoothError : public Error {
 public:
  using Error::Error;
};

class EnumerationLimitError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace toric_hk
