#pragma once

#include <stdexcept>
#include <string>

namespace pss {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: JSON syntax, wrong shapes, out-of-range indices.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Topologically invalid triangulation (non-conforming, holes, duplicates).
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Degenerate geometry encountered during refinement or basis construction.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A local basis solve failed or produced a function outside the contract.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Linear solver failure or residual above tolerance.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace pss
