#pragma once

#include <stdexcept>
#include <string>

namespace warpgeo {

// base class so callers can catch everything from this library at once
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// malformed expression or config text; offset is a byte offset into the source
struct ParseError : Error {
  ParseError(std::string msg, std::size_t off) : Error(std::move(msg)), offset(off) {}
  std::size_t offset = 0;
};

// evaluation hit a function-domain violation (log of a non-positive value, ...)
struct EvalError : Error {
  EvalError(std::string msg, std::size_t off) : Error(std::move(msg)), offset(off) {}
  std::size_t offset = 0;
};

// point outside a chart domain, or a warping function failed positivity
struct DomainError : Error {
  using Error::Error;
};

// metric not riemannian where an operation requires it; diagnostic is c^2*b1*b2
struct DegenerateError : Error {
  DegenerateError(std::string msg, double diag) : Error(std::move(msg)), diagnostic(diag) {}
  double diagnostic = 0;
};

// parallel-gradient hypothesis violated; carries the covariant Hessian norms
struct HypothesisError : Error {
  HypothesisError(std::string msg, double n1, double n2)
      : Error(std::move(msg)), hess_norm_1(n1), hess_norm_2(n2) {}
  double hess_norm_1 = 0;
  double hess_norm_2 = 0;
};

// bad configuration: missing section, undefined reference, inconsistent keys
struct ValidationError : Error {
  using Error::Error;
};

// numerical failure: singular matrix, classification/Cholesky disagreement
struct NumericError : Error {
  using Error::Error;
};

}  // namespace warpgeo
