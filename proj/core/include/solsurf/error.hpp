#pragma once

#include <stdexcept>
#include <string>

namespace solsurf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the set where the operation is defined
/// (point outside a parameter domain, arccos of 1.5, excluded angle, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Tangent vectors attached to different base points were combined.
class BasePointMismatch : public Error {
 public:
  using Error::Error;
};

/// The immersion degenerates at a point (first fundamental form not
/// positive definite).
class DegenerateJet : public Error {
 public:
  using Error::Error;
};

/// A closed-form expression hit a vanishing denominator.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double u, double v)
      : Error(what), u_(u), v_(v) {}

  double u() const noexcept { return u_; }
  double v() const noexcept { return v_; }

 private:
  double u_;
  double v_;
};

/// Adaptive quadrature or ODE integration failed to converge or produced
/// non-finite values.
class NumericsError : public Error {
 public:
  using Error::Error;
};

}  // namespace solsurf
