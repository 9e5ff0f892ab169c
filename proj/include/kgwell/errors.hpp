#pragma once

#include <stdexcept>
#include <string>

namespace kgwell {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |E - V0| sits on the mc^2 threshold: q = 0 and the step coefficients are singular.
class DegenerateChannel : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// Converged (infinite) multiple-scattering series requested where |r_r r_l| > 1.
class DivergentSeries : public Error {
 public:
  using Error::Error;
};

/// The momentum window of the quadrature plan drops too much of the Gaussian envelope.
class QuadratureUnderflow : public Error {
 public:
  using Error::Error;
};

class InstabilityDetected : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

}  // namespace kgwell
