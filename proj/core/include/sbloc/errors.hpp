#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sbloc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A test-scale oracle was asked to materialise something too large.
class OversizeError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

/// Coincident points where a propagation distance must be positive.
class GeometryError : public Error {
public:
  using Error::Error;
};

class ParameterError : public Error {
public:
  using Error::Error;
};

class InsufficientDataError : public Error {
public:
  using Error::Error;
};

/// Invalid scenario, solver section or input file.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Post-processing found nothing above the detection threshold.
class EmptyResultError : public Error {
public:
  using Error::Error;
};

/// Raised by the solvers when the energy blows up. Carries the traces
/// recorded up to the failure so callers can persist them.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& what, std::vector<double> energy,
                  std::vector<double> residual)
      : Error(what), energy_trace(std::move(energy)), residual_trace(std::move(residual)) {}

  std::vector<double> energy_trace;
  std::vector<double> residual_trace;
};

} // namespace sbloc
