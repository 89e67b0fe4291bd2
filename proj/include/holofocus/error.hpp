#pragma once

#include <stdexcept>
#include <string>

namespace holofocus {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument, non-finite value or mismatched dimensions.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Particle centre falls outside the hologram grid.
class PlacementError : public Error {
 public:
  using Error::Error;
};

// No region could be isolated for constrained-intensity calibration.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

// Rejection sampling could not satisfy the separation constraints.
class SamplingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace holofocus
