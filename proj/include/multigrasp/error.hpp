#pragma once

#include <stdexcept>
#include <string>

namespace multigrasp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Covariance of a neighborhood is rank-deficient or has too few points.
class DegenerateNeighborhood : public Error {
 public:
  using Error::Error;
};

// A parallel-jaw closing line does not meet any object.
class NoContact : public Error {
 public:
  using Error::Error;
};

// Cylinder group used for grasp prediction holds no points.
class NoSupport : public Error {
 public:
  using Error::Error;
};

// Malformed or incompatible input file; message names the offending field.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class PlacementError : public Error {
 public:
  using Error::Error;
};

// Loss became NaN/inf during training.
class NonFiniteLoss : public Error {
 public:
  using Error::Error;
};

}  // namespace multigrasp
