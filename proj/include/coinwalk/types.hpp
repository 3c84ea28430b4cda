#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace coinwalk {

using cplx = std::complex<double>;

/// Amplitudes of the coin (environment) in one momentum sector.
using CoinVector = Eigen::VectorXcd;

/// Dense complex matrix. Used for operators that are either small or serve as test oracles.
using DenseMatrix = Eigen::MatrixXcd;

/// One row per momentum sector; rows are contiguous so a sector can be handed out as a span.
using SectorMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad dimension, out-of-range index, malformed state.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical guard tripped: wrap-around on the ring, dense size caps, failed eigensolves.
class GuardViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace coinwalk
