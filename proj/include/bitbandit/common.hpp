#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace bitbandit {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

// One channel letter. Alphabets are {0, ..., 2^B - 1}.
struct Symbol {
  std::uint64_t value = 0;
  friend bool operator==(Symbol, Symbol) = default;
};

// Error taxonomy. Every failure surfaces as one of these; nothing is
// reported through return codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed an argument outside the operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A run configuration violates a standing assumption.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Agent and server disagree on the meaning of a symbol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// A symbol does not fit the channel alphabet.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace bitbandit
