#ifndef SKEWMIX_TYPES_HPP
#define SKEWMIX_TYPES_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skewmix {

using Scalar = double;
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
using IndexVector = Eigen::Matrix<Eigen::Index, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

// Errors split by the process exit code they map to: input problems (1) and
// numerical failures (2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept = 0;
};

class InputError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 1; }
};

class NumericalError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

// A matrix that must be positive definite was not.
class DomainError : public NumericalError {
 public:
  DomainError(const std::string& what, std::string matrix_name)
      : NumericalError(what), matrix_name_(std::move(matrix_name)) {}
  const std::string& matrix_name() const noexcept { return matrix_name_; }

 private:
  std::string matrix_name_;
};

// API misuse, e.g. asking for a skew-normal density with a dof present.
class MisuseError : public InputError {
 public:
  using InputError::InputError;
};

class SingularScatterError : public NumericalError {
 public:
  SingularScatterError(const std::string& what, Index component)
      : NumericalError(what), component_(component) {}
  Index component() const noexcept { return component_; }

 private:
  Index component_;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double objective_gap)
      : NumericalError(what), gap_(objective_gap) {}
  double objective_gap() const noexcept { return gap_; }

 private:
  double gap_;
};

}  // namespace skewmix

#endif  // SKEWMIX_TYPES_HPP
