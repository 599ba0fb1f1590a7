#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace attribmkt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when inputs violate a documented precondition (bad dimensions,
/// wrong signs, rank deficiency). Maps to CLI exit code 1.
class validation_error : public std::invalid_argument {
 public:
  explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an iterative routine fails to converge or a numerical
/// guarantee cannot be met. Maps to CLI exit code 2.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw validation_error(what);
}

}  // namespace attribmkt
