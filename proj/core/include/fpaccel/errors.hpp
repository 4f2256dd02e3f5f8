#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <utility>

namespace fpaccel {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The operator produced non-finite values; carries the last finite iterate.
class DivergedError : public Error {
public:
  DivergedError(const std::string& what, Eigen::VectorXd last_finite)
      : Error(what), last_finite_iterate(std::move(last_finite)) {}

  Eigen::VectorXd last_finite_iterate;
};

// The coefficient box is too tight for the sum-to-one constraint.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

}  // namespace fpaccel
