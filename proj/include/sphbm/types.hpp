#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace sphbm {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad shape, out-of-range parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a trustworthy value.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Body / measure / functional combination outside the supported closed forms.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A function that was required to be a support function is not one.
class NotSupportFunction : public Error {
 public:
  using Error::Error;
};

inline bool is_unit(const Vec3& u, double tol) { return std::abs(u.norm() - 1.0) <= tol; }

}  // namespace sphbm
