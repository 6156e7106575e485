#pragma once

#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hfb {

using Complex = std::complex<double>;

/// Samples of a complex field at the grid nodes (length N).
using ComplexField = Eigen::VectorXcd;
/// Samples of a real field at the grid nodes (length N).
using RealField = Eigen::VectorXd;
/// Integral kernel K(x_i, x_j) sampled on node pairs (N x N).
using Kernel = Eigen::MatrixXcd;
using RealKernel = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

// Error taxonomy. The CLI maps each class to a distinct exit code.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed configuration, violated precondition, shape mismatch.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or a diverging iteration.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A monitored physical invariant was breached beyond tolerance.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

inline void require_square(const Kernel& k, Eigen::Index n, const char* what) {
  require(k.rows() == n && k.cols() == n,
          std::string(what) + ": expected " + std::to_string(n) + "x" + std::to_string(n) +
              " kernel, got " + std::to_string(k.rows()) + "x" + std::to_string(k.cols()));
}

inline void require_length(const ComplexField& f, Eigen::Index n, const char* what) {
  require(f.size() == n, std::string(what) + ": expected field of length " + std::to_string(n) +
                             ", got " + std::to_string(f.size()));
}

}  // namespace detail

/// max_ij |A_ij - (A^dagger)_ij|
inline double hermiticity_defect(const Kernel& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// max_ij |A_ij - A_ji|
inline double symmetry_defect(const Kernel& a) {
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

inline double max_abs(const Kernel& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

/// Lossless decimal form of a double (17 significant digits).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace hfb
