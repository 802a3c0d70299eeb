#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kr {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Fixed numerical tolerances. Everything here is dense double-precision
// linear algebra on operators of dimension <= a few hundred, so absolute
// tolerances are meaningful.
namespace tol {
inline constexpr double hermitian = 1e-10;    // Hermiticity / PSD slack
inline constexpr double trace_one = 1e-10;    // unit-trace slack
inline constexpr double unitary = 1e-10;      // unitarity slack
inline constexpr double support = 1e-12;      // eigenvalue support cutoff
inline constexpr double reconstruct = 1e-9;   // round-trip reconstruction slack
inline constexpr double classical = 1e-9;     // off-diagonal leakage on classical registers
inline constexpr double duality_bits = 1e-6;  // certified primal/dual gap, in bits
}  // namespace tol

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Bad arguments, malformed files, dimension mismatches. CLI exit code 2.
struct invalid_input : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solver or consistency check that could not certify its result. CLI exit code 3.
struct numerical_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw invalid_input(msg);
}

}  // namespace kr
