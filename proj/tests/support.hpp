#pragma once

#include <cstdint>
#include <random>

#include "keyrates/tensor.hpp"

namespace kr::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed = 0x5eed2026ULL) {
  return std::mt19937_64(seed);
}

inline Mat ginibre(int rows, int cols, std::mt19937_64& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cx(n(g), n(g));
  return m;
}

// Haar-random pure state amplitudes.
inline Vec random_pure(int d, std::mt19937_64& g) {
  Vec v = ginibre(d, 1, g).col(0);
  return v / v.norm();
}

// Random full-rank (or rank-limited) density matrix.
inline Mat random_density(int d, std::mt19937_64& g, int rank = 0) {
  if (rank <= 0) rank = d;
  Mat a = ginibre(d, rank, g);
  Mat rho = a * a.adjoint();
  rho = (rho + Mat(rho.adjoint())) / 2.0;
  return rho / rho.trace().real();
}

// Haar-random unitary via QR with phase fixing.
inline Mat random_unitary(int d, std::mt19937_64& g) {
  Mat a = ginibre(d, d, g);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(d, d);
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    cx ph = r(j, j) / std::abs(r(j, j));
    q.col(j) *= ph;
  }
  return q;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline DensityOperator as_density(const Mat& m, const Layout& lay) {
  DensityOperator rho{m, lay};
  rho.validate();
  return rho;
}

}  // namespace kr::testing
