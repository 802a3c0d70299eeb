#pragma once

#include <functional>
#include <vector>

#include "keyrates/layout.hpp"

namespace kr {

// Pure state: unit-norm amplitude vector over a slot layout.
struct StateVector {
  Vec amp;
  Layout layout;
  void validate() const;  // norm 1, dimension matches layout
};

// Density operator: Hermitian, PSD, unit trace over a slot layout.
struct DensityOperator {
  Mat mat;
  Layout layout;
  void validate() const;
};

// Hermitian observable over a slot layout (no trace/PSD constraint).
struct HermitianOperator {
  Mat mat;
  Layout layout;
  void validate() const;
};

// ---- raw-matrix core ----

Mat kron(const Mat& a, const Mat& b);
Vec kron(const Vec& a, const Vec& b);
Mat tensor_power(const Mat& a, int n);
Vec tensor_power(const Vec& a, int n);

// Trace out every slot not listed in `keep`. Kept slots stay in their
// original relative order; `keep` must be non-empty, in-range, duplicate-free.
Mat partial_trace(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep);

// Reorder slots: output slot k holds input slot perm[k] (a gather).
// Conjugation by the corresponding permutation unitary, computed exactly
// by index relabeling.
Mat permute_subsystems(const Mat& m, const std::vector<int>& dims, const std::vector<int>& perm);
Vec permute_subsystems(const Vec& v, const std::vector<int>& dims, const std::vector<int>& perm);

// Eigendecomposition of a Hermitian matrix: ascending eigenvalues, unitary
// column eigenvectors. Throws invalid_input if the matrix is not Hermitian
// within herm_tol.
struct Eig {
  RVec values;
  Mat vectors;
};
Eig eig_hermitian(const Mat& h, double herm_tol = tol::hermitian);

// Spectral calculus f(h). With support_only, eigenvalues within tol::support
// of zero are mapped to zero without evaluating f. Throws numerical_failure
// if f produces a non-finite value on an eigenvalue it is applied to.
Mat matrix_fn(const Mat& h, const std::function<double(double)>& f, bool support_only = false);

// PSD-safe helpers: tiny negative eigenvalues are clamped to zero.
Mat sqrt_psd(const Mat& h);
// h^p on the support of h (eigenvalues <= tol::support map to 0); p may be negative.
Mat pow_psd(const Mat& h, double p);

// ---- layout-aware wrappers ----

DensityOperator kron(const DensityOperator& a, const DensityOperator& b);
DensityOperator partial_trace(const DensityOperator& rho, std::vector<int> keep);
DensityOperator permute_subsystems(const DensityOperator& rho, const std::vector<int>& perm);
StateVector permute_subsystems(const StateVector& psi, const std::vector<int>& perm);
DensityOperator tensor_power(const DensityOperator& rho, int n);
DensityOperator density(const StateVector& psi);

// Purification: appends one ancilla slot (labeled "purifier") whose dimension
// is the rank of rho at support cutoff tol::support.
StateVector purify(const DensityOperator& rho);

}  // namespace kr
