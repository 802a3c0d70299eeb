#pragma once

#include <utility>
#include <vector>

#include "keyrates/tensor.hpp"

namespace kr {

// Completely positive trace-preserving map in Kraus form. Input and output
// spaces carry their own layouts (dimensions may differ, e.g. erasure embeds
// a qubit into a qutrit with a flag level).
struct KrausChannel {
  std::vector<Mat> ops;
  Layout in_layout;
  Layout out_layout;

  long in_dim() const { return in_layout.dim(); }
  long out_dim() const { return out_layout.dim(); }
  // Checks shapes and the trace-preservation identity sum K^dag K = I.
  void validate() const;
};

// Choi operator J = (id (x) N)(Phi+), reference slots first. The reference
// copies the input layout with labels prefixed "R:". Normalized as a density
// operator: partial trace over the output slots equals I/d_in.
struct ChoiOperator {
  Mat mat;
  Layout layout;  // reference slots then output slots
  int ref_slots;  // number of leading reference slots
  long in_dim;
  long out_dim;
};

DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho);
// Applies ch to the consecutive slot range [first, first + ch.in_layout.slots())
// of rho, identity elsewhere. The affected slots are replaced by ch's output
// slots (labels preserved from the input slots where dimensions allow).
DensityOperator apply_to_slots(const KrausChannel& ch, const DensityOperator& rho, int first);

ChoiOperator choi(const KrausChannel& ch);
// Action of a channel reconstructed from its Choi operator (for agreement tests).
DensityOperator apply_via_choi(const ChoiOperator& j, const DensityOperator& rho);
// Stinespring isometry V = sum_j K_j (x) |j>_env, environment slot last;
// V^dag V = I and the environment dimension equals the number of Kraus terms.
Mat stinespring(const KrausChannel& ch);

// serial composition: second after first
KrausChannel compose_serial(const KrausChannel& second, const KrausChannel& first);
// parallel composition: first (x) second
KrausChannel compose_parallel(const KrausChannel& a, const KrausChannel& b);

KrausChannel identity_channel(int d, const std::string& label = "A");
// Qubit -> qutrit: transmit with probability eta, otherwise emit the flag
// level |2>. Kraus: sqrt(eta)(|0><0|+|1><1|), sqrt(1-eta)|2><0|, sqrt(1-eta)|2><1|.
KrausChannel erasure_channel(double eta);
// rho -> lam rho + (1-lam) I/2, lam in [-1/3, 1]; four Kraus terms.
KrausChannel depolarizing_channel(double lam);
// rho -> lam rho + (1-lam) Z rho Z, lam in [0, 1]; two Kraus terms.
KrausChannel dephasing_channel(double lam);
// Projective measurement in the computational basis, result stored back in
// the same register (a classical register from then on).
KrausChannel computational_dephasing(int d, const std::string& label = "A");

// Bell-basis measurement on a pair of optical-model inputs (each of dimension
// 2 or 3; dimension-3 inputs carry an erasure flag on level |2>). The two
// input slots are consumed and replaced by one classical outcome register of
// dimension 5: outcomes 0..3 are the Bell states (Phi+, Phi-, Psi+, Psi-),
// outcome 4 is "no detection". With detector efficiency q, every Bell outcome
// succeeds with probability q; the remainder (failed detection, any flagged
// input, any residual subspace) maps to outcome 4.
KrausChannel bell_measurement(double q, int d1, int d2);

// Copies a classical register of dimension d into two identical registers
// (broadcast of the measurement outcome to both ends).
KrausChannel classical_broadcast(int d);

// Max |off-diagonal| of rho restricted to the given slots being non-diagonal,
// i.e. leakage out of the classical (diagonal) subalgebra on those slots.
double classical_leakage(const DensityOperator& rho, const std::vector<int>& slots);

}  // namespace kr
