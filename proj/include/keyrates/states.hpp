#pragma once

#include <optional>
#include <string>
#include <vector>

#include "keyrates/channels.hpp"
#include "keyrates/tensor.hpp"

namespace kr {

// (1/sqrt(d)) sum_k |k>^{(x)M}, slots labeled P1..PM.
StateVector ghz_state(int parties, int level_dim = 2);
// Uniform single-excitation qubit state on `parties` slots.
StateVector w_state(int parties);

// Classically correlated key state (1/K) sum_k |k><k|^{(x)M} (x) sigma_E.
// Key slots labeled P1..PM; environment slots appended if sigma_E is given.
DensityOperator conference_key_state(int key_dim, int parties,
                                     const DensityOperator* sigma_E = nullptr);

// Private state gamma = U (Phi_GHZ (x) omega) U^dag with the twisting unitary
// U = sum_k |k><k|_keys (x) shield_unitaries[k]. One unitary per key string
// (key_dim^parties of them, key strings enumerated row-major).
struct PrivateStateBundle {
  DensityOperator gamma;   // key slots then shield slots
  Mat twisting;            // the twisting unitary on key (x) shield
  int key_dim = 0;
  int parties = 0;
  std::vector<int> key_slots;
  std::vector<int> shield_slots;
};
PrivateStateBundle private_state(int key_dim, int parties,
                                 const std::vector<Mat>& shield_unitaries,
                                 const DensityOperator& omega);

enum class GhzVariant { coherent, classical };

// Biseparable attack candidate: uniform mixture over the cutting party i of
// n-fold tensor powers of a one-party-vs-rest product term.
struct BisepCandidate {
  DensityOperator state;
  std::string family;               // "ghz-coherent", "ghz-classical", "w"
  int copies = 0;
  int parties = 0;
  std::vector<int> cut_witnesses;   // mixture index -> separated party (1-based)
};
// GHZ-shaped candidates. coherent: party i holds I/2 against a GHZ state of
// the others; classical: perfectly correlated computational-basis mixture
// (|0..0><0..0| + |1..1><1..1|)/2.
BisepCandidate bisep_ghz(int copies, int parties, GhzVariant variant);
// W-shaped candidate: party i holds |0> against a W state of the others.
BisepCandidate bisep_w(int copies, int parties);

// Applies a single-qubit channel independently to every qubit slot.
DensityOperator apply_local_noise(const DensityOperator& rho, const KrausChannel& noise);

// Relabels party j's slots to party i's label and regroups them adjacently
// (metadata + slot reordering only; no matrix arithmetic beyond permutation).
struct MergeRecord {
  Layout original;
  std::vector<int> perm;  // permutation applied (output slot k held original slot perm[k])
};
std::pair<DensityOperator, MergeRecord> merge_parties(const DensityOperator& rho,
                                                      const std::string& label_i,
                                                      const std::string& label_j);
DensityOperator split_parties(const DensityOperator& rho, const MergeRecord& rec);

}  // namespace kr
