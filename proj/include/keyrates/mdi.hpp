#pragma once

#include <array>
#include <string>
#include <vector>

#include "keyrates/channels.hpp"

namespace kr {

// Measurement-device-independent setup: two parties each send one half of a
// maximally entangled pair through their leg channel to an untrusted middle
// node, which Bell-measures the arriving systems with detector efficiency q
// and broadcasts the outcome. Secret-key capacities/bounds in bits per use.

enum class MdiKind { erasure, depolarizing, dephasing };
MdiKind mdi_kind_from_string(const std::string& s);

// q eta1 eta2 (erasure legs; exact capacity).
double erasure_capacity(double q, double eta1, double eta2);
// q (1 - h2(3 lam^2/4 + 1/4)) for lam > 1/sqrt(3), else 0.
double depolarizing_bound(double q, double lam);
// q (1 - h2((4 lam^2 - 3 lam + 1)/2)) for lam > 3/4, else 0.
double dephasing_bound(double q, double lam);
// Repeaterless benchmark min(eta1, eta2).
double repeaterless_bound(double eta1, double eta2);
// Relative entropy of entanglement of a Bell-diagonal two-qubit state:
// 1 - h2(p_max) if p_max > 1/2, else 0.
double bell_diagonal_ree(const std::array<double, 4>& weights);

// Full MDI channel: leg channels in parallel, Bell measurement, outcome
// broadcast to both ends; optionally the outcome-controlled Pauli correction
// applied on the first reference qubit of the Choi state.
struct MdiAssembly {
  KrausChannel channel;  // legs (x) -> Bell measurement -> broadcast
  double q = 1.0;
  bool corrected = false;
};
MdiAssembly mdi_channel(const KrausChannel& leg1, const KrausChannel& leg2, double q,
                        bool with_correction);

// Choi operator of the assembled channel on reference pair (x) two outcome
// registers; if assembly.corrected, the outcome-controlled Pauli correction
// is applied to the first reference qubit.
ChoiOperator mdi_choi(const MdiAssembly& assembly);

// Numeric pipeline: assembles the MDI channel for the given kind, extracts
// the success-conditional Choi block, checks Bell-diagonality (off-Bell
// leakage <= tol::reconstruct, else numerical_failure), and returns the
// success probability times the Bell-diagonal relative entropy of
// entanglement. Cross-checks the closed forms above.
struct CrossCheckResult {
  double pipeline_bits = 0;
  double closed_form_bits = 0;
  double delta = 0;  // |pipeline - closed form|
  std::array<double, 4> bell_weights{};
  double success_probability = 0;
};
CrossCheckResult choi_cross_check(MdiKind kind, const std::vector<double>& params, double q);

// Rate-distance table: eta_i = exp(-attenuation * L) per leg.
struct RateDistanceRow {
  double distance_km = 0;
  double value_bits = 0;
  double rb_bits = 0;  // repeaterless benchmark (erasure kind only)
};
std::vector<RateDistanceRow> rate_distance_sweep(MdiKind kind, double q, double attenuation,
                                                 const std::vector<double>& distances);

inline constexpr double kDefaultAttenuationPerKm = 1.0 / 22.0;

}  // namespace kr
