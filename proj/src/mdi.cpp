#include "keyrates/mdi.hpp"

#include <cmath>

#include "keyrates/divergences.hpp"

namespace kr {

namespace {

Mat pauli_x() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Mat pauli_z() {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

Mat outcome_projector(int k) {
  Mat p = Mat::Zero(5, 5);
  p(k, k) = 1.0;
  return p;
}

// Bell vectors of the reference qubit pair: Phi+, Phi-, Psi+, Psi-.
std::vector<Vec> bell_vectors() {
  auto ket = [](int a, int b) {
    Vec v = Vec::Zero(4);
    v(a * 2 + b) = 1.0;
    return v;
  };
  double s = 1.0 / std::sqrt(2.0);
  return {s * (ket(0, 0) + ket(1, 1)), s * (ket(0, 0) - ket(1, 1)),
          s * (ket(0, 1) + ket(1, 0)), s * (ket(0, 1) - ket(1, 0))};
}

void check_single_qubit_leg(const KrausChannel& leg, const char* which) {
  require(leg.in_layout.slots() == 1 && leg.in_layout.dims[0] == 2,
          std::string(which) + " leg must take a single qubit input");
  require(leg.out_layout.slots() == 1 &&
              (leg.out_layout.dims[0] == 2 || leg.out_layout.dims[0] == 3),
          std::string(which) + " leg must emit one slot of dimension 2 or 3");
}

}  // namespace

MdiKind mdi_kind_from_string(const std::string& s) {
  if (s == "erasure") return MdiKind::erasure;
  if (s == "depolarizing") return MdiKind::depolarizing;
  if (s == "dephasing") return MdiKind::dephasing;
  throw invalid_input("unknown channel kind: " + s);
}

double erasure_capacity(double q, double eta1, double eta2) {
  require(q >= 0.0 && q <= 1.0, "detector efficiency must lie in [0,1]");
  require(eta1 >= 0.0 && eta1 <= 1.0 && eta2 >= 0.0 && eta2 <= 1.0,
          "transmissivities must lie in [0,1]");
  return q * eta1 * eta2;
}

double depolarizing_bound(double q, double lam) {
  require(q >= 0.0 && q <= 1.0, "detector efficiency must lie in [0,1]");
  require(lam >= -1.0 / 3.0 && lam <= 1.0, "depolarizing parameter must lie in [-1/3,1]");
  if (lam <= 1.0 / std::sqrt(3.0)) return 0.0;
  return q * (1.0 - binary_entropy(0.75 * lam * lam + 0.25));
}

double dephasing_bound(double q, double lam) {
  require(q >= 0.0 && q <= 1.0, "detector efficiency must lie in [0,1]");
  require(lam >= 0.0 && lam <= 1.0, "dephasing parameter must lie in [0,1]");
  if (lam <= 0.75) return 0.0;
  return q * (1.0 - binary_entropy((4.0 * lam * lam - 3.0 * lam + 1.0) / 2.0));
}

double repeaterless_bound(double eta1, double eta2) {
  require(eta1 >= 0.0 && eta1 <= 1.0 && eta2 >= 0.0 && eta2 <= 1.0,
          "transmissivities must lie in [0,1]");
  return std::min(eta1, eta2);
}

double bell_diagonal_ree(const std::array<double, 4>& weights) {
  double sum = 0.0, pmax = 0.0;
  for (double w : weights) {
    require(w >= -tol::classical, "Bell weights must be nonnegative");
    sum += w;
    pmax = std::max(pmax, w);
  }
  require(std::abs(sum - 1.0) <= 1e-6, "Bell weights must sum to one");
  if (pmax <= 0.5) return 0.0;
  return 1.0 - binary_entropy(pmax);
}

MdiAssembly mdi_channel(const KrausChannel& leg1, const KrausChannel& leg2, double q,
                        bool with_correction) {
  require(q >= 0.0 && q <= 1.0, "detector efficiency must lie in [0,1]");
  check_single_qubit_leg(leg1, "first");
  check_single_qubit_leg(leg2, "second");

  KrausChannel legs = compose_parallel(leg1, leg2);
  legs.in_layout.labels = {"A", "B"};
  legs.out_layout.labels = {"A", "B"};
  KrausChannel meas = bell_measurement(q, leg1.out_layout.dims[0], leg2.out_layout.dims[0]);
  KrausChannel core = compose_serial(classical_broadcast(5), compose_serial(meas, legs));
  return MdiAssembly{std::move(core), q, with_correction};
}

ChoiOperator mdi_choi(const MdiAssembly& assembly) {
  ChoiOperator j = choi(assembly.channel);
  j.layout.labels[j.ref_slots] = "XA";
  j.layout.labels[j.ref_slots + 1] = "XB";
  if (!assembly.corrected) return j;

  // Outcome-controlled Pauli correction on the first reference qubit,
  // keyed on the first broadcast register: Phi+ -> I, Phi- -> Z,
  // Psi+ -> X, Psi- -> ZX. All detected outcomes are steered to Phi+.
  const Mat c[4] = {Mat::Identity(2, 2), pauli_z(), pauli_x(), Mat(pauli_z() * pauli_x())};
  Mat u = Mat::Zero(j.mat.rows(), j.mat.cols());
  Mat i2 = Mat::Identity(2, 2);
  Mat i5 = Mat::Identity(5, 5);
  for (int k = 0; k < 4; ++k) u += kron(kron(kron(c[k], i2), outcome_projector(k)), i5);
  u += kron(kron(kron(i2, i2), outcome_projector(4)), i5);
  j.mat = u * j.mat * u.adjoint();
  return j;
}

CrossCheckResult choi_cross_check(MdiKind kind, const std::vector<double>& params, double q) {
  KrausChannel leg1, leg2;
  double closed = 0.0;
  switch (kind) {
    case MdiKind::erasure:
      require(params.size() == 2, "erasure cross-check needs two transmissivities");
      leg1 = erasure_channel(params[0]);
      leg2 = erasure_channel(params[1]);
      closed = erasure_capacity(q, params[0], params[1]);
      break;
    case MdiKind::depolarizing:
      require(params.size() == 1, "depolarizing cross-check needs one parameter");
      leg1 = depolarizing_channel(params[0]);
      leg2 = depolarizing_channel(params[0]);
      closed = depolarizing_bound(q, params[0]);
      break;
    case MdiKind::dephasing:
      require(params.size() == 1, "dephasing cross-check needs one parameter");
      leg1 = dephasing_channel(params[0]);
      leg2 = dephasing_channel(params[0]);
      closed = dephasing_bound(q, params[0]);
      break;
  }

  ChoiOperator j = mdi_choi(mdi_channel(leg1, leg2, q, true));

  // The broadcast registers must stay exactly classical.
  DensityOperator as_state{j.mat, j.layout};
  require(classical_leakage(as_state, {j.ref_slots, j.ref_slots + 1}) <= 1e-10,
          "broadcast registers left the classical subalgebra");

  // Success-conditional block on the reference pair: outcomes (k,k), k < 4.
  Mat block = Mat::Zero(4, 4);
  for (int k = 0; k < 4; ++k)
    for (long r = 0; r < 4; ++r)
      for (long s = 0; s < 4; ++s) block(r, s) += j.mat(r * 25 + k * 5 + k, s * 25 + k * 5 + k);

  CrossCheckResult res;
  res.success_probability = block.trace().real();
  res.closed_form_bits = closed;
  if (res.success_probability > 1e-12) {
    Mat cond = block / res.success_probability;
    auto bells = bell_vectors();
    Mat w(4, 4);
    for (int k = 0; k < 4; ++k) w.col(k) = bells[k];
    Mat in_bell = w.adjoint() * cond * w;
    for (int r = 0; r < 4; ++r)
      for (int s = 0; s < 4; ++s) {
        if (r == s) continue;
        if (std::abs(in_bell(r, s)) > tol::reconstruct)
          throw numerical_failure("success-conditional state is not Bell diagonal");
      }
    for (int k = 0; k < 4; ++k) res.bell_weights[k] = std::max(0.0, in_bell(k, k).real());
    res.pipeline_bits = res.success_probability * bell_diagonal_ree(res.bell_weights);
  }
  res.delta = std::abs(res.pipeline_bits - res.closed_form_bits);
  return res;
}

std::vector<RateDistanceRow> rate_distance_sweep(MdiKind kind, double q, double attenuation,
                                                 const std::vector<double>& distances) {
  require(kind == MdiKind::erasure, "rate-distance sweeps apply to the erasure kind");
  require(q >= 0.0 && q <= 1.0, "detector efficiency must lie in [0,1]");
  require(attenuation >= 0.0 && std::isfinite(attenuation),
          "attenuation must be finite and nonnegative");
  std::vector<RateDistanceRow> rows;
  rows.reserve(distances.size());
  for (double L : distances) {
    require(L >= 0.0 && std::isfinite(L), "distances must be finite and nonnegative");
    double eta = std::exp(-attenuation * L);
    rows.push_back(RateDistanceRow{L, erasure_capacity(q, eta, eta), repeaterless_bound(eta, eta)});
  }
  return rows;
}

}  // namespace kr
