#include "keyrates/states.hpp"

#include <algorithm>
#include <cmath>

namespace kr {

namespace {

Vec basis(long d, long i) {
  Vec v = Vec::Zero(d);
  v(i) = 1.0;
  return v;
}

// Projector onto the all-levels-equal-b basis string of M slots of dim d.
Mat string_projector(int M, int d, int b) {
  long dim = 1;
  for (int s = 0; s < M; ++s) dim *= d;
  long idx = 0;
  for (int s = 0; s < M; ++s) idx = idx * d + b;
  return basis(dim, idx) * basis(dim, idx).adjoint();
}

// Swap slot 0 with slot (party-1) on M equal-dim slots.
std::vector<int> swap_first_with(int M, int party) {
  std::vector<int> perm(M);
  for (int s = 0; s < M; ++s) perm[s] = s;
  std::swap(perm[0], perm[party - 1]);
  return perm;
}

}  // namespace

StateVector ghz_state(int parties, int level_dim) {
  require(parties >= 2, "GHZ state needs at least 2 parties");
  require(level_dim >= 2, "GHZ local dimension must be at least 2");
  Layout lay = Layout::uniform(parties, level_dim);
  Vec amp = Vec::Zero(lay.dim());
  for (int k = 0; k < level_dim; ++k) {
    long idx = 0;
    for (int s = 0; s < parties; ++s) idx = idx * level_dim + k;
    amp(idx) = 1.0 / std::sqrt(static_cast<double>(level_dim));
  }
  return StateVector{std::move(amp), std::move(lay)};
}

StateVector w_state(int parties) {
  require(parties >= 2, "W state needs at least 2 parties");
  Layout lay = Layout::uniform(parties, 2);
  Vec amp = Vec::Zero(lay.dim());
  for (int s = 0; s < parties; ++s) {
    long idx = 1L << (parties - 1 - s);  // excitation on slot s
    amp(idx) = 1.0 / std::sqrt(static_cast<double>(parties));
  }
  return StateVector{std::move(amp), std::move(lay)};
}

DensityOperator conference_key_state(int key_dim, int parties, const DensityOperator* sigma_E) {
  require(key_dim >= 2, "key dimension must be at least 2");
  require(parties >= 2, "conference key state needs at least 2 parties");
  Layout lay = Layout::uniform(parties, key_dim);
  Mat keys = Mat::Zero(lay.dim(), lay.dim());
  for (int k = 0; k < key_dim; ++k) keys += string_projector(parties, key_dim, k) / key_dim;
  if (!sigma_E) return DensityOperator{std::move(keys), std::move(lay)};
  Layout env = sigma_E->layout;
  for (auto& l : env.labels) l = "E:" + l;
  return DensityOperator{kron(keys, sigma_E->mat), lay.then(env)};
}

PrivateStateBundle private_state(int key_dim, int parties,
                                 const std::vector<Mat>& shield_unitaries,
                                 const DensityOperator& omega) {
  require(key_dim >= 2, "key dimension must be at least 2");
  require(parties >= 2, "private state needs at least 2 parties");
  long key_total = 1;
  for (int s = 0; s < parties; ++s) key_total *= key_dim;
  require(static_cast<long>(shield_unitaries.size()) == key_total,
          "need one shield unitary per key string");
  long sd = omega.layout.dim();
  for (const Mat& u : shield_unitaries) {
    require(u.rows() == sd && u.cols() == sd, "shield unitary dimension mismatch");
    if ((Mat(u.adjoint() * u) - Mat::Identity(sd, sd)).cwiseAbs().maxCoeff() > tol::unitary)
      throw invalid_input("shield twisting entries must be unitary");
  }

  Mat twist = Mat::Zero(key_total * sd, key_total * sd);
  for (long k = 0; k < key_total; ++k) {
    Mat pk = basis(key_total, k) * basis(key_total, k).adjoint();
    twist += kron(pk, shield_unitaries[k]);
  }

  Mat ghz = density(ghz_state(parties, key_dim)).mat;
  Mat gamma = twist * kron(ghz, omega.mat) * twist.adjoint();

  Layout shield = omega.layout;
  for (auto& l : shield.labels) l = "S:" + l;
  Layout lay = Layout::uniform(parties, key_dim).then(shield);

  PrivateStateBundle b;
  b.gamma = DensityOperator{std::move(gamma), std::move(lay)};
  b.twisting = std::move(twist);
  b.key_dim = key_dim;
  b.parties = parties;
  for (int s = 0; s < parties; ++s) b.key_slots.push_back(s);
  for (int s = 0; s < shield.slots(); ++s) b.shield_slots.push_back(parties + s);
  return b;
}

BisepCandidate bisep_ghz(int copies, int parties, GhzVariant variant) {
  require(copies >= 1, "need at least one copy");
  require(parties >= 3, "biseparable family needs at least 3 parties");
  Layout lay = Layout::uniform(parties, 2);
  long d = lay.dim();
  Mat mix = Mat::Zero(static_cast<long>(std::pow(d, copies)), static_cast<long>(std::pow(d, copies)));
  BisepCandidate cand;
  for (int party = 1; party <= parties; ++party) {
    Mat term;
    if (variant == GhzVariant::coherent) {
      Mat rest = density(ghz_state(parties - 1, 2)).mat;
      term = kron(Mat(Mat::Identity(2, 2) / 2.0), rest);
      term = permute_subsystems(term, lay.dims, swap_first_with(parties, party));
    } else {
      // perfectly correlated classical string shared with every party
      term = 0.5 * (string_projector(parties, 2, 0) + string_projector(parties, 2, 1));
    }
    mix += tensor_power(term, copies) / parties;
    cand.cut_witnesses.push_back(party);
  }
  Layout full = copies > 1 ? lay.repeated(copies) : lay;
  cand.state = DensityOperator{std::move(mix), std::move(full)};
  cand.family = variant == GhzVariant::coherent ? "ghz-coherent" : "ghz-classical";
  cand.copies = copies;
  cand.parties = parties;
  return cand;
}

BisepCandidate bisep_w(int copies, int parties) {
  require(copies >= 1, "need at least one copy");
  require(parties >= 3, "biseparable family needs at least 3 parties");
  Layout lay = Layout::uniform(parties, 2);
  long d = lay.dim();
  Mat mix = Mat::Zero(static_cast<long>(std::pow(d, copies)), static_cast<long>(std::pow(d, copies)));
  BisepCandidate cand;
  Mat zero = basis(2, 0) * basis(2, 0).adjoint();
  Mat rest = density(w_state(parties - 1)).mat;
  for (int party = 1; party <= parties; ++party) {
    Mat term = permute_subsystems(kron(zero, rest), lay.dims, swap_first_with(parties, party));
    mix += tensor_power(term, copies) / parties;
    cand.cut_witnesses.push_back(party);
  }
  Layout full = copies > 1 ? lay.repeated(copies) : lay;
  cand.state = DensityOperator{std::move(mix), std::move(full)};
  cand.family = "w";
  cand.copies = copies;
  cand.parties = parties;
  return cand;
}

DensityOperator apply_local_noise(const DensityOperator& rho, const KrausChannel& noise) {
  require(noise.in_layout.dims == std::vector<int>{2} &&
              noise.out_layout.dims == std::vector<int>{2},
          "local noise must be a single-qubit channel");
  for (int d : rho.layout.dims)
    require(d == 2, "local noise applies only to all-qubit states");
  DensityOperator out = rho;
  for (int s = 0; s < rho.layout.slots(); ++s) out = apply_to_slots(noise, out, s);
  return out;
}

std::pair<DensityOperator, MergeRecord> merge_parties(const DensityOperator& rho,
                                                      const std::string& label_i,
                                                      const std::string& label_j) {
  require(label_i != label_j, "cannot merge a party with itself");
  std::vector<int> si = rho.layout.slots_of(label_i);
  std::vector<int> sj = rho.layout.slots_of(label_j);
  require(!si.empty(), "unknown party label: " + label_i);
  require(!sj.empty(), "unknown party label: " + label_j);

  std::vector<int> perm;
  std::vector<bool> is_j(rho.layout.slots(), false);
  for (int s : sj) is_j[s] = true;
  int last_i = si.back();
  for (int s = 0; s < rho.layout.slots(); ++s) {
    if (is_j[s]) continue;
    perm.push_back(s);
    if (s == last_i)
      for (int t : sj) perm.push_back(t);
  }

  MergeRecord rec{rho.layout, perm};
  DensityOperator merged = permute_subsystems(rho, perm);
  for (int k = 0; k < merged.layout.slots(); ++k) {
    const std::string& l = rho.layout.labels[perm[k]];
    if (l == label_i || l == label_j) merged.layout.labels[k] = label_i + "+" + label_j;
  }
  return {std::move(merged), std::move(rec)};
}

DensityOperator split_parties(const DensityOperator& rho, const MergeRecord& rec) {
  require(static_cast<int>(rec.perm.size()) == rho.layout.slots(),
          "merge record does not match state");
  std::vector<int> inv(rec.perm.size());
  for (size_t k = 0; k < rec.perm.size(); ++k) inv[rec.perm[k]] = static_cast<int>(k);
  DensityOperator out = permute_subsystems(rho, inv);
  out.layout = rec.original;
  return out;
}

}  // namespace kr
