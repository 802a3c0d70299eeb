#include "keyrates/channels.hpp"

#include <cmath>

namespace kr {

namespace {

Mat pauli_x() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Mat pauli_y() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = cx(0, -1);
  m(1, 0) = cx(0, 1);
  return m;
}

Mat pauli_z() {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

Vec basis(int d, int i) {
  Vec v = Vec::Zero(d);
  v(i) = 1.0;
  return v;
}

// The four Bell vectors of a qubit pair embedded in a d1 x d2 space whose
// first two levels carry the qubit. Order: Phi+, Phi-, Psi+, Psi-.
std::vector<Vec> embedded_bell_vectors(int d1, int d2) {
  auto pair_ket = [&](int a, int b) {
    Vec v = Vec::Zero(d1 * d2);
    v(a * d2 + b) = 1.0;
    return v;
  };
  double s = 1.0 / std::sqrt(2.0);
  return {
      s * (pair_ket(0, 0) + pair_ket(1, 1)),
      s * (pair_ket(0, 0) - pair_ket(1, 1)),
      s * (pair_ket(0, 1) + pair_ket(1, 0)),
      s * (pair_ket(0, 1) - pair_ket(1, 0)),
  };
}

// Output layout after a channel: keep the input slot labels when the channel
// maps slots one-to-one (dimensions may still change), otherwise adopt the
// channel's own output labels.
Layout carried_out_layout(const KrausChannel& ch, const std::vector<std::string>& in_labels) {
  Layout out = ch.out_layout;
  if (out.slots() == static_cast<int>(in_labels.size())) out.labels = in_labels;
  return out;
}

}  // namespace

void KrausChannel::validate() const {
  in_layout.validate();
  out_layout.validate();
  require(!ops.empty(), "channel must have at least one Kraus operator");
  long di = in_dim(), dout = out_dim();
  Mat acc = Mat::Zero(di, di);
  for (const Mat& k : ops) {
    require(k.rows() == dout && k.cols() == di, "Kraus operator shape mismatch");
    acc += k.adjoint() * k;
  }
  if ((acc - Mat::Identity(di, di)).cwiseAbs().maxCoeff() > tol::reconstruct)
    throw invalid_input("channel is not trace preserving");
}

DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho) {
  require(rho.layout.dims == ch.in_layout.dims,
          "channel input dimensions do not match state layout");
  Mat out = Mat::Zero(ch.out_dim(), ch.out_dim());
  for (const Mat& k : ch.ops) out += k * rho.mat * k.adjoint();
  return DensityOperator{std::move(out), carried_out_layout(ch, rho.layout.labels)};
}

DensityOperator apply_to_slots(const KrausChannel& ch, const DensityOperator& rho, int first) {
  int m = ch.in_layout.slots();
  require(first >= 0 && first + m <= rho.layout.slots(),
          "channel slot range out of bounds");
  for (int s = 0; s < m; ++s)
    require(rho.layout.dims[first + s] == ch.in_layout.dims[s],
            "channel input dimensions do not match the addressed slots");

  long pre = 1, post = 1;
  for (int s = 0; s < first; ++s) pre *= rho.layout.dims[s];
  for (int s = first + m; s < rho.layout.slots(); ++s) post *= rho.layout.dims[s];
  Mat ipre = Mat::Identity(pre, pre);
  Mat ipost = Mat::Identity(post, post);

  Mat out = Mat::Zero(pre * ch.out_dim() * post, pre * ch.out_dim() * post);
  for (const Mat& k : ch.ops) {
    Mat ek = kron(kron(ipre, k), ipost);
    out += ek * rho.mat * ek.adjoint();
  }

  std::vector<std::string> mid_labels(rho.layout.labels.begin() + first,
                                      rho.layout.labels.begin() + first + m);
  Layout mid = carried_out_layout(ch, mid_labels);
  Layout lay;
  for (int s = 0; s < first; ++s) {
    lay.dims.push_back(rho.layout.dims[s]);
    lay.labels.push_back(rho.layout.labels[s]);
  }
  lay.dims.insert(lay.dims.end(), mid.dims.begin(), mid.dims.end());
  lay.labels.insert(lay.labels.end(), mid.labels.begin(), mid.labels.end());
  for (int s = first + m; s < rho.layout.slots(); ++s) {
    lay.dims.push_back(rho.layout.dims[s]);
    lay.labels.push_back(rho.layout.labels[s]);
  }
  return DensityOperator{std::move(out), std::move(lay)};
}

ChoiOperator choi(const KrausChannel& ch) {
  long d = ch.in_dim();
  Layout ref = ch.in_layout;
  for (auto& l : ref.labels) l = "R:" + l;
  // Maximally entangled pairing of reference and input, then the channel on
  // the input half.
  Vec phi = Vec::Zero(d * d);
  for (long i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  DensityOperator pair{phi * phi.adjoint(), ref.then(ch.in_layout)};
  DensityOperator j = apply_to_slots(ch, pair, ref.slots());
  return ChoiOperator{std::move(j.mat), std::move(j.layout), ref.slots(), d, ch.out_dim()};
}

DensityOperator apply_via_choi(const ChoiOperator& j, const DensityOperator& rho) {
  require(rho.mat.rows() == j.in_dim, "Choi application: input dimension mismatch");
  Mat lifted = kron(Mat(rho.mat.transpose()), Mat(Mat::Identity(j.out_dim, j.out_dim)));
  Mat prod = lifted * j.mat;
  Mat out = static_cast<double>(j.in_dim) *
            partial_trace(prod, {static_cast<int>(j.in_dim), static_cast<int>(j.out_dim)}, {1});
  std::vector<int> out_slots;
  for (int s = j.ref_slots; s < j.layout.slots(); ++s) out_slots.push_back(s);
  return DensityOperator{std::move(out), j.layout.sub(out_slots)};
}

Mat stinespring(const KrausChannel& ch) {
  long di = ch.in_dim(), dout = ch.out_dim();
  long r = static_cast<long>(ch.ops.size());
  Mat v = Mat::Zero(dout * r, di);
  for (long e = 0; e < r; ++e)
    for (long o = 0; o < dout; ++o)
      for (long i = 0; i < di; ++i) v(o * r + e, i) = ch.ops[e](o, i);
  return v;
}

KrausChannel compose_serial(const KrausChannel& second, const KrausChannel& first) {
  require(first.out_layout.dims == second.in_layout.dims,
          "serial composition: intermediate dimensions do not match");
  KrausChannel out;
  out.in_layout = first.in_layout;
  out.out_layout = second.out_layout;
  for (const Mat& s : second.ops)
    for (const Mat& f : first.ops) {
      Mat k = s * f;
      if (k.norm() > 1e-14) out.ops.push_back(std::move(k));
    }
  if (out.ops.empty()) out.ops.push_back(Mat::Zero(second.out_dim(), first.in_dim()));
  return out;
}

KrausChannel compose_parallel(const KrausChannel& a, const KrausChannel& b) {
  KrausChannel out;
  out.in_layout = a.in_layout.then(b.in_layout);
  out.out_layout = a.out_layout.then(b.out_layout);
  for (const Mat& ka : a.ops)
    for (const Mat& kb : b.ops) out.ops.push_back(kron(ka, kb));
  return out;
}

KrausChannel identity_channel(int d, const std::string& label) {
  require(d >= 1, "identity channel dimension must be positive");
  KrausChannel ch;
  ch.in_layout = Layout::single(d, label);
  ch.out_layout = ch.in_layout;
  ch.ops.push_back(Mat::Identity(d, d));
  return ch;
}

KrausChannel erasure_channel(double eta) {
  require(eta >= 0.0 && eta <= 1.0, "erasure transmissivity must lie in [0,1]");
  KrausChannel ch;
  ch.in_layout = Layout::single(2, "A");
  ch.out_layout = Layout::single(3, "A");
  Mat keep = Mat::Zero(3, 2);
  keep(0, 0) = keep(1, 1) = std::sqrt(eta);
  ch.ops.push_back(keep);
  for (int i = 0; i < 2; ++i) {
    Mat lose = Mat::Zero(3, 2);
    lose(2, i) = std::sqrt(1.0 - eta);
    ch.ops.push_back(std::move(lose));
  }
  return ch;
}

KrausChannel depolarizing_channel(double lam) {
  require(lam >= -1.0 / 3.0 && lam <= 1.0, "depolarizing parameter must lie in [-1/3,1]");
  KrausChannel ch;
  ch.in_layout = Layout::single(2, "A");
  ch.out_layout = ch.in_layout;
  double w0 = (1.0 + 3.0 * lam) / 4.0;
  double w = (1.0 - lam) / 4.0;
  ch.ops.push_back(std::sqrt(w0) * Mat::Identity(2, 2));
  ch.ops.push_back(std::sqrt(w) * pauli_x());
  ch.ops.push_back(std::sqrt(w) * pauli_y());
  ch.ops.push_back(std::sqrt(w) * pauli_z());
  return ch;
}

KrausChannel dephasing_channel(double lam) {
  require(lam >= 0.0 && lam <= 1.0, "dephasing parameter must lie in [0,1]");
  KrausChannel ch;
  ch.in_layout = Layout::single(2, "A");
  ch.out_layout = ch.in_layout;
  ch.ops.push_back(std::sqrt(lam) * Mat::Identity(2, 2));
  ch.ops.push_back(std::sqrt(1.0 - lam) * pauli_z());
  return ch;
}

KrausChannel computational_dephasing(int d, const std::string& label) {
  require(d >= 2, "measurement dimension must be at least 2");
  KrausChannel ch;
  ch.in_layout = Layout::single(d, label);
  ch.out_layout = ch.in_layout;
  for (int k = 0; k < d; ++k) ch.ops.push_back(basis(d, k) * basis(d, k).adjoint());
  return ch;
}

KrausChannel bell_measurement(double q, int d1, int d2) {
  require(q >= 0.0 && q <= 1.0, "detector efficiency must lie in [0,1]");
  require((d1 == 2 || d1 == 3) && (d2 == 2 || d2 == 3),
          "Bell measurement inputs must have dimension 2 or 3");
  KrausChannel ch;
  ch.in_layout = Layout{{d1, d2}, {"A", "B"}};
  ch.out_layout = Layout::single(5, "X");
  auto bells = embedded_bell_vectors(d1, d2);
  // Success branches: outcome k with probability q per Bell component.
  for (int k = 0; k < 4; ++k) {
    if (q > 0.0) ch.ops.push_back(std::sqrt(q) * basis(5, k) * bells[k].adjoint());
  }
  // No-detection branch: failed detections plus everything outside the
  // qubit-pair subspace (erasure flags).
  for (int k = 0; k < 4; ++k) {
    if (q < 1.0) ch.ops.push_back(std::sqrt(1.0 - q) * basis(5, 4) * bells[k].adjoint());
  }
  Mat pq = Mat::Zero(d1 * d2, d1 * d2);  // projector onto the qubit-pair subspace
  for (const Vec& b : bells) pq += b * b.adjoint();
  for (int i = 0; i < d1 * d2; ++i) {
    Vec e = basis(d1 * d2, i);
    Vec rest = e - pq * e;
    if (rest.norm() > 1e-12) ch.ops.push_back(basis(5, 4) * rest.adjoint());
  }
  return ch;
}

KrausChannel classical_broadcast(int d) {
  require(d >= 2, "broadcast register dimension must be at least 2");
  KrausChannel ch;
  ch.in_layout = Layout::single(d, "X");
  ch.out_layout = Layout{{d, d}, {"XA", "XB"}};
  Mat v = Mat::Zero(d * d, d);
  for (int k = 0; k < d; ++k) v(k * d + k, k) = 1.0;
  ch.ops.push_back(std::move(v));
  return ch;
}

double classical_leakage(const DensityOperator& rho, const std::vector<int>& slots) {
  for (int s : slots)
    require(s >= 0 && s < rho.layout.slots(), "classical register slot out of range");
  const auto& dims = rho.layout.dims;
  int n = rho.layout.slots();
  std::vector<long> st(n);
  long acc = 1;
  for (int s = n - 1; s >= 0; --s) {
    st[s] = acc;
    acc *= dims[s];
  }
  long total = rho.layout.dim();
  double leak = 0.0;
  for (long i = 0; i < total; ++i)
    for (long j = 0; j < total; ++j) {
      bool same = true;
      for (int s : slots)
        if ((i / st[s]) % dims[s] != (j / st[s]) % dims[s]) {
          same = false;
          break;
        }
      if (!same) leak = std::max(leak, std::abs(rho.mat(i, j)));
    }
  return leak;
}

}  // namespace kr
