#include "keyrates/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <unsupported/Eigen/KroneckerProduct>

namespace kr {

// ---- Layout ----

long Layout::dim() const {
  long d = 1;
  for (int x : dims) d *= x;
  return d;
}

void Layout::validate() const {
  require(!dims.empty(), "layout must have at least one slot");
  require(dims.size() == labels.size(), "layout dims/labels length mismatch");
  for (int d : dims) require(d >= 1, "layout dimensions must be positive");
}

Layout Layout::sub(const std::vector<int>& keep) const {
  Layout out;
  for (int s : keep) {
    require(s >= 0 && s < slots(), "sub-layout slot index out of range");
    out.dims.push_back(dims[s]);
    out.labels.push_back(labels[s]);
  }
  return out;
}

Layout Layout::then(const Layout& tail) const {
  Layout out = *this;
  out.dims.insert(out.dims.end(), tail.dims.begin(), tail.dims.end());
  out.labels.insert(out.labels.end(), tail.labels.begin(), tail.labels.end());
  return out;
}

Layout Layout::repeated(int n) const {
  require(n >= 1, "layout repetition count must be >= 1");
  Layout out;
  for (int k = 1; k <= n; ++k) {
    for (int s = 0; s < slots(); ++s) {
      out.dims.push_back(dims[s]);
      out.labels.push_back("c" + std::to_string(k) + ":" + labels[s]);
    }
  }
  return out;
}

std::vector<int> Layout::slots_of(const std::string& label) const {
  std::vector<int> out;
  for (int s = 0; s < slots(); ++s)
    if (labels[s] == label) out.push_back(s);
  return out;
}

Layout Layout::single(int d, const std::string& label) {
  return Layout{{d}, {label}};
}

Layout Layout::uniform(int n, int d, const std::string& prefix) {
  Layout out;
  for (int k = 1; k <= n; ++k) {
    out.dims.push_back(d);
    out.labels.push_back(prefix + std::to_string(k));
  }
  return out;
}

// ---- validation ----

namespace {

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

void check_hermitian(const Mat& m, double slack, const char* what) {
  require(m.rows() == m.cols(), std::string(what) + ": matrix not square");
  double thr = slack * std::max(1.0, max_abs(m));
  if (max_abs(Mat(m - m.adjoint())) > thr)
    throw invalid_input(std::string(what) + ": matrix not Hermitian within tolerance");
}

long checked_total(const std::vector<int>& dims) {
  require(!dims.empty(), "empty dimension list");
  long total = 1;
  for (int d : dims) {
    require(d >= 1, "dimensions must be positive");
    total *= d;
  }
  return total;
}

// stride[s] = product of dims after slot s (row-major flattening)
std::vector<long> strides(const std::vector<int>& dims) {
  std::vector<long> st(dims.size());
  long acc = 1;
  for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
    st[s] = acc;
    acc *= dims[s];
  }
  return st;
}

// All flat offsets contributed by the listed slots, enumerated row-major
// over those slots in the order given.
std::vector<long> slot_offsets(const std::vector<int>& slots, const std::vector<int>& dims,
                               const std::vector<long>& st) {
  std::vector<long> off{0};
  for (int s : slots) {
    std::vector<long> next;
    next.reserve(off.size() * dims[s]);
    for (long o : off)
      for (int x = 0; x < dims[s]; ++x) next.push_back(o + x * st[s]);
    off = std::move(next);
  }
  return off;
}

}  // namespace

void StateVector::validate() const {
  layout.validate();
  require(amp.size() == layout.dim(), "state vector length does not match layout");
  if (std::abs(amp.norm() - 1.0) > tol::trace_one)
    throw invalid_input("state vector is not normalized");
}

void DensityOperator::validate() const {
  layout.validate();
  require(mat.rows() == layout.dim() && mat.cols() == layout.dim(),
          "density operator shape does not match layout");
  check_hermitian(mat, tol::hermitian, "density operator");
  if (std::abs(mat.trace().real() - 1.0) > tol::trace_one ||
      std::abs(mat.trace().imag()) > tol::trace_one)
    throw invalid_input("density operator trace is not 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(mat, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::hermitian)
    throw invalid_input("density operator has a negative eigenvalue");
}

void HermitianOperator::validate() const {
  layout.validate();
  require(mat.rows() == layout.dim() && mat.cols() == layout.dim(),
          "operator shape does not match layout");
  check_hermitian(mat, tol::hermitian, "observable");
}

// ---- raw-matrix core ----

Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b); }

Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (long i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Mat tensor_power(const Mat& a, int n) {
  require(n >= 1, "tensor power requires n >= 1");
  Mat out = a;
  for (int k = 1; k < n; ++k) out = kron(out, a);
  return out;
}

Vec tensor_power(const Vec& a, int n) {
  require(n >= 1, "tensor power requires n >= 1");
  Vec out = a;
  for (int k = 1; k < n; ++k) out = kron(out, a);
  return out;
}

Mat partial_trace(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep) {
  long total = checked_total(dims);
  require(m.rows() == total && m.cols() == total, "partial trace: matrix/dims mismatch");
  require(!keep.empty(), "partial trace: keep set must be non-empty");
  std::vector<int> k = keep;
  std::sort(k.begin(), k.end());
  require(std::adjacent_find(k.begin(), k.end()) == k.end(),
          "partial trace: duplicate slot in keep set");
  for (int s : k)
    require(s >= 0 && s < static_cast<int>(dims.size()), "partial trace: slot out of range");

  std::vector<int> traced;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s)
    if (!std::binary_search(k.begin(), k.end(), s)) traced.push_back(s);

  auto st = strides(dims);
  auto keep_off = slot_offsets(k, dims, st);
  auto tr_off = slot_offsets(traced, dims, st);

  long dk = static_cast<long>(keep_off.size());
  Mat out = Mat::Zero(dk, dk);
  for (long i = 0; i < dk; ++i)
    for (long j = 0; j < dk; ++j) {
      cx acc = 0;
      for (long t : tr_off) acc += m(keep_off[i] + t, keep_off[j] + t);
      out(i, j) = acc;
    }
  return out;
}

namespace {

// Flat-index gather map for a slot permutation: out[f] = in[map[f]].
std::vector<long> permutation_index_map(const std::vector<int>& dims,
                                        const std::vector<int>& perm) {
  int n = static_cast<int>(dims.size());
  require(static_cast<int>(perm.size()) == n, "permutation length mismatch");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    require(p >= 0 && p < n, "permutation entry out of range");
    require(!seen[p], "permutation entry repeated");
    seen[p] = true;
  }
  std::vector<int> out_dims(n);
  for (int s = 0; s < n; ++s) out_dims[s] = dims[perm[s]];
  auto in_st = strides(dims);
  auto out_st = strides(out_dims);
  long total = checked_total(dims);
  std::vector<long> map(total);
  for (long f = 0; f < total; ++f) {
    long rem = f, g = 0;
    for (int s = 0; s < n; ++s) {
      long digit = rem / out_st[s];
      rem %= out_st[s];
      g += digit * in_st[perm[s]];
    }
    map[f] = g;
  }
  return map;
}

}  // namespace

Mat permute_subsystems(const Mat& m, const std::vector<int>& dims, const std::vector<int>& perm) {
  long total = checked_total(dims);
  require(m.rows() == total && m.cols() == total, "permute: matrix/dims mismatch");
  auto map = permutation_index_map(dims, perm);
  Mat out(total, total);
  for (long i = 0; i < total; ++i)
    for (long j = 0; j < total; ++j) out(i, j) = m(map[i], map[j]);
  return out;
}

Vec permute_subsystems(const Vec& v, const std::vector<int>& dims, const std::vector<int>& perm) {
  long total = checked_total(dims);
  require(v.size() == total, "permute: vector/dims mismatch");
  auto map = permutation_index_map(dims, perm);
  Vec out(total);
  for (long i = 0; i < total; ++i) out(i) = v(map[i]);
  return out;
}

Eig eig_hermitian(const Mat& h, double herm_tol) {
  check_hermitian(h, herm_tol, "eigendecomposition input");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success)
    throw numerical_failure("Hermitian eigendecomposition did not converge");
  return Eig{es.eigenvalues(), es.eigenvectors()};
}

Mat matrix_fn(const Mat& h, const std::function<double(double)>& f, bool support_only) {
  Eig e = eig_hermitian(h);
  RVec fv(e.values.size());
  for (long i = 0; i < e.values.size(); ++i) {
    if (support_only && std::abs(e.values(i)) <= tol::support) {
      fv(i) = 0.0;
      continue;
    }
    double y = f(e.values(i));
    if (!std::isfinite(y))
      throw numerical_failure("matrix function produced a non-finite value on the spectrum");
    fv(i) = y;
  }
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

Mat sqrt_psd(const Mat& h) {
  Eig e = eig_hermitian(h);
  RVec fv(e.values.size());
  for (long i = 0; i < e.values.size(); ++i) fv(i) = std::sqrt(std::max(0.0, e.values(i)));
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

Mat pow_psd(const Mat& h, double p) {
  Eig e = eig_hermitian(h);
  RVec fv(e.values.size());
  for (long i = 0; i < e.values.size(); ++i)
    fv(i) = (e.values(i) <= tol::support) ? 0.0 : std::pow(e.values(i), p);
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

// ---- layout-aware wrappers ----

DensityOperator kron(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator{kron(a.mat, b.mat), a.layout.then(b.layout)};
}

DensityOperator partial_trace(const DensityOperator& rho, std::vector<int> keep) {
  std::sort(keep.begin(), keep.end());
  Mat out = partial_trace(rho.mat, rho.layout.dims, keep);
  return DensityOperator{std::move(out), rho.layout.sub(keep)};
}

DensityOperator permute_subsystems(const DensityOperator& rho, const std::vector<int>& perm) {
  Mat out = permute_subsystems(rho.mat, rho.layout.dims, perm);
  return DensityOperator{std::move(out), rho.layout.sub(perm)};
}

StateVector permute_subsystems(const StateVector& psi, const std::vector<int>& perm) {
  Vec out = permute_subsystems(psi.amp, psi.layout.dims, perm);
  return StateVector{std::move(out), psi.layout.sub(perm)};
}

DensityOperator tensor_power(const DensityOperator& rho, int n) {
  return DensityOperator{tensor_power(rho.mat, n), rho.layout.repeated(n)};
}

DensityOperator density(const StateVector& psi) {
  return DensityOperator{psi.amp * psi.amp.adjoint(), psi.layout};
}

StateVector purify(const DensityOperator& rho) {
  Eig e = eig_hermitian(rho.mat);
  std::vector<long> sup;
  for (long i = e.values.size() - 1; i >= 0; --i)
    if (e.values(i) > tol::support) sup.push_back(i);
  require(!sup.empty(), "purify: operator has empty support");
  long rank = static_cast<long>(sup.size());
  long d = rho.mat.rows();
  Vec amp = Vec::Zero(d * rank);
  for (long a = 0; a < rank; ++a) {
    double w = std::sqrt(e.values(sup[a]));
    for (long i = 0; i < d; ++i) amp(i * rank + a) = w * e.vectors(i, sup[a]);
  }
  amp /= amp.norm();
  Layout lay = rho.layout.then(Layout::single(static_cast<int>(rank), "purifier"));
  return StateVector{std::move(amp), std::move(lay)};
}

}  // namespace kr
