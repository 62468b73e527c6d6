#include "oqs/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oqs {

SpaceLayout::SpaceLayout(std::vector<int> d, std::vector<std::string> l)
    : dims(std::move(d)), labels(std::move(l)) {
  for (int x : dims)
    if (x < 2) throw ContractViolation("SpaceLayout: site dimension must be >= 2");
  if (!labels.empty() && labels.size() != dims.size())
    throw ContractViolation("SpaceLayout: label count differs from site count");
}

Index SpaceLayout::total() const {
  Index n = 1;
  for (int d : dims) n *= d;
  return n;
}

int SpaceLayout::site(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::out_of_range("SpaceLayout: no site labelled " + label);
  return static_cast<int>(it - labels.begin());
}

Mat local_operator(OpKind kind, int dim, int a, int b) {
  if (dim < 2) throw ContractViolation("local_operator: dim must be >= 2");
  const bool pauli = kind == OpKind::pauli_x || kind == OpKind::pauli_y || kind == OpKind::pauli_z;
  if (pauli && dim != 2) throw ContractViolation("local_operator: pauli operators need dim 2");
  Mat m = Mat::Zero(dim, dim);
  switch (kind) {
    case OpKind::pauli_x:
      m << 0, 1, 1, 0;
      break;
    case OpKind::pauli_y:
      m << 0, I1, -I1, 0;
      break;
    case OpKind::pauli_z:
      m << -1, 0, 0, 1;
      break;
    case OpKind::lower:
      for (int n = 1; n < dim; ++n) m(n - 1, n) = 1.0;
      break;
    case OpKind::raise:
      for (int n = 1; n < dim; ++n) m(n, n - 1) = 1.0;
      break;
    case OpKind::annihilate:
      for (int n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(double(n));
      break;
    case OpKind::create:
      for (int n = 1; n < dim; ++n) m(n, n - 1) = std::sqrt(double(n));
      break;
    case OpKind::number:
      for (int n = 0; n < dim; ++n) m(n, n) = n;
      break;
    case OpKind::ketbra:
      if (a < 0 || b < 0 || a >= dim || b >= dim)
        throw ContractViolation("local_operator: ketbra index out of range");
      m(a, b) = 1.0;
      break;
  }
  return m;
}

Mat sigma_x() { return local_operator(OpKind::pauli_x, 2); }
Mat sigma_y() { return local_operator(OpKind::pauli_y, 2); }
Mat sigma_z() { return local_operator(OpKind::pauli_z, 2); }
Mat sigma_plus() { return local_operator(OpKind::raise, 2); }
Mat sigma_minus() { return local_operator(OpKind::lower, 2); }
Mat destroy(int dim) { return local_operator(OpKind::annihilate, dim); }
Mat ketbra(int dim, int a, int b) { return local_operator(OpKind::ketbra, dim, a, b); }

namespace {

void check_site(int site, const SpaceLayout& layout) {
  if (site < 0 || site >= layout.sites()) throw std::out_of_range("embed: site index out of range");
}

Index span(const SpaceLayout& layout, int from, int to) {
  Index n = 1;
  for (int s = from; s < to; ++s) n *= layout.dims[s];
  return n;
}

}  // namespace

Mat embed(const Mat& op, int site, const SpaceLayout& layout) {
  check_site(site, layout);
  const int d = layout.dims[site];
  if (op.rows() != d || op.cols() != d) throw ContractViolation("embed: operator dims differ from site dims");
  const Index left = span(layout, 0, site), right = span(layout, site + 1, layout.sites());
  const Index n = left * d * right;
  Mat out = Mat::Zero(n, n);
  for (Index l = 0; l < left; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (op(i, j) == cd(0)) continue;
        for (Index r = 0; r < right; ++r)
          out((l * d + i) * right + r, (l * d + j) * right + r) = op(i, j);
      }
  return out;
}

SpMat embed_sparse(const SpMat& op, int site, const SpaceLayout& layout) {
  check_site(site, layout);
  const int d = layout.dims[site];
  if (op.rows() != d || op.cols() != d) throw ContractViolation("embed: operator dims differ from site dims");
  const Index left = span(layout, 0, site), right = span(layout, site + 1, layout.sites());
  SpMat il(left, left), ir(right, right);
  il.setIdentity();
  ir.setIdentity();
  return kron(kron(il, op), ir);
}

Mat partial_trace(const Mat& rho, std::vector<int> keep, const SpaceLayout& layout) {
  const Index n = layout.total();
  if (rho.rows() != n || rho.cols() != n) throw ContractViolation("partial_trace: state dims differ from layout");
  if (keep.empty()) throw ContractViolation("partial_trace: keep is empty");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
    throw ContractViolation("partial_trace: duplicate site in keep");
  for (int k : keep) check_site(k, layout);

  const int ns = layout.sites();
  std::vector<bool> kept(ns, false);
  for (int k : keep) kept[k] = true;
  Index nk = 1, nt = 1;
  for (int s = 0; s < ns; ++s) (kept[s] ? nk : nt) *= layout.dims[s];

  // Split every full index into (kept part, traced part).
  std::vector<Index> kidx(n), tidx(n);
  std::vector<int> digit(ns);
  for (Index i = 0; i < n; ++i) {
    Index rem = i;
    for (int s = ns - 1; s >= 0; --s) {
      digit[s] = static_cast<int>(rem % layout.dims[s]);
      rem /= layout.dims[s];
    }
    Index a = 0, b = 0;
    for (int s = 0; s < ns; ++s) {
      if (kept[s]) a = a * layout.dims[s] + digit[s];
      else b = b * layout.dims[s] + digit[s];
    }
    kidx[i] = a;
    tidx[i] = b;
  }
  std::vector<std::vector<Index>> groups(nt);
  for (Index i = 0; i < n; ++i) groups[tidx[i]].push_back(i);
  Mat out = Mat::Zero(nk, nk);
  for (const auto& g : groups)
    for (Index i : g)
      for (Index j : g) out(kidx[i], kidx[j]) += rho(i, j);
  return out;
}

int oscillator_truncation(double nbar, double p_cut) {
  if (nbar < 0) throw ContractViolation("oscillator_truncation: nbar must be >= 0");
  if (nbar == 0.0) return 3;
  const double m = std::ceil(std::log((nbar + 1.0) * p_cut) / (std::log(nbar) - std::log(nbar + 1.0)));
  return std::max(3, static_cast<int>(m) + 1);
}

Mat thermal_state(const Mat& h, double temperature) {
  if (temperature < 0) throw ContractViolation("thermal_state: temperature must be >= 0");
  const EigResult e = hermitian_eig(h);
  const Index n = e.values.size();
  RVec p(n);
  const double e0 = e.values(0);
  if (temperature == 0.0) {
    const double tol = 1e-9 * std::max(1.0, e.values.cwiseAbs().maxCoeff());
    for (Index i = 0; i < n; ++i) p(i) = e.values(i) - e0 <= tol ? 1.0 : 0.0;
  } else {
    for (Index i = 0; i < n; ++i) p(i) = std::exp(-(e.values(i) - e0) / temperature);
  }
  p /= p.sum();
  return e.vectors * p.cast<cd>().asDiagonal() * e.vectors.adjoint();
}

Vec basis_state(const SpaceLayout& layout, const std::vector<int>& levels) {
  if (static_cast<int>(levels.size()) != layout.sites())
    throw ContractViolation("basis_state: one level per site required");
  Index idx = 0;
  for (int s = 0; s < layout.sites(); ++s) {
    if (levels[s] < 0 || levels[s] >= layout.dims[s]) throw ContractViolation("basis_state: level out of range");
    idx = idx * layout.dims[s] + levels[s];
  }
  Vec v = Vec::Zero(layout.total());
  v(idx) = 1.0;
  return v;
}

Mat projector(const Vec& psi) { return psi * psi.adjoint(); }

}  // namespace oqs
