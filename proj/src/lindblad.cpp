#include "oqs/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oqs {

namespace {

SpMat sparse_of(const Mat& m) { return m.sparseView(); }

SpMat identity(Index d) {
  SpMat i(d, d);
  i.setIdentity();
  return i;
}

void check_square(const Mat& m, Index d, const char* what) {
  if (m.rows() != d || m.cols() != d) throw ContractViolation(std::string(what) + ": dimension mismatch");
}

// Eigenbasis with degenerate levels grouped.
struct Spectrum {
  RVec energy;
  Mat vectors;
  std::vector<int> group;
  std::vector<double> group_energy;
  double tol;
};

Spectrum spectrum_of(const Mat& h, double tol) {
  EigResult e = hermitian_eig(h);
  Spectrum s{e.values, e.vectors, {}, {}, tol};
  const Index d = e.values.size();
  if (s.tol < 0) s.tol = 1e-9 * std::max(e.values.cwiseAbs().maxCoeff(), 1.0);
  s.group.resize(d);
  Index start = 0;
  int g = -1;
  for (Index i = 0; i < d; ++i) {
    if (i == 0 || e.values(i) - e.values(start) > s.tol) {
      ++g;
      start = i;
      s.group_energy.push_back(0.0);
    }
    s.group[i] = g;
  }
  std::vector<int> count(g + 1, 0);
  for (Index i = 0; i < d; ++i) {
    s.group_energy[s.group[i]] += e.values(i);
    ++count[s.group[i]];
  }
  for (int k = 0; k <= g; ++k) s.group_energy[k] /= count[k];
  return s;
}

// Transition frequencies clustered within tol; omega(a, b) = E_b - E_a.
struct Transitions {
  std::vector<int> id;  // d*d, index a + b*d
  std::vector<double> omega;
};

Transitions transitions_of(const Spectrum& s) {
  const Index d = s.energy.size();
  std::vector<std::pair<double, Index>> all;
  all.reserve(d * d);
  for (Index b = 0; b < d; ++b)
    for (Index a = 0; a < d; ++a)
      all.emplace_back(s.group_energy[s.group[b]] - s.group_energy[s.group[a]], a + b * d);
  std::sort(all.begin(), all.end());
  Transitions t{std::vector<int>(d * d), {}};
  double anchor = 0.0;
  std::vector<double> sums;
  std::vector<int> counts;
  for (size_t k = 0; k < all.size(); ++k) {
    if (k == 0 || all[k].first - anchor > s.tol) {
      anchor = all[k].first;
      sums.push_back(0.0);
      counts.push_back(0);
    }
    t.id[all[k].second] = static_cast<int>(sums.size()) - 1;
    sums.back() += all[k].first;
    ++counts.back();
  }
  for (size_t c = 0; c < sums.size(); ++c) t.omega.push_back(sums[c] / counts[c]);
  return t;
}

SpMatC dissipator_in_frame(const Spectrum& s, const Transitions& tr, const GlobalBath& bath) {
  const Index d = s.energy.size();
  check_square(bath.coupling, d, "global_dissipator");
  const Mat a = s.vectors.adjoint() * bath.coupling * s.vectors;
  const double amax = max_abs(a);
  std::vector<double> rate(tr.omega.size(), -1.0);
  auto gamma = [&](int c) {
    if (rate[c] < 0) {
      rate[c] = bath.gamma(tr.omega[c]);
      if (!(rate[c] >= 0)) throw ContractViolation("global_dissipator: spectral function negative or NaN");
    }
    return rate[c];
  };
  const double cut = bath.secular_cutoff;
  auto near = [&](int c1, int c2) {
    return c1 == c2 || std::abs(tr.omega[c1] - tr.omega[c2]) <= cut;
  };

  struct Entry {
    Index a, b;
    cd v;
    int c;
  };
  std::vector<Entry> nz;
  for (Index b = 0; b < d; ++b)
    for (Index r = 0; r < d; ++r)
      if (std::abs(a(r, b)) > 1e-14 * amax) nz.push_back({r, b, a(r, b), tr.id[r + b * d]});

  std::vector<Eigen::Triplet<cd>> trip;
  for (const Entry& x : nz)
    for (const Entry& y : nz) {
      if (!near(x.c, y.c)) continue;
      const double w = 0.5 * (gamma(x.c) + gamma(y.c));
      if (w == 0.0) continue;
      trip.emplace_back(x.a + y.a * d, x.b + y.b * d, x.v * std::conj(y.v) * w);
    }

  // K(p, q) = sum_c conj(A_cp) A_cq gamma(omega_cq) / 2 over near pairs.
  Mat k = Mat::Zero(d, d);
  for (Index p = 0; p < d; ++p)
    for (Index q = 0; q < d; ++q) {
      cd acc = 0;
      for (Index c = 0; c < d; ++c) {
        if (a(c, p) == cd(0) || a(c, q) == cd(0)) continue;
        const int cq = tr.id[c + q * d], cp = tr.id[c + p * d];
        if (!near(cq, cp)) continue;
        acc += std::conj(a(c, p)) * a(c, q) * (0.5 * gamma(cq));
      }
      k(p, q) = acc;
    }
  SpMatC out(d * d, d * d);
  out.setFromTriplets(trip.begin(), trip.end());
  out -= left_mult(k) + right_mult(k.adjoint());
  out.prune(cd(0));
  return out;
}

}  // namespace

Mat unvec(const Vec& v) {
  const Index d = static_cast<Index>(std::llround(std::sqrt(double(v.size()))));
  if (d * d != v.size()) throw ContractViolation("unvec: length is not a square");
  return Eigen::Map<const Mat>(v.data(), d, d);
}

SpMatC left_mult(const Mat& a) { return SpMatC(kron(identity(a.rows()), sparse_of(a))); }
SpMatC right_mult(const Mat& b) { return SpMatC(kron(sparse_of(b.transpose()), identity(b.rows()))); }
SpMatC sandwich(const Mat& a, const Mat& b) { return SpMatC(kron(sparse_of(b.transpose()), sparse_of(a))); }

Vec Liouvillian::to_frame(const Mat& rho) const {
  if (frame.size() == 0) return vec(rho);
  return vec(frame.adjoint() * rho * frame);
}

Mat Liouvillian::from_frame(const Vec& v) const {
  Mat x = unvec(v);
  if (frame.size() == 0) return x;
  return frame * x * frame.adjoint();
}

Mat Liouvillian::apply(const Mat& rho) const {
  check_square(rho, dim, "Liouvillian::apply");
  return from_frame(L * to_frame(rho));
}

double Liouvillian::norm() const { return L.norm(); }

Liouvillian& Liouvillian::operator+=(const Liouvillian& other) {
  if (dim != other.dim) throw ContractViolation("Liouvillian: dimension mismatch");
  const bool same = frame.size() == other.frame.size() &&
                    (frame.size() == 0 || max_abs(frame - other.frame) == 0.0);
  if (!same) throw ContractViolation("Liouvillian: frames differ");
  L += other.L;
  return *this;
}

Liouvillian in_site_basis(const Liouvillian& l) {
  if (l.frame.size() == 0) return l;
  const Mat w = kron(Mat(l.frame.conjugate()), l.frame);  // vec(V X V^dag) = w vec(X)
  Mat dense = w * Mat(l.L) * w.adjoint();
  return {l.dim, SpMatC(dense.sparseView(cd(max_abs(dense)), 1e-15)), Mat()};
}

Mat dissipator_apply(const Mat& a, const Mat& rho) {
  check_square(a, rho.rows(), "dissipator_apply");
  check_square(rho, a.rows(), "dissipator_apply");
  const Mat ada = a.adjoint() * a;
  return a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
}

SpMatC dissipator_superop(const Mat& a) {
  const Mat ada = a.adjoint() * a;
  return sandwich(a, a.adjoint()) - 0.5 * (left_mult(ada) + right_mult(ada));
}

SpMatC hamiltonian_superop(const Mat& h) { return -I1 * (left_mult(h) - right_mult(h)); }

Liouvillian local_liouvillian(const Mat& h, const std::vector<LocalBath>& baths) {
  const Index d = h.rows();
  check_square(h, d, "local_liouvillian");
  Liouvillian out{d, hamiltonian_superop(h), Mat()};
  for (const auto& b : baths) {
    check_square(b.jump, d, "local_liouvillian");
    if (b.rate < 0) throw ContractViolation("local_liouvillian: negative rate");
    if (b.rate > 0) out.L += b.rate * dissipator_superop(b.jump);
  }
  out.L.prune(cd(0));
  return out;
}

std::vector<Eigenoperator> eigenoperator_decompose(const Mat& h, const Mat& a, double degeneracy_tol) {
  const Spectrum s = spectrum_of(h, degeneracy_tol);
  const Transitions tr = transitions_of(s);
  const Index d = s.energy.size();
  check_square(a, d, "eigenoperator_decompose");
  const Mat ae = s.vectors.adjoint() * a * s.vectors;
  const double amax = max_abs(ae);
  std::vector<Mat> parts(tr.omega.size());
  for (Index b = 0; b < d; ++b)
    for (Index r = 0; r < d; ++r) {
      if (std::abs(ae(r, b)) <= 1e-14 * amax) continue;
      Mat& p = parts[tr.id[r + b * d]];
      if (p.size() == 0) p = Mat::Zero(d, d);
      p(r, b) = ae(r, b);
    }
  std::vector<Eigenoperator> out;
  for (size_t c = 0; c < parts.size(); ++c)
    if (parts[c].size()) out.push_back({tr.omega[c], s.vectors * parts[c] * s.vectors.adjoint()});
  return out;
}

Liouvillian global_dissipator(const Mat& h, const GlobalBath& bath) {
  const Spectrum s = spectrum_of(h, bath.degeneracy_tol);
  return {h.rows(), dissipator_in_frame(s, transitions_of(s), bath), s.vectors};
}

Liouvillian global_liouvillian(const Mat& h, const std::vector<GlobalBath>& baths,
                               const std::vector<LocalBath>& locals) {
  const Index d = h.rows();
  check_square(h, d, "global_liouvillian");
  double tol = -1.0;
  for (const auto& b : baths)
    if (b.degeneracy_tol >= 0) tol = tol < 0 ? b.degeneracy_tol : std::min(tol, b.degeneracy_tol);
  const Spectrum s = spectrum_of(h, tol);
  const Transitions tr = transitions_of(s);

  SpMatC l(d * d, d * d);
  std::vector<Eigen::Triplet<cd>> diag;
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) diag.emplace_back(i + j * d, i + j * d, -I1 * (s.energy(i) - s.energy(j)));
  l.setFromTriplets(diag.begin(), diag.end());
  for (const auto& b : baths) l += dissipator_in_frame(s, tr, b);
  for (const auto& b : locals) {
    check_square(b.jump, d, "global_liouvillian");
    if (b.rate < 0) throw ContractViolation("global_liouvillian: negative rate");
    l += b.rate * dissipator_superop(s.vectors.adjoint() * b.jump * s.vectors);
  }
  l.prune(cd(0));
  return {d, l, s.vectors};
}

Liouvillian secular_global_liouvillian(const Mat& h, std::vector<GlobalBath> baths) {
  for (auto& b : baths) b.secular_cutoff = 0.0;
  return global_liouvillian(h, baths);
}

double ohmic_rate(double omega, double Gamma, double omega_ref, double temperature) {
  if (!(omega_ref > 0)) throw ContractViolation("ohmic_rate: omega_ref must be positive");
  if (temperature <= 0) return omega > 0 ? Gamma * omega / omega_ref : 0.0;
  const double x = omega / temperature;
  if (std::abs(x) < 1e-12) return Gamma * temperature / omega_ref;
  // (w/wr)(1 + n) = (w/wr) / (1 - e^{-w/T})
  return Gamma * (omega / omega_ref) / (-std::expm1(-x));
}

SpectralFn ohmic(double Gamma, double omega_ref, double temperature) {
  return [=](double w) { return ohmic_rate(w, Gamma, omega_ref, temperature); };
}

Liouvillian DrivenLiouvillian::at(double t) const {
  SpMatC l = constant;
  for (const auto& [c, op] : terms) l += c(t) * op;
  return {dim, l, Mat()};
}

void DrivenLiouvillian::apply(double t, const Vec& x, Vec& y) const {
  y.noalias() = constant * x;
  for (const auto& [c, op] : terms) {
    const cd k = c(t);
    if (k != cd(0)) y.noalias() += k * (op * x);
  }
}

Mat DrivenHamiltonian::at(double t) const {
  Mat h = constant;
  for (const auto& [c, op] : terms) h += c(t) * op;
  return h;
}

DrivenLiouvillian time_dependent_liouvillian(const DrivenHamiltonian& h,
                                             const std::vector<ScheduledBath>& baths,
                                             std::vector<double> breakpoints) {
  const Index d = h.constant.rows();
  DrivenLiouvillian out{d, hamiltonian_superop(h.constant), {}, std::move(breakpoints)};
  for (const auto& [c, op] : h.terms) {
    check_square(op, d, "time_dependent_liouvillian");
    out.terms.emplace_back(c, hamiltonian_superop(op));
  }
  for (const auto& sb : baths) {
    check_square(sb.bath.jump, d, "time_dependent_liouvillian");
    if (sb.rate_of_t) {
      auto f = sb.rate_of_t;
      out.terms.emplace_back([f](double t) { return cd(f(t)); }, dissipator_superop(sb.bath.jump));
    } else {
      if (sb.bath.rate < 0) throw ContractViolation("time_dependent_liouvillian: negative rate");
      out.constant += sb.bath.rate * dissipator_superop(sb.bath.jump);
    }
  }
  std::sort(out.breakpoints.begin(), out.breakpoints.end());
  return out;
}

DrivenLiouvillian constant_drive(const Liouvillian& l) {
  if (l.frame.size()) throw ContractViolation("constant_drive: rotate to the site basis first");
  return {l.dim, l.L, {}, {}};
}

}  // namespace oqs
