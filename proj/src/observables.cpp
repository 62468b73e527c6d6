#include "oqs/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oqs/errors.hpp"

namespace oqs {

double expect(const Mat& op, const Mat& rho) { return (op * rho).trace().real(); }

namespace {

// Square roots of the spectrum of a PSD product; roundoff-level eigenvalues are dropped
// so that sqrt does not amplify them.
RVec root_spectrum(const Mat& m) {
  RVec lam = hermitian_eig(Mat(0.5 * (m + m.adjoint()))).values;
  const double floor = 64 * std::numeric_limits<double>::epsilon() * m.rows() * std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
  for (Index k = 0; k < lam.size(); ++k) lam(k) = lam(k) > floor ? std::sqrt(lam(k)) : 0.0;
  return lam;
}

void check_square(const Mat& a, const Mat& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw ContractViolation(std::string(what) + ": dimension mismatch");
}

}  // namespace

double excitation_current_bath(const ThermalMode& bath, const Mat& rho) {
  check_square(bath.mode, rho, "excitation_current_bath");
  const Mat& a = bath.mode;
  return bath.rate * bath.occupation * expect(a * a.adjoint(), rho) -
         bath.rate * (bath.occupation + 1.0) * expect(a.adjoint() * a, rho);
}

Mat link_operator(const SpaceLayout& layout, int i, int j) {
  return embed(sigma_x(), i, layout) * embed(sigma_y(), j, layout) -
         embed(sigma_y(), i, layout) * embed(sigma_x(), j, layout);
}

double spin_current(const Mat& rho, const SpaceLayout& layout, int i, int j, double coupling, Prefactor convention) {
  if (layout.dims[i] != 2 || layout.dims[j] != 2) throw ContractViolation("spin_current: sites must be qubits");
  const double c = convention == Prefactor::two_j ? 2.0 : 1.0;
  return c * coupling * expect(link_operator(layout, i, j), rho);
}

double heat_current(const Mat& h, const Mat& dissipated) {
  check_square(h, dissipated, "heat_current");
  return (h * dissipated).trace().real();
}

double work_rate(const Mat& dh_dt, const Mat& rho) {
  check_square(dh_dt, rho, "work_rate");
  return expect(dh_dt, rho);
}

Rectification rectification_and_contrast(double forward, double reverse) {
  if (forward == 0.0 && reverse == 0.0) throw DomainError("rectification_and_contrast: both currents vanish");
  Rectification out;
  out.R = reverse == 0.0 ? std::numeric_limits<double>::infinity() : -forward / reverse;
  out.C = std::abs((forward + reverse) / (forward - reverse));
  return out;
}

Mat psd_sqrt(const Mat& a) {
  auto e = hermitian_eig(0.5 * (a + a.adjoint()));
  RVec s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.cast<cd>().asDiagonal() * e.vectors.adjoint();
}

double concurrence(const Mat& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw ContractViolation("concurrence: need a 4x4 state");
  auto e = hermitian_eig(0.5 * (rho + rho.adjoint()));
  if (e.values(0) < -1e-8) throw ContractViolation("concurrence: state is not positive");
  Mat yy = kron(sigma_y(), sigma_y());
  Mat tilde = yy * rho.conjugate() * yy;
  Mat s = psd_sqrt(rho);
  RVec lam = root_spectrum(s * tilde * s);
  std::sort(lam.data(), lam.data() + 4, std::greater<double>());
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double von_neumann_entropy(const Mat& rho) {
  RVec p = hermitian_eig(0.5 * (rho + rho.adjoint())).values;
  double s = 0.0;
  for (Index k = 0; k < p.size(); ++k)
    if (p(k) > 1e-12) s -= p(k) * std::log(p(k));
  return s;
}

double fidelity(const Mat& rho, const Mat& sigma) {
  check_square(rho, sigma, "fidelity");
  Mat s = psd_sqrt(rho);
  RVec lam = root_spectrum(s * sigma * s);
  const double t = lam.sum();
  return std::clamp(t * t, 0.0, 1.0);
}

double fidelity(const Mat& rho, const Vec& psi) {
  if (rho.rows() != psi.size()) throw ContractViolation("fidelity: dimension mismatch");
  return std::clamp((psi.adjoint() * rho * psi)(0).real(), 0.0, 1.0);
}

double effective_temperature(double n_mean) {
  if (!(n_mean > 0.0)) throw DomainError("effective_temperature: occupation must be positive");
  return 1.0 / (std::log1p(n_mean) - std::log(n_mean));
}

namespace {

double qfi_from(const Mat& drho, const RVec& p, const Mat& basis) {
  Mat d = basis.adjoint() * drho * basis;
  double f = 0.0;
  for (Index k = 0; k < p.size(); ++k)
    for (Index l = 0; l < p.size(); ++l) {
      const double s = p(k) + p(l);
      if (s > 1e-14) f += std::norm(d(k, l)) / s;
    }
  return 2.0 * f;
}

}  // namespace

FisherResult qfi_diagonal(const StateFamily& family, double theta0, double step) {
  Mat rho = family(theta0);
  auto e = hermitian_eig(0.5 * (rho + rho.adjoint()));
  RVec p = e.values.cwiseMax(0.0);
  Mat off = rho;
  off.diagonal().setZero();
  FisherResult out{0.0, step, true};
  out.offdiag = off.norm();
  out.flagged = out.offdiag > 1e-6;

  auto diff = [&](double h) { return Mat((family(theta0 + h) - family(theta0 - h)) / (2.0 * h)); };
  Mat d1 = diff(step), d2 = diff(0.5 * step);
  const double f1 = qfi_from(d1, p, e.vectors), f2 = qfi_from(d2, p, e.vectors);
  out.value = f2;
  if (std::abs(f1 - f2) > 0.01 * std::max(std::abs(f2), 1e-300)) {
    out.value = qfi_from(Mat((4.0 * d2 - d1) / 3.0), p, e.vectors);
    out.refined = true;
  }
  return out;
}

FisherResult cfi_projective(const DistributionFamily& family, double theta0, double step) {
  RVec p = family(theta0);
  if (std::abs(p.sum() - 1.0) > 1e-10) throw ContractViolation("cfi_projective: distribution not normalized");
  FisherResult out{0.0, step, false};
  auto eval = [&](const RVec& dp) {
    double f = 0.0;
    for (Index a = 0; a < p.size(); ++a) {
      if (p(a) > 0.0) {
        f += dp(a) * dp(a) / p(a);
      } else if (std::abs(dp(a)) > 1e-12) {
        out.flagged = true;
      }
    }
    return f;
  };
  auto diff = [&](double h) { return RVec((family(theta0 + h) - family(theta0 - h)) / (2.0 * h)); };
  RVec d1 = diff(step), d2 = diff(0.5 * step);
  const double f1 = eval(d1), f2 = eval(d2);
  out.value = f2;
  if (std::abs(f1 - f2) > 0.01 * std::max(std::abs(f2), 1e-300)) {
    out.value = eval((4.0 * d2 - d1) / 3.0);
    out.refined = true;
  }
  return out;
}

OrderParameters order_parameters(const std::vector<double>& occupations, const std::vector<cd>& amplitudes) {
  const double m = static_cast<double>(occupations.size());
  if (m == 0 || amplitudes.size() != occupations.size()) throw ContractViolation("order_parameters: empty or mismatched");
  double n = 0.0, n2 = 0.0;
  cd a = 0.0;
  for (size_t i = 0; i < occupations.size(); ++i) {
    n += occupations[i];
    n2 += occupations[i] * occupations[i];
    a += amplitudes[i];
  }
  n /= m;
  return {n, std::abs(a / m), std::max(0.0, n2 / m - n * n)};
}

namespace {

// Per-site digit of a product-basis index (site 0 slowest).
struct Digits {
  std::vector<Index> stride;
  explicit Digits(const SpaceLayout& l) : stride(l.dims.size()) {
    Index s = 1;
    for (int k = static_cast<int>(l.dims.size()) - 1; k >= 0; --k) {
      stride[k] = s;
      s *= l.dims[k];
    }
  }
};

}  // namespace

std::vector<double> site_occupations(const Vec& psi, const SpaceLayout& layout) {
  if (psi.size() != layout.total()) throw ContractViolation("site_occupations: dimension mismatch");
  Digits dg(layout);
  std::vector<double> n(layout.dims.size(), 0.0);
  for (Index x = 0; x < psi.size(); ++x) {
    const double w = std::norm(psi(x));
    if (w == 0.0) continue;
    for (size_t s = 0; s < n.size(); ++s) n[s] += w * static_cast<double>((x / dg.stride[s]) % layout.dims[s]);
  }
  return n;
}

std::vector<double> site_occupation_variances(const Vec& psi, const SpaceLayout& layout) {
  Digits dg(layout);
  std::vector<double> n(layout.dims.size(), 0.0), n2(layout.dims.size(), 0.0);
  for (Index x = 0; x < psi.size(); ++x) {
    const double w = std::norm(psi(x));
    if (w == 0.0) continue;
    for (size_t s = 0; s < n.size(); ++s) {
      const double k = static_cast<double>((x / dg.stride[s]) % layout.dims[s]);
      n[s] += w * k;
      n2[s] += w * k * k;
    }
  }
  for (size_t s = 0; s < n.size(); ++s) n2[s] -= n[s] * n[s];
  return n2;
}

std::vector<cd> site_amplitudes(const Vec& psi, const SpaceLayout& layout) {
  if (psi.size() != layout.total()) throw ContractViolation("site_amplitudes: dimension mismatch");
  Digits dg(layout);
  std::vector<cd> a(layout.dims.size(), 0.0);
  // <a_s> = sum_x conj(psi(x - stride)) sqrt(k) psi(x), k = digit of x at s.
  for (Index x = 0; x < psi.size(); ++x) {
    if (psi(x) == cd(0)) continue;
    for (size_t s = 0; s < a.size(); ++s) {
      const Index k = (x / dg.stride[s]) % layout.dims[s];
      if (k > 0) a[s] += std::conj(psi(x - dg.stride[s])) * std::sqrt(static_cast<double>(k)) * psi(x);
    }
  }
  return a;
}

OrderParameters order_parameters(const Vec& psi, const SpaceLayout& layout) {
  return order_parameters(site_occupations(psi, layout), site_amplitudes(psi, layout));
}

OrderParameters order_parameters(const Mat& rho, const SpaceLayout& layout) {
  if (rho.rows() != layout.total()) throw ContractViolation("order_parameters: dimension mismatch");
  std::vector<double> n;
  std::vector<cd> a;
  for (int s = 0; s < layout.sites(); ++s) {
    Mat red = partial_trace(rho, {s}, layout);
    Mat b = destroy(layout.dims[s]);
    n.push_back((b.adjoint() * b * red).trace().real());
    a.push_back((b * red).trace());
  }
  return order_parameters(n, a);
}

GridArgmax variance_derivative_argmax(const std::vector<double>& grid, const std::vector<double>& values) {
  const size_t m = grid.size();
  if (m < 5 || values.size() != m) throw ContractViolation("variance_derivative_argmax: need >= 5 points");
  for (size_t i = 1; i < m; ++i)
    if (!(grid[i] > grid[i - 1])) throw ContractViolation("variance_derivative_argmax: grid must increase");
  std::vector<double> d(m);
  d[0] = (values[1] - values[0]) / (grid[1] - grid[0]);
  d[m - 1] = (values[m - 1] - values[m - 2]) / (grid[m - 1] - grid[m - 2]);
  for (size_t i = 1; i + 1 < m; ++i) d[i] = (values[i + 1] - values[i - 1]) / (grid[i + 1] - grid[i - 1]);
  const size_t k = static_cast<size_t>(std::max_element(d.begin(), d.end()) - d.begin());
  GridArgmax out{grid[k], d[k], k == 0 || k + 1 == m};
  if (!out.at_boundary) {
    // Parabola through the three derivative samples around the peak.
    const double x0 = grid[k - 1], x1 = grid[k], x2 = grid[k + 1];
    const double y0 = d[k - 1], y1 = d[k], y2 = d[k + 1];
    const double den = (x0 - x1) * (x0 - x2) * (x1 - x2);
    const double A = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den;
    const double B = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / den;
    if (A < 0.0) out.x = std::clamp(-B / (2.0 * A), x0, x2);
  }
  return out;
}

}  // namespace oqs
