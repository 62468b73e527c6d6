#include "oqs/rates.hpp"

#include <cmath>

#include "oqs/errors.hpp"

namespace oqs {

RMat rate_matrix(const RMat& rates) {
  if (rates.rows() != rates.cols()) throw ContractViolation("rate_matrix: must be square");
  RMat w = rates;
  for (Index j = 0; j < w.cols(); ++j) {
    w(j, j) = 0.0;
    for (Index i = 0; i < w.rows(); ++i)
      if (i != j && w(i, j) < 0.0) throw ContractViolation("rate_matrix: negative rate");
    w(j, j) = -w.col(j).sum();
  }
  return w;
}

void check_rate_matrix(const RMat& w) {
  if (w.rows() != w.cols()) throw ContractViolation("rate matrix must be square");
  const double scale = std::max(w.cwiseAbs().maxCoeff(), 1e-300);
  for (Index j = 0; j < w.cols(); ++j) {
    if (std::abs(w.col(j).sum()) > 1e-12 * scale) throw ContractViolation("rate matrix column does not sum to zero");
    for (Index i = 0; i < w.rows(); ++i)
      if (i != j && w(i, j) < 0.0) throw ContractViolation("rate matrix has a negative rate");
  }
}

namespace {

// Grassmann-Taksar-Heyman state reduction: subtraction-free, keeps tiny populations accurate.
bool gth(const RMat& w, RVec& p) {
  const Index n = w.cols();
  RMat a = w.transpose();  // a(j, i) = rate j -> i
  for (Index k = n - 1; k >= 1; --k) {
    double s = 0.0;
    for (Index j = 0; j < k; ++j) s += a(k, j);
    if (!(s > 0.0)) return false;
    for (Index i = 0; i < k; ++i) a(i, k) /= s;
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) a(i, j) += a(i, k) * a(k, j);
  }
  p = RVec::Zero(n);
  p(0) = 1.0;
  for (Index j = 1; j < n; ++j)
    for (Index i = 0; i < j; ++i) p(j) += p(i) * a(i, j);
  p /= p.sum();
  return true;
}

}  // namespace

RVec rate_steady_state(const RMat& w) {
  check_rate_matrix(w);
  const double scale = std::max(w.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::JacobiSVD<RMat> svd(w / scale, Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  const Index n = w.cols();
  Index null = 0;
  for (Index i = 0; i < n; ++i)
    if (s(i) <= 1e-12 * std::max(s(0), 1.0)) ++null;
  if (null != 1) throw NonUniqueSteadyState("rate_steady_state: kernel is not one-dimensional", static_cast<int>(null));
  RVec p;
  if (gth(w, p)) return p;
  p = svd.matrixV().col(n - 1);
  p /= p.sum();
  return p.cwiseMax(0.0) / p.cwiseMax(0.0).sum();
}

RMat qutrit_rates(const QutritMarkovParams& p, double nl, double nr) {
  const double J2 = p.J * p.J, Jp2 = p.Jp * p.Jp, G = p.Gamma;
  const double off = J2 * G / (p.dw * p.dw + G * G / 2.0);
  RMat r = RMat::Zero(3, 3);
  r(0, 1) = (1 + nl) * Jp2 / G + (1 + nr) * off;  // 1 -> 0
  r(1, 0) = nl * Jp2 / G + nr * off;              // 0 -> 1
  r(1, 2) = 8 * (1 + nl) * J2 / G + 8 * (1 + nr) * J2 / G;
  r(2, 1) = 8 * nl * J2 / G + 8 * nr * J2 / G;
  return rate_matrix(r);
}

namespace {

// Net excitations delivered to one bath: left (J' sideband + left hop) or right.
double bath_flux(const QutritMarkovParams& p, const RVec& P, double nl, double nr, bool left) {
  const double J2 = p.J * p.J, Jp2 = p.Jp * p.Jp, G = p.Gamma;
  const double off = J2 * G / (p.dw * p.dw + G * G / 2.0);
  double down10, up01, down21, up12;
  if (left) {
    down10 = (1 + nl) * Jp2 / G, up01 = nl * Jp2 / G;
    down21 = 8 * (1 + nl) * J2 / G, up12 = 8 * nl * J2 / G;
  } else {
    down10 = (1 + nr) * off, up01 = nr * off;
    down21 = 8 * (1 + nr) * J2 / G, up12 = 8 * nr * J2 / G;
  }
  return P(1) * down10 - P(0) * up01 + P(2) * down21 - P(1) * up12;
}

}  // namespace

QutritMarkovResult qutrit_markov_model(const QutritMarkovParams& p) {
  if (!(p.Gamma > 0)) throw ContractViolation("qutrit_markov_model: Gamma must be positive");
  QutritMarkovResult out;
  if (!(p.dw > 10 * p.Gamma)) out.flags.push_back("dw >> Gamma violated");
  if (!(p.Gamma > 3 * std::max(p.J, p.Jp))) out.flags.push_back("Gamma >> J, J' violated");
  if (p.n_cold != 0.0) out.flags.push_back("closed forms assume an empty cold bath");

  out.w_forward = qutrit_rates(p, p.n_hot, p.n_cold);
  out.w_reverse = qutrit_rates(p, p.n_cold, p.n_hot);
  out.p_forward = rate_steady_state(out.w_forward);
  out.p_reverse = rate_steady_state(out.w_reverse);
  // Forward: cold bath on the right; reverse: cold bath on the left, sign flipped.
  out.j_forward_rates = bath_flux(p, out.p_forward, p.n_hot, p.n_cold, false);
  out.j_reverse_rates = -bath_flux(p, out.p_reverse, p.n_cold, p.n_hot, true);

  const double n = p.n_hot, J2 = p.J * p.J, Jp2 = p.Jp * p.Jp, G = p.Gamma, d2 = p.dw * p.dw;
  const double z = 2 + 5 * n + 3 * n * n;
  out.j_forward = 8 * n * n / z * J2 / G;
  out.j_reverse = -n / (2 + n) * (8 * n * J2 + (2 + n) * Jp2) / Jp2 * J2 * G / d2;
  out.work_forward = n * (2 + n) / z * J2 * G / d2;
  out.work_reverse = -n * J2 * G / d2;
  out.R = 8 * n * (2 + n) / z * Jp2 / (8 * n * J2 + (2 + n) * Jp2) * d2 / (G * G);
  return out;
}

double wheatstone_N(double n) {
  const double s = std::sqrt(n * (25 * n + 8));
  const double den = 11 * n + s + 4;
  return 64 * (2 * n + 1) * (3 * n + 1) * (s - n) / ((3 * n + s) * den * den);
}

WheatstoneMarkovResult wheatstone_markov_model(const WheatstoneParams& p) {
  if (!(p.J23 > 0)) throw ContractViolation("wheatstone_markov_model: J23 must be positive");
  WheatstoneMarkovResult m;
  const double n = p.n;
  const double detune = 2 * p.h1 - 2 * p.J23 - p.h2;
  m.eta1_sq = detune * detune + p.g1 * p.g1 / 4;
  m.eta4_sq = 4 * p.J23 * p.J23 + (2 * n + 1) * (2 * n + 1) * p.g4 * p.g4 / 4;
  m.Lambda = std::sqrt((n + 1) * (3 * n + 1) / (2 * n * n)) * p.h2 * std::sqrt(m.eta1_sq) / (2 * p.J23);
  m.Jx0 = p.JC * (1 - p.h2 / (2 * p.J23));
  m.JC0 = p.Jx * (1 + p.h2 / (2 * p.J23));
  m.P0 = n / (3 * n + 1);
  m.N = wheatstone_N(n);
  m.maxF = 4 * m.N / (m.Lambda * m.Lambda);
  m.J0 = n * (2 * n + 1) / (3 * n + 1) * 8 * p.g4 * p.J * p.J / m.eta4_sq;
  m.Jinf = (n + 1) * p.g1 * p.h2 * p.h2 / (16 * n * p.J23 * p.J23);

  // Order {dd, -, +, uu}; r(i, j) is j -> i.
  const double dJ = p.Jx - m.Jx0;
  const double J2 = p.J * p.J, weak = p.h2 * p.h2 * J2 * p.g4 / (2 * p.J23 * p.J23 * m.eta4_sq);
  const double strong = 8 * J2 * p.g4 / m.eta4_sq;
  RMat r = RMat::Zero(4, 4);
  r(1, 3) = 2 * p.g1 * dJ * dJ / m.eta1_sq;  // uu -> -
  r(1, 0) = weak * n;                        // dd -> -
  r(3, 1) = weak * n;                        // - -> uu
  r(0, 1) = weak * (n + 1);                  // - -> dd
  r(2, 3) = strong * (n + 1);                // uu -> +
  r(0, 2) = p.g1;                            // + -> dd
  r(2, 0) = strong * n;                      // dd -> +
  r(3, 2) = strong * n;                      // + -> uu
  m.w = rate_matrix(r);
  m.p_ss = rate_steady_state(m.w);

  if (!(p.g1 < p.g4 && p.g4 <= 4 * p.J23 / (2 * n + 1) * 1.0001)) m.flags.push_back("g1 << g4 <= 4 J23/(2n+1) violated");
  if (!(p.h2 < 0.2 * p.J23 && p.J < 0.2 * p.J23)) m.flags.push_back("h2, J << J23 violated");
  if (std::abs(p.h1 - p.J23) > 0.1 * p.J23) m.flags.push_back("h1 ~ J23 violated");
  return m;
}

double wheatstone_p_minus(const WheatstoneMarkovResult& m, double dJx) {
  const double q = m.Lambda * m.Lambda / 4;
  return (dJx * dJx + m.P0 * q) / (dJx * dJx + q);
}

double wheatstone_qfi(const WheatstoneMarkovResult& m, double dJx, double n) {
  const double L2 = m.Lambda * m.Lambda, d2 = dJx * dJx;
  return 4 * d2 * L2 * (2 * n + 1) / (std::pow(d2 + L2 / 4, 2) * (n * L2 + 4 * (3 * n + 1) * d2));
}

double wheatstone_current(const WheatstoneMarkovResult& m, double JC) {
  const double d2 = (JC - m.JC0) * (JC - m.JC0), q = m.Lambda * m.Lambda / 4;
  return (m.Jinf * d2 + m.J0 * q) / (d2 + q);
}

BathRates full_bath_rates(double m_abs, double detuning, double gamma, double n, BathKind kind) {
  if (!(gamma > 0)) throw ContractViolation("full_bath_rates: gamma must be positive");
  const double m2 = m_abs * m_abs, d2 = detuning * detuning;
  if (kind == BathKind::cold) return {m2 * gamma / (m2 + d2 + gamma * gamma / 4), 0.0};
  const double den = d2 + gamma * gamma * (2 * n + 1) * (2 * n + 1) / 4;
  return {m2 * gamma * (n + 1) / den, m2 * gamma * n / den};
}

MaxwellMarkovRates maxwell_markov_rates(double J, double gamma, double n_cold, double n_hot) {
  if (!(gamma > 0)) throw ContractViolation("maxwell_markov_rates: gamma must be positive");
  MaxwellMarkovRates r;
  const double J2 = J * J;
  const double c = gamma * (2 * n_cold + 1) * (2 * n_cold + 1), h = gamma * (2 * n_hot + 1) * (2 * n_hot + 1);
  r.cold_down = 8 * (n_cold + 1) * J2 / c;
  r.cold_up = 8 * n_cold * J2 / c;
  r.hot_down = 4 * (n_hot + 1) * J2 / h;
  r.hot_up = 4 * n_hot * J2 / h;
  if (!(gamma * (n_cold + 0.5) > 3 * std::sqrt(2.0) * J)) r.flags.push_back("cold bath not Markovian");
  if (!(gamma * (n_hot + 0.5) > 3 * J)) r.flags.push_back("hot bath not Markovian");
  return r;
}

std::vector<LocalBath> maxwell_markov_baths(const MaxwellMarkovRates& r, const SpaceLayout& layout, int qutrit) {
  if (layout.dims.at(qutrit) != 3) throw ContractViolation("maxwell_markov_baths: site must be a qutrit");
  return {{embed(ketbra(3, 0, 2), qutrit, layout), r.cold_down},
          {embed(ketbra(3, 2, 0), qutrit, layout), r.cold_up},
          {embed(ketbra(3, 0, 1), qutrit, layout), r.hot_down},
          {embed(ketbra(3, 1, 0), qutrit, layout), r.hot_up}};
}

}  // namespace oqs
