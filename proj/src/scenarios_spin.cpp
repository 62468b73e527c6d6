#include <algorithm>
#include <cmath>
#include <numbers>

#include "oqs/scenarios.hpp"

namespace oqs {

namespace {

SpaceLayout qubits(int n) { return SpaceLayout(std::vector<int>(n, 2)); }

// gamma [lambda M[s+] + (1 - lambda) M[s-]]
void add_spin_bath(std::vector<ScheduledBath>& baths, const SpaceLayout& lay, int site, double gamma, double up) {
  baths.push_back({{embed(sigma_plus(), site, lay), gamma * up}, {}});
  baths.push_back({{embed(sigma_minus(), site, lay), gamma * (1.0 - up)}, {}});
}

double bose(double omega, double T) { return T > 0 ? 1.0 / std::expm1(omega / T) : 0.0; }

// Two-qubit vector in the (site a, site b) basis, index = 2 * level_a + level_b.
Vec pair_state(cd dd, cd du, cd ud, cd uu) {
  Vec v(4);
  v << dd, du, ud, uu;
  return v;
}

double pair_population(const Mat& rho2, const Vec& v) { return (v.adjoint() * rho2 * v)(0, 0).real(); }

const Vec& psi_minus() {
  static const Vec v = pair_state(0, -1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2, 0);
  return v;
}
const Vec& psi_plus() {
  static const Vec v = pair_state(0, 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2, 0);
  return v;
}

}  // namespace

Mat xx_exchange(const SpaceLayout& layout, int i, int j) {
  return embed(sigma_x(), i, layout) * embed(sigma_x(), j, layout) +
         embed(sigma_y(), i, layout) * embed(sigma_y(), j, layout);
}

Mat zz_coupling(const SpaceLayout& layout, int i, int j) {
  return embed(sigma_z(), i, layout) * embed(sigma_z(), j, layout);
}

// ---------------------------------------------------------------- interference diode

double interference_default_J34(double Delta) { return -(Delta + 1.3); }

namespace {
Mat interference_hamiltonian(const SpaceLayout& lay, double delta, double J34, double J) {
  return J * (xx_exchange(lay, 0, 1) + (1.0 + delta) * xx_exchange(lay, 1, 2) + xx_exchange(lay, 1, 3) +
              J34 * xx_exchange(lay, 2, 3) + xx_exchange(lay, 2, 4) + xx_exchange(lay, 3, 4) +
              xx_exchange(lay, 4, 5));
}
}  // namespace

Scenario build_interference_diode(const InterferenceParams& p, Bias bias) {
  if (bias == Bias::none) throw ContractViolation("build_interference_diode: bias must be forward or reverse");
  for (double l : {p.lambda_hot, p.lambda_cold})
    if (l < 0 || l > 0.5) throw ContractViolation("build_interference_diode: lambda outside [0, 0.5]");
  Scenario s;
  s.id = "interference_local";
  s.layout = qubits(6);
  s.hamiltonian.constant =
      interference_hamiltonian(s.layout, p.delta, p.J34, p.J) + p.J * p.Delta * zz_coupling(s.layout, 0, 1);
  const bool fwd = bias == Bias::forward;
  add_spin_bath(s.baths, s.layout, 0, p.gamma, fwd ? p.lambda_hot : p.lambda_cold);
  add_spin_bath(s.baths, s.layout, 5, p.gamma, fwd ? p.lambda_cold : p.lambda_hot);
  const SpaceLayout lay = s.layout;
  const double J = p.J;
  s.observables["J"] = [lay, J](const Mat& rho) { return spin_current(rho, lay, 0, 1, J); };
  s.observables["P_minus"] = [lay](const Mat& rho) {
    return pair_population(partial_trace(rho, {2, 3}, lay), psi_minus());
  };
  s.observables["concurrence"] = [lay](const Mat& rho) { return concurrence(partial_trace(rho, {2, 3}, lay)); };
  return s;
}

Vec bell_minus_interface(int right_pair_state) {
  if (right_pair_state < 0 || right_pair_state > 3) throw ContractViolation("bell_minus_interface: index 0..3");
  const SpaceLayout lay = qubits(6);
  const int s4 = right_pair_state >> 1, s5 = right_pair_state & 1;
  Vec v = (basis_state(lay, {0, 0, 1, 0, s4, s5}) - basis_state(lay, {0, 0, 0, 1, s4, s5})) / std::numbers::sqrt2;
  return v;
}

InterferenceSummary interference_rectification(const InterferenceParams& p) {
  const Scenario f = build_interference_diode(p, Bias::forward);
  const Scenario r = build_interference_diode(p, Bias::reverse);
  const Mat rf = steady_state_direct(f.static_liouvillian());
  const Mat rr = steady_state_direct(r.static_liouvillian());
  InterferenceSummary out;
  out.J_f = f.observables.at("J")(rf);
  out.J_r = r.observables.at("J")(rr);
  const Rectification rc = rectification_and_contrast(out.J_f, out.J_r);
  out.R = rc.R;
  out.C = rc.C;
  out.P_minus_reverse = r.observables.at("P_minus")(rr);
  out.concurrence_reverse = r.observables.at("concurrence")(rr);
  return out;
}

InterferenceGlobal build_interference_global(const InterferenceGlobalParams& p, Bias bias) {
  if (bias == Bias::none) throw ContractViolation("build_interference_global: bias must be forward or reverse");
  InterferenceGlobal g;
  g.layout = qubits(6);
  const SpaceLayout& lay = g.layout;
  Mat field = Mat::Zero(lay.total(), lay.total());
  for (int s = 0; s < 6; ++s) field += embed(sigma_z(), s, lay);
  g.h = interference_hamiltonian(lay, p.delta, p.J34, p.J) +
        p.h * (embed(sigma_z(), 0, lay) + embed(sigma_z(), 1, lay)) + p.h_offset * field;
  const bool fwd = bias == Bias::forward;
  g.left = {embed(sigma_x(), 0, lay), ohmic(p.gamma_q, 1.0, fwd ? p.T_hot : p.T_cold), p.cutoff};
  g.right = {embed(sigma_x(), 5, lay), ohmic(p.gamma_q, 1.0, fwd ? p.T_cold : p.T_hot), p.cutoff};
  return g;
}

HeatSummary interference_global_rectification(const InterferenceGlobalParams& p) {
  HeatSummary out{};
  double k[2];
  out.conservation = 0.0;
  for (int b = 0; b < 2; ++b) {
    const InterferenceGlobal g = build_interference_global(p, b == 0 ? Bias::forward : Bias::reverse);
    const Mat rho = steady_state_direct(global_liouvillian(g.h, {g.left, g.right}));
    const double kl = heat_current(g.h, global_dissipator(g.h, g.left).apply(rho));
    const double kr = heat_current(g.h, global_dissipator(g.h, g.right).apply(rho));
    k[b] = kl;
    out.conservation = std::max(out.conservation, std::abs(kl + kr));
  }
  out.K_f = k[0];
  out.K_r = k[1];
  out.R = rectification_and_contrast(out.K_f, out.K_r).R;
  return out;
}

HeatSummary interference_local_thermal_rectification(const InterferenceGlobalParams& p) {
  HeatSummary out{};
  double k[2];
  out.conservation = 0.0;
  const double w1 = 2.0 * (p.h + p.h_offset), w6 = 2.0 * p.h_offset;
  for (int b = 0; b < 2; ++b) {
    const InterferenceGlobal g = build_interference_global(p, b == 0 ? Bias::forward : Bias::reverse);
    const double t1 = b == 0 ? p.T_hot : p.T_cold, t6 = b == 0 ? p.T_cold : p.T_hot;
    auto baths_on = [&](int site, double w, double T) {
      const double n = bose(w, T);
      return std::vector<LocalBath>{{embed(sigma_minus(), site, g.layout), p.gamma_q * w * (1 + n)},
                                    {embed(sigma_plus(), site, g.layout), p.gamma_q * w * n}};
    };
    const auto left = baths_on(0, w1, t1), right = baths_on(5, w6, t6);
    std::vector<LocalBath> all = left;
    all.insert(all.end(), right.begin(), right.end());
    const Mat rho = steady_state_direct(local_liouvillian(g.h, all));
    const Mat zero = Mat::Zero(g.h.rows(), g.h.cols());
    const double kl = heat_current(g.h, local_liouvillian(zero, left).apply(rho));
    const double kr = heat_current(g.h, local_liouvillian(zero, right).apply(rho));
    k[b] = kl;
    out.conservation = std::max(out.conservation, std::abs(kl + kr));
  }
  out.K_f = k[0];
  out.K_r = k[1];
  out.R = rectification_and_contrast(out.K_f, out.K_r).R;
  return out;
}

// ---------------------------------------------------------------- Wheatstone bridge

Scenario build_wheatstone(const WheatstoneParams& p) {
  Scenario s;
  s.id = "wheatstone";
  s.layout = qubits(4);
  const SpaceLayout& lay = s.layout;
  s.hamiltonian.constant = p.h1 * embed(sigma_z(), 0, lay) + p.h2 * embed(sigma_z(), 1, lay) +
                           p.Jx * xx_exchange(lay, 0, 1) + p.JC * xx_exchange(lay, 0, 2) +
                           p.J23 * xx_exchange(lay, 1, 2) + p.J * xx_exchange(lay, 1, 3) +
                           p.J * xx_exchange(lay, 2, 3);
  s.baths.push_back({{embed(sigma_minus(), 0, lay), p.g1}, {}});
  s.baths.push_back({{embed(sigma_minus(), 3, lay), p.g4 * (p.n + 1)}, {}});
  s.baths.push_back({{embed(sigma_plus(), 3, lay), p.g4 * p.n}, {}});
  const Mat up = embed(ketbra(2, 1, 1), 0, lay);
  const double g1 = p.g1;
  s.observables["current"] = [up, g1](const Mat& rho) { return g1 * expect(up, rho); };
  const InterfaceBasis b = wheatstone_interface(p.h2, p.J23);
  const SpaceLayout l = lay;
  auto pop = [l](const Vec& v) {
    return [l, v](const Mat& rho) { return pair_population(partial_trace(rho, {1, 2}, l), v); };
  };
  s.observables["P_minus"] = pop(b.minus);
  s.observables["P_plus"] = pop(b.plus);
  s.observables["P_dd"] = pop(b.dd);
  s.observables["P_uu"] = pop(b.uu);
  return s;
}

InterfaceBasis wheatstone_interface(double h2, double J23) {
  const double e = h2 / (4.0 * J23);
  return {pair_state(0, 0, 0, 1), psi_plus() + e * psi_minus(), psi_minus() - e * psi_plus(),
          pair_state(1, 0, 0, 0)};
}

WheatstonePoint wheatstone_point(const WheatstoneParams& p) {
  const Scenario s = build_wheatstone(p);
  WheatstonePoint w;
  w.rho = steady_state_direct(s.static_liouvillian());
  w.P_minus = s.observables.at("P_minus")(w.rho);
  w.P_plus = s.observables.at("P_plus")(w.rho);
  w.P_dd = s.observables.at("P_dd")(w.rho);
  w.P_uu = s.observables.at("P_uu")(w.rho);
  w.current = s.observables.at("current")(w.rho);
  return w;
}

// ---------------------------------------------------------------- GMR

Scenario build_gmr(const GmrParams& p) {
  if (p.chains.empty()) throw ContractViolation("build_gmr: no chain");
  int n = 2;
  for (const auto& c : p.chains) {
    if (c.spins < 1) throw ContractViolation("build_gmr: empty chain");
    n += c.spins;
  }
  if (n > p.max_sites) throw CapacityError("build_gmr: " + std::to_string(n) + " spins exceed the cap");
  if (p.f < -1 || p.f > 1) throw ContractViolation("build_gmr: f outside [-1, 1]");
  Scenario s;
  s.id = "gmr";
  s.layout = qubits(n);
  const SpaceLayout& lay = s.layout;
  auto xxz = [&](int i, int j, double d) { return xx_exchange(lay, i, j) + d * zz_coupling(lay, i, j); };
  Mat h = p.J * xxz(0, 1, p.Delta_J);
  int site = 1;
  for (std::size_t c = 0; c < p.chains.size(); ++c) {
    const GmrChain& ch = p.chains[c];
    for (int k = 0; k < ch.spins; ++k) {
      h += p.h * embed(sigma_z(), site + k, lay);
      if (k + 1 < ch.spins) h += ch.U * xxz(site + k, site + k + 1, ch.Delta_U);
    }
    site += ch.spins;
    h += p.J * xxz(site - 1, site, p.Delta_J);  // to the next chain or to R
  }
  s.hamiltonian.constant = h;
  add_spin_bath(s.baths, lay, 0, p.gamma, 0.5 * (1 + p.f));
  add_spin_bath(s.baths, lay, n - 1, p.gamma, 0.5 * (1 - p.f));
  const SpaceLayout l = lay;
  const double J = p.J;
  s.observables["current"] = [l, J](const Mat& rho) { return spin_current(rho, l, 0, 1, J); };
  return s;
}

double gmr_current(const GmrParams& p) {
  const Scenario s = build_gmr(p);
  return s.observables.at("current")(steady_state_direct(s.static_liouvillian()));
}

std::vector<double> gmr_resonances(int n1, double U1, double Delta_U) {
  if (n1 < 2) throw ContractViolation("gmr_resonances: n1 must be >= 2");
  std::vector<double> out;
  for (int k = 1; k <= n1; ++k) {
    double v = 2.0 * U1 * std::cos(std::numbers::pi * k / (n1 + 1));
    if (std::abs(v) < 1e-12 * std::abs(U1)) v = 0.0;
    out.push_back(v);
  }
  if (n1 == 3 && Delta_U != 0.0) out.push_back(2.0 * std::numbers::sqrt2 * (1.0 + Delta_U * Delta_U / 16.0) * U1);
  std::sort(out.begin(), out.end());
  return out;
}

double gmr_analytic_current_n2(double h, double U1, double J) {
  const double u2 = U1 * U1, h2 = h * h, j2 = J * J;
  const double num = 128.0 * u2 * (h2 + 17.0 * u2) + 8.0 * 17.0 * u2 * j2;
  const double den = 256.0 * (u2 / j2) * (h2 - u2) * (h2 - u2) + 32.0 * (33.0 * h2 + 129.0 * u2) * u2 +
                     513.0 * u2 * j2 + 16.0 * j2 * j2;
  return num / den * J;
}

}  // namespace oqs
