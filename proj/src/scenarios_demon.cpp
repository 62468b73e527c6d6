#include <algorithm>
#include <cmath>
#include <numbers>

#include "oqs/scenarios.hpp"

namespace oqs {

namespace {

constexpr double kPi = std::numbers::pi;

enum class Pulse { none, yd_minus, cz1, yd_plus, ym_minus, cz2, ym_plus };

// Offsets of pulse edges inside one operation.
std::vector<double> pulse_edges(const DemonProtocol& p) {
  const double y = p.tau_y, c = p.tau_cz;
  return {0.0, y, y + c, 2 * y + c, 3 * y + c, 3 * y + 2 * c, 4 * y + 2 * c};
}

// Local time inside the current operation, or < 0 outside any cycle.
double local_time(const DemonProtocol& p, double t) {
  if (t < 0) return -1.0;
  const double c = std::floor(t / p.period);
  if (c >= p.cycles) return -1.0;
  return t - c * p.period;
}

Pulse pulse_at(const DemonProtocol& p, double t) {
  const double s = local_time(p, t);
  if (s < 0) return Pulse::none;
  const auto e = pulse_edges(p);
  for (int k = 0; k < 6; ++k)
    if (s >= e[k] && s < e[k + 1]) return static_cast<Pulse>(k + 1);
  return Pulse::none;
}

void check_protocol(const DemonProtocol& p) {
  if (!(p.tau_y > 0) || !(p.tau_cz > 0) || p.cycles < 1 || p.reset_rate < 0)
    throw ContractViolation("DemonProtocol: invalid gate times, cycle count or reset rate");
  if (p.period < p.operation_time()) throw ContractViolation("DemonProtocol: period shorter than one operation");
}

// Generator of a Y rotation on levels (lo, hi): i|hi><lo| - i|lo><hi|.
Mat y_generator(int dim, int lo, int hi) { return I1 * ketbra(dim, hi, lo) - I1 * ketbra(dim, lo, hi); }

// Control terms on a layout whose qutrit is at site m and demon qubit at site d.
void add_controls(Scenario& s, const DemonProtocol& protocol, int m, int d) {
  const SpaceLayout& lay = s.layout;
  const Mat ym = embed(y_generator(3, 1, 2), m, lay);
  const Mat yd = embed(y_generator(2, 0, 1), d, lay);
  const Mat cz = embed(ketbra(3, 2, 2), m, lay) * embed(ketbra(2, 1, 1), d, lay);
  const DemonProtocol p = protocol;
  s.hamiltonian.terms.push_back({[p](double t) { return cd(p.a_ym(t)); }, ym});
  s.hamiltonian.terms.push_back({[p](double t) { return cd(p.a_yd(t)); }, yd});
  s.hamiltonian.terms.push_back({[p](double t) { return cd(p.a_cz(t)); }, cz});
  if (p.reset_rate > 0)
    s.baths.push_back({{embed(sigma_minus(), d, lay), p.reset_rate}, [p](double t) { return p.gamma_d(t); }});
  s.breakpoints = p.breakpoints();
}

void add_thermal_qubit(Scenario& s, int site, double gamma, double n) {
  s.baths.push_back({{embed(sigma_minus(), site, s.layout), gamma * (n + 1)}, {}});
  s.baths.push_back({{embed(sigma_plus(), site, s.layout), gamma * n}, {}});
}

// Exchange part of the qutrit-qubit Hamiltonian on layout (M, C, H, ...).
Mat demon_exchange(const SpaceLayout& lay, double J) {
  const Mat c = embed(sigma_minus(), 1, lay) * embed(ketbra(3, 2, 0), 0, lay);
  const Mat h = embed(ketbra(3, 0, 1), 0, lay) * embed(sigma_plus(), 2, lay);
  return std::numbers::sqrt2 * J * (c + c.adjoint()) + J * (h + h.adjoint());
}

Mat mch_steady_state(const MaxwellParams& p) {
  const SpaceLayout lay({3, 2, 2});
  Scenario s;
  s.id = "maxwell_mch";
  s.layout = lay;
  s.hamiltonian.constant = demon_exchange(lay, p.J);
  add_thermal_qubit(s, 1, p.gamma, p.n_cold());
  add_thermal_qubit(s, 2, p.gamma, p.n_hot());
  return steady_state_direct(s.static_liouvillian());
}

}  // namespace

double DemonProtocol::a_ym(double t) const {
  const Pulse k = pulse_at(*this, t);
  if (k == Pulse::ym_minus) return -kPi / (4 * tau_y);
  if (k == Pulse::ym_plus) return kPi / (4 * tau_y);
  return 0.0;
}

double DemonProtocol::a_yd(double t) const {
  const Pulse k = pulse_at(*this, t);
  if (k == Pulse::yd_minus) return -kPi / (4 * tau_y);
  if (k == Pulse::yd_plus) return kPi / (4 * tau_y);
  return 0.0;
}

double DemonProtocol::a_cz(double t) const {
  const Pulse k = pulse_at(*this, t);
  return k == Pulse::cz1 || k == Pulse::cz2 ? kPi / tau_cz : 0.0;
}

double DemonProtocol::gamma_d(double t) const {
  if (t < 0) return 0.0;
  const double c = std::floor(t / period);
  const double s = t - c * period;
  const double op = operation_time();
  if (c >= cycles) return reset_window < 0 ? reset_rate : 0.0;
  if (s < op) return 0.0;
  return reset_window < 0 || s < op + reset_window ? reset_rate : 0.0;
}

std::vector<double> DemonProtocol::breakpoints() const {
  std::vector<double> out;
  const auto e = pulse_edges(*this);
  for (int c = 0; c < cycles; ++c) {
    const double t0 = c * period;
    for (double x : e) out.push_back(t0 + x);
    if (reset_window >= 0) out.push_back(t0 + operation_time() + reset_window);
    out.push_back(t0 + period);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double MaxwellParams::n_cold() const { return 1.0 / std::expm1(omega_c / T_c); }
double MaxwellParams::n_hot() const { return 1.0 / std::expm1(omega_h / T_h); }

Scenario build_maxwell(const MaxwellParams& p, const DemonProtocol& protocol) {
  check_protocol(protocol);
  Scenario s;
  s.id = "maxwell";
  s.layout = SpaceLayout({3, 2, 2, 2}, {"M", "C", "H", "D"});
  const SpaceLayout& lay = s.layout;
  s.hamiltonian.constant = demon_exchange(lay, p.J);
  add_thermal_qubit(s, 1, p.gamma, p.n_cold());
  add_thermal_qubit(s, 2, p.gamma, p.n_hot());
  add_controls(s, protocol, 0, 3);

  const Mat c = embed(sigma_minus(), 1, lay) * embed(ketbra(3, 2, 0), 0, lay);
  const Mat h = embed(ketbra(3, 0, 1), 0, lay) * embed(sigma_plus(), 2, lay);
  const Mat s_c = -std::numbers::sqrt2 * I1 * p.J * (c - c.adjoint());
  const Mat s_h = -I1 * p.J * (h - h.adjoint());
  s.observables["J_C"] = [s_c](const Mat& rho) { return expect(s_c, rho); };
  s.observables["J_H"] = [s_h](const Mat& rho) { return expect(s_h, rho); };
  const Mat p1c = embed(ketbra(2, 1, 1), 1, lay), p2m = embed(ketbra(3, 2, 2), 0, lay),
            p1h = embed(ketbra(2, 1, 1), 2, lay), p1d = embed(ketbra(2, 1, 1), 3, lay);
  s.observables["P_1C"] = [p1c](const Mat& rho) { return expect(p1c, rho); };
  s.observables["P_2M"] = [p2m](const Mat& rho) { return expect(p2m, rho); };
  s.observables["P_1H"] = [p1h](const Mat& rho) { return expect(p1h, rho); };
  s.observables["P_1D"] = [p1d](const Mat& rho) { return expect(p1d, rho); };
  const SpaceLayout l = lay;
  s.observables["S_CMH"] = [l](const Mat& rho) { return von_neumann_entropy(partial_trace(rho, {0, 1, 2}, l)); };
  s.observables["S_D"] = [l](const Mat& rho) { return von_neumann_entropy(partial_trace(rho, {3}, l)); };
  s.observables["S_tot"] = [](const Mat& rho) { return von_neumann_entropy(rho); };
  return s;
}

Scenario build_maxwell_markov(const MaxwellParams& p, const DemonProtocol& protocol) {
  check_protocol(protocol);
  Scenario s;
  s.id = "maxwell_markov";
  s.layout = SpaceLayout({3, 2}, {"M", "D"});
  const SpaceLayout& lay = s.layout;
  s.hamiltonian.constant = Mat::Zero(lay.total(), lay.total());
  const MaxwellMarkovRates r = maxwell_markov_rates(p.J, p.gamma, p.n_cold(), p.n_hot());
  for (const auto& b : maxwell_markov_baths(r, lay, 0)) s.baths.push_back({b, {}});
  add_controls(s, protocol, 0, 1);
  const Mat p0 = embed(ketbra(3, 0, 0), 0, lay), p1 = embed(ketbra(3, 1, 1), 0, lay),
            p2 = embed(ketbra(3, 2, 2), 0, lay);
  s.observables["J_C"] = [r, p0, p2](const Mat& rho) {
    return r.cold_up * expect(p0, rho) - r.cold_down * expect(p2, rho);
  };
  s.observables["J_H"] = [r, p0, p1](const Mat& rho) {
    return r.hot_down * expect(p1, rho) - r.hot_up * expect(p0, rho);
  };
  s.observables["P_2M"] = [p2](const Mat& rho) { return expect(p2, rho); };
  return s;
}

Mat maxwell_initial_state(const MaxwellParams& p) { return kron(mch_steady_state(p), ketbra(2, 0, 0)); }

Mat maxwell_markov_initial_state(const MaxwellParams& p) {
  const SpaceLayout lay({3});
  const MaxwellMarkovRates r = maxwell_markov_rates(p.J, p.gamma, p.n_cold(), p.n_hot());
  const Mat m = steady_state_direct(local_liouvillian(Mat::Zero(3, 3), maxwell_markov_baths(r, lay, 0)));
  return kron(m, ketbra(2, 0, 0));
}

double maxwell_instant_transfer(const MaxwellParams& p) {
  return expect(embed(ketbra(3, 2, 2), 0, SpaceLayout({3, 2, 2})), mch_steady_state(p));
}

TransferredExcitations transferred_excitations(const Trajectory& tr, const DemonProtocol& protocol,
                                               const std::string& cold_key, const std::string& hot_key) {
  const auto& t = tr.times;
  const auto& jc = tr.observables.at(cold_key);
  const auto& jh = tr.observables.at(hot_key);
  if (jc.size() != t.size() || jh.size() != t.size())
    throw ContractViolation("transferred_excitations: observable and time grids differ");
  TransferredExcitations out;
  const double tol = 1e-9 * protocol.period;
  auto locate = [&](double x) -> std::size_t {
    auto it = std::lower_bound(t.begin(), t.end(), x - tol);
    if (it == t.end() || std::abs(*it - x) > tol)
      throw ContractViolation("transferred_excitations: grid misses a cycle boundary");
    return static_cast<std::size_t>(it - t.begin());
  };
  for (int c = 0; c < protocol.cycles; ++c) {
    const std::size_t a = locate(c * protocol.period), b = locate((c + 1) * protocol.period);
    double xc = 0, xh = 0;
    for (std::size_t k = a; k < b; ++k) {
      const double dt = t[k + 1] - t[k];
      xc += 0.5 * dt * (jc[k] + jc[k + 1]);
      xh += 0.5 * dt * (jh[k] + jh[k + 1]);
    }
    out.cold.push_back(xc);
    out.hot.push_back(xh);
  }
  out.X_cold = out.cold.empty() ? 0.0 : out.cold.back();
  out.X_hot = out.hot.empty() ? 0.0 : out.hot.back();
  out.J_av = out.X_cold / protocol.period;
  return out;
}

std::vector<double> demon_sample_grid(const DemonProtocol& protocol, int per_cycle) {
  if (per_cycle < 1) throw ContractViolation("demon_sample_grid: per_cycle must be positive");
  std::vector<double> out = protocol.breakpoints();
  for (int c = 0; c < protocol.cycles; ++c)
    for (int k = 0; k <= per_cycle; ++k) out.push_back(protocol.period * (c + double(k) / per_cycle));
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double x : out)
    if (uniq.empty() || x - uniq.back() > 1e-12 * protocol.period) uniq.push_back(x);
  return uniq;
}

DoubleOperation maxwell_double_operation(const MaxwellParams& p, double spacing, double tau_y, double tau_cz) {
  DemonProtocol protocol;
  protocol.tau_y = tau_y;
  protocol.tau_cz = tau_cz;
  protocol.period = spacing;
  protocol.cycles = 2;
  const Scenario s = build_maxwell(p, protocol);
  const Mat rho0 = maxwell_initial_state(p);
  const double t_end = spacing + protocol.operation_time();
  StepOptions opt;
  opt.atol = opt.rtol = 1e-10;
  const Trajectory tr = propagate_dense(rho0, s.liouvillian(), 0.0, t_end, {{t_end}, {}, true}, opt);
  const Mat& rho = tr.states.back();
  const auto& obs = s.observables;
  const double before = obs.at("P_1C")(rho0) + obs.at("P_2M")(rho0);
  return {before - obs.at("P_1C")(rho) - obs.at("P_2M")(rho), t_end};
}

RepeatedOperation maxwell_repeated(const MaxwellParams& p, const DemonProtocol& protocol, bool markov,
                                   int per_cycle) {
  const Scenario s = markov ? build_maxwell_markov(p, protocol) : build_maxwell(p, protocol);
  const Mat rho0 = markov ? maxwell_markov_initial_state(p) : maxwell_initial_state(p);
  RecordSpec rec;
  rec.times = demon_sample_grid(protocol, per_cycle);
  rec.observables["J_C"] = s.observables.at("J_C");
  rec.observables["J_H"] = s.observables.at("J_H");
  rec.keep_states = false;
  StepOptions opt;
  opt.atol = opt.rtol = 1e-9;
  const Trajectory tr = propagate_dense(rho0, s.liouvillian(), 0.0, protocol.end_time(), rec, opt);
  RepeatedOperation out;
  out.X = transferred_excitations(tr, protocol);
  return out;
}

}  // namespace oqs
