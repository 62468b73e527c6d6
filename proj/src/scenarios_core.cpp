#include <cmath>
#include <limits>

#include "oqs/scenarios.hpp"

namespace oqs {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<CatalogEntry> make_catalog() {
  std::vector<CatalogEntry> c;
  c.push_back({"two_level",
               "Two-level system between two thermal baths",
               {{"g_L", 0.1}, {"g_R", 1.0}, {"n_H", 0.5}, {"n_C", 0.0}},
               {},
               {"fig1_3"},
               {"J_f", "J_r", "R", "C", "R_closed", "P1_f", "P1_r", "P1_f_classical"}});
  c.push_back({"qutrit_diode",
               "Dark-state qutrit diode between two damped oscillators",
               {{"dw", 300.0}, {"J", 1.0}, {"Jp", 0.5}, {"Gamma", 10.0}, {"n_H", 0.5}, {"n_C", 0.0},
                {"harmonics", 3.0}},
               {},
               {"fig3_2", "fig3_3"},
               {"J_f", "J_r", "W_f", "W_r", "R", "C", "P_dark_f", "P_dark_r", "R_markov"}});
  c.push_back({"fwbr",
               "Bridge of four qutrit diodes, reduced to its two halves",
               {{"dw", 300.0}, {"J", 1.0}, {"Jp", 0.5}, {"Gamma", 10.0}, {"T_L", 1.0}, {"T_R", 0.1},
                {"gamma_dec", 1e-3}, {"levels_M1", 8.0}, {"levels_M2", 7.0}, {"harmonics", 3.0}},
               {},
               {"fig3_6"},
               {"T_M1", "T_M2", "n_M1", "n_M2", "F_L_M1", "F_R_M2"}});
  c.push_back({"interference_local",
               "Six-spin interference rectifier with local spin baths",
               {{"Delta", 5.0}, {"delta", 0.01}, {"J34", kNaN}, {"gamma", 1.0}, {"lambda_hot", 0.5},
                {"lambda_cold", 0.0}},
               {{"J34", "-(Delta + 1.3)"}},
               {"fig4_2", "fig4_3", "fig4_4"},
               {"J_f", "J_r", "R", "C", "P_minus_r", "concurrence_r"}});
  c.push_back({"interference_global",
               "Six-spin interference rectifier with global Ohmic baths",
               {{"h", 5.0}, {"delta", 0.01}, {"J34", kNaN}, {"gamma_Q", 1.0}, {"T_C", 0.1}, {"T_H", 10.1},
                {"h_offset", 0.0}, {"cutoff", 0.1}},
               {{"J34", "h + 1.3"}},
               {"fig4_7", "fig4_8"},
               {"K_f", "K_r", "R_Q", "conservation"}});
  c.push_back({"wheatstone",
               "Four-spin Wheatstone bridge sensing an unknown coupling",
               {{"Jx", 1.0}, {"JC", 1.0}, {"J", 1.0}, {"J23", 20.0}, {"h1", 20.0}, {"h2", 0.5},
                {"gamma1", 1.0}, {"gamma4", 10.0}, {"n", 0.5}},
               {},
               {"fig5_2", "fig5_3", "fig5_4", "fig5_5", "fig5_6"},
               {"P_minus", "P_dd", "P_plus", "P_uu", "current", "qfi", "cfi_minus", "Lambda", "Jx0", "JC0",
                "maxF_approx"}});
  c.push_back({"gmr",
               "Strongly coupled spin segments between spin reservoirs",
               {{"n1", 2.0}, {"U1", 10.0}, {"n2", 0.0}, {"U2", 10.0}, {"Delta_U", 0.0}, {"Delta_J", kNaN},
                {"h", 0.0}, {"gamma", 1.0}, {"f", 0.5}},
               {{"Delta_J", "Delta_U"}},
               {"fig6_2", "fig6_3", "fig6_4", "fig6_6"},
               {"current", "current_analytic"}});
  c.push_back({"maxwell",
               "Demon-operated qutrit between two damped qubit baths",
               {{"omega_C", 3500.0}, {"omega_H", 2000.0}, {"T_C", 2000.0}, {"T_H", 3000.0}, {"J", 1.0},
                {"gamma", 1e-3}, {"gamma_D", 8.0}, {"tau_Y", 0.02}, {"tau_CZ", 0.1}, {"T", 1.0},
                {"cycles", 100.0}, {"markov", 0.0}},
               {},
               {"fig7_4", "fig7_5", "fig7_6"},
               {"X_C", "X_H", "J_av", "X_ss_inst"}});
  c.push_back({"bose_hubbard",
               "Adiabatic preparation on a Bose-Hubbard lattice",
               {{"rows", 2.0}, {"cols", 2.0}, {"levels", 4.0}, {"mu", 0.5}, {"U", 1.0}, {"J", 0.05},
                {"decoherence", 0.0}, {"gamma1_inv", 15000.0}, {"gamma2_inv", 3000.0}, {"disorder", 0.0},
                {"disorder_spread", 0.05}},
               {},
               {"fig8_5", "fig8_6"},
               {"n", "a", "kappa", "fidelity"},
               true});
  return c;
}
}  // namespace

const std::vector<CatalogEntry>& scenario_catalog() {
  static const std::vector<CatalogEntry> catalog = make_catalog();
  return catalog;
}

ScenarioConfig default_config(const std::string& id) {
  for (const auto& e : scenario_catalog())
    if (e.id == id) return {id, e.defaults, Bias::none, 0};
  throw ContractViolation("unknown scenario id: " + id);
}

double ScenarioConfig::get(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw ContractViolation("scenario " + id + ": unknown parameter " + name);
  return it->second;
}

void ScenarioConfig::set(const std::string& name, double value) {
  auto it = params.find(name);
  if (it == params.end()) throw ContractViolation("scenario " + id + ": unknown parameter " + name);
  it->second = value;
}

DrivenLiouvillian Scenario::liouvillian() const {
  return time_dependent_liouvillian(hamiltonian, baths, breakpoints);
}

Liouvillian Scenario::static_liouvillian() const {
  if (!hamiltonian.terms.empty()) throw ContractViolation("scenario " + id + ": Hamiltonian is time dependent");
  std::vector<LocalBath> local;
  for (const auto& b : baths) {
    if (b.rate_of_t) throw ContractViolation("scenario " + id + ": bath is time dependent");
    local.push_back(b.bath);
  }
  return local_liouvillian(hamiltonian.constant, local);
}

// ---------------------------------------------------------------- two-level

TwoLevel build_two_level(double g_l, double g_r, double n_l, double n_r) {
  if (g_l < 0 || g_r < 0 || n_l < 0 || n_r < 0) throw ContractViolation("build_two_level: negative rate");
  TwoLevel t{};
  t.g_l = g_l;
  t.g_r = g_r;
  t.n_l = n_l;
  t.n_r = n_r;
  Scenario& s = t.quantum;
  s.id = "two_level";
  s.layout = SpaceLayout({2}, {"q"});
  s.hamiltonian.constant = 0.5 * sigma_z();
  s.baths = {{{sigma_minus(), g_l * (1 + n_l)}, {}},
             {{sigma_plus(), g_l * n_l}, {}},
             {{sigma_minus(), g_r * (1 + n_r)}, {}},
             {{sigma_plus(), g_r * n_r}, {}}};
  const Mat p1 = ketbra(2, 1, 1);
  s.observables["P1"] = [p1](const Mat& rho) { return (p1 * rho).trace().real(); };
  s.observables["J"] = [g_l, n_l](const Mat& rho) {
    return g_l * n_l * rho(0, 0).real() - g_l * (1 + n_l) * rho(1, 1).real();
  };
  RMat r = RMat::Zero(2, 2);
  r(1, 0) = g_l * n_l + g_r * n_r;
  r(0, 1) = g_l * (1 + n_l) + g_r * (1 + n_r);
  t.rates = rate_matrix(r);
  return t;
}

double two_level_current(double g_l, double g_r, double n_l, double n_r) {
  return (n_l - n_r) * g_l * g_r / (g_l * (1 + 2 * n_l) + g_r * (1 + 2 * n_r));
}

double two_level_rectification(double g_l, double g_r, double n_hot, double n_cold) {
  return (g_l * (1 + 2 * n_cold) + g_r * (1 + 2 * n_hot)) / (g_l * (1 + 2 * n_hot) + g_r * (1 + 2 * n_cold));
}

// ---------------------------------------------------------------- global vs local

GlobalLocalPair build_two_qubit_comparison(double omega_q, double Delta, double Gamma, double epsilon, double J) {
  const SpaceLayout lay({2, 2});
  const double w1 = omega_q + epsilon, w2 = omega_q;
  const double T1 = w1, T2 = 0.2 * w2;
  auto op = [&](const Mat& m, int s) { return embed(m, s, lay); };
  Mat h = 0.5 * w1 * op(sigma_z(), 0) + 0.5 * w2 * op(sigma_z(), 1) +
          J * (op(sigma_plus(), 0) * op(sigma_minus(), 1) + op(sigma_minus(), 0) * op(sigma_plus(), 1) +
               0.25 * Delta * op(sigma_z(), 0) * op(sigma_z(), 1));
  std::vector<GlobalBath> baths{{op(sigma_x(), 0), ohmic(Gamma, w1, T1)}, {op(sigma_x(), 1), ohmic(Gamma, w2, T2)}};
  std::vector<LocalBath> local{{op(sigma_minus(), 0), ohmic_rate(w1, Gamma, w1, T1)},
                               {op(sigma_plus(), 0), ohmic_rate(-w1, Gamma, w1, T1)},
                               {op(sigma_minus(), 1), ohmic_rate(w2, Gamma, w2, T2)},
                               {op(sigma_plus(), 1), ohmic_rate(-w2, Gamma, w2, T2)}};
  return {h, global_liouvillian(h, baths), secular_global_liouvillian(h, baths), local_liouvillian(h, local)};
}

}  // namespace oqs
