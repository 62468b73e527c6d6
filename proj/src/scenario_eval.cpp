#include <cmath>

#include "oqs/scenarios.hpp"

namespace oqs {

namespace {

using Results = std::map<std::string, double>;

double derived(const ScenarioConfig& c, const std::string& name, double fallback) {
  const double v = c.get(name);
  return std::isnan(v) ? fallback : v;
}

int as_int(const ScenarioConfig& c, const std::string& name) {
  const double v = c.get(name);
  if (v != std::round(v)) throw ContractViolation("scenario " + c.id + ": " + name + " must be an integer");
  return static_cast<int>(v);
}

Results eval_two_level(const ScenarioConfig& c) {
  const double gl = c.get("g_L"), gr = c.get("g_R"), nh = c.get("n_H"), nc = c.get("n_C");
  const TwoLevel f = build_two_level(gl, gr, nh, nc), r = build_two_level(gl, gr, nc, nh);
  const Mat rf = steady_state_direct(f.quantum.static_liouvillian());
  const Mat rr = steady_state_direct(r.quantum.static_liouvillian());
  Results out;
  out["J_f"] = f.quantum.observables.at("J")(rf);
  out["J_r"] = r.quantum.observables.at("J")(rr);
  const Rectification rc = rectification_and_contrast(out["J_f"], out["J_r"]);
  out["R"] = rc.R;
  out["C"] = rc.C;
  out["R_closed"] = two_level_rectification(gl, gr, nh, nc);
  out["P1_f"] = f.quantum.observables.at("P1")(rf);
  out["P1_r"] = r.quantum.observables.at("P1")(rr);
  out["P1_f_classical"] = rate_steady_state(f.rates)(1);
  return out;
}

Results eval_qutrit(const ScenarioConfig& c) {
  QutritDiodeParams p;
  p.dw = c.get("dw");
  p.J = c.get("J");
  p.Jp = c.get("Jp");
  p.Gamma = c.get("Gamma");
  p.n_hot = c.get("n_H");
  p.n_cold = c.get("n_C");
  p.harmonics = as_int(c, "harmonics");
  const QutritDiodeSummary s = qutrit_diode_rectification(p);
  Results out{{"J_f", s.J_f},          {"J_r", s.J_r},
              {"W_f", s.forward.work}, {"W_r", s.reverse.work},
              {"R", s.R},              {"C", s.C},
              {"P_dark_f", s.forward.P_dark}, {"P_dark_r", s.reverse.P_dark}};
  out["R_markov"] = qutrit_markov_model({p.dw, p.J, p.Jp, p.Gamma, p.n_hot, p.n_cold}).R;
  return out;
}

Results eval_fwbr(const ScenarioConfig& c) {
  FwbrParams p;
  p.dw = c.get("dw");
  p.J = c.get("J");
  p.Jp = c.get("Jp");
  p.Gamma = c.get("Gamma");
  p.T_left = c.get("T_L");
  p.T_right = c.get("T_R");
  p.gamma_dec = c.get("gamma_dec");
  p.levels_m1 = as_int(c, "levels_M1");
  p.levels_m2 = as_int(c, "levels_M2");
  p.harmonics = as_int(c, "harmonics");
  const FwbrResult r = run_fwbr(p);
  return {{"T_M1", r.T_m1}, {"T_M2", r.T_m2}, {"n_M1", r.n_m1}, {"n_M2", r.n_m2},
          {"F_L_M1", r.fidelity_left_m1}, {"F_R_M2", r.fidelity_right_m2}};
}

Results eval_interference_local(const ScenarioConfig& c) {
  InterferenceParams p;
  p.Delta = c.get("Delta");
  p.delta = c.get("delta");
  p.J34 = derived(c, "J34", interference_default_J34(p.Delta));
  p.gamma = c.get("gamma");
  p.lambda_hot = c.get("lambda_hot");
  p.lambda_cold = c.get("lambda_cold");
  const InterferenceSummary s = interference_rectification(p);
  return {{"J_f", s.J_f}, {"J_r", s.J_r}, {"R", s.R}, {"C", s.C},
          {"P_minus_r", s.P_minus_reverse}, {"concurrence_r", s.concurrence_reverse}};
}

Results eval_interference_global(const ScenarioConfig& c) {
  InterferenceGlobalParams p;
  p.h = c.get("h");
  p.delta = c.get("delta");
  p.J34 = derived(c, "J34", p.h + 1.3);
  p.gamma_q = c.get("gamma_Q");
  p.T_cold = c.get("T_C");
  p.T_hot = c.get("T_H");
  p.h_offset = c.get("h_offset");
  p.cutoff = c.get("cutoff");
  const HeatSummary s = interference_global_rectification(p);
  return {{"K_f", s.K_f}, {"K_r", s.K_r}, {"R_Q", s.R}, {"conservation", s.conservation}};
}

Results eval_wheatstone(const ScenarioConfig& c) {
  WheatstoneParams p;
  p.Jx = c.get("Jx");
  p.JC = c.get("JC");
  p.J = c.get("J");
  p.J23 = c.get("J23");
  p.h1 = c.get("h1");
  p.h2 = c.get("h2");
  p.g1 = c.get("gamma1");
  p.g4 = c.get("gamma4");
  p.n = c.get("n");
  const WheatstonePoint w = wheatstone_point(p);
  const WheatstoneMarkovResult m = wheatstone_markov_model(p);
  auto at = [p](double jx) {
    WheatstoneParams q = p;
    q.Jx = jx;
    return q;
  };
  const FisherResult qfi =
      qfi_diagonal([&](double jx) { return wheatstone_point(at(jx)).rho; }, p.Jx, 1e-4);
  const FisherResult cfi = cfi_projective(
      [&](double jx) {
        const double pm = wheatstone_point(at(jx)).P_minus;
        RVec d(2);
        d << pm, 1.0 - pm;
        return d;
      },
      p.Jx, 1e-4);
  return {{"P_minus", w.P_minus}, {"P_dd", w.P_dd},   {"P_plus", w.P_plus},   {"P_uu", w.P_uu},
          {"current", w.current}, {"qfi", qfi.value}, {"cfi_minus", cfi.value}, {"Lambda", m.Lambda},
          {"Jx0", m.Jx0},         {"JC0", m.JC0},     {"maxF_approx", m.maxF}};
}

Results eval_gmr(const ScenarioConfig& c) {
  GmrParams p;
  const double du = c.get("Delta_U");
  p.chains = {{as_int(c, "n1"), c.get("U1"), du}};
  if (as_int(c, "n2") > 0) p.chains.push_back({as_int(c, "n2"), c.get("U2"), du});
  p.Delta_J = derived(c, "Delta_J", du);
  p.h = c.get("h");
  p.gamma = c.get("gamma");
  p.f = c.get("f");
  Results out{{"current", gmr_current(p)}};
  // closed form exists only for one two-spin segment with f = 1/2, gamma = J
  if (p.chains.size() == 1 && p.chains[0].spins == 2 && du == 0 && p.Delta_J == 0 && p.f == 0.5 && p.gamma == p.J)
    out["current_analytic"] = gmr_analytic_current_n2(p.h, p.chains[0].U, p.J);
  return out;
}

Results eval_maxwell(const ScenarioConfig& c) {
  MaxwellParams p;
  p.omega_c = c.get("omega_C");
  p.omega_h = c.get("omega_H");
  p.T_c = c.get("T_C");
  p.T_h = c.get("T_H");
  p.J = c.get("J");
  p.gamma = c.get("gamma");
  DemonProtocol protocol;
  protocol.tau_y = c.get("tau_Y");
  protocol.tau_cz = c.get("tau_CZ");
  protocol.period = c.get("T");
  protocol.cycles = as_int(c, "cycles");
  protocol.reset_rate = c.get("gamma_D");
  const RepeatedOperation r = maxwell_repeated(p, protocol, c.get("markov") != 0.0);
  return {{"X_C", r.X.X_cold}, {"X_H", r.X.X_hot}, {"J_av", r.X.J_av}, {"X_ss_inst", maxwell_instant_transfer(p)}};
}

Results eval_bose_hubbard(const ScenarioConfig& c) {
  const BoseHubbardBasis b = bose_hubbard_grand(as_int(c, "rows"), as_int(c, "cols"), as_int(c, "levels"));
  std::vector<double> du;
  switch (as_int(c, "disorder")) {
    case 0: break;
    case 1:
      du = disorder_preset();
      if (static_cast<int>(du.size()) != b.sites())
        throw ContractViolation("bose_hubbard: the disorder preset is for a 3x3 lattice");
      break;
    case 2: du = disorder_sample(b.sites(), c.get("disorder_spread"), c.seed); break;
    default: throw ContractViolation("bose_hubbard: disorder must be 0 (none), 1 (preset) or 2 (seeded)");
  }
  const double U = c.get("U");
  for (double& v : du) v *= U;
  std::optional<Decoherence> dec;
  if (c.get("decoherence") != 0.0) dec = Decoherence{1.0 / c.get("gamma1_inv"), 1.0 / c.get("gamma2_inv")};
  const PreparationResult r = bose_hubbard_prepare(b, c.get("mu"), c.get("J"), dec, U, du);
  return {{"n", r.order.n}, {"a", r.order.a}, {"kappa", r.order.kappa}, {"fidelity", r.fidelity}};
}

}  // namespace

std::map<std::string, double> evaluate(const ScenarioConfig& config) {
  const std::string& id = config.id;
  if (id == "two_level") return eval_two_level(config);
  if (id == "qutrit_diode") return eval_qutrit(config);
  if (id == "fwbr") return eval_fwbr(config);
  if (id == "interference_local") return eval_interference_local(config);
  if (id == "interference_global") return eval_interference_global(config);
  if (id == "wheatstone") return eval_wheatstone(config);
  if (id == "gmr") return eval_gmr(config);
  if (id == "maxwell") return eval_maxwell(config);
  if (id == "bose_hubbard") return eval_bose_hubbard(config);
  throw ContractViolation("unknown scenario id: " + id);
}

}  // namespace oqs
