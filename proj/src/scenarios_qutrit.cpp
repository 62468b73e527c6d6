#include <cmath>

#include "oqs/scenarios.hpp"

namespace oqs {

namespace {

void add_thermal_mode(std::vector<ScheduledBath>& baths, const ThermalMode& m) {
  baths.push_back({{m.mode, m.rate * (m.occupation + 1.0)}, {}});
  if (m.occupation > 0) baths.push_back({{m.mode.adjoint(), m.rate * m.occupation}, {}});
}

Liouvillian bath_part(const std::vector<ScheduledBath>& baths, Index d) {
  std::vector<LocalBath> local;
  for (const auto& b : baths) local.push_back(b.bath);
  return local_liouvillian(Mat::Zero(d, d), local);
}

double lorentzian(double x, double Gamma) { return Gamma / (x * x + 0.25 * Gamma * Gamma); }

double bose(double inverse_temperature_ratio) { return 1.0 / std::expm1(inverse_temperature_ratio); }

}  // namespace

// ---------------------------------------------------------------- qutrit diode

QutritDiode build_qutrit_diode(const QutritDiodeParams& p, Bias bias) {
  if (bias == Bias::none) throw ContractViolation("build_qutrit_diode: bias must be forward or reverse");
  const double nl = bias == Bias::forward ? p.n_hot : p.n_cold;
  const double nr = bias == Bias::forward ? p.n_cold : p.n_hot;
  const SpaceLayout lay({oscillator_truncation(nl), 3, oscillator_truncation(nr)}, {"L", "T", "R"});
  const Mat al = embed(destroy(lay.dims[0]), 0, lay);
  const Mat at = embed(destroy(3), 1, lay);
  const Mat ar = embed(destroy(lay.dims[2]), 2, lay);
  const Mat dark = embed(ketbra(3, 0, 0), 1, lay);

  QutritDiode d;
  d.Jp = p.Jp;
  d.dw = p.dw;
  d.hop_left = al * at.adjoint();
  d.left = {p.Gamma, nl, al};
  d.right = {p.Gamma, nr, ar};

  Scenario& s = d.scenario;
  s.id = "qutrit_diode";
  s.layout = lay;
  const Mat hop_right = at * ar.adjoint();
  const Mat hl = d.hop_left + d.hop_left.adjoint();
  s.hamiltonian.constant = -p.dw * dark + p.J * hl + p.J * (hop_right + hop_right.adjoint());
  if (p.Jp != 0.0) {
    const double w = p.dw;
    s.hamiltonian.terms.push_back({[w](double t) { return cd(std::cos(w * t), 0.0); }, p.Jp * hl});
  }
  add_thermal_mode(s.baths, d.left);
  add_thermal_mode(s.baths, d.right);
  const ThermalMode left = d.left, right = d.right;
  s.observables["J_L"] = [left](const Mat& rho) { return excitation_current_bath(left, rho); };
  s.observables["J_R"] = [right](const Mat& rho) { return excitation_current_bath(right, rho); };
  s.observables["P_dark"] = [dark](const Mat& rho) { return expect(dark, rho); };

  const Index dim = lay.total();
  d.drive.dim = dim;
  d.drive.Omega = p.dw;
  Liouvillian l0 = local_liouvillian(s.hamiltonian.constant, {});
  l0 += bath_part(s.baths, dim);
  d.drive.harmonics[0] = l0.L;
  if (p.Jp != 0.0) {
    SpMatC half = (0.5 * p.Jp) * hamiltonian_superop(hl);
    d.drive.harmonics[1] = half;
    d.drive.harmonics[-1] = half;
  }
  return d;
}

QutritDiodeRun run_qutrit_diode(const QutritDiode& d, int harmonics) {
  QutritDiodeRun out;
  out.state = periodic_steady_state(d.drive, d.Jp != 0.0 ? harmonics : 0);
  const Mat& rho = out.state.rho.at(0);
  out.J_L = excitation_current_bath(d.left, rho);
  out.J_R = excitation_current_bath(d.right, rho);
  const Mat dark = embed(ketbra(3, 0, 0), 1, d.scenario.layout);
  out.P_dark = expect(dark, rho);
  out.work = 0.0;
  if (d.Jp != 0.0 && out.state.K >= 1) {
    const Mat& x = d.hop_left;
    const cd w = (d.Jp / (2.0 * I1)) * ((x * out.state.rho.at(1)).trace() - (x.adjoint() * out.state.rho.at(-1)).trace());
    out.work = w.real();
  }
  return out;
}

QutritDiodeSummary qutrit_diode_rectification(const QutritDiodeParams& p) {
  QutritDiodeSummary s;
  s.forward = run_qutrit_diode(build_qutrit_diode(p, Bias::forward), p.harmonics);
  s.reverse = run_qutrit_diode(build_qutrit_diode(p, Bias::reverse), p.harmonics);
  s.J_f = -s.forward.J_R;
  s.J_r = s.reverse.J_L;
  const Rectification r = rectification_and_contrast(s.J_f, s.J_r);
  s.R = r.R;
  s.C = r.C;
  return s;
}

// ---------------------------------------------------------------- bridge rectifier

std::vector<LocalBath> eliminated_oscillator_baths(const EliminatedOscillator& e, const SpaceLayout& layout,
                                                   int qutrit) {
  if (layout.dims.at(qutrit) != 3) throw ContractViolation("eliminated_oscillator_baths: site is not a qutrit");
  const double jp2 = 0.25 * e.Jp * e.Jp;
  const double low = e.J * e.J * lorentzian(e.dw, e.Gamma) +
                     jp2 * (lorentzian(0.0, e.Gamma) + lorentzian(2.0 * e.dw, e.Gamma));
  const double high = 2.0 * (e.J * e.J * lorentzian(0.0, e.Gamma) + jp2 * 2.0 * lorentzian(e.dw, e.Gamma));
  const Mat d01 = embed(ketbra(3, 0, 1), qutrit, layout);
  const Mat d12 = embed(ketbra(3, 1, 2), qutrit, layout);
  const double n = e.occupation;
  return {{d01, low * (1 + n)}, {d01.adjoint(), low * n}, {d12, high * (1 + n)}, {d12.adjoint(), high * n}};
}

Fwbr build_fwbr(const FwbrParams& p) {
  Fwbr f;
  f.n_left = bose(1.0 / p.T_left);
  f.n_right = bose(1.0 / p.T_right);
  f.gamma_regime_ok = p.Gamma >= 5.0 * std::max(p.J, p.Jp);

  auto dephasing = [&](const SpaceLayout& lay, std::vector<ScheduledBath>& baths) {
    if (p.gamma_dec <= 0) return;
    for (int s = 0; s < lay.sites(); ++s) {
      const Mat a = embed(destroy(lay.dims[s]), s, lay);
      baths.push_back({{a, p.gamma_dec}, {}});
      baths.push_back({{a.adjoint() * a, p.gamma_dec}, {}});
    }
  };
  auto add = [](std::vector<ScheduledBath>& baths, const std::vector<LocalBath>& local) {
    for (const auto& b : local) baths.push_back({b, {}});
  };

  {
    Scenario& s = f.upper;
    s.id = "fwbr_upper";
    s.layout = SpaceLayout({3, p.levels_m1, 3}, {"D1", "M1", "D2"});
    const Mat a1 = embed(destroy(3), 0, s.layout), am = embed(destroy(p.levels_m1), 1, s.layout),
              a2 = embed(destroy(3), 2, s.layout);
    const Mat h1 = a1 * am.adjoint(), h2 = a2 * am.adjoint();
    s.hamiltonian.constant = -p.dw * (embed(ketbra(3, 0, 0), 0, s.layout) + embed(ketbra(3, 0, 0), 2, s.layout)) +
                             p.J * (h1 + h1.adjoint() + h2 + h2.adjoint());
    add(s.baths, eliminated_oscillator_baths({f.n_left, p.Gamma, p.J, p.Jp, p.dw}, s.layout, 0));
    add(s.baths, eliminated_oscillator_baths({f.n_right, p.Gamma, p.J, p.Jp, p.dw}, s.layout, 2));
    dephasing(s.layout, s.baths);
    const Mat nm = am.adjoint() * am;
    s.observables["n_M1"] = [nm](const Mat& rho) { return expect(nm, rho); };
  }
  {
    Scenario& s = f.lower;
    s.id = "fwbr_lower";
    s.layout = SpaceLayout({3, p.levels_m2, 3}, {"D3", "M2", "D4"});
    const Mat a3 = embed(destroy(3), 0, s.layout), am = embed(destroy(p.levels_m2), 1, s.layout),
              a4 = embed(destroy(3), 2, s.layout);
    const Mat h3 = am * a3.adjoint(), h4 = am * a4.adjoint();
    const Mat hop = h3 + h3.adjoint() + h4 + h4.adjoint();
    s.hamiltonian.constant =
        -p.dw * (embed(ketbra(3, 0, 0), 0, s.layout) + embed(ketbra(3, 0, 0), 2, s.layout)) + p.J * hop;
    if (p.Jp != 0.0) {
      const double w = p.dw;
      s.hamiltonian.terms.push_back({[w](double t) { return cd(std::cos(w * t), 0.0); }, p.Jp * hop});
    }
    add(s.baths, eliminated_oscillator_baths({f.n_left, p.Gamma, p.J, 0.0, p.dw}, s.layout, 0));
    add(s.baths, eliminated_oscillator_baths({f.n_right, p.Gamma, p.J, 0.0, p.dw}, s.layout, 2));
    dephasing(s.layout, s.baths);
    const Mat nm = am.adjoint() * am;
    s.observables["n_M2"] = [nm](const Mat& rho) { return expect(nm, rho); };

    const Index dim = s.layout.total();
    f.lower_drive.dim = dim;
    f.lower_drive.Omega = p.dw;
    Liouvillian l0 = local_liouvillian(s.hamiltonian.constant, {});
    l0 += bath_part(s.baths, dim);
    f.lower_drive.harmonics[0] = l0.L;
    if (p.Jp != 0.0) {
      SpMatC half = (0.5 * p.Jp) * hamiltonian_superop(hop);
      f.lower_drive.harmonics[1] = half;
      f.lower_drive.harmonics[-1] = half;
    }
  }
  return f;
}

FwbrResult run_fwbr(const FwbrParams& p) {
  const Fwbr f = build_fwbr(p);
  const Mat up = steady_state_direct(f.upper.static_liouvillian());
  const Mat low = periodic_steady_state(f.lower_drive, p.Jp != 0.0 ? p.harmonics : 0).average();
  const Mat m1 = partial_trace(up, {1}, f.upper.layout);
  const Mat m2 = partial_trace(low, {1}, f.lower.layout);

  auto thermal = [](int levels, double T) {
    RVec e = RVec::LinSpaced(levels, 0.0, levels - 1.0);
    return thermal_state(Mat(e.cast<cd>().asDiagonal()), T);
  };

  FwbrResult r;
  r.n_m1 = f.upper.observables.at("n_M1")(up);
  r.n_m2 = f.lower.observables.at("n_M2")(low);
  r.T_m1 = effective_temperature(r.n_m1);
  r.T_m2 = effective_temperature(r.n_m2);
  r.T_left = p.T_left;
  r.T_right = p.T_right;
  r.fidelity_left_m1 = fidelity(m1, thermal(p.levels_m1, p.T_left));
  r.fidelity_right_m2 = fidelity(m2, thermal(p.levels_m2, p.T_right));
  r.gamma_regime_ok = f.gamma_regime_ok;
  return r;
}

}  // namespace oqs
