#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oqs/scenarios.hpp"
#include "support.hpp"

using namespace oqs;
using namespace testing_support;

namespace {

double herm_defect(const Mat& h) { return (h - h.adjoint()).cwiseAbs().maxCoeff(); }

double herm_defect_at(const Scenario& s, const std::vector<double>& times) {
  double worst = 0;
  for (double t : times) worst = std::max(worst, herm_defect(s.hamiltonian.at(t)));
  return worst;
}

std::vector<double> sample_times(double t1, int n) {
  std::vector<double> t;
  for (int k = 0; k <= n; ++k) t.push_back(t1 * k / n);
  return t;
}

// Brute-force count of occupations with fixed total and per-site cap.
std::vector<std::vector<int>> brute_sector(int sites, int particles, int cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> occ(sites, 0);
  while (true) {
    int total = 0;
    for (int v : occ) total += v;
    if (total == particles) out.push_back(occ);
    int s = sites - 1;
    while (s >= 0 && occ[s] == cap) occ[s--] = 0;
    if (s < 0) break;
    ++occ[s];
  }
  return out;
}

Index flat_index(const SpaceLayout& lay, const std::vector<int>& levels) {
  Index k = 0;
  for (int i = 0; i < lay.sites(); ++i) k = k * lay.dims[i] + levels[i];
  return k;
}

double thermal_occupation_ratio(double w, double T) { return std::exp(-w / T); }

}  // namespace

// ---------------------------------------------------------------- configs

TEST_CASE("catalog lists every scenario with its defaults") {
  const auto& cat = scenario_catalog();
  CHECK(cat.size() == 9);
  for (const auto& e : cat) {
    const ScenarioConfig c = default_config(e.id);
    CHECK(c.params.size() == e.defaults.size());
    for (const auto& [k, rule] : e.derived) CHECK(std::isnan(c.get(k)));
  }
  CHECK(default_config("wheatstone").get("J23") == 20.0);
  CHECK(default_config("maxwell").get("tau_CZ") == doctest::Approx(0.1));
  CHECK(default_config("bose_hubbard").get("gamma2_inv") == 3000.0);
}

TEST_CASE("unknown ids and parameter names are rejected") {
  CHECK_THROWS_AS(default_config("no_such_scenario"), ContractViolation);
  ScenarioConfig c = default_config("two_level");
  CHECK_THROWS_AS(c.set("g_X", 1.0), ContractViolation);
  CHECK_THROWS_AS(c.get("g_X"), ContractViolation);
  c.id = "no_such_scenario";
  CHECK_THROWS_AS(evaluate(c), ContractViolation);
  ScenarioConfig m = default_config("maxwell");
  m.set("cycles", 2.5);
  CHECK_THROWS_AS(evaluate(m), ContractViolation);
}

// ---------------------------------------------------------------- two-level

TEST_CASE("two-level quantum and rate steady states coincide") {
  for (auto [gl, gr, nl, nr] : std::vector<std::array<double, 4>>{{0.1, 1, 0.5, 0}, {0.7, 0.2, 0.1, 2.0}}) {
    const TwoLevel t = build_two_level(gl, gr, nl, nr);
    CHECK(herm_defect(t.quantum.hamiltonian.constant) == 0.0);
    const Mat rho = steady_state_direct(t.quantum.static_liouvillian());
    const RVec p = rate_steady_state(t.rates);
    CHECK(std::abs(rho(1, 1).real() - p(1)) < 1e-12);
    CHECK(std::abs(rho(0, 1)) < 1e-12);
    CHECK(t.quantum.observables.at("J")(rho) == doctest::Approx(two_level_current(gl, gr, nl, nr)).epsilon(1e-10));
  }
}

TEST_CASE("two-level rectification") {
  ScenarioConfig c = default_config("two_level");
  auto r = evaluate(c);
  CHECK(r["R"] == doctest::Approx(1.75).epsilon(1e-10));
  CHECK(r["R_closed"] == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(r["J_f"] > 0);
  CHECK(r["J_r"] < 0);
  c.set("g_L", 1.0);
  r = evaluate(c);
  CHECK(r["R"] == doctest::Approx(1.0).epsilon(1e-10));
  c.set("n_H", 0.0);
  CHECK_THROWS_AS(evaluate(c), DomainError);
  const TwoLevel eq = build_two_level(0.1, 1.0, 0.3, 0.3);
  CHECK(std::abs(eq.quantum.observables.at("J")(steady_state_direct(eq.quantum.static_liouvillian()))) < 1e-14);
}

TEST_CASE("global and local generators agree for weak coupling and far detuning") {
  auto diff = [](double w) {
    const GlobalLocalPair p = build_two_qubit_comparison(w, 0.0, 0.01, 0.2, 0.01);
    const Mat a = steady_state_direct(p.global), b = steady_state_direct(p.local);
    return (a - b).cwiseAbs().maxCoeff();
  };
  CHECK(diff(10.0) < 1e-3);
  const GlobalLocalPair p = build_two_qubit_comparison(10.0, 1.0, 0.1);
  CHECK(herm_defect(p.h) == 0.0);
  const Mat g = steady_state_direct(p.global), s = steady_state_direct(p.secular);
  CHECK(std::abs(g.trace().real() - 1.0) < 1e-12);
  CHECK(std::abs(s.trace().real() - 1.0) < 1e-12);
}

// ---------------------------------------------------------------- qutrit diode

TEST_CASE("qutrit diode without modulation is time independent") {
  QutritDiodeParams p;
  p.Jp = 0.0;
  const QutritDiode d = build_qutrit_diode(p, Bias::forward);
  CHECK(d.scenario.hamiltonian.terms.empty());
  for (const auto& [k, m] : d.drive.harmonics)
    if (k != 0) CHECK(m.norm() == 0.0);
}

TEST_CASE("qutrit diode periodic state is consistent with direct propagation") {
  QutritDiodeParams p;
  p.dw = 30.0;
  p.Gamma = 2.0;
  p.n_hot = 0.2;
  const QutritDiode d = build_qutrit_diode(p, Bias::forward);
  const double period = 2 * std::numbers::pi / p.dw;
  CHECK(herm_defect_at(d.scenario, sample_times(period, 16)) < 1e-14);
  const QutritDiodeRun run = run_qutrit_diode(d, 4);
  // the drive conserves total excitation number
  CHECK(std::abs(run.J_L + run.J_R) < 1e-10);
  CHECK(run.J_L > 0);
  const Mat rho0 = run.state.at(0.0);
  StepOptions opt;
  opt.atol = opt.rtol = 1e-11;
  const Trajectory tr = propagate_dense(rho0, d.scenario.liouvillian(), 0.0, period, {{period}, {}, true}, opt);
  CHECK((tr.states.back() - run.state.at(period)).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((run.state.at(period) - rho0).cwiseAbs().maxCoeff() < 1e-12);
}

// ---------------------------------------------------------------- bridge

TEST_CASE("eliminated oscillator rates follow the Lorentzian filter") {
  const EliminatedOscillator e{0.5, 10.0, 1.0, 0.5, 300.0};
  const SpaceLayout lay({3});
  const auto baths = eliminated_oscillator_baths(e, lay, 0);
  auto lor = [&](double x) { return e.Gamma / (x * x + e.Gamma * e.Gamma / 4); };
  const double r01 = e.J * e.J * lor(e.dw) + 0.25 * e.Jp * e.Jp * (lor(0) + lor(2 * e.dw));
  const double r12 = 2 * (e.J * e.J * lor(0) + 0.25 * e.Jp * e.Jp * 2 * lor(e.dw));
  double down01 = 0, up01 = 0, down12 = 0, up12 = 0;
  for (const auto& b : baths) {
    if (std::abs(b.jump(0, 1)) > 0) down01 += b.rate * std::norm(b.jump(0, 1));
    if (std::abs(b.jump(1, 0)) > 0) up01 += b.rate * std::norm(b.jump(1, 0));
    if (std::abs(b.jump(1, 2)) > 0) down12 += b.rate * std::norm(b.jump(1, 2));
    if (std::abs(b.jump(2, 1)) > 0) up12 += b.rate * std::norm(b.jump(2, 1));
  }
  CHECK(down01 == doctest::Approx(r01 * (1 + e.occupation)).epsilon(1e-12));
  CHECK(up01 == doctest::Approx(r01 * e.occupation).epsilon(1e-12));
  CHECK(down12 == doctest::Approx(r12 * (1 + e.occupation)).epsilon(1e-12));
  CHECK(up12 == doctest::Approx(r12 * e.occupation).epsilon(1e-12));
}

TEST_CASE("bridge halves have the requested truncations") {
  const Fwbr f = build_fwbr({});
  CHECK(f.upper.layout.dims[1] == 8);
  CHECK(f.lower.layout.dims[1] == 7);
  CHECK(f.gamma_regime_ok);
  FwbrParams weak;
  weak.Gamma = 2.0;
  CHECK_FALSE(build_fwbr(weak).gamma_regime_ok);
  CHECK(herm_defect(f.upper.hamiltonian.constant) < 1e-14);
  CHECK(herm_defect_at(f.lower, sample_times(2 * std::numbers::pi / 300.0, 8)) < 1e-14);
}

// ---------------------------------------------------------------- interference

TEST_CASE("Bell interface states are orthonormal product states") {
  const double s = 1 / std::numbers::sqrt2;
  for (int a = 0; a < 4; ++a) {
    const Vec v = bell_minus_interface(a);
    CHECK(std::abs(v.norm() - 1.0) < 1e-13);
    // spins 1 and 2 down, pair (2,3) in the singlet, pair (4,5) in basis state a
    const Index up_first = 1 << 3, up_second = 1 << 2;  // site 0 is the slowest index
    CHECK(std::abs(v(up_first + a) - cd(s)) < 1e-13);
    CHECK(std::abs(v(up_second + a) - cd(-s)) < 1e-13);
    for (int b = 0; b < a; ++b) CHECK(std::abs(v.dot(bell_minus_interface(b))) < 1e-13);
  }
}

TEST_CASE("interference builders are hermitian and degenerate without detuning") {
  InterferenceParams p;
  for (Bias b : {Bias::forward, Bias::reverse}) {
    const Scenario s = build_interference_diode(p, b);
    CHECK(herm_defect(s.hamiltonian.constant) < 1e-14);
    CHECK(s.layout.total() == 64);
  }
  p.delta = 0.0;
  CHECK_THROWS_AS(steady_state_direct(build_interference_diode(p, Bias::reverse).static_liouvillian()),
                  NonUniqueSteadyState);
  CHECK(interference_default_J34(5.0) == doctest::Approx(-6.3));
}

TEST_CASE("global-bath interference model conserves heat") {
  InterferenceGlobalParams p;
  const InterferenceGlobal g = build_interference_global(p, Bias::forward);
  CHECK(herm_defect(g.h) < 1e-14);
  const HeatSummary s = interference_global_rectification(p);
  CHECK(s.conservation < 1e-10 * std::max(std::abs(s.K_f), 1e-300) + 1e-13);
  CHECK(s.K_f > 0);
  CHECK(s.R > 1.0);
}

// ---------------------------------------------------------------- Wheatstone

TEST_CASE("Wheatstone interface states") {
  const double h2 = 0.5, J23 = 20.0, e = h2 / (4 * J23);
  const InterfaceBasis b = wheatstone_interface(h2, J23);
  CHECK(std::abs(b.minus.dot(b.plus)) < 1e-15);
  CHECK(std::abs(b.minus.squaredNorm() - (1 + e * e)) < 1e-14);
  CHECK(std::abs(b.uu.dot(b.minus)) == 0.0);
  CHECK(std::abs(b.dd.dot(b.plus)) == 0.0);
  const Scenario s = build_wheatstone({});
  CHECK(herm_defect(s.hamiltonian.constant) < 1e-14);
  const WheatstonePoint w = wheatstone_point({});
  CHECK(w.P_minus + w.P_plus + w.P_dd + w.P_uu == doctest::Approx(1.0).epsilon(1e-3));
}

// ---------------------------------------------------------------- GMR

TEST_CASE("GMR numeric current matches the closed form") {
  for (double h : {0.0, 5.0, 10.0, -10.0, 23.0}) {
    GmrParams p;
    p.h = h;
    CHECK(gmr_current(p) == doctest::Approx(gmr_analytic_current_n2(h, 10.0)).epsilon(1e-8));
  }
  // far from resonance at large U the resonant value approaches 4/9
  CHECK(gmr_analytic_current_n2(100.0, 100.0) == doctest::Approx(4.0 / 9.0).epsilon(1e-4));
  CHECK(gmr_analytic_current_n2(-100.0, 100.0) == doctest::Approx(4.0 / 9.0).epsilon(1e-4));
  CHECK(gmr_analytic_current_n2(0.0, 100.0) == doctest::Approx(17.0 / 20000.0).epsilon(1e-2));
  for (double h : {0.3, 4.0, 17.0}) CHECK(gmr_analytic_current_n2(h, 10.0) == gmr_analytic_current_n2(-h, 10.0));
}

TEST_CASE("GMR mirror symmetry and zero polarization") {
  for (int n : {2, 3}) {
    GmrParams p;
    p.chains = {{n, 10.0, 0.0}};
    p.h = 3.0;
    const double fwd = gmr_current(p);
    p.f = -0.5;
    CHECK(std::abs(gmr_current(p) + fwd) < 1e-9);
    p.f = 0.0;
    CHECK(std::abs(gmr_current(p)) < 1e-12);
  }
}

TEST_CASE("GMR reservoirs polarize their end spins") {
  GmrParams p;
  p.J = 0.0;
  const Scenario s = build_gmr(p);
  CHECK(herm_defect(s.hamiltonian.constant) < 1e-14);
  const int d = s.layout.total();
  const Mat rho0 = Mat::Identity(d, d) / double(d);
  const Trajectory tr = propagate_dense(rho0, s.static_liouvillian(), 0.0, 40.0, {{40.0}, {}, true});
  const Mat zl = embed(sigma_z(), 0, s.layout), zr = embed(sigma_z(), s.layout.sites() - 1, s.layout);
  CHECK(expect(zl, tr.states.back()) == doctest::Approx(p.f).epsilon(1e-6));
  CHECK(expect(zr, tr.states.back()) == doctest::Approx(-p.f).epsilon(1e-6));
}

TEST_CASE("GMR resonances") {
  auto r2 = gmr_resonances(2, 10.0);
  REQUIRE(r2.size() == 2);
  CHECK(r2[0] == doctest::Approx(-10.0));
  CHECK(r2[1] == doctest::Approx(10.0));
  auto r3 = gmr_resonances(3, 10.0);
  REQUIRE(r3.size() == 3);
  CHECK(r3[0] == doctest::Approx(-10.0 * std::numbers::sqrt2));
  CHECK(r3[1] == 0.0);
  CHECK(r3[2] == doctest::Approx(10.0 * std::numbers::sqrt2));
  for (int n : {2, 3, 4, 5}) {
    double sum = 0;
    for (double x : gmr_resonances(n, 7.0)) sum += x;
    CHECK(std::abs(sum) < 1e-9);
  }
}

// ---------------------------------------------------------------- demon

TEST_CASE("demon gates act as controlled flips when isolated") {
  MaxwellParams p;
  p.J = 0.0;
  p.gamma = 0.0;
  DemonProtocol protocol;
  protocol.reset_rate = 0.0;
  const Scenario s = build_maxwell(p, protocol);
  CHECK(herm_defect_at(s, sample_times(protocol.operation_time(), 24)) < 1e-14);
  const SpaceLayout& lay = s.layout;
  auto basis = [&](int m, int dq) {
    Vec v = Vec::Zero(lay.total());
    v(flat_index(lay, {m, 0, 0, dq})) = 1.0;
    return Mat(v * v.adjoint());
  };
  StepOptions opt;
  opt.atol = opt.rtol = 1e-11;
  const double half = 2 * protocol.tau_y + protocol.tau_cz;
  const auto l = s.liouvillian();
  auto run = [&](const Mat& rho, double t0, double t1) {
    return propagate_dense(rho, l, t0, t1, {{t1}, {}, true}, opt).states.back();
  };
  CHECK(run(basis(2, 0), 0, half)(flat_index(lay, {2, 0, 0, 1}), flat_index(lay, {2, 0, 0, 1})).real() >= 0.999);
  CHECK(run(basis(1, 0), 0, half)(flat_index(lay, {1, 0, 0, 0}), flat_index(lay, {1, 0, 0, 0})).real() >= 0.999);
  CHECK(run(basis(2, 1), half, protocol.operation_time())(flat_index(lay, {1, 0, 0, 1}), flat_index(lay, {1, 0, 0, 1}))
            .real() >= 0.999);
  CHECK(run(basis(2, 0), half, protocol.operation_time())(flat_index(lay, {2, 0, 0, 0}), flat_index(lay, {2, 0, 0, 0}))
            .real() >= 0.999);
}

TEST_CASE("demon protocol timing") {
  DemonProtocol p;
  p.cycles = 3;
  const auto bp = p.breakpoints();
  CHECK(std::is_sorted(bp.begin(), bp.end()));
  CHECK(std::find(bp.begin(), bp.end(), 2.0) != bp.end());
  CHECK(p.gamma_d(0.1) == 0.0);
  CHECK(p.gamma_d(0.5) == p.reset_rate);
  CHECK(p.gamma_d(3.5) == p.reset_rate);
  // pulse area of each Y rotation is pi/4
  CHECK(p.a_yd(0.5 * p.tau_y) * p.tau_y == doctest::Approx(-std::numbers::pi / 4));
  CHECK(p.a_cz(p.tau_y + 0.5 * p.tau_cz) * p.tau_cz == doctest::Approx(std::numbers::pi));
  DemonProtocol bad;
  bad.period = 0.1;
  CHECK_THROWS_AS(build_maxwell({}, bad), ContractViolation);
}

TEST_CASE("instantaneous demon transfer approaches the thermal estimate") {
  MaxwellParams p;
  // qutrit levels 0, 1, 2 follow the cold and hot qubit Boltzmann factors
  const double r1 = thermal_occupation_ratio(p.omega_h, p.T_h);
  const double r2 = thermal_occupation_ratio(p.omega_c, p.T_c);
  const double estimate = r2 / (1 + r1 + r2);
  CHECK(maxwell_instant_transfer(p) == doctest::Approx(estimate).epsilon(5e-3));
  const Mat rho0 = maxwell_initial_state(p);
  CHECK(std::abs(rho0.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("transferred excitations bookkeeping") {
  DemonProtocol p;
  p.cycles = 2;
  Trajectory tr;
  tr.times = demon_sample_grid(p, 10);
  tr.observables["J_C"] = std::vector<double>(tr.times.size(), 0.0);
  tr.observables["J_H"] = std::vector<double>(tr.times.size(), 0.0);
  const TransferredExcitations x = transferred_excitations(tr, p);
  CHECK(x.cold.size() == 2);
  CHECK(x.X_cold == 0.0);
  CHECK(x.X_hot == 0.0);
  std::fill(tr.observables["J_C"].begin(), tr.observables["J_C"].end(), 0.5);
  CHECK(transferred_excitations(tr, p).X_cold == doctest::Approx(0.5 * p.period));
  Trajectory gap = tr;
  gap.times.erase(std::find(gap.times.begin(), gap.times.end(), 1.0));
  gap.observables["J_C"].pop_back();
  gap.observables["J_H"].pop_back();
  CHECK_THROWS_AS(transferred_excitations(gap, p), ContractViolation);
}

// ---------------------------------------------------------------- Bose-Hubbard

TEST_CASE("canonical basis enumeration") {
  for (auto [rows, cols, n, cap] : std::vector<std::array<int, 4>>{{2, 2, 4, 3}, {2, 3, 3, 2}, {3, 3, 0, 3}}) {
    const BoseHubbardBasis b = bose_hubbard_canonical(rows, cols, n, cap);
    const auto ref = brute_sector(rows * cols, n, cap);
    REQUIRE(b.size() == static_cast<Index>(ref.size()));
    CHECK(std::is_sorted(b.states.begin(), b.states.end()));
    for (Index i = 0; i < b.size(); ++i) CHECK(b.find(b.states[i]) == i);
  }
  CHECK(bose_hubbard_canonical(3, 3, 0, 3).size() == 1);
  CHECK_THROWS_AS(bose_hubbard_canonical(2, 2, 13, 3), ContractViolation);
  const BoseHubbardBasis b = bose_hubbard_canonical(2, 2, 2, 2);
  CHECK(b.find({1, 1, 0}) == -1);
  CHECK(b.find({3, 0, 0, 0}) == -1);
}

TEST_CASE("grand-canonical product basis") {
  const BoseHubbardBasis g = bose_hubbard_grand(3, 3, 4);
  CHECK(g.size() == 262144);
  CHECK(g.layout().total() == 262144);
  CHECK(g.find({0, 0, 0, 0, 0, 0, 0, 0, 1}) == 1);
  CHECK(g.find({1, 0, 0, 0, 0, 0, 0, 0, 0}) == 65536);
  CHECK_THROWS_AS(bose_hubbard_grand(4, 4, 4), CapacityError);
}

TEST_CASE("Bose-Hubbard Hamiltonians") {
  const BoseHubbardBasis c = bose_hubbard_canonical(2, 3, 4, 3);
  const SpMat h = bose_hubbard_hamiltonian(c, {0.3, 1.0, 0.07, 0.0, {}});
  CHECK(herm_defect(Mat(h)) < 1e-15);
  const BoseHubbardOperators ops = bose_hubbard_operators(c, 1.0);
  CHECK(Mat(ops.number).isApprox(4.0 * Mat::Identity(c.size(), c.size())));
  CHECK_THROWS_AS(bose_hubbard_hamiltonian(c, {0.3, 1.0, 0.07, 0.1, {}}), ContractViolation);

  const BoseHubbardBasis g = bose_hubbard_grand(2, 2, 3);
  const BoseHubbardOperators go = bose_hubbard_operators(g, 1.0);
  const Mat hg = Mat(bose_hubbard_hamiltonian(g, {0.3, 1.0, 0.07, 0.05, {}}));
  CHECK(herm_defect(hg) < 1e-15);
  // hopping conserves particle number, the drive does not
  const Mat n = Mat(go.number);
  CHECK((Mat(go.hopping) * n - n * Mat(go.hopping)).norm() < 1e-12);
  CHECK((Mat(go.drive) * n - n * Mat(go.drive)).norm() > 1.0);
  // independent oracle: embedded ladder operators
  const SpaceLayout lay = g.layout();
  Mat hop = Mat::Zero(lay.total(), lay.total());
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {0, 2}, {1, 3}}) {
    const Mat ai = embed(destroy(3), i, lay), aj = embed(destroy(3), j, lay);
    hop -= ai * aj.adjoint() + aj * ai.adjoint();
  }
  CHECK((Mat(go.hopping) - hop).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Mott ground state at zero tunneling") {
  const BoseHubbardBasis g = bose_hubbard_grand(2, 2, 4);
  const GroundState gs = ground_state(bose_hubbard_hamiltonian(g, {0.5, 1.0, 0.0, 0.0, {}}));
  const OrderParameters o = order_parameters(Vec(gs.state), g.layout());
  CHECK(o.n == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(o.a) < 1e-10);
}

TEST_CASE("disorder samples") {
  const auto pre = disorder_preset();
  CHECK(pre.size() == 9);
  const auto a = disorder_sample(9, 0.05, 42), b = disorder_sample(9, 0.05, 42), c = disorder_sample(9, 0.05, 43);
  CHECK(a == b);
  CHECK(a != c);
  double mean = 0, var = 0;
  for (double v : a) mean += v / 9;
  for (double v : a) var += (v - mean) * (v - mean) / 9;
  CHECK(std::abs(mean) < 1e-15);
  CHECK(std::sqrt(var) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("preparation ramp") {
  const RampSchedule r = bose_hubbard_ramp(1.2, 0.03, 1.0);
  CHECK(r.total_time() == doctest::Approx(300.0));
  const std::map<std::string, double> base{{"mu", -0.5}, {"J", 0.1}, {"chi", 0.0}};
  const auto start = r.values(0.0, base), end = r.values(300.0, base), mid = r.values(50.0, base);
  CHECK(start.at("chi") == doctest::Approx(0.0));
  CHECK(mid.at("chi") == doctest::Approx(0.1));
  CHECK(end.at("mu") == doctest::Approx(1.2));
  CHECK(end.at("J") == doctest::Approx(0.03));
  CHECK(end.at("chi") == doctest::Approx(0.0));
  // continuity across segment boundaries
  for (double t : r.boundaries())
    for (const auto& [k, v] : r.values(t - 1e-9, base)) CHECK(std::abs(v - r.values(t + 1e-9, base).at(k)) < 1e-6);
}
