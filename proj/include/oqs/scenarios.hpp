#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "oqs/hilbert.hpp"
#include "oqs/lindblad.hpp"
#include "oqs/observables.hpp"
#include "oqs/rates.hpp"
#include "oqs/solver.hpp"

namespace oqs {

enum class Bias { forward, reverse, none };

// ---------------------------------------------------------------- configs

struct ScenarioConfig {
  std::string id;
  std::map<std::string, double> params;  // NaN marks a value derived from the others
  Bias bias = Bias::none;
  std::uint64_t seed = 0;

  double get(const std::string& name) const;
  void set(const std::string& name, double value);  // unknown names throw ContractViolation
  bool has(const std::string& name) const { return params.count(name) > 0; }
};

struct CatalogEntry {
  std::string id;
  std::string title;
  std::map<std::string, double> defaults;
  std::map<std::string, std::string> derived;  // parameter -> rule when left unset
  std::vector<std::string> figures;
  std::vector<std::string> observables;
  bool stochastic = false;
};

const std::vector<CatalogEntry>& scenario_catalog();
ScenarioConfig default_config(const std::string& id);  // unknown id throws ContractViolation

// Generic bundle: layout, H(t), scheduled local baths, default observables.
struct Scenario {
  std::string id;
  SpaceLayout layout;
  DrivenHamiltonian hamiltonian;
  std::vector<ScheduledBath> baths;
  std::map<std::string, DenseObservable> observables;
  std::vector<double> breakpoints;  // coefficient discontinuities

  DrivenLiouvillian liouvillian() const;
  Liouvillian static_liouvillian() const;  // throws if H or a bath is time dependent
};

// Runs the scenario's default protocol and returns named scalar results.
std::map<std::string, double> evaluate(const ScenarioConfig& config);

// ---------------------------------------------------------------- two-level

struct TwoLevel {
  Scenario quantum;
  RMat rates;  // 2x2 generator on (P0, P1)
  double g_l, g_r, n_l, n_r;
};

TwoLevel build_two_level(double g_l, double g_r, double n_l, double n_r);
double two_level_current(double g_l, double g_r, double n_l, double n_r);  // closed form
double two_level_rectification(double g_l, double g_r, double n_hot, double n_cold);

// Two coupled qubits with Ohmic baths: global (non-secular) versus local generator.
struct GlobalLocalPair {
  Mat h;
  Liouvillian global, secular, local;
};
GlobalLocalPair build_two_qubit_comparison(double omega_q, double Delta, double Gamma, double epsilon = 0.2,
                                           double J = 1.0);

// ---------------------------------------------------------------- qutrit diode

struct QutritDiodeParams {
  double dw = 300.0, J = 1.0, Jp = 0.5, Gamma = 10.0, n_hot = 0.5, n_cold = 0.0;
  int harmonics = 3;
};

struct QutritDiode {
  Scenario scenario;
  FourierDrive drive;
  ThermalMode left, right;
  Mat hop_left;  // a_L a_T^dag
  double Jp, dw;
};

QutritDiode build_qutrit_diode(const QutritDiodeParams& p, Bias bias);

struct QutritDiodeRun {
  double J_L, J_R, work;  // work in excitations per unit time (W / dw)
  double P_dark;
  PeriodicState state;
};
QutritDiodeRun run_qutrit_diode(const QutritDiode& d, int harmonics);

struct QutritDiodeSummary {
  QutritDiodeRun forward, reverse;
  double J_f, J_r, R, C;
};
QutritDiodeSummary qutrit_diode_rectification(const QutritDiodeParams& p);

// ---------------------------------------------------------------- bridge rectifier

struct FwbrParams {
  double dw = 300.0, J = 1.0, Jp = 0.5, Gamma = 10.0;
  double T_left = 1.0, T_right = 0.1;  // in units of the oscillator frequency
  double gamma_dec = 1e-3;
  int levels_m1 = 8, levels_m2 = 7;
  int harmonics = 3;
};

// Effective baths on a qutrit after eliminating a damped oscillator (Lorentzian filter).
struct EliminatedOscillator {
  double occupation;
  double Gamma;
  double J;   // static coupling
  double Jp;  // modulated coupling amplitude, cos(dw t)
  double dw;
};
std::vector<LocalBath> eliminated_oscillator_baths(const EliminatedOscillator& e, const SpaceLayout& layout,
                                                   int qutrit);

struct Fwbr {
  Scenario upper, lower;  // (D1, M1, D2) and (D3, M2, D4)
  FourierDrive lower_drive;
  double n_left, n_right;
  bool gamma_regime_ok;  // Gamma >> J, Jp
};
Fwbr build_fwbr(const FwbrParams& p);

struct FwbrResult {
  double n_m1, n_m2, T_m1, T_m2, T_left, T_right;
  double fidelity_left_m1, fidelity_right_m2;
  bool gamma_regime_ok;
};
FwbrResult run_fwbr(const FwbrParams& p);

// ---------------------------------------------------------------- interference diode

struct InterferenceParams {
  double Delta = 5.0, delta = 0.01, J34 = -6.3, gamma = 1.0, J = 1.0;
  double lambda_hot = 0.5, lambda_cold = 0.0;
};
double interference_default_J34(double Delta);  // -(Delta + 1.3)

Mat xx_exchange(const SpaceLayout& layout, int i, int j);  // sx sx + sy sy
Mat zz_coupling(const SpaceLayout& layout, int i, int j);

Scenario build_interference_diode(const InterferenceParams& p, Bias bias);
Vec bell_minus_interface(int right_pair_state);  // |dd Psi- S>, S in {dd, du, ud, uu} by index 0..3

struct InterferenceSummary {
  double J_f, J_r, R, C;
  double P_minus_reverse, concurrence_reverse;
};
InterferenceSummary interference_rectification(const InterferenceParams& p);

struct InterferenceGlobalParams {
  double h = 5.0, delta = 0.01, J34 = 6.3, gamma_q = 1.0, J = 1.0;
  double T_cold = 0.1, T_hot = 10.1, h_offset = 0.0, cutoff = 0.1;
};

struct InterferenceGlobal {
  Mat h;
  SpaceLayout layout;
  GlobalBath left, right;
};
InterferenceGlobal build_interference_global(const InterferenceGlobalParams& p, Bias bias);

struct HeatSummary {
  double K_f, K_r, R, conservation;  // conservation: worst |K_left + K_right|
};
HeatSummary interference_global_rectification(const InterferenceGlobalParams& p);
// Same Hamiltonian with local thermal baths on the end spins.
HeatSummary interference_local_thermal_rectification(const InterferenceGlobalParams& p);

// ---------------------------------------------------------------- Wheatstone bridge

Scenario build_wheatstone(const WheatstoneParams& p);

struct InterfaceBasis {
  Vec uu, plus, minus, dd;  // first order in h2/J23, not renormalized
};
InterfaceBasis wheatstone_interface(double h2, double J23);

struct WheatstonePoint {
  double P_minus, P_dd, P_plus, P_uu, current;
  Mat rho;
};
WheatstonePoint wheatstone_point(const WheatstoneParams& p);

// ---------------------------------------------------------------- GMR

struct GmrChain {
  int spins;
  double U;
  double Delta_U = 0.0;
};

struct GmrParams {
  std::vector<GmrChain> chains{{2, 10.0, 0.0}};
  double Delta_J = 0.0, h = 0.0, gamma = 1.0, f = 0.5, J = 1.0;
  int max_sites = 12;
};

Scenario build_gmr(const GmrParams& p);
double gmr_current(const GmrParams& p);  // steady-state 2J <s_L>
std::vector<double> gmr_resonances(int n1, double U1, double Delta_U = 0.0);
double gmr_analytic_current_n2(double h, double U1, double J = 1.0);

// ---------------------------------------------------------------- Maxwell demon

struct DemonProtocol {
  double tau_y = 0.02, tau_cz = 0.1;
  double period = 1.0;        // start-to-start spacing of operations
  int cycles = 1;
  double reset_rate = 8.0;
  double reset_window = -1.0;  // < 0: every gap between operations

  double operation_time() const { return 4.0 * tau_y + 2.0 * tau_cz; }
  double a_ym(double t) const;
  double a_yd(double t) const;
  double a_cz(double t) const;
  double gamma_d(double t) const;
  std::vector<double> breakpoints() const;
  double end_time() const { return period * cycles; }
};

struct MaxwellParams {
  double omega_c = 3500.0, omega_h = 2000.0, J = 1.0, gamma = 1e-3;
  double T_c = 2000.0, T_h = 3000.0;  // (4/7) omega_c, 1.5 omega_h
  double n_cold() const;
  double n_hot() const;
};

// Layout (M, C, H, D) = (3, 2, 2, 2).
Scenario build_maxwell(const MaxwellParams& p, const DemonProtocol& protocol);
// Qutrit and demon only, with the cold and hot qubits replaced by effective rates.
Scenario build_maxwell_markov(const MaxwellParams& p, const DemonProtocol& protocol);

Mat maxwell_initial_state(const MaxwellParams& p);         // steady state of M,C,H times |0_D>
Mat maxwell_markov_initial_state(const MaxwellParams& p);  // qutrit steady state times |0_D>
double maxwell_instant_transfer(const MaxwellParams& p);   // tr{|2_M><2_M| rho_ss}

struct TransferredExcitations {
  std::vector<double> cold, hot;  // per cycle
  double X_cold, X_hot;           // last cycle
  double J_av;
};
TransferredExcitations transferred_excitations(const Trajectory& tr, const DemonProtocol& protocol,
                                               const std::string& cold_key = "J_C",
                                               const std::string& hot_key = "J_H");

std::vector<double> demon_sample_grid(const DemonProtocol& protocol, int per_cycle);

struct DoubleOperation {
  double X_tilde;
  double t_measure;
};
DoubleOperation maxwell_double_operation(const MaxwellParams& p, double spacing, double tau_y = 0.02,
                                         double tau_cz = 0.1);

struct RepeatedOperation {
  TransferredExcitations X;
};
RepeatedOperation maxwell_repeated(const MaxwellParams& p, const DemonProtocol& protocol, bool markov,
                                   int per_cycle = 200);

// ---------------------------------------------------------------- Bose-Hubbard

struct BoseHubbardBasis {
  enum class Mode { canonical, grand_canonical };
  Mode mode;
  int rows, cols;
  int cap;        // largest occupation per site
  int particles;  // canonical only
  std::vector<std::vector<int>> states;

  Index size() const { return static_cast<Index>(states.size()); }
  int sites() const { return rows * cols; }
  Index find(const std::vector<int>& occupation) const;  // -1 when absent
  SpaceLayout layout() const;                             // grand canonical product layout

  std::unordered_map<std::uint64_t, Index> lookup;
  std::uint64_t key(const std::vector<int>& occupation) const;
};

BoseHubbardBasis bose_hubbard_canonical(int rows, int cols, int particles, int cap);
BoseHubbardBasis bose_hubbard_grand(int rows, int cols, int levels);

std::vector<double> disorder_preset();                       // 3x3 sample in units of U
std::vector<double> disorder_sample(int sites, double spread, std::uint64_t seed);  // zero mean, std = spread

struct BoseHubbardOperators {
  SpMat number;       // sum_i n_i
  SpMat interaction;  // sum_i (U + dU_i)/2 n_i (n_i - 1)
  SpMat hopping;      // -sum_<ij> (a_i a_j^dag + h.c.)
  SpMat drive;        // -sum_i (a_i + a_i^dag), grand canonical only
  std::vector<SpMat> site_number;
};
BoseHubbardOperators bose_hubbard_operators(const BoseHubbardBasis& basis, double U,
                                            const std::vector<double>& dU = {});

struct BoseHubbardParams {
  double mu = 0.5, U = 1.0, J = 0.0, chi = 0.0;
  std::vector<double> dU;
};
SpMat bose_hubbard_hamiltonian(const BoseHubbardBasis& basis, const BoseHubbardParams& p);

struct Decoherence {
  double gamma1 = 1.0 / 15000.0, gamma2 = 1.0 / 3000.0;
};
std::vector<LocalBath> bose_hubbard_decoherence(const BoseHubbardBasis& basis, const Decoherence& d);

// Four cosine segments: chi on, mu to target, J to target, chi off.
RampSchedule bose_hubbard_ramp(double mu_target, double J_target, double U = 1.0);
ParametricHamiltonian bose_hubbard_parametric(const BoseHubbardBasis& basis, double U,
                                              const std::vector<double>& dU = {});

struct PreparationResult {
  OrderParameters order;
  double fidelity;
  double target_energy;
  bool target_degenerate;
};
PreparationResult bose_hubbard_prepare(const BoseHubbardBasis& basis, double mu, double J,
                                       const std::optional<Decoherence>& decoherence, double U = 1.0,
                                       const std::vector<double>& dU = {});

}  // namespace oqs
