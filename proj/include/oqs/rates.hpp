#pragma once

#include <string>
#include <vector>

#include "oqs/hilbert.hpp"
#include "oqs/lindblad.hpp"

namespace oqs {

using RMat = Eigen::MatrixXd;

// W(i, j), i != j: rate j -> i; diagonal fixed so columns sum to zero.
RMat rate_matrix(const RMat& rates);
void check_rate_matrix(const RMat& w);
RVec rate_steady_state(const RMat& w);

struct QutritMarkovParams {
  double dw = 300.0;
  double J = 1.0;
  double Jp = 0.5;
  double Gamma = 10.0;
  double n_hot = 0.5;
  double n_cold = 0.0;
};

struct QutritMarkovResult {
  RMat w_forward, w_reverse;  // qutrit levels 0, 1, 2
  RVec p_forward, p_reverse;
  double j_forward_rates, j_reverse_rates;  // cold-bath flux from the rate steady states
  double j_forward, j_reverse, work_forward, work_reverse, R;  // closed forms (cold bath empty)
  std::vector<std::string> flags;
};

// Rates for left/right occupations nl, nr.
RMat qutrit_rates(const QutritMarkovParams& p, double nl, double nr);
QutritMarkovResult qutrit_markov_model(const QutritMarkovParams& p);

struct WheatstoneParams {
  double Jx = 1.0, JC = 1.0, J = 1.0, J23 = 20.0, h1 = 20.0, h2 = 0.5;
  double g1 = 1.0, g4 = 10.0, n = 0.5;
};

struct WheatstoneMarkovResult {
  double Lambda, Jx0, JC0, P0, N, maxF, J0, Jinf, eta1_sq, eta4_sq;
  RMat w;      // approximate rates, order {dd, -, +, uu}
  RVec p_ss;   // from w
  std::vector<std::string> flags;
};

double wheatstone_N(double n);
WheatstoneMarkovResult wheatstone_markov_model(const WheatstoneParams& p);
double wheatstone_p_minus(const WheatstoneMarkovResult& m, double dJx);       // Lorentzian dip
double wheatstone_qfi(const WheatstoneMarkovResult& m, double dJx, double n);  // two-population form
double wheatstone_current(const WheatstoneMarkovResult& m, double JC);

enum class BathKind { cold, hot };
struct BathRates {
  double down, up;
};
BathRates full_bath_rates(double m_abs, double detuning, double gamma, double n, BathKind kind);

struct MaxwellMarkovRates {
  double cold_down, cold_up, hot_down, hot_up;
  std::vector<std::string> flags;
};
MaxwellMarkovRates maxwell_markov_rates(double J, double gamma, double n_cold, double n_hot);
// Effective jumps on a qutrit site: 2 -> 0 / 0 -> 2 (cold), 1 -> 0 / 0 -> 1 (hot).
std::vector<LocalBath> maxwell_markov_baths(const MaxwellMarkovRates& r, const SpaceLayout& layout, int qutrit);

}  // namespace oqs
