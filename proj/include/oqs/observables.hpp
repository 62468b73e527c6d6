#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oqs/hilbert.hpp"
#include "oqs/linalg.hpp"

namespace oqs {

double expect(const Mat& op, const Mat& rho);  // Re tr{op rho}

// Bath attached to a bosonic (or two-level) mode: Gamma (n+1) M[a] + Gamma n M[a^dag].
struct ThermalMode {
  double rate;
  double occupation;
  Mat mode;
};

// Excitations injected by the bath per unit time.
double excitation_current_bath(const ThermalMode& bath, const Mat& rho);

enum class Prefactor { two_j, j };

Mat link_operator(const SpaceLayout& layout, int i, int j);  // sx_i sy_j - sy_i sx_j
double spin_current(const Mat& rho, const SpaceLayout& layout, int i, int j, double coupling,
                    Prefactor convention = Prefactor::two_j);

double heat_current(const Mat& h, const Mat& dissipated);  // tr{H D[rho]}
double work_rate(const Mat& dh_dt, const Mat& rho);

struct Rectification {
  double R;  // +inf when the reverse current vanishes
  double C;
};
Rectification rectification_and_contrast(double forward, double reverse);

Mat psd_sqrt(const Mat& a);  // eigenvalues clipped at zero
double concurrence(const Mat& rho);
double von_neumann_entropy(const Mat& rho);
double fidelity(const Mat& rho, const Mat& sigma);
double fidelity(const Mat& rho, const Vec& psi);
double effective_temperature(double n_mean);

struct FisherResult {
  double value;
  double step;
  bool quantum;
  bool refined = false;  // Richardson extrapolation applied
  bool flagged = false;  // off-diagonal residue or a dropped zero-probability outcome
  double offdiag = 0.0;
};

using StateFamily = std::function<Mat(double)>;
using DistributionFamily = std::function<RVec(double)>;

FisherResult qfi_diagonal(const StateFamily& family, double theta0, double step = 1e-4);
FisherResult cfi_projective(const DistributionFamily& family, double theta0, double step = 1e-4);

struct OrderParameters {
  double n, a, kappa;
};
OrderParameters order_parameters(const std::vector<double>& occupations, const std::vector<cd>& amplitudes);
OrderParameters order_parameters(const Vec& psi, const SpaceLayout& layout);
OrderParameters order_parameters(const Mat& rho, const SpaceLayout& layout);

// <n_i> and <a_i> on a product-basis state without building embedded operators.
std::vector<double> site_occupations(const Vec& psi, const SpaceLayout& layout);
std::vector<cd> site_amplitudes(const Vec& psi, const SpaceLayout& layout);
std::vector<double> site_occupation_variances(const Vec& psi, const SpaceLayout& layout);

struct GridArgmax {
  double x;
  double slope;
  bool at_boundary;
};
// Maximum of the central-difference derivative of values over grid, parabolically refined.
GridArgmax variance_derivative_argmax(const std::vector<double>& grid, const std::vector<double>& values);

}  // namespace oqs
