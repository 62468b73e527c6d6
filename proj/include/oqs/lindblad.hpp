#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "oqs/linalg.hpp"

namespace oqs {

// Column stacking: vec(rho)[i + j*d] = rho(i, j), so vec(A X B) = (B^T kron A) vec(X).
inline Vec vec(const Mat& rho) { return Eigen::Map<const Vec>(rho.data(), rho.size()); }
Mat unvec(const Vec& v);

SpMatC left_mult(const Mat& a);        // X -> A X
SpMatC right_mult(const Mat& b);       // X -> X B
SpMatC sandwich(const Mat& a, const Mat& b);  // X -> A X B

struct LocalBath {
  Mat jump;
  double rate;
};

using SpectralFn = std::function<double(double)>;

struct GlobalBath {
  Mat coupling;  // hermitian
  SpectralFn gamma;
  double secular_cutoff = std::numeric_limits<double>::infinity();
  double degeneracy_tol = -1.0;  // < 0: 1e-9 * ||H||
};

// Generator acting on vec(V^dag rho V); empty frame means the site basis.
struct Liouvillian {
  Index dim = 0;
  SpMatC L;
  Mat frame;

  Vec to_frame(const Mat& rho) const;
  Mat from_frame(const Vec& v) const;
  Mat apply(const Mat& rho) const;
  double norm() const;
  Liouvillian& operator+=(const Liouvillian& other);
};

Liouvillian in_site_basis(const Liouvillian& l);  // dense rotation, small dims only

Mat dissipator_apply(const Mat& a, const Mat& rho);
SpMatC dissipator_superop(const Mat& a);
SpMatC hamiltonian_superop(const Mat& h);

Liouvillian local_liouvillian(const Mat& h, const std::vector<LocalBath>& baths);

struct Eigenoperator {
  double omega;
  Mat op;  // site basis; [H, op] = -omega op
};

std::vector<Eigenoperator> eigenoperator_decompose(const Mat& h, const Mat& a,
                                                   double degeneracy_tol = -1.0);

// Single-bath contribution in the eigenbasis of h (no Hamiltonian part).
Liouvillian global_dissipator(const Mat& h, const GlobalBath& bath);

// -i[H, .] + global baths + optional local baths, all in the eigenbasis of h.
Liouvillian global_liouvillian(const Mat& h, const std::vector<GlobalBath>& baths,
                               const std::vector<LocalBath>& locals = {});

// Full secular form: sum_w gamma(w) M[A(w)], i.e. cutoff zero.
Liouvillian secular_global_liouvillian(const Mat& h, std::vector<GlobalBath> baths);

double ohmic_rate(double omega, double Gamma, double omega_ref, double temperature);
SpectralFn ohmic(double Gamma, double omega_ref, double temperature);

// Affine time dependence: L(t) = constant + sum_k c_k(t) L_k.
using Coefficient = std::function<cd(double)>;

struct DrivenLiouvillian {
  Index dim = 0;
  SpMatC constant;
  std::vector<std::pair<Coefficient, SpMatC>> terms;
  std::vector<double> breakpoints;  // times where a coefficient jumps

  bool is_constant() const { return terms.empty(); }
  Liouvillian at(double t) const;
  void apply(double t, const Vec& x, Vec& y) const;
};

struct DrivenHamiltonian {
  Mat constant;
  std::vector<std::pair<Coefficient, Mat>> terms;
  Mat at(double t) const;
};

struct ScheduledBath {
  LocalBath bath;
  std::function<double(double)> rate_of_t;  // empty: constant bath.rate
};

DrivenLiouvillian time_dependent_liouvillian(const DrivenHamiltonian& h,
                                             const std::vector<ScheduledBath>& baths,
                                             std::vector<double> breakpoints = {});

DrivenLiouvillian constant_drive(const Liouvillian& l);

}  // namespace oqs
