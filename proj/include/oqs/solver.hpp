#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oqs/lindblad.hpp"

namespace oqs {

Mat steady_state_direct(const Liouvillian& l);

struct StepOptions {
  double atol = 1e-8;
  double rtol = 1e-8;
  double initial_step = 0.0;  // 0: automatic
  double max_step = 0.0;      // 0: unbounded
  long max_steps = 50'000'000;
};

using DenseObservable = std::function<double(const Mat&)>;
using PureObservable = std::function<double(const Vec&)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<Mat> states;  // density path; empty unless requested
  std::vector<Vec> kets;    // pure path; empty unless requested
  std::map<std::string, std::vector<double>> observables;
  double min_eigenvalue = 0.0;  // worst over recorded states when diagnosed
  long steps = 0;
};

struct RecordSpec {
  std::vector<double> times;  // sample times inside [t0, t1]
  std::map<std::string, DenseObservable> observables;
  bool keep_states = false;
  bool diagnose_positivity = false;
};

// Dormand-Prince 5(4) on vec(rho).
Trajectory propagate_dense(const Mat& rho0, const DrivenLiouvillian& l, double t0, double t1,
                           const RecordSpec& record = {}, const StepOptions& opt = {});
Trajectory propagate_dense(const Mat& rho0, const Liouvillian& l, double t0, double t1,
                           const RecordSpec& record = {}, const StepOptions& opt = {});

// Final state plus its time average over [avg_from, t1].
struct AveragedRun {
  Mat final_state;
  Mat average;
};
AveragedRun propagate_averaged(const Mat& rho0, const DrivenLiouvillian& l, double t0, double t1,
                               double avg_from, const StepOptions& opt = {});

struct SparseDrive {
  SpMat constant;
  std::vector<std::pair<Coefficient, SpMat>> terms;
  std::vector<double> breakpoints;
  SpMat at(double t) const;
};

struct PureRecordSpec {
  std::vector<double> times;
  std::map<std::string, PureObservable> observables;
  bool keep_states = false;
};

// Krylov steps for constant drives, Dormand-Prince otherwise.
Trajectory propagate_pure_sparse(const Vec& psi0, const SparseDrive& h, double t0, double t1,
                                 const PureRecordSpec& record = {}, double tol = 1e-8);

struct ConvergenceOptions {
  double window = 1000.0;
  double block = 5000.0;
  double threshold = 1e-4;
  int max_blocks = 50;
  StepOptions step;
};

struct ConvergedRun {
  Mat state;
  double current;
  int blocks;
  std::vector<double> history;
};

bool relative_change_below(double current, double previous, double threshold);

ConvergedRun steady_state_by_convergence(const DrivenLiouvillian& l, const Mat& rho0,
                                         const DenseObservable& current,
                                         const ConvergenceOptions& opt = {});

// Periodic steady state of L(t) = sum_m L_m e^{i m Omega t}, harmonics |k| <= K.
struct FourierDrive {
  Index dim = 0;
  double Omega = 0.0;
  std::map<int, SpMatC> harmonics;
};

struct PeriodicState {
  double Omega;
  int K;
  std::map<int, Mat> rho;  // Fourier components, site basis
  Mat average() const { return rho.at(0); }
  Mat at(double t) const;
};

PeriodicState periodic_steady_state(const FourierDrive& l, int K);

struct GroundState {
  double energy;
  Vec state;
  bool degenerate;
  double gap;
};

inline Index dense_eig_limit = 2000;
GroundState ground_state(const Mat& h);
GroundState ground_state(const SpMat& h, double tol = 1e-10);

struct RampSegment {
  std::string parameter;
  double start, end, duration;
};

struct RampSchedule {
  std::vector<RampSegment> segments;  // executed back to back

  double total_time() const;
  std::vector<double> boundaries() const;
  double value(const std::string& parameter, double t, double base) const;
  std::map<std::string, double> values(double t, std::map<std::string, double> base) const;
};

double cosine_ramp(double start, double end, double s);

// H(p) = fixed + sum_name p[name] * linear[name]
struct ParametricHamiltonian {
  SpMat fixed;
  std::map<std::string, SpMat> linear;
  std::map<std::string, double> base;
};

struct AdiabaticResult {
  bool pure;
  Vec psi;
  Mat rho;
};

inline Index dense_path_cap = 4096;

AdiabaticResult adiabatic_run(const RampSchedule& schedule, const ParametricHamiltonian& h,
                              const Vec& psi0, const std::vector<LocalBath>* dissipation = nullptr,
                              double tol = 1e-8);

}  // namespace oqs
