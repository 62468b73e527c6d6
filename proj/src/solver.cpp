#include <numeric>
#include "oqs/solver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace oqs {

namespace {

using Rhs = std::function<void(double, const Vec&, Vec&)>;
using Sampler = std::function<void(double, const Vec&)>;

struct Stop {
  double t;
  bool sample;
  bool jump;
};

std::vector<Stop> make_stops(double t0, double t1, const std::vector<double>& samples,
                             const std::vector<double>& jumps) {
  std::vector<Stop> stops;
  for (double s : samples) {
    if (s < t0 - 1e-12 * std::max(1.0, std::abs(t0)) || s > t1 + 1e-12 * std::max(1.0, std::abs(t1)))
      throw ContractViolation("propagate: sample time outside the span");
    stops.push_back({std::clamp(s, t0, t1), true, false});
  }
  for (double b : jumps)
    if (b > t0 && b < t1) stops.push_back({b, false, true});
  stops.push_back({t1, false, false});
  std::sort(stops.begin(), stops.end(), [](const Stop& a, const Stop& b) { return a.t < b.t; });
  std::vector<Stop> merged;
  for (const Stop& s : stops) {
    if (!merged.empty() && merged.back().t == s.t) {
      merged.back().sample |= s.sample;
      merged.back().jump |= s.jump;
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

// Dormand-Prince 5(4) with FSAL; lands exactly on every stop.
long dopri(const Rhs& f, Vec& y, double t0, double t1, const std::vector<double>& samples,
           const std::vector<double>& jumps, const StepOptions& opt, const Sampler& on_sample) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const Index n = y.size();
  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ys(n), yn(n), err(n);
  double t = t0;
  f(t, y, k1);
  double h = opt.initial_step;
  if (h <= 0) {
    const double d0 = y.cwiseAbs().maxCoeff(), d1 = k1.cwiseAbs().maxCoeff();
    h = d1 > 0 ? 0.01 * std::max(d0, 1e-5) / d1 : 1e-3 * std::max(t1 - t0, 1e-12);
  }
  if (opt.max_step > 0) h = std::min(h, opt.max_step);
  long steps = 0;

  for (const Stop& stop : make_stops(t0, t1, samples, jumps)) {
    while (t < stop.t) {
      const double remaining = stop.t - t;
      const bool last = remaining <= h * (1 + 1e-9);
      const double hs = last ? remaining : h;
      ys = y + hs * a21 * k1;
      f(t + c2 * hs, ys, k2);
      ys = y + hs * (a31 * k1 + a32 * k2);
      f(t + c3 * hs, ys, k3);
      ys = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
      f(t + c4 * hs, ys, k4);
      ys = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      f(t + c5 * hs, ys, k5);
      ys = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      f(t + hs, ys, k6);
      yn = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      f(t + hs, yn, k7);
      err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double en =
          (err.cwiseAbs().array() / (opt.atol + opt.rtol * y.cwiseAbs().cwiseMax(yn.cwiseAbs()).array()))
              .maxCoeff();
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      if (en <= 1.0) {
        t = last ? stop.t : t + hs;
        y.swap(yn);
        k1.swap(k7);
        ++steps;
        h = last ? std::max(h, hs * fac) : hs * fac;
      } else {
        h = hs * fac;
      }
      if (opt.max_step > 0) h = std::min(h, opt.max_step);
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        throw StiffnessError("propagate: step size underflow", t, h);
      if (steps > opt.max_steps) throw StiffnessError("propagate: step budget exhausted", t, h);
    }
    if (stop.jump) f(t, y, k1);
    if (stop.sample && on_sample) on_sample(t, y);
  }
  return steps;
}

double min_eig_hermitian_part(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void check_trace(const Mat& rho0) {
  if (std::abs(rho0.trace() - 1.0) > 1e-10) throw ContractViolation("propagate_dense: trace(rho0) != 1");
}

Trajectory run_dense(const Rhs& f, Vec y, double t0, double t1, const RecordSpec& record,
                     const StepOptions& opt, const std::function<Mat(const Vec&)>& to_state,
                     const std::vector<double>& jumps) {
  Trajectory tr;
  for (const auto& [name, _] : record.observables) tr.observables[name];
  Sampler s = [&](double t, const Vec& v) {
    Mat rho = to_state(v);
    tr.times.push_back(t);
    for (const auto& [name, obs] : record.observables) tr.observables[name].push_back(obs(rho));
    if (record.diagnose_positivity) tr.min_eigenvalue = std::min(tr.min_eigenvalue, min_eig_hermitian_part(rho));
    if (record.keep_states) tr.states.push_back(std::move(rho));
  };
  tr.steps = dopri(f, y, t0, t1, record.times, jumps, opt, s);
  return tr;
}

// Solve A x = e_row where A is `a` with row `row` replaced by `functional`.
bool solve_with_functional(const SpMatC& a, Index row, const std::vector<std::pair<Index, cd>>& functional,
                           Vec& x) {
  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(a.nonZeros() + functional.size());
  for (Index c = 0; c < a.outerSize(); ++c)
    for (SpMatC::InnerIterator it(a, c); it; ++it)
      if (it.row() != row) trip.emplace_back(it.row(), c, it.value());
  for (const auto& [c, v] : functional) trip.emplace_back(row, c, v);
  SpMatC m(a.rows(), a.cols());
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  Eigen::SparseLU<SpMatC, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(m);
  lu.factorize(m);
  if (lu.info() != Eigen::Success) return false;
  Vec rhs = Vec::Zero(a.rows());
  rhs(row) = 1.0;
  x = lu.solve(rhs);
  for (int k = 0; k < 3 && x.allFinite(); ++k) x += lu.solve(Vec(rhs - m * x));  // refinement
  return lu.info() == Eigen::Success && x.allFinite();
}

// SparseLU loses several digits on slowly relaxing generators; small blocks go dense.
constexpr Index dense_component_limit = 2500;

bool solve_dense_with_functional(const SpMatC& a, Index row, const std::vector<std::pair<Index, cd>>& functional,
                                 Vec& x) {
  Mat m(a);
  m.row(row).setZero();
  for (const auto& [c, v] : functional) m(row, c) = v;
  Eigen::PartialPivLU<Mat> lu(m);
  const auto piv = lu.matrixLU().diagonal().cwiseAbs();
  if (!(piv.minCoeff() > 1e-13 * piv.maxCoeff())) return false;
  Vec rhs = Vec::Zero(a.rows());
  rhs(row) = 1.0;
  x = lu.solve(rhs);
  return x.allFinite() && (m * x - rhs).norm() <= 1e-8 * (1.0 + m.norm() * x.norm());
}

Mat finish_state(Mat rho) {
  rho = 0.5 * (rho + rho.adjoint());
  return rho / rho.trace().real();
}

// Indices sharing a connected component of the sparsity graph with any diagonal entry of the
// block starting at offset. Blocks decoupled from the populations cannot carry trace.
std::vector<Index> population_component(const SpMatC& a, Index d, Index offset) {
  const Index n = a.rows();
  std::vector<Index> parent(n);
  std::iota(parent.begin(), parent.end(), Index(0));
  auto root = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Index c = 0; c < a.outerSize(); ++c)
    for (SpMatC::InnerIterator it(a, c); it; ++it)
      if (it.value() != cd(0)) {
        const Index ra = root(it.row()), rb = root(c);
        if (ra != rb) parent[ra] = rb;
      }
  std::vector<char> keep_root(n, 0);
  for (Index i = 0; i < d; ++i) keep_root[root(offset + i + i * d)] = 1;
  std::vector<Index> out;
  for (Index i = 0; i < n; ++i)
    if (keep_root[root(i)]) out.push_back(i);
  return out;
}

// Two different normalizing functionals must give the same answer.
Vec unique_null_vector(const SpMatC& a_full, Index d, Index offset) {
  const std::vector<Index> keep = population_component(a_full, d, offset);
  std::vector<Index> pos(a_full.rows(), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) pos[keep[k]] = static_cast<Index>(k);
  const Index m = static_cast<Index>(keep.size());
  std::vector<Eigen::Triplet<cd>> trip;
  for (Index c = 0; c < a_full.outerSize(); ++c)
    if (pos[c] >= 0)
      for (SpMatC::InnerIterator it(a_full, c); it; ++it)
        if (pos[it.row()] >= 0) trip.emplace_back(pos[it.row()], pos[c], it.value());
  SpMatC a(m, m);
  a.setFromTriplets(trip.begin(), trip.end());

  std::vector<std::pair<Index, cd>> trace_row, weighted_row;
  for (Index i = 0; i < d; ++i) {
    const Index k = pos[offset + i + i * d];
    trace_row.emplace_back(k, 1.0);
    weighted_row.emplace_back(k, 1.0 + 0.37 * double(i) / double(d));
  }
  Vec x1, x2;
  const Index r1 = pos[offset], r2 = pos[offset + (d - 1) + (d - 1) * d];
  const bool ok = m <= dense_component_limit
                      ? solve_dense_with_functional(a, r1, trace_row, x1) &&
                            solve_dense_with_functional(a, r2, weighted_row, x2)
                      : solve_with_functional(a, r1, trace_row, x1) && solve_with_functional(a, r2, weighted_row, x2);
  if (!ok) throw NonUniqueSteadyState("steady state: singular reduced system", -1);
  cd tr1 = 0, tr2 = 0;
  for (const auto& [k, v] : trace_row) {
    tr1 += x1(k);
    tr2 += x2(k);
  }
  x1 /= tr1;
  x2 /= tr2;
  const double diff = (x1 - x2).cwiseAbs().maxCoeff();
  if (!(diff <= 1e-6 * std::max(1.0, x1.cwiseAbs().maxCoeff())))
    throw NonUniqueSteadyState("steady state: solution depends on normalization (null space > 1), difference " +
                                   std::to_string(diff),
                               -1);
  Vec out = Vec::Zero(a_full.rows());
  for (Index k = 0; k < m; ++k) out(keep[k]) = x1(k);
  return out;
}

}  // namespace

Mat steady_state_direct(const Liouvillian& l) {
  const Index d = l.dim;
  if (l.L.rows() != d * d) throw ContractViolation("steady_state_direct: generator size mismatch");
  Vec x;
  if (d * d <= 256) {
    Mat ns = null_space(Mat(l.L), 1e-10);
    if (ns.cols() != 1)
      throw NonUniqueSteadyState("steady state: null space dimension " + std::to_string(ns.cols()),
                                 static_cast<int>(ns.cols()));
    x = ns.col(0);
  } else {
    x = unique_null_vector(l.L, d, 0);
  }
  return finish_state(l.from_frame(x));
}

Trajectory propagate_dense(const Mat& rho0, const DrivenLiouvillian& l, double t0, double t1,
                           const RecordSpec& record, const StepOptions& opt) {
  check_trace(rho0);
  Rhs f = [&](double t, const Vec& x, Vec& y) { l.apply(t, x, y); };
  return run_dense(f, vec(rho0), t0, t1, record, opt, [](const Vec& v) { return unvec(v); }, l.breakpoints);
}

Trajectory propagate_dense(const Mat& rho0, const Liouvillian& l, double t0, double t1,
                           const RecordSpec& record, const StepOptions& opt) {
  check_trace(rho0);
  Rhs f = [&](double, const Vec& x, Vec& y) { y.noalias() = l.L * x; };
  return run_dense(f, l.to_frame(rho0), t0, t1, record, opt,
                   [&](const Vec& v) { return l.from_frame(v); }, {});
}

AveragedRun propagate_averaged(const Mat& rho0, const DrivenLiouvillian& l, double t0, double t1,
                               double avg_from, const StepOptions& opt) {
  check_trace(rho0);
  if (!(avg_from >= t0 && avg_from < t1)) throw ContractViolation("propagate_averaged: bad averaging window");
  const Index n = rho0.size();
  Vec y = Vec::Zero(2 * n);
  y.head(n) = vec(rho0);
  Vec scratch(n);
  Rhs f = [&](double t, const Vec& x, Vec& dy) {
    l.apply(t, x.head(n), scratch);
    dy.resize(2 * n);
    dy.head(n) = scratch;
    if (t >= avg_from) dy.tail(n) = x.head(n);
    else dy.tail(n).setZero();
  };
  std::vector<double> jumps = l.breakpoints;
  jumps.push_back(avg_from);
  dopri(f, y, t0, t1, {}, jumps, opt, {});
  return {unvec(y.head(n)), unvec(y.tail(n)) / (t1 - avg_from)};
}

SpMat SparseDrive::at(double t) const {
  SpMat h = constant;
  for (const auto& [c, op] : terms) h += c(t) * op;
  return h;
}

Trajectory propagate_pure_sparse(const Vec& psi0, const SparseDrive& h, double t0, double t1,
                                 const PureRecordSpec& record, double tol) {
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ContractViolation("propagate_pure_sparse: psi0 not normalized");
  Trajectory tr;
  for (const auto& [name, _] : record.observables) tr.observables[name];
  auto sample = [&](double t, const Vec& v) {
    tr.times.push_back(t);
    for (const auto& [name, obs] : record.observables) tr.observables[name].push_back(obs(v));
    if (record.keep_states) tr.kets.push_back(v);
  };
  if (h.terms.empty()) {
    std::vector<double> stops = record.times;
    std::sort(stops.begin(), stops.end());
    Vec psi = psi0;
    double t = t0;
    for (double target : stops) {
      if (target < t0 || target > t1) throw ContractViolation("propagate_pure_sparse: sample outside span");
      if (target > t) psi = krylov_expm_action(h.constant, psi, target - t, tol);
      t = target;
      sample(t, psi);
      ++tr.steps;
    }
    if (t < t1) psi = krylov_expm_action(h.constant, psi, t1 - t, tol);
    return tr;
  }
  Rhs f = [&](double t, const Vec& x, Vec& y) {
    y.noalias() = h.constant * x;
    for (const auto& [c, op] : h.terms) {
      const cd k = c(t);
      if (k != cd(0)) y.noalias() += k * (op * x);
    }
    y *= -I1;
  };
  StepOptions opt;
  opt.atol = tol;
  opt.rtol = tol;
  Vec y = psi0;
  tr.steps = dopri(f, y, t0, t1, record.times, h.breakpoints, opt, sample);
  return tr;
}

bool relative_change_below(double current, double previous, double threshold) {
  if (previous == 0.0) return current == 0.0;
  return std::abs(current - previous) / std::abs(previous) < threshold;
}

ConvergedRun steady_state_by_convergence(const DrivenLiouvillian& l, const Mat& rho0,
                                         const DenseObservable& current, const ConvergenceOptions& opt) {
  if (!(opt.window > 0 && opt.window <= opt.block)) throw ContractViolation("convergence: need 0 < window <= block");
  ConvergedRun out{rho0, 0.0, 0, {}};
  double t = 0.0;
  for (int m = 1; m <= opt.max_blocks; ++m) {
    AveragedRun r = propagate_averaged(out.state, l, t, t + opt.block, t + opt.block - opt.window, opt.step);
    t += opt.block;
    out.state = r.final_state;
    out.current = current(r.average);
    out.blocks = m;
    out.history.push_back(out.current);
    if (m >= 2 && relative_change_below(out.history[m - 1], out.history[m - 2], opt.threshold)) return out;
  }
  const size_t k = out.history.size();
  throw IterationError("convergence: block limit reached, last averages " +
                           std::to_string(k > 1 ? out.history[k - 2] : 0.0) + ", " +
                           std::to_string(out.history.back()),
                       k > 1 ? std::abs(out.history[k - 1] - out.history[k - 2]) : 0.0);
}

Mat PeriodicState::at(double t) const {
  Mat out = Mat::Zero(rho.at(0).rows(), rho.at(0).cols());
  for (const auto& [k, r] : rho) out += std::exp(I1 * (double(k) * Omega * t)) * r;
  return out;
}

PeriodicState periodic_steady_state(const FourierDrive& l, int K) {
  if (K < 0) throw ContractViolation("periodic_steady_state: K must be >= 0");
  if (!l.harmonics.count(0)) throw ContractViolation("periodic_steady_state: missing zeroth harmonic");
  const Index d = l.dim, n = d * d, blocks = 2 * K + 1;
  std::vector<Eigen::Triplet<cd>> trip;
  for (int k = -K; k <= K; ++k) {
    const Index rb = (k + K) * n;
    for (const auto& [m, lm] : l.harmonics) {
      const int j = k - m;
      if (j < -K || j > K) continue;
      const Index cb = (j + K) * n;
      for (Index c = 0; c < lm.outerSize(); ++c)
        for (SpMatC::InnerIterator it(lm, c); it; ++it) trip.emplace_back(rb + it.row(), cb + c, it.value());
    }
    if (k != 0)
      for (Index i = 0; i < n; ++i) trip.emplace_back(rb + i, rb + i, -I1 * (double(k) * l.Omega));
  }
  SpMatC a(n * blocks, n * blocks);
  a.setFromTriplets(trip.begin(), trip.end());
  Vec x = unique_null_vector(a, d, K * n);
  PeriodicState out{l.Omega, K, {}};
  for (int k = -K; k <= K; ++k) out.rho[k] = unvec(x.segment((k + K) * n, n));
  out.rho[0] = 0.5 * (out.rho[0] + out.rho[0].adjoint());
  return out;
}

GroundState ground_state(const Mat& h) {
  EigResult e = hermitian_eig(h);
  const double scale = std::max(e.values.cwiseAbs().maxCoeff(), 1e-300);
  const double gap = e.values.size() > 1 ? e.values(1) - e.values(0) : std::numeric_limits<double>::infinity();
  return {e.values(0), e.vectors.col(0), gap <= 1e-10 * scale, gap};
}

GroundState ground_state(const SpMat& h, double tol) {
  if (h.rows() <= dense_eig_limit) return ground_state(Mat(h));
  Eigenpair g = lanczos_extremal(h, Which::lowest, tol);
  Mat defl = g.vector;
  Eigenpair second = lanczos_extremal(h, Which::lowest, tol, 5000, nullptr, &defl);
  const double gap = second.value - g.value;
  return {g.value, g.vector, gap <= 1e-10 * norm_estimate(h), gap};
}

double cosine_ramp(double start, double end, double s) {
  s = std::clamp(s, 0.0, 1.0);
  if (s == 0.0) return start;
  if (s == 1.0) return end;
  return start + (end - start) * (1.0 - std::cos(M_PI * s)) / 2.0;
}

double RampSchedule::total_time() const {
  double t = 0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

std::vector<double> RampSchedule::boundaries() const {
  std::vector<double> b;
  double t = 0;
  for (const auto& s : segments) {
    if (!(s.duration > 0)) throw ContractViolation("RampSchedule: durations must be positive");
    t += s.duration;
    b.push_back(t);
  }
  return b;
}

double RampSchedule::value(const std::string& parameter, double t, double base) const {
  double cur = base, start = 0.0;
  for (const auto& s : segments) {
    if (!(s.duration > 0)) throw ContractViolation("RampSchedule: durations must be positive");
    if (s.parameter == parameter) {
      if (t < start) return cur;
      if (t <= start + s.duration) return cosine_ramp(s.start, s.end, (t - start) / s.duration);
      cur = s.end;
    }
    start += s.duration;
  }
  return cur;
}

std::map<std::string, double> RampSchedule::values(double t, std::map<std::string, double> base) const {
  for (auto& [name, v] : base) v = value(name, t, v);
  return base;
}

AdiabaticResult adiabatic_run(const RampSchedule& schedule, const ParametricHamiltonian& h, const Vec& psi0,
                              const std::vector<LocalBath>* dissipation, double tol) {
  // Parameter continuity across segments.
  std::map<std::string, double> last = h.base;
  for (const auto& s : schedule.segments) {
    if (!last.count(s.parameter)) throw ContractViolation("adiabatic_run: unknown parameter " + s.parameter);
    if (std::abs(last[s.parameter] - s.start) > 1e-12 * std::max(1.0, std::abs(s.start)))
      throw ContractViolation("adiabatic_run: discontinuous ramp for " + s.parameter);
    last[s.parameter] = s.end;
  }
  std::map<std::string, bool> ramped;
  for (const auto& s : schedule.segments) ramped[s.parameter] = true;

  SpMat fixed = h.fixed;
  std::vector<std::pair<Coefficient, SpMat>> terms;
  for (const auto& [name, op] : h.linear) {
    const double base = h.base.at(name);
    if (!ramped.count(name)) {
      fixed += base * op;
      continue;
    }
    terms.emplace_back([&schedule, name, base](double t) { return cd(schedule.value(name, t, base)); }, op);
  }
  const double total = schedule.total_time();
  const std::vector<double> bounds = schedule.boundaries();

  if (!dissipation) {
    SparseDrive drive{fixed, terms, bounds};
    PureRecordSpec rec;
    rec.times = {total};
    rec.keep_states = true;
    Trajectory tr = propagate_pure_sparse(psi0, drive, 0.0, total, rec, tol);
    return {true, tr.kets.back(), Mat()};
  }
  if (fixed.rows() > dense_path_cap) throw CapacityError("adiabatic_run: dense path above dimension cap");
  // Operator form: rho' = -i (K rho - rho K^dag) + sum L rho L^dag, K = H - i/2 sum L^dag L.
  const Index d = fixed.rows();
  SpMat decay(d, d);
  std::vector<SpMat> jumps;
  for (const auto& b : *dissipation) {
    if (b.rate < 0) throw ContractViolation("adiabatic_run: negative rate");
    if (b.rate == 0) continue;
    SpMat l = (std::sqrt(b.rate) * b.jump).sparseView();
    decay = SpMat(decay + SpMat(SpMat(l.adjoint()) * l));
    jumps.push_back(l);
  }
  const SpMatC k_fixed = SpMatC(fixed) - (0.5 * I1) * SpMatC(decay);
  std::vector<std::pair<Coefficient, SpMatC>> k_terms;
  for (const auto& [c, op] : terms) k_terms.emplace_back(c, SpMatC(op));
  std::vector<SpMatC> jumps_c(jumps.begin(), jumps.end());
  Mat a(d, d), lr(d, d);
  Rhs f = [&](double t, const Vec& x, Vec& y) {
    Eigen::Map<const Mat> rho(x.data(), d, d);
    SpMatC k = k_fixed;
    for (const auto& [c, op] : k_terms) k += c(t) * op;
    a.noalias() = k * rho;
    y.resize(d * d);
    Eigen::Map<Mat> out(y.data(), d, d);
    out = -I1 * (a - a.adjoint());
    for (std::size_t j = 0; j < jumps_c.size(); ++j) {
      lr.noalias() = jumps_c[j] * rho;
      a.noalias() = jumps_c[j] * lr.adjoint();
      out += a.adjoint();
    }
  };
  StepOptions opt;
  opt.atol = opt.rtol = tol;
  Vec y = vec(Mat(psi0 * psi0.adjoint()));
  dopri(f, y, 0.0, total, {}, bounds, opt, {});
  Mat rho_end = unvec(y);
  return {false, Vec(), Mat(0.5 * (rho_end + rho_end.adjoint()))};
}

}  // namespace oqs
