#include <cmath>
#include <numeric>
#include <random>

#include "oqs/scenarios.hpp"

namespace oqs {

namespace {

void enumerate(std::vector<int>& occ, int site, int remaining, int cap, std::vector<std::vector<int>>& out) {
  const int n = static_cast<int>(occ.size());
  if (site == n - 1) {
    if (remaining <= cap) {
      occ[site] = remaining;
      out.push_back(occ);
    }
    return;
  }
  // lexicographic: site 0 most significant, ascending
  for (int k = std::max(0, remaining - cap * (n - site - 1)); k <= std::min(cap, remaining); ++k) {
    occ[site] = k;
    enumerate(occ, site + 1, remaining - k, cap, out);
  }
}

void index_basis(BoseHubbardBasis& b) {
  b.lookup.reserve(b.states.size());
  for (std::size_t i = 0; i < b.states.size(); ++i) b.lookup.emplace(b.key(b.states[i]), static_cast<Index>(i));
}

std::vector<std::pair<int, int>> grid_bonds(int rows, int cols) {
  std::vector<std::pair<int, int>> bonds;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const int i = r * cols + c;
      if (c + 1 < cols) bonds.push_back({i, i + 1});
      if (r + 1 < rows) bonds.push_back({i, i + cols});
    }
  return bonds;
}

SpMat from_triplets(Index n, const std::vector<Eigen::Triplet<cd>>& t) {
  SpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

std::uint64_t BoseHubbardBasis::key(const std::vector<int>& occupation) const {
  std::uint64_t k = 0;
  for (int n : occupation) k = k * static_cast<std::uint64_t>(cap + 1) + static_cast<std::uint64_t>(n);
  return k;
}

Index BoseHubbardBasis::find(const std::vector<int>& occupation) const {
  if (static_cast<int>(occupation.size()) != sites()) return -1;
  for (int n : occupation)
    if (n < 0 || n > cap) return -1;
  auto it = lookup.find(key(occupation));
  return it == lookup.end() ? -1 : it->second;
}

SpaceLayout BoseHubbardBasis::layout() const {
  if (mode != Mode::grand_canonical) throw ContractViolation("BoseHubbardBasis: layout needs the product basis");
  return SpaceLayout(std::vector<int>(sites(), cap + 1));
}

BoseHubbardBasis bose_hubbard_canonical(int rows, int cols, int particles, int cap) {
  if (rows < 1 || cols < 1 || cap < 0 || particles < 0)
    throw ContractViolation("bose_hubbard_canonical: invalid lattice or sector");
  BoseHubbardBasis b{BoseHubbardBasis::Mode::canonical, rows, cols, cap, particles, {}, {}};
  if (particles > cap * rows * cols) throw ContractViolation("bose_hubbard_canonical: empty sector");
  std::vector<int> occ(rows * cols, 0);
  enumerate(occ, 0, particles, cap, b.states);
  index_basis(b);
  return b;
}

BoseHubbardBasis bose_hubbard_grand(int rows, int cols, int levels) {
  if (rows < 1 || cols < 1 || levels < 1) throw ContractViolation("bose_hubbard_grand: invalid lattice");
  const int n = rows * cols;
  const double dim = std::pow(double(levels), n);
  if (dim > double(1 << 22)) throw CapacityError("bose_hubbard_grand: product basis too large");
  BoseHubbardBasis b{BoseHubbardBasis::Mode::grand_canonical, rows, cols, levels - 1, -1, {}, {}};
  b.states.reserve(static_cast<std::size_t>(dim));
  std::vector<int> occ(n, 0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i) {
    b.states.push_back(occ);
    for (int s = n - 1; s >= 0; --s) {
      if (++occ[s] < levels) break;
      occ[s] = 0;
    }
  }
  index_basis(b);
  return b;
}

std::vector<double> disorder_preset() { return {0.05, -0.02, 0.01, 0.07, 0.05, -0.09, 0.01, -0.05, -0.04}; }

std::vector<double> disorder_sample(int sites, double spread, std::uint64_t seed) {
  if (sites < 2 || spread < 0) throw ContractViolation("disorder_sample: need >= 2 sites and spread >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(sites);
  for (double& v : x) v = u(rng);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / sites;
  double var = 0;
  for (double& v : x) {
    v -= mean;
    var += v * v;
  }
  const double sd = std::sqrt(var / sites);
  for (double& v : x) v *= sd > 0 ? spread / sd : 0.0;
  return x;
}

BoseHubbardOperators bose_hubbard_operators(const BoseHubbardBasis& basis, double U, const std::vector<double>& dU) {
  const int n = basis.sites();
  if (!dU.empty() && static_cast<int>(dU.size()) != n)
    throw ContractViolation("bose_hubbard_operators: disorder list length differs from site count");
  const Index dim = basis.size();
  std::vector<Eigen::Triplet<cd>> num, inter, hop, drive;
  std::vector<std::vector<Eigen::Triplet<cd>>> site(n);
  const auto bonds = grid_bonds(basis.rows, basis.cols);
  const bool grand = basis.mode == BoseHubbardBasis::Mode::grand_canonical;
  for (Index k = 0; k < dim; ++k) {
    const auto& s = basis.states[k];
    double total = 0, e = 0;
    for (int i = 0; i < n; ++i) {
      total += s[i];
      e += 0.5 * (U + (dU.empty() ? 0.0 : dU[i])) * s[i] * (s[i] - 1);
      if (s[i]) site[i].emplace_back(k, k, double(s[i]));
    }
    if (total) num.emplace_back(k, k, total);
    if (e != 0) inter.emplace_back(k, k, e);
    for (auto [a, b] : bonds)
      for (auto [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
        if (s[from] == 0 || s[to] == basis.cap) continue;
        auto t = s;
        --t[from];
        ++t[to];
        hop.emplace_back(basis.find(t), k, -std::sqrt(double(s[from]) * (s[to] + 1)));
      }
    if (grand)
      for (int i = 0; i < n; ++i) {
        if (s[i] == 0) continue;
        auto t = s;
        --t[i];
        const Index j = basis.find(t);
        const double a = -std::sqrt(double(s[i]));
        drive.emplace_back(j, k, a);
        drive.emplace_back(k, j, a);
      }
  }
  BoseHubbardOperators ops;
  ops.number = from_triplets(dim, num);
  ops.interaction = from_triplets(dim, inter);
  ops.hopping = from_triplets(dim, hop);
  ops.drive = from_triplets(dim, drive);
  for (int i = 0; i < n; ++i) ops.site_number.push_back(from_triplets(dim, site[i]));
  return ops;
}

SpMat bose_hubbard_hamiltonian(const BoseHubbardBasis& basis, const BoseHubbardParams& p) {
  if (basis.mode == BoseHubbardBasis::Mode::canonical && p.chi != 0.0)
    throw ContractViolation("bose_hubbard_hamiltonian: a coherent drive breaks the particle-number sector");
  const BoseHubbardOperators ops = bose_hubbard_operators(basis, p.U, p.dU);
  SpMat h = ops.interaction - p.mu * ops.number + p.J * ops.hopping;
  if (p.chi != 0.0) h += p.chi * ops.drive;
  return h;
}

std::vector<LocalBath> bose_hubbard_decoherence(const BoseHubbardBasis& basis, const Decoherence& d) {
  const SpaceLayout lay = basis.layout();
  std::vector<LocalBath> out;
  for (int i = 0; i < basis.sites(); ++i) {
    const Mat a = embed(destroy(basis.cap + 1), i, lay);
    out.push_back({a, d.gamma1});
    out.push_back({a.adjoint() * a, 2.0 * d.gamma2});
  }
  return out;
}

RampSchedule bose_hubbard_ramp(double mu_target, double J_target, double U) {
  return {{{"chi", 0.0, 0.1 * U, 50.0 / U},
           {"mu", -0.5 * U, mu_target, 100.0 / U},
           {"J", 0.1 * U, J_target, 50.0 / U},
           {"chi", 0.1 * U, 0.0, 100.0 / U}}};
}

ParametricHamiltonian bose_hubbard_parametric(const BoseHubbardBasis& basis, double U, const std::vector<double>& dU) {
  const BoseHubbardOperators ops = bose_hubbard_operators(basis, U, dU);
  ParametricHamiltonian h;
  h.fixed = ops.interaction;
  h.linear["mu"] = -ops.number;
  h.linear["J"] = ops.hopping;
  h.linear["chi"] = ops.drive;
  h.base = {{"mu", -0.5 * U}, {"J", 0.1 * U}, {"chi", 0.0}};
  return h;
}

PreparationResult bose_hubbard_prepare(const BoseHubbardBasis& basis, double mu, double J,
                                       const std::optional<Decoherence>& decoherence, double U,
                                       const std::vector<double>& dU) {
  if (basis.mode != BoseHubbardBasis::Mode::grand_canonical)
    throw ContractViolation("bose_hubbard_prepare: needs the grand-canonical basis");
  const SpaceLayout lay = basis.layout();
  Vec psi0 = Vec::Zero(basis.size());
  psi0(0) = 1.0;
  const ParametricHamiltonian ph = bose_hubbard_parametric(basis, U, dU);
  std::vector<LocalBath> baths;
  if (decoherence) baths = bose_hubbard_decoherence(basis, *decoherence);
  const AdiabaticResult run =
      adiabatic_run(bose_hubbard_ramp(mu, J, U), ph, psi0, decoherence ? &baths : nullptr);
  const GroundState target = ground_state(bose_hubbard_hamiltonian(basis, {mu, U, J, 0.0, dU}));
  PreparationResult out;
  out.target_energy = target.energy;
  out.target_degenerate = target.degenerate;
  if (run.pure) {
    out.order = order_parameters(run.psi, lay);
    out.fidelity = std::norm(target.state.dot(run.psi));
  } else {
    out.order = order_parameters(run.rho, lay);
    out.fidelity = fidelity(run.rho, target.state);
  }
  return out;
}

}  // namespace oqs
