#include <cmath>
#include <random>

#include "doctest.h"
#include "oqs/observables.hpp"
#include "oqs/solver.hpp"
#include "support.hpp"

using namespace oqs;
using namespace testing_support;

namespace {

Mat two_level_steady(double gl, double gr, double nl, double nr) {
  return steady_state_direct(local_liouvillian(Mat::Zero(2, 2), {{sigma_minus(), gl * (nl + 1)},
                                                                 {sigma_plus(), gl * nl},
                                                                 {sigma_minus(), gr * (nr + 1)},
                                                                 {sigma_plus(), gr * nr}}));
}

double two_level_current(double gl, double gr, double nl, double nr) {
  return (nl - nr) * gl * gr / (gl * (1 + 2 * nl) + gr * (1 + 2 * nr));
}

Vec singlet() {
  Vec v = Vec::Zero(4);
  v(1) = 1 / std::sqrt(2.0);
  v(2) = -1 / std::sqrt(2.0);
  return v;
}

}  // namespace

TEST_CASE("bath currents") {
  // Truncated thermal mode is stationary under its own bath.
  const int d = 6;
  const double n = 0.8, g = 0.4;
  Mat a = destroy(d);
  Mat rho = steady_state_direct(local_liouvillian(a.adjoint() * a, {{a, g * (n + 1)}, {a.adjoint(), g * n}}));
  CHECK(std::abs(excitation_current_bath({g, n, a}, rho)) < 1e-12);

  const double gl = 0.3, gr = 0.7, nl = 1.2, nr = 0.1;
  Mat ss = two_level_steady(gl, gr, nl, nr);
  const double jl = excitation_current_bath({gl, nl, sigma_minus()}, ss);
  const double jr = excitation_current_bath({gr, nr, sigma_minus()}, ss);
  CHECK(jl == doctest::Approx(two_level_current(gl, gr, nl, nr)).epsilon(1e-10));
  CHECK(std::abs(jl + jr) < 1e-9);
}

TEST_CASE("spin, heat and work") {
  SpaceLayout lay({2, 2});
  Mat down = projector(basis_state(lay, {0, 0}));
  CHECK(spin_current(down, lay, 0, 1, 1.0) == 0.0);
  CHECK_THROWS_AS(spin_current(Mat::Identity(6, 6) / 6.0, SpaceLayout({3, 2}), 0, 1, 1.0), ContractViolation);
  std::mt19937_64 g(41);
  Mat h = random_hermitian(g, 3), rho = random_density(g, 3), v = random_hermitian(g, 3);
  CHECK(heat_current(h, Mat::Zero(3, 3)) == 0.0);
  CHECK(work_rate(Mat::Zero(3, 3), rho) == 0.0);
  CHECK(work_rate(v, rho) == doctest::Approx((v * rho).trace().real()));
  // Prefactor conventions differ by two.
  Mat r4 = random_density(g, 4);
  CHECK(spin_current(r4, lay, 0, 1, 0.7, Prefactor::two_j) ==
        doctest::Approx(2 * spin_current(r4, lay, 0, 1, 0.7, Prefactor::j)));
}

TEST_CASE("spin current sign follows the excitation flow") {
  // Pump spin 0, drain spin 1, XX+YY link: flow is 0 -> 1.
  SpaceLayout lay({2, 2});
  Mat h = embed(sigma_x(), 0, lay) * embed(sigma_x(), 1, lay) + embed(sigma_y(), 0, lay) * embed(sigma_y(), 1, lay);
  Mat ss = steady_state_direct(local_liouvillian(h, {{embed(sigma_plus(), 0, lay), 1.0}, {embed(sigma_minus(), 1, lay), 1.0}}));
  const double js = spin_current(ss, lay, 0, 1, 1.0, Prefactor::j);
  const double drain = (embed(sigma_plus(), 1, lay) * embed(sigma_minus(), 1, lay) * ss).trace().real();
  CHECK(js > 0);
  CHECK(js == doctest::Approx(drain).epsilon(1e-9));
}

TEST_CASE("rectification and contrast") {
  auto r = rectification_and_contrast(0.4, -0.4);
  CHECK(r.R == doctest::Approx(1.0));
  CHECK(r.C == doctest::Approx(0.0));
  CHECK(rectification_and_contrast(1.0, -1e-12).C == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::isinf(rectification_and_contrast(1.0, 0.0).R));
  CHECK_THROWS_AS(rectification_and_contrast(0.0, 0.0), DomainError);
  const double jf = two_level_current(0.1, 1.0, 0.5, 0.0), jr = two_level_current(0.1, 1.0, 0.0, 0.5);
  CHECK(rectification_and_contrast(jf, jr).R == doctest::Approx(1.75).epsilon(1e-12));
}

TEST_CASE("concurrence") {
  CHECK(concurrence(projector(singlet())) == doctest::Approx(1.0).epsilon(1e-10));
  std::mt19937_64 g(42);
  Vec a = random_state(g, 2), b = random_state(g, 2);
  CHECK(concurrence(projector(Vec(kron(Mat(a), Mat(b))))) < 1e-7);
  for (double p : {0.1, 1.0 / 3, 0.5, 0.9}) {
    Mat w = p * projector(singlet()) + (1 - p) * Mat::Identity(4, 4) / 4.0;
    CHECK(concurrence(w) == doctest::Approx(std::max(0.0, (3 * p - 1) / 2)).epsilon(1e-8));
  }
  Mat bad = Mat::Identity(4, 4) / 4.0;
  bad(0, 0) = -0.1;
  bad(3, 3) = 0.6;
  CHECK_THROWS_AS(concurrence(bad), ContractViolation);
  for (int rep = 0; rep < 10; ++rep) {
    Mat rho = random_density(g, 4);
    Mat u = kron(random_unitary(g, 2), random_unitary(g, 2));
    CHECK(std::abs(concurrence(rho) - concurrence(Mat(u * rho * u.adjoint()))) < 1e-8);
  }
}

TEST_CASE("entropy") {
  std::mt19937_64 g(43);
  CHECK(std::abs(von_neumann_entropy(projector(random_state(g, 3)))) < 1e-12);
  CHECK(von_neumann_entropy(Mat::Identity(2, 2) / 2.0) == doctest::Approx(std::log(2.0)));
  Mat th = Mat::Zero(2, 2);
  th(0, 0) = 2.0 / 3;
  th(1, 1) = 1.0 / 3;
  CHECK(von_neumann_entropy(th) == doctest::Approx(0.6365141682948128).epsilon(1e-12));
  for (int rep = 0; rep < 10; ++rep) {
    Mat rho = random_density(g, 5), u = random_unitary(g, 5);
    CHECK(std::abs(von_neumann_entropy(rho) - von_neumann_entropy(Mat(u * rho * u.adjoint()))) < 1e-10);
  }
}

TEST_CASE("fidelity") {
  std::mt19937_64 g(44);
  Mat rho = random_density(g, 4);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
  Mat p0 = projector(Vec::Unit(3, 0)), p1 = projector(Vec::Unit(3, 1));
  CHECK(fidelity(p0, p1) < 1e-14);
  Vec psi = random_state(g, 4);
  CHECK(std::abs(fidelity(rho, projector(psi)) - (psi.adjoint() * rho * psi)(0).real()) < 1e-12);
  CHECK(std::abs(fidelity(rho, psi) - (psi.adjoint() * rho * psi)(0).real()) < 1e-14);
  for (int rep = 0; rep < 10; ++rep) {
    Mat a = random_density(g, 4), b = random_density(g, 4);
    CHECK(std::abs(fidelity(a, b) - fidelity(b, a)) < 1e-10);
  }
}

TEST_CASE("effective temperature") {
  CHECK(effective_temperature(1.0) == doctest::Approx(1 / std::log(2.0)));
  CHECK(effective_temperature(1e-8) < 0.06);
  CHECK(effective_temperature(0.1) < effective_temperature(0.5));
  CHECK(effective_temperature(0.5) < effective_temperature(3.0));
  CHECK_THROWS_AS(effective_temperature(0.0), DomainError);
}

TEST_CASE("quantum fisher information") {
  auto flat = [](double) { return Mat(Mat::Identity(2, 2) / 2.0); };
  CHECK(qfi_diagonal(flat, 0.3).value == 0.0);

  const double n = 0.5, lam = 0.0242, p0 = n / (3 * n + 1);
  auto lorentz = [&](double dj) {
    const double pm = (dj * dj + p0 * lam * lam / 4) / (dj * dj + lam * lam / 4);
    Mat r = Mat::Zero(2, 2);
    r(0, 0) = 1 - pm;
    r(1, 1) = pm;
    return r;
  };
  const double dj = lam / 2;
  const double closed = 4 * dj * dj * lam * lam * (2 * n + 1) /
                        (std::pow(dj * dj + lam * lam / 4, 2) * (n * lam * lam + 4 * (3 * n + 1) * dj * dj));
  FisherResult f = qfi_diagonal(lorentz, dj, 1e-4 * lam);
  CHECK(f.value == doctest::Approx(closed).epsilon(0.01));
  CHECK_FALSE(f.flagged);

  // Cramer-Rao on single-shot outcomes of a two-outcome family.
  const double theta = 0.3;
  auto coin = [](double t) {
    Mat r = Mat::Zero(2, 2);
    r(0, 0) = t;
    r(1, 1) = 1 - t;
    return r;
  };
  const double F = qfi_diagonal(coin, theta).value;
  CHECK(F == doctest::Approx(1 / (theta * (1 - theta))).epsilon(1e-8));
  std::mt19937_64 g(45);
  std::bernoulli_distribution shot(theta);
  std::vector<double> est(1000);
  for (auto& e : est) e = shot(g) ? 1.0 : 0.0;
  double mean = 0, var = 0;
  for (double e : est) mean += e / est.size();
  for (double e : est) var += (e - mean) * (e - mean) / (est.size() - 1);
  CHECK(var >= (1 / F) * (1 - 3 * std::sqrt(2.0 / 999)));
}

TEST_CASE("classical fisher information") {
  // Two spins swapping one excitation; measure spin 0 down after time t, parameter is J.
  const double t = 0.37;
  SpaceLayout lay({2, 2});
  Mat xy = embed(sigma_x(), 0, lay) * embed(sigma_x(), 1, lay) + embed(sigma_y(), 0, lay) * embed(sigma_y(), 1, lay);
  auto family = [&](double J) {
    auto e = hermitian_eig(Mat(J * xy));
    Vec phase = (-I1 * t * e.values.cast<cd>()).array().exp();
    Vec psi = e.vectors * phase.asDiagonal() * e.vectors.adjoint() * basis_state(lay, {1, 0});
    RVec p(2);
    p(0) = std::norm(psi(1));  // index of |down, up>
    p(1) = 1 - p(0);
    return p;
  };
  CHECK(cfi_projective(family, 1.0).value == doctest::Approx(16 * t * t).epsilon(1e-6));
  auto fixed = [](double) {
    RVec p(2);
    p << 1.0, 0.0;
    return p;
  };
  CHECK(cfi_projective(fixed, 0.5).value == 0.0);
  auto unnorm = [](double) { return RVec(RVec::Constant(2, 0.7)); };
  CHECK_THROWS_AS(cfi_projective(unnorm, 0.0), ContractViolation);
}

TEST_CASE("order parameters") {
  SpaceLayout lay({3, 3, 3, 3});
  auto mott = order_parameters(basis_state(lay, {1, 1, 1, 1}), lay);
  CHECK(mott.n == doctest::Approx(1.0));
  CHECK(mott.a == 0.0);
  CHECK(mott.kappa == doctest::Approx(0.0));
  // Fixed total number: superposition of |2,0,1,1> and |0,2,1,1>.
  Vec fixedn = (basis_state(lay, {2, 0, 1, 1}) + basis_state(lay, {0, 2, 1, 1})) / std::sqrt(2.0);
  CHECK(order_parameters(fixedn, lay).a == 0.0);
  Vec site(3);
  site << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0;
  Vec prod = kron(kron(Mat(site), Mat(site)), kron(Mat(site), Mat(site)));
  auto sp = order_parameters(prod, lay);
  CHECK(sp.a == doctest::Approx(0.5));
  CHECK(sp.kappa == doctest::Approx(0.0).epsilon(1e-12));
  // Density-matrix route agrees.
  auto dm = order_parameters(projector(prod), lay);
  CHECK(dm.a == doctest::Approx(0.5));
  std::mt19937_64 g(46);
  for (int rep = 0; rep < 10; ++rep) {
    auto o = order_parameters(random_state(g, lay.total()), lay);
    CHECK(o.kappa >= 0.0);
    CHECK(o.a >= 0.0);
  }
}

TEST_CASE("variance derivative argmax") {
  std::vector<double> grid, quad, sig;
  for (int i = 0; i <= 50; ++i) {
    const double x = i / 50.0;
    grid.push_back(x);
    quad.push_back(x * x);
    sig.push_back(1 / (1 + std::exp(-(x - 0.43) / 0.05)));
  }
  auto q = variance_derivative_argmax(grid, quad);
  CHECK(q.at_boundary);
  auto s = variance_derivative_argmax(grid, sig);
  CHECK_FALSE(s.at_boundary);
  CHECK(std::abs(s.x - 0.43) <= 0.02);
  CHECK_THROWS_AS(variance_derivative_argmax({0, 1, 2}, {0, 1, 2}), ContractViolation);
}

TEST_CASE("currents vanish with symmetric baths") {
  std::mt19937_64 g(47);
  for (int rep = 0; rep < 5; ++rep) {
    SpaceLayout lay({2, 2, 2});
    Mat h = random_hermitian(g, 8);
    const double n = 0.3 + rep * 0.2;
    Mat a0 = embed(sigma_minus(), 0, lay), a2 = embed(sigma_minus(), 2, lay);
    h = embed(sigma_z(), 0, lay) + embed(sigma_z(), 1, lay) + embed(sigma_z(), 2, lay);
    Mat link = embed(sigma_plus(), 0, lay) * embed(sigma_minus(), 1, lay) +
               embed(sigma_plus(), 1, lay) * embed(sigma_minus(), 2, lay);
    h += 0.7 * (link + Mat(link.adjoint()));
    Mat ss = steady_state_direct(local_liouvillian(h, {{a0, 0.5 * (n + 1)}, {Mat(a0.adjoint()), 0.5 * n},
                                                       {a2, 0.9 * (n + 1)}, {Mat(a2.adjoint()), 0.9 * n}}));
    CHECK(std::abs(excitation_current_bath({0.5, n, a0}, ss)) < 1e-9);
    CHECK(std::abs(spin_current(ss, lay, 0, 1, 0.7)) < 1e-9);
  }
}
