#include <cmath>

#include "doctest.h"
#include "oqs/rates.hpp"

using namespace oqs;

TEST_CASE("rate matrix steady states") {
  const double up = 0.3, down = 1.1;
  RMat r = RMat::Zero(2, 2);
  r(1, 0) = up;
  r(0, 1) = down;
  RVec p = rate_steady_state(rate_matrix(r));
  CHECK(p(0) == doctest::Approx(down / (up + down)).epsilon(1e-14));
  CHECK(p(1) == doctest::Approx(up / (up + down)).epsilon(1e-14));

  // Dark state: nothing leaves level 0.
  RMat d = RMat::Zero(3, 3);
  d(0, 1) = 1.0;
  d(2, 1) = 0.5;
  d(1, 2) = 2.0;
  RVec pd = rate_steady_state(rate_matrix(d));
  CHECK(pd(0) == doctest::Approx(1.0));
  CHECK(pd(1) < 1e-14);

  // Detailed balance chain.
  const double T = 0.7;
  const double e[3] = {0.0, 0.4, 1.3};
  RMat c = RMat::Zero(3, 3);
  for (int i = 0; i < 2; ++i) {
    c(i, i + 1) = 1.0 + i;
    c(i + 1, i) = (1.0 + i) * std::exp(-(e[i + 1] - e[i]) / T);
  }
  RVec pc = rate_steady_state(rate_matrix(c));
  CHECK(pc(1) / pc(0) == doctest::Approx(std::exp(-e[1] / T)).epsilon(1e-12));
  CHECK(pc(2) / pc(0) == doctest::Approx(std::exp(-e[2] / T)).epsilon(1e-12));
  RVec ps = rate_steady_state(rate_matrix(Eigen::MatrixXd(c * 1e4)));
  CHECK((ps - pc).cwiseAbs().maxCoeff() < 1e-13);

  RMat split = RMat::Zero(4, 4);
  split(0, 1) = split(1, 0) = 1.0;
  split(2, 3) = split(3, 2) = 1.0;
  CHECK_THROWS_AS(rate_steady_state(rate_matrix(split)), NonUniqueSteadyState);
  RMat bad = RMat::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(check_rate_matrix(bad), ContractViolation);
}

TEST_CASE("qutrit markov model") {
  QutritMarkovParams p;
  auto m = qutrit_markov_model(p);
  CHECK(m.j_forward == doctest::Approx(8 * 0.25 / 5.25 / 10.0).epsilon(1e-12));
  CHECK(m.R == doctest::Approx(92.6640926640).epsilon(1e-9));
  CHECK(m.flags.empty());
  QutritMarkovParams unit{300.0, 1.0, 0.5, 1.0, 0.5, 0.0};
  CHECK(qutrit_markov_model(unit).j_forward == doctest::Approx(2 / 5.25));

  QutritMarkovParams nojp = p;
  nojp.Jp = 0.0;
  RMat w = qutrit_rates(nojp, 0.0, 0.5);
  CHECK(w(0, 1) == doctest::Approx(1.5 * 10.0 / (300.0 * 300.0 + 50.0)).epsilon(1e-14));
  CHECK(qutrit_markov_model(nojp).R == 0.0);

  // Closed form agrees with the rate solution deep in its regime.
  QutritMarkovParams far = p;
  far.dw = 1e7;
  auto mf = qutrit_markov_model(far);
  const double r_rates = -mf.j_forward_rates / mf.j_reverse_rates;
  CHECK(std::abs(r_rates - mf.R) / mf.R < 1e-10);
  CHECK(std::abs(mf.j_forward_rates - mf.j_forward) / mf.j_forward < 1e-10);
}

TEST_CASE("wheatstone closed forms") {
  CHECK(wheatstone_N(0.5) == doctest::Approx(1.14).epsilon(0.005));
  for (int k = 0; k <= 60; ++k) {
    const double n = 0.05 * std::pow(1000.0, k / 60.0);
    CHECK(wheatstone_N(n) > 0.75);
    CHECK(wheatstone_N(n) <= 4.0);
  }
  WheatstoneParams p;
  auto m = wheatstone_markov_model(p);
  CHECK(m.Lambda == doctest::Approx(0.0242).epsilon(0.003));
  CHECK(m.P0 == doctest::Approx(0.2));
  CHECK(m.maxF == doctest::Approx(7.8e3).epsilon(0.01));
  CHECK(m.Jx0 == doctest::Approx(1 - 0.5 / 40));
  CHECK(wheatstone_p_minus(m, 0.0) == doctest::Approx(m.P0));
  for (double d : {1e-3, 5e-3, 0.05}) CHECK(wheatstone_p_minus(m, d) > m.P0);
  CHECK(wheatstone_p_minus(m, m.Lambda / 2) == doctest::Approx((1 + m.P0) / 2));
  CHECK(wheatstone_p_minus(m, -m.Lambda / 2) == doctest::Approx((1 + m.P0) / 2));
  // Maximizing the two-population QFI recovers 4N/Lambda^2.
  double best = 0;
  for (int k = 1; k < 20000; ++k) best = std::max(best, wheatstone_qfi(m, k * m.Lambda / 10000.0, p.n));
  CHECK(best == doctest::Approx(m.maxF).epsilon(1e-4));
  CHECK(wheatstone_current(m, m.JC0) == doctest::Approx(m.J0));

  // Approximate rate set reproduces the Lorentzian dip.
  for (double d : {0.0, 0.5, 1.0, 3.0}) {
    WheatstoneParams q = p;
    q.Jx = m.Jx0 + d * m.Lambda;
    auto mq = wheatstone_markov_model(q);
    CHECK(mq.p_ss(1) == doctest::Approx(wheatstone_p_minus(m, d * m.Lambda)).epsilon(0.05));
  }
}

TEST_CASE("full bath rates") {
  auto z = full_bath_rates(0.0, 0.3, 1.0, 0.5, BathKind::hot);
  CHECK(z.down == 0.0);
  CHECK(z.up == 0.0);
  auto c = full_bath_rates(1e-3, 0.0, 2.0, 0.0, BathKind::cold);
  CHECK(c.down == doctest::Approx(4e-6 / 2.0).epsilon(1e-5));
  CHECK(c.up == 0.0);
  WheatstoneParams p;
  auto m = wheatstone_markov_model(p);
  auto h = full_bath_rates(std::sqrt(8.0) * p.J, 2 * p.J23, p.g4, p.n, BathKind::hot);
  CHECK(h.down == doctest::Approx(8 * p.g4 * (p.n + 1) / m.eta4_sq));
  CHECK(h.up == doctest::Approx(8 * p.g4 * p.n / m.eta4_sq));
}

TEST_CASE("effective demon rates") {
  auto r = maxwell_markov_rates(1.0, 30.0, 0.0, 0.5);
  CHECK(r.cold_up == 0.0);
  CHECK(r.cold_down == doctest::Approx(8.0 / 30.0));
  auto lo = maxwell_markov_rates(1.0, 30.0, 2.0, 2.0), hi = maxwell_markov_rates(1.0, 30.0, 4.0, 4.0);
  CHECK(hi.hot_up / lo.hot_up == doctest::Approx(4.0 * 25.0 / (2.0 * 81.0)));
  CHECK(maxwell_markov_rates(1.0, 0.5, 0.1, 0.1).flags.size() == 2);
  SpaceLayout lay({3, 2});
  auto baths = maxwell_markov_baths(r, lay, 0);
  CHECK(baths.size() == 4);
  CHECK_THROWS_AS(maxwell_markov_baths(r, lay, 1), ContractViolation);
}
