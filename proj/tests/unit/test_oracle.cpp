#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "blurtv/error.hpp"
#include "blurtv/estimator.hpp"
#include "blurtv/normal.hpp"
#include "blurtv/oracle.hpp"

using namespace blurtv;
using Catch::Approx;

namespace {
const auto kP = OracleDistribution::gaussian_1d(1.0, 1.0);
const auto kQ = OracleDistribution::gaussian_1d(-1.0, 1.0);
}  // namespace

TEST_CASE("closed-form oracle values") {
  CHECK(oracle_blurred_tv_gaussian(kP, kQ, Bandwidth(1.0)) == Approx(0.520499877813046538).epsilon(1e-13));
  CHECK(oracle_blurred_tv_gaussian(kP, kQ, Bandwidth(1e-3)) == Approx(0.682689250166482363).epsilon(1e-13));
  CHECK(std::abs(oracle_tv_1d(kP, kQ) - 0.682689492137085897) < 1e-6);
}

TEST_CASE("closed-form and quadrature oracles agree") {
  const auto k = Kernel::gaussian(1);
  for (double beta : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const auto p = OracleDistribution::gaussian_1d(beta, 1.0);
    const auto q = OracleDistribution::gaussian_1d(-beta, 1.0);
    for (double h : {0.01, 0.3, 1.0, 3.0, 10.0})
      CHECK(std::abs(oracle_blurred_tv_gaussian(p, q, Bandwidth(h)) -
                     oracle_blurred_tv_quadrature_1d(p, q, k, Bandwidth(h), 1e-9)) < 1e-6);
  }
}

TEST_CASE("closed-form oracle is monotone in h and in the mean gap") {
  double last = 1.0;
  for (double h = 0.01; h < 50.0; h *= 1.3) {
    const double v = oracle_blurred_tv_gaussian(kP, kQ, Bandwidth(h));
    CHECK(v <= last);
    last = v;
  }
  last = 0.0;
  for (double beta = 0.0; beta < 5.0; beta += 0.25) {
    const double v = oracle_blurred_tv_gaussian(OracleDistribution::gaussian_1d(beta, 1.0),
                                                OracleDistribution::gaussian_1d(-beta, 1.0), Bandwidth(0.7));
    CHECK(v >= last);
    last = v;
  }
}

TEST_CASE("oracles vanish for large h") {
  CHECK(oracle_blurred_tv_gaussian(kP, kQ, Bandwidth(100.0)) < 0.02);
  CHECK(oracle_blurred_tv_quadrature_1d(kP, kQ, Kernel::trimodal(), Bandwidth(100.0)) < 0.02);
}

TEST_CASE("trimodal oracle curve is not monotone") {
  const auto t = Kernel::trimodal();
  double last = 1.0;
  bool rose = false;
  for (double h = 0.05; h < 10.0; h *= 1.1) {
    const double v = oracle_blurred_tv_quadrature_1d(kP, kQ, t, Bandwidth(h));
    rose = rose || v > last + 1e-3;
    last = v;
  }
  CHECK(rose);
}

TEST_CASE("spiked covariance oracle is independent of tau and d") {
  for (std::size_t d : {2u, 5u, 20u}) {
    for (double tau : {0.01, 0.5, 1.0}) {
      const auto p = OracleDistribution::spiked(d, 1.5, tau, 1.0);
      const auto q = OracleDistribution::spiked(d, 1.5, tau, -1.0);
      for (double h : {0.2, 1.0, 4.0})
        CHECK(oracle_blurred_tv_gaussian(p, q, Bandwidth(h)) ==
              Approx(two_phi_minus_one(1.5 / std::sqrt(1.0 + h * h))).epsilon(1e-12));
    }
  }
}

TEST_CASE("spiked oracle agrees with a d = 2 Monte Carlo estimate") {
  const auto p = OracleDistribution::spiked(2, 1.0, 0.3, 1.0);
  const auto q = OracleDistribution::spiked(2, 1.0, 0.3, -1.0);
  Rng rx(1), ry(2);
  const auto x = sample_oracle(p, 2000, rx), y = sample_oracle(q, 2000, ry);
  const double mc =
      blurred_tv_monte_carlo(x.measure(), y.measure(), Kernel::gaussian(2), Bandwidth(1.0), {20000, 3}).value;
  CHECK(std::abs(mc - oracle_blurred_tv_gaussian(p, q, Bandwidth(1.0))) < 0.03);
}

TEST_CASE("embedded one-dimensional Gaussians keep their blurred TV") {
  for (std::size_t d : {2u, 10u, 50u}) {
    std::vector<double> a(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) a[i] = 1.0 / std::sqrt(static_cast<double>(d));
    const auto p = OracleDistribution::embedded_1d(0.8, 1.3, a);
    const auto q = OracleDistribution::embedded_1d(-0.8, 1.3, a);
    for (double h : {0.1, 1.0, 5.0}) {
      const double one_d = oracle_blurred_tv_gaussian(OracleDistribution::gaussian_1d(0.8, 1.3),
                                                      OracleDistribution::gaussian_1d(-0.8, 1.3), Bandwidth(h));
      CHECK(oracle_blurred_tv_gaussian(p, q, Bandwidth(h)) == Approx(one_d).epsilon(1e-12));
    }
  }
}

TEST_CASE("unequal variances") {
  const auto a = OracleDistribution::gaussian_1d(0.0, 1.0);
  const auto b = OracleDistribution::gaussian_1d(0.0, 2.0);
  const double v = oracle_blurred_tv_gaussian(a, b, Bandwidth(0.5));
  CHECK(v == Approx(oracle_blurred_tv_quadrature_1d(a, b, Kernel::gaussian(1), Bandwidth(0.5))).margin(1e-12));
  CHECK(v > 0.0);
  const auto c = OracleDistribution::gaussian({0.0, 0.0}, {1.0, 0.0, 0.0, 1.0});
  const auto d = OracleDistribution::gaussian({0.0, 0.0}, {2.0, 0.0, 0.0, 1.0});
  CHECK_THROWS_AS(oracle_blurred_tv_gaussian(c, d, Bandwidth(1.0)), ArgumentError);
}

TEST_CASE("oracle sampling") {
  const auto iso = OracleDistribution::gaussian({0.0, 0.0}, {1.0, 0.0, 0.0, 1.0});
  Rng rng(4);
  const auto s = sample_oracle(iso, 100000, rng);
  double c00 = 0, c01 = 0, c11 = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto x = s.point(i);
    c00 += x[0] * x[0];
    c01 += x[0] * x[1];
    c11 += x[1] * x[1];
  }
  const double n = static_cast<double>(s.size());
  CHECK(std::abs(c00 / n - 1.0) < 0.02);
  CHECK(std::abs(c01 / n) < 0.02);
  CHECK(std::abs(c11 / n - 1.0) < 0.02);

  const auto mix = OracleDistribution::mixture_1d({5.0, -3.0, 0.0}, {1.0, 0.0, 0.0}, {0.1, 1.0, 1.0});
  Rng r2(5);
  const auto m = sample_oracle(mix, 1000, r2);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(std::abs(m.point(i)[0] - 5.0) < 1.0);

  Rng a(6), b(6);
  CHECK(sample_oracle(kP, 10, a).coords()[3] == sample_oracle(kP, 10, b).coords()[3]);

  CHECK_THROWS_AS(OracleDistribution::gaussian({0.0, 0.0}, {1.0, 2.0, 2.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(OracleDistribution::mixture_1d({0.0}, {0.9}, {1.0}), ValidationError);
}

TEST_CASE("unit ball sampling stays in the ball") {
  Rng rng(7);
  const auto s = sample_unit_ball(5, 2000, rng);
  double mean_norm = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double r = 0.0;
    for (double v : s.point(i)) r += v * v;
    CHECK(r <= 1.0);
    mean_norm += std::sqrt(r) / 2000.0;
  }
  // E‖X‖ = d/(d+1) for the uniform ball.
  CHECK(std::abs(mean_norm - 5.0 / 6.0) < 0.01);
}
