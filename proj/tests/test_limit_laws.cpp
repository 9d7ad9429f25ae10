#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "qwalk/coin.hpp"
#include "qwalk/error.hpp"
#include "qwalk/limit_laws.hpp"
#include "qwalk/stationary.hpp"

using namespace qwalk;

TEST_CASE("c_norm values") {
  // 1 - sin(pi)/pi = 1
  CHECK(c_norm(kPi / 2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(c_norm(std::numeric_limits<double>::infinity()) == 2.0);
  CHECK(c_norm(1e6) == doctest::Approx(2.0).epsilon(1e-6));
  // 1 - sin(2t)/(2t) ~ 2t^2/3, so c ~ 3/t^2
  const double t = 1e-4;
  CHECK(c_norm(t) * t * t == doctest::Approx(3.0).epsilon(1e-7));
  CHECK_THROWS_AS(c_norm(0.0), InvalidArgument);
  CHECK_THROWS_AS(c_norm(-1.0), InvalidArgument);
}

TEST_CASE("c_norm against the naive formula where it is well conditioned") {
  for (double t = 0.3; t < 50.0; t *= 1.37) {
    const double naive = 2.0 / (1.0 - std::sin(2 * t) / (2 * t));
    CHECK(c_norm(t) == doctest::Approx(naive).epsilon(1e-12));
  }
}

TEST_CASE("densities integrate to one and match the cdf") {
  std::vector<LimitLaw> laws = {LimitLaw::cubic(), LimitLaw::uniform()};
  for (double t : {1e-3, 0.2, 1.0, 2.5, 7.0, 40.0}) laws.push_back(LimitLaw::sine_squared(t));
  for (const LimitLaw& law : laws) {
    auto f = [&](double x) { return limit_density(law, x); };
    CHECK(oracle::simpson(f, 0.0, 1.0, 4000) == doctest::Approx(1.0).epsilon(1e-9));
    for (double y : {0.1, 0.37, 0.5, 0.9}) {
      CHECK(oracle::simpson(f, 0.0, y, 2000) == doctest::Approx(limit_cdf(law, y)).epsilon(1e-9));
    }
    CHECK(limit_cdf(law, -0.5) == 0.0);
    CHECK(limit_cdf(law, 0.0) == 0.0);
    CHECK(limit_cdf(law, 1.0) == 1.0);
    CHECK(limit_cdf(law, 2.0) == 1.0);
    CHECK(limit_density(law, -0.1) == 0.0);
    CHECK(limit_density(law, 1.1) == 0.0);
  }
}

TEST_CASE("cdfs are monotone") {
  std::vector<LimitLaw> laws = {LimitLaw::cubic(), LimitLaw::uniform(), LimitLaw::point_mass(),
                                LimitLaw::geometric(1.7)};
  for (double t : {1e-6, 1e-3, 1.0, 1e3}) laws.push_back(LimitLaw::sine_squared(t));
  for (const LimitLaw& law : laws) {
    double prev = limit_cdf(law, -1.0);
    for (int i = -100; i <= 1200; ++i) {
      const double y = i / 1000.0;
      const double v = limit_cdf(law, y);
      CHECK(v >= prev);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
}

TEST_CASE("sine squared interpolates between cubic and uniform") {
  const LimitLaw cubic = LimitLaw::cubic();
  const LimitLaw uni = LimitLaw::uniform();
  const LimitLaw small = LimitLaw::sine_squared(1e-3);
  const LimitLaw large = LimitLaw::sine_squared(1e3);
  double d_small = 0.0, d_large = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double y = i / 10000.0;
    d_small = std::max(d_small, std::abs(limit_cdf(small, y) - limit_cdf(cubic, y)));
    d_large = std::max(d_large, std::abs(limit_cdf(large, y) - limit_cdf(uni, y)));
  }
  CHECK(d_small <= 1e-5);
  CHECK(d_large <= 1e-2);
}

TEST_CASE("cubic and point mass values") {
  const LimitLaw c = LimitLaw::cubic();
  CHECK(limit_cdf(c, 0.5) == doctest::Approx(0.875));
  CHECK(limit_density(c, 0.0) == 3.0);
  CHECK(limit_density(c, 1.0) == 0.0);
  const LimitLaw p = LimitLaw::point_mass();
  CHECK(limit_cdf(p, -1e-300) == 0.0);
  CHECK(limit_cdf(p, 0.0) == 1.0);
  CHECK_THROWS_AS(limit_density(p, 0.5), Unsupported);
  CHECK_THROWS_AS(limit_density(LimitLaw::geometric(2.0), 0.5), Unsupported);
}

TEST_CASE("geometric law") {
  CHECK(geometric_pmf(2.0, 0) == doctest::Approx(0.75));
  CHECK(geometric_pmf(2.0, 3) == doctest::Approx(0.75 / 64));
  CHECK(geometric_pmf(-2.0, 1) == doctest::Approx(0.1875));
  double s = 0.0;
  for (std::size_t j = 0; j < 200; ++j) s += geometric_pmf(1.3, j);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  const LimitLaw g = LimitLaw::geometric(2.0);
  CHECK(g.on_site_axis());
  CHECK(limit_cdf(g, 0.0) == doctest::Approx(0.75));
  CHECK(limit_cdf(g, 0.9) == doctest::Approx(0.75));
  CHECK(limit_cdf(g, 1.0) == doctest::Approx(0.9375));
  CHECK(limit_cdf(g, -0.5) == 0.0);

  const Coin c = rotation_coin(std::acos(0.5));
  CHECK(geometric_limit_pmf(c, std::acos(0.625), 2) == doctest::Approx(0.75 / 16).epsilon(1e-12));
  CHECK_THROWS_AS(geometric_limit_pmf(c, kPi / 2, 0), OutOfRegime);
  CHECK_THROWS_AS(LimitLaw::geometric(1.0), InvalidArgument);
  CHECK_THROWS_AS(LimitLaw::sine_squared(0.0), InvalidArgument);
  CHECK_THROWS_AS(LimitLaw::sine_squared(std::numeric_limits<double>::infinity()),
                  InvalidArgument);
}

TEST_CASE("select_limit_law") {
  const Coin h = hadamard_coin();
  const RegimeParams bin = classify_regime(h, kPi / 2);
  const RegimeParams bout = classify_regime(h, 0.0);
  const RegimeParams edge = classify_regime(h, kPi / 4);

  CHECK(select_limit_law(bin, FixedXi{0.0}) == LimitLaw::uniform());
  CHECK(select_limit_law(bin, ThetaStarOverM{2.0}) == LimitLaw::sine_squared(2.0));
  CHECK(select_limit_law(bin, ThetaStarOverM{0.0}) == LimitLaw::cubic());
  CHECK(select_limit_law(edge, FixedXi{kPi / 4 - kPi / 2}) == LimitLaw::cubic());
  CHECK(select_limit_law(bout, FixedXi{-kPi / 2}) == LimitLaw::point_mass());
  const LimitLaw g = select_limit_law(bout, FixedXi{-kPi / 2}, Axis::Site);
  CHECK(g.kind() == LawKind::Geometric);
  CHECK(g.lambda_plus() == doctest::Approx(1.0 + std::sqrt(2.0)));

  CHECK_THROWS_AS(select_limit_law(bout, ThetaStarOverM{1.0}), InconsistentScaling);
  CHECK_THROWS_AS(select_limit_law(bin, FixedXi{0.0}, Axis::Site), InconsistentScaling);
}

TEST_CASE("ks_distance") {
  // F_M equal to the uniform steps: distance is exactly 1/M.
  const StationaryProfile p = profile_from_norms(std::vector<double>(10, 1.0));
  CHECK(ks_distance(p, LimitLaw::uniform()) == doctest::Approx(0.1).epsilon(1e-12));
  // all mass at site 0
  const StationaryProfile q = profile_from_norms({1.0, 1e-300, 1e-300});
  CHECK(ks_distance(q, LimitLaw::point_mass()) < 1e-12);
  // a geometric profile against its own law on the site axis
  std::vector<double> geo;
  for (int j = 0; j < 60; ++j) geo.push_back(std::pow(0.25, j));
  CHECK(ks_distance(profile_from_norms(geo), LimitLaw::geometric(2.0)) < 1e-12);
}

TEST_CASE("ks_distance against a brute force scan") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(25);
    for (double& x : w) x = u(rng);
    const StationaryProfile p = profile_from_norms(w);
    const LimitLaw law = LimitLaw::sine_squared(0.5 + trial);
    double brute = 0.0;
    for (int i = 0; i <= 200000; ++i) {
      const double x = i / 200000.0;
      double F = 0.0;
      for (std::size_t n = 0; n < p.M; ++n)
        if (static_cast<double>(n) / p.M <= x) F += p.mu[n];
      brute = std::max(brute, std::abs(F - limit_cdf(law, x)));
    }
    const double ks = ks_distance(p, law);
    CHECK(ks >= brute - 1e-12);
    CHECK(ks <= brute + 1e-4);
  }
}

TEST_CASE("konno density") {
  const Coin h = hadamard_coin();
  auto f = [&](double x) { return konno_density(h, x); };
  CHECK(konno_density(h, 0.0) == doctest::Approx(std::sqrt(0.5) / (kPi * std::sqrt(0.5))));
  CHECK(konno_density(h, 0.8) == 0.0);
  CHECK(konno_density(h, -std::sqrt(0.5)) == 0.0);
  // x = |a| sin s removes the edge singularity; the integral over
  // [-T, T] is (2/pi) atan(sqrt(1 - |a|^2) tan T)
  const double a = h.abs_a();
  const double T = kPi / 2 - 1e-4;
  const double mass = oracle::simpson(
      [&](double s) { return f(a * std::sin(s)) * a * std::cos(s); }, -T, T, 2000);
  const double want = 2.0 / kPi * std::atan(std::sqrt(1 - a * a) * std::tan(T));
  CHECK(mass == doctest::Approx(want).epsilon(1e-9));
  CHECK(want == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("convergence_sweep") {
  const Coin h = hadamard_coin();
  const std::vector<std::size_t> Ms = {10, 20, 40};
  const auto rows = convergence_sweep(h, FixedXi{kPi / 4 - kPi / 2}, Ms, Axis::Scaled, kRegimeEps, 2);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].M == Ms[i]);
    CHECK(rows[i].regime == Region::BoundaryB);
    CHECK(rows[i].law == LimitLaw::cubic());
    REQUIRE(rows[i].theta_star_effective);
    CHECK(*rows[i].theta_star_effective == 0.0);
    const StationaryProfile p = stationary_distribution(Ms[i], h, kPi / 4);
    CHECK(rows[i].ks == doctest::Approx(ks_distance(p, LimitLaw::cubic())).epsilon(1e-12));
  }
  CHECK(rows[0].ks > rows[1].ks);

  const auto scaled = convergence_sweep(h, ThetaStarOverM{1.0}, Ms);
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    CHECK(scaled[i].regime == Region::Bin);
    CHECK(*scaled[i].theta_star_effective == doctest::Approx(1.0).epsilon(1e-10));
  }

  const std::vector<std::size_t> longer = {20, 30, 40};
  const auto geo = convergence_sweep(h, FixedXi{-kPi / 2}, longer, Axis::Site);
  for (const SweepRow& r : geo) {
    CHECK(r.regime == Region::Bout);
    CHECK_FALSE(r.theta_star_effective);
    CHECK(r.ks < 1e-10);
  }

  const std::vector<std::size_t> bad = {10, 10};
  CHECK_THROWS_AS(convergence_sweep(h, FixedXi{0.0}, bad), InvalidArgument);
  CHECK_THROWS_AS(convergence_sweep(h, FixedXi{0.0}, std::span<const std::size_t>{}),
                  InvalidArgument);
  const std::vector<std::size_t> one = {5};
  CHECK_THROWS_AS(convergence_sweep(h, ThetaStarOverM{1.0}, one, Axis::Site),
                  InconsistentScaling);
}
