#include "qwalk/coin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {

Coin make_coin(cplx a, cplx b, cplx c, cplx d) {
  // (C^dagger C)_{ij} = sum_k conj(C_ki) C_kj
  const cplx g00 = std::norm(a) + std::norm(c);
  const cplx g11 = std::norm(b) + std::norm(d);
  const cplx g01 = std::conj(a) * b + std::conj(c) * d;
  const double dev = std::max({std::abs(g00 - 1.0), std::abs(g11 - 1.0),
                               std::abs(g01)});
  if (!(dev <= kCoinTol)) {
    throw NotUnitary("coin is not unitary: max |C^dagger C - I| = " +
                     std::to_string(dev));
  }
  const double smallest =
      std::min({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (!(smallest > kCoinTol)) {
    throw TrivialCoin("coin has a vanishing entry (abcd == 0)");
  }
  return Coin(a, b, c, d, wrap_angle(std::arg(a * d - b * c)));
}

Coin hadamard_coin() {
  const double s = 1.0 / std::sqrt(2.0);
  return make_coin(s, s, s, -s);
}

Coin rotation_coin(double angle) {
  const double co = std::cos(angle);
  const double si = std::sin(angle);
  return make_coin(co, si, -si, co);
}

std::string_view region_name(Region r) noexcept {
  switch (r) {
    case Region::Bout: return "Bout";
    case Region::BoundaryB: return "BoundaryB";
    case Region::Bin: return "Bin";
  }
  return "?";
}

std::optional<Region> parse_region(std::string_view name) noexcept {
  if (name == "Bout") return Region::Bout;
  if (name == "BoundaryB") return Region::BoundaryB;
  if (name == "Bin") return Region::Bin;
  return std::nullopt;
}

WalkConfig make_walk_config(std::size_t M, const Coin& coin, double xi) {
  if (M == 0) throw InvalidArgument("path length M must be >= 1");
  return WalkConfig{M, coin, xi};
}

double wrap_angle(double angle) noexcept {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number can round back up to 2pi
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double omega_of(const Coin& coin, double xi) noexcept {
  return wrap_angle(0.5 * coin.det_phase() + xi);
}

double chebyshev_argument(const Coin& coin, double omega) noexcept {
  return std::cos(omega) / coin.abs_a();
}

RegimeParams classify_regime(const Coin& coin, double omega, double eps) {
  RegimeParams p;
  p.omega = omega;
  p.xi = wrap_angle(omega - 0.5 * coin.det_phase());
  const double gap = std::abs(std::cos(omega)) - coin.abs_a();
  if (std::abs(gap) <= eps) {
    p.region = Region::BoundaryB;
  } else if (gap > 0.0) {
    p.region = Region::Bout;
    const LambdaRoots roots = lambda_roots(coin, omega);
    p.lambda_plus = roots.plus;
    p.lambda_minus = roots.minus;
  } else {
    p.region = Region::Bin;
    p.theta = theta_of(coin, omega);
  }
  return p;
}

RegimeParams regime_of_xi(const Coin& coin, double xi, double eps) {
  RegimeParams p = classify_regime(coin, omega_of(coin, xi), eps);
  p.xi = xi;
  return p;
}

double theta_of(const Coin& coin, double omega) {
  if (!(std::abs(std::cos(omega)) < coin.abs_a())) {
    throw OutOfRegime("theta is defined only for |cos omega| < |a|");
  }
  const double x = std::clamp(chebyshev_argument(coin, omega), -1.0, 1.0);
  return x > 0.0 ? std::acos(x) : kPi - std::acos(x);
}

LambdaRoots lambda_roots_at(double x) {
  if (!(std::abs(x) > 1.0)) {
    throw OutOfRegime("lambda roots are real and distinct only for |x| > 1");
  }
  // larger-magnitude root first; the other is its reciprocal
  const double plus = x + std::copysign(std::sqrt((x - 1.0) * (x + 1.0)), x);
  return {plus, 1.0 / plus};
}

LambdaRoots lambda_roots(const Coin& coin, double omega) {
  if (!(std::abs(std::cos(omega)) > coin.abs_a())) {
    throw OutOfRegime("lambda roots require |cos omega| > |a|");
  }
  return lambda_roots_at(chebyshev_argument(coin, omega));
}

double zeta(std::size_t m, double x) noexcept {
  if (m == 0) return 0.0;
  double prev = 0.0;
  double cur = 1.0;
  const double two_x = 2.0 * x;
  for (std::size_t k = 1; k < m; ++k) {
    const double next = two_x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> zeta_sequence(double x, std::size_t count) {
  std::vector<double> z(count, 0.0);
  if (count > 1) z[1] = 1.0;
  const double two_x = 2.0 * x;
  for (std::size_t m = 2; m < count; ++m) z[m] = two_x * z[m - 1] - z[m - 2];
  return z;
}

double chebyshev_zeta(std::size_t m, const Coin& coin, double omega) noexcept {
  return zeta(m, chebyshev_argument(coin, omega));
}

double xi_from_theta(const Coin& coin, double theta, Branch branch) {
  if (!(theta > 0.0 && theta <= 0.5 * kPi)) {
    throw InvalidArgument("theta must lie in (0, pi/2]");
  }
  const double sign = branch == Branch::Plus ? 1.0 : -1.0;
  const double omega = std::acos(sign * coin.abs_a() * std::cos(theta));
  return wrap_angle(omega - 0.5 * coin.det_phase());
}

}  // namespace qwalk
