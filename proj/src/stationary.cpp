#include "qwalk/stationary.hpp"

#include <cmath>
#include <numeric>

#include "qwalk/error.hpp"

namespace qwalk {
namespace {

// Above this the closed-form bracket in the comfortability has lost more
// than ~2 digits to cancellation and the site sum is used instead.
constexpr double kBracketCondLimit = 100.0;

// zeta(k) up to a common scale: q[k] = zeta(k) / Z for k = 0..M+1 and
// inv_scale_sq = 1 / Z^2. Z = 1 unless zeta(M+1)^2 would overflow, in which
// case Z = zeta(M).
struct ZetaTable {
  double x = 0.0;
  std::vector<double> q;
  double inv_scale_sq = 1.0;
};

double effective_argument(const Coin& coin, double omega, double eps) {
  const double co = std::cos(omega);
  if (std::abs(std::abs(co) - coin.abs_a()) <= eps) return std::copysign(1.0, co);
  return co / coin.abs_a();
}

ZetaTable make_table(std::size_t M, double x) {
  ZetaTable t;
  t.x = x;
  const bool needs_scaling =
      std::abs(x) > 1.0 &&
      static_cast<double>(M + 1) * std::log(std::abs(lambda_roots_at(x).plus)) > 300.0;
  if (!needs_scaling) {
    t.q = zeta_sequence(x, M + 2);
    return t;
  }

  // rho[m] = zeta(m-1) / zeta(m); the forward recursion is stable in Bout
  // and converges to lambda_-.
  std::vector<double> rho(M + 2, 0.0);
  const double two_x = 2.0 * x;
  for (std::size_t m = 2; m <= M + 1; ++m) rho[m] = 1.0 / (two_x - rho[m - 1]);

  t.q.assign(M + 2, 0.0);
  t.q[M] = 1.0;
  for (std::size_t k = M; k >= 1; --k) t.q[k - 1] = t.q[k] * rho[k];
  t.q[M + 1] = 1.0 / rho[M + 1];

  double log_zeta_m = 0.0;
  for (std::size_t m = 2; m <= M; ++m) log_zeta_m -= std::log(std::abs(rho[m]));
  t.inv_scale_sq = std::exp(-2.0 * log_zeta_m);
  return t;
}

double site_from_table(const ZetaTable& t, std::size_t n, std::size_t M,
                       double a2, double b2) {
  const double hi = t.q[M - n];
  const double lo = t.q[M - n - 1];
  const double num = a2 * t.inv_scale_sq + b2 * (lo * lo + hi * hi);
  const double den = a2 * t.inv_scale_sq + b2 * t.q[M] * t.q[M];
  return num / den;
}

double boundary_comfortability(std::size_t M, double a2, double b2) {
  const double m = static_cast<double>(M);
  return m / (3.0 * (a2 + b2 * m * m)) * (3.0 * a2 + b2 + 2.0 * b2 * m * m);
}

double comfortability_from_table(const ZetaTable& t, std::size_t M, double a2,
                                 double b2, bool boundary) {
  if (boundary) return boundary_comfortability(M, a2, b2);

  const double m = static_cast<double>(M);
  const double up = t.q[M + 1] * t.q[M + 1];
  const double down = t.q[M - 1] * t.q[M - 1];
  const double linear = 4.0 * m * t.inv_scale_sq;
  const double bracket = up - down - linear;
  const double magnitude = up + down + linear;
  if (bracket == 0.0 || magnitude > kBracketCondLimit * std::abs(bracket)) {
    double sum = 0.0;
    for (std::size_t n = 0; n < M; ++n) sum += site_from_table(t, n, M, a2, b2);
    return sum;
  }
  // (lambda_+ - lambda_-)^2 = 4(x^2 - 1), negative inside B_in
  const double gap_sq = 4.0 * (t.x - 1.0) * (t.x + 1.0);
  const double num = m * a2 * t.inv_scale_sq + b2 / gap_sq * bracket;
  const double den = a2 * t.inv_scale_sq + b2 * t.q[M] * t.q[M];
  return num / den;
}

bool on_boundary(const Coin& coin, double omega, double eps) {
  return std::abs(std::abs(std::cos(omega)) - coin.abs_a()) <= eps;
}

}  // namespace

double site_relative_probability(std::size_t n, std::size_t M, const Coin& coin,
                                 double omega, double eps) {
  if (n >= M) throw IndexOutOfRange("site index must satisfy n < M");
  const double a2 = std::norm(coin.a());
  const double b2 = std::norm(coin.b());
  const ZetaTable t = make_table(M, effective_argument(coin, omega, eps));
  return site_from_table(t, n, M, a2, b2);
}

double comfortability(std::size_t M, const Coin& coin, double omega, double eps) {
  if (M == 0) throw InvalidArgument("path length M must be >= 1");
  const double a2 = std::norm(coin.a());
  const double b2 = std::norm(coin.b());
  const bool boundary = on_boundary(coin, omega, eps);
  if (boundary) return boundary_comfortability(M, a2, b2);
  const ZetaTable t = make_table(M, effective_argument(coin, omega, eps));
  return comfortability_from_table(t, M, a2, b2, false);
}

StationaryProfile stationary_distribution(std::size_t M, const Coin& coin,
                                          double omega, double eps) {
  if (M == 0) throw InvalidArgument("path length M must be >= 1");
  const double a2 = std::norm(coin.a());
  const double b2 = std::norm(coin.b());
  const ZetaTable t = make_table(M, effective_argument(coin, omega, eps));

  StationaryProfile p;
  p.M = M;
  p.site_norm_sq.resize(M);
  for (std::size_t n = 0; n < M; ++n) p.site_norm_sq[n] = site_from_table(t, n, M, a2, b2);
  p.comfortability =
      comfortability_from_table(t, M, a2, b2, on_boundary(coin, omega, eps));
  p.mu.resize(M);
  for (std::size_t n = 0; n < M; ++n) p.mu[n] = p.site_norm_sq[n] / p.comfortability;
  return p;
}

StationaryProfile profile_from_norms(std::vector<double> site_norm_sq) {
  const double total = std::accumulate(site_norm_sq.begin(), site_norm_sq.end(), 0.0);
  if (!(total > 1e-300)) throw ZeroField("stationary field has zero norm");
  StationaryProfile p;
  p.M = site_norm_sq.size();
  p.comfortability = total;
  p.mu.reserve(p.M);
  for (double v : site_norm_sq) p.mu.push_back(v / total);
  p.site_norm_sq = std::move(site_norm_sq);
  return p;
}

ABForm ab_form(std::size_t M, std::size_t n, const Coin& coin, double theta) {
  if (!(theta > 0.0 && theta <= 0.5 * kPi)) {
    throw OutOfRegime("A_M/B_M form needs theta in (0, pi/2]");
  }
  if (n >= M) throw IndexOutOfRange("site index must satisfy n < M");
  const double a2 = std::norm(coin.a());
  const double b2 = std::norm(coin.b());
  const double m = static_cast<double>(M);
  const double s = std::sin(theta);
  const double s2 = s * s;
  const double A = (b2 + a2 * s2) * m -
                   0.25 * b2 * std::sin(2.0 * m * theta) * std::sin(2.0 * theta) / s2;
  const double lo = std::sin(static_cast<double>(M - n - 1) * theta);
  const double hi = std::sin(static_cast<double>(M - n) * theta);
  const double B = a2 * s2 + b2 * lo * lo + b2 * hi * hi;
  return {A, B};
}

std::size_t sites_at_or_below(std::size_t M, double x) {
  if (M == 0 || !(x >= 0.0)) return 0;
  const double m = static_cast<double>(M);
  if (x >= static_cast<double>(M - 1) / m) return M;
  // j/M <= x is decided in the same floating-point expression the exporters
  // use for the x column, so row n always counts itself.
  auto le = [&](std::size_t j) { return static_cast<double>(j) / m <= x; };
  std::size_t k = static_cast<std::size_t>(std::floor(x * m));
  if (k > M - 1) k = M - 1;
  while (k + 1 < M && le(k + 1)) ++k;
  while (k > 0 && !le(k)) --k;
  return k + 1;
}

double cumulative(const StationaryProfile& profile, double x) {
  const std::size_t count = sites_at_or_below(profile.M, x);
  if (count == profile.M) return profile.M == 0 ? 0.0 : 1.0;
  double s = 0.0;
  for (std::size_t j = 0; j < count; ++j) s += profile.mu[j];
  return s;
}

}  // namespace qwalk
