#include "qwalk/limit_laws.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <string_view>
#include <thread>

#include "qwalk/error.hpp"

namespace qwalk {
namespace {

// g(u) = u - sin(u). Both c(theta*) and the sine-squared CDF are ratios of
// g values; the series keeps full precision where 1 - sin(u)/u cancels.
double u_minus_sin(double u) {
  if (std::abs(u) >= 0.5) return u - std::sin(u);
  const double u2 = u * u;
  double term = u * u2 / 6.0;
  double sum = 0.0;
  for (int k = 1; k <= 8; ++k) {
    sum += term;
    term *= -u2 / static_cast<double>((2 * k + 2) * (2 * k + 3));
  }
  return sum;
}

double clamp01(double y) { return std::clamp(y, 0.0, 1.0); }

}  // namespace

std::string_view law_name(LawKind kind) noexcept {
  switch (kind) {
    case LawKind::PointMass: return "PointMass";
    case LawKind::Cubic: return "Cubic";
    case LawKind::SineSquared: return "SineSquared";
    case LawKind::Uniform: return "Uniform";
    case LawKind::Geometric: return "Geometric";
  }
  return "?";
}

std::optional<LawKind> parse_law_kind(std::string_view name) noexcept {
  for (LawKind k : {LawKind::PointMass, LawKind::Cubic, LawKind::SineSquared,
                    LawKind::Uniform, LawKind::Geometric}) {
    if (law_name(k) == name) return k;
  }
  return std::nullopt;
}

LimitLaw LimitLaw::sine_squared(double theta_star) {
  if (!(theta_star > 0.0) || std::isinf(theta_star)) {
    throw InvalidArgument("sine-squared law needs 0 < theta* < inf");
  }
  return LimitLaw(LawKind::SineSquared, theta_star, 0.0);
}

LimitLaw LimitLaw::geometric(double lambda_plus) {
  if (!(std::abs(lambda_plus) > 1.0) || std::isinf(lambda_plus)) {
    throw InvalidArgument("geometric law needs finite |lambda_+| > 1");
  }
  return LimitLaw(LawKind::Geometric, 0.0, lambda_plus);
}

LimitLaw select_limit_law(const RegimeParams& regime, const Scaling& scaling,
                          Axis axis) {
  const auto* scaled = std::get_if<ThetaStarOverM>(&scaling);
  switch (regime.region) {
    case Region::BoundaryB:
      if (axis == Axis::Site) {
        throw InconsistentScaling("the site axis applies to B_out only");
      }
      return LimitLaw::cubic();

    case Region::Bout:
      if (scaled != nullptr) {
        throw InconsistentScaling("theta*/M scaling requires omega in B_in");
      }
      if (axis == Axis::Scaled) return LimitLaw::point_mass();
      if (!regime.lambda_plus) throw InconsistentScaling("B_out regime without lambda_+");
      return LimitLaw::geometric(*regime.lambda_plus);

    case Region::Bin:
      if (axis == Axis::Site) {
        throw InconsistentScaling("the site axis applies to B_out only");
      }
      if (scaled == nullptr) return LimitLaw::uniform();
      if (std::isnan(scaled->theta_star) || scaled->theta_star < 0.0) {
        throw InvalidArgument("theta* must be >= 0");
      }
      if (scaled->theta_star == 0.0) return LimitLaw::cubic();
      if (std::isinf(scaled->theta_star)) return LimitLaw::uniform();
      return LimitLaw::sine_squared(scaled->theta_star);
  }
  throw InconsistentScaling("unknown region");
}

double c_norm(double theta_star) {
  if (!(theta_star > 0.0)) throw InvalidArgument("c(theta*) needs theta* > 0");
  if (std::isinf(theta_star)) return 2.0;
  return 4.0 * theta_star / u_minus_sin(2.0 * theta_star);
}

double limit_density(const LimitLaw& law, double x) {
  switch (law.kind()) {
    case LawKind::PointMass:
    case LawKind::Geometric:
      throw Unsupported(std::string(law_name(law.kind())) + " has no pointwise density");
    default:
      break;
  }
  if (!(x >= 0.0 && x <= 1.0)) return 0.0;
  switch (law.kind()) {
    case LawKind::Cubic: return 3.0 * (1.0 - x) * (1.0 - x);
    case LawKind::SineSquared: {
      const double s = std::sin((1.0 - x) * law.theta_star());
      return c_norm(law.theta_star()) * s * s;
    }
    default: return 1.0;
  }
}

double limit_cdf(const LimitLaw& law, double y) {
  if (std::isnan(y)) return std::numeric_limits<double>::quiet_NaN();
  switch (law.kind()) {
    case LawKind::PointMass: return y < 0.0 ? 0.0 : 1.0;
    case LawKind::Cubic: {
      const double u = clamp01(y);
      return u * (3.0 - u * (3.0 - u));  // y^3 - 3y^2 + 3y
    }
    case LawKind::SineSquared: {
      if (y <= 0.0) return 0.0;
      if (y >= 1.0) return 1.0;
      const double two_t = 2.0 * law.theta_star();
      return 1.0 - u_minus_sin(two_t * (1.0 - y)) / u_minus_sin(two_t);
    }
    case LawKind::Uniform: return clamp01(y);
    case LawKind::Geometric: {
      if (y < 0.0) return 0.0;
      const double l2 = law.lambda_plus() * law.lambda_plus();
      return 1.0 - std::pow(l2, -(std::floor(y) + 1.0));
    }
  }
  return 0.0;
}

double geometric_pmf(double lambda_plus, std::size_t j) {
  const double l2 = lambda_plus * lambda_plus;
  return (1.0 - 1.0 / l2) * std::pow(l2, -static_cast<double>(j));
}

double geometric_limit_pmf(const Coin& coin, double omega, std::size_t j) {
  return geometric_pmf(lambda_roots(coin, omega).plus, j);
}

double ks_distance(const StationaryProfile& profile, const LimitLaw& law) {
  const std::size_t M = profile.M;
  const double m = static_cast<double>(M);
  double worst = 0.0;
  double F = 0.0;
  for (std::size_t n = 0; n < M; ++n) {
    F = n + 1 == M ? 1.0 : F + profile.mu[n];
    double here, next;
    if (law.on_site_axis()) {
      // both step functions are constant on [n, n+1)
      here = next = limit_cdf(law, static_cast<double>(n));
    } else {
      here = limit_cdf(law, static_cast<double>(n) / m);
      next = limit_cdf(law, static_cast<double>(n + 1) / m);
    }
    worst = std::max({worst, std::abs(F - here), std::abs(F - next)});
  }
  return clamp01(worst);
}

double konno_density(const Coin& coin, double x) {
  const double a = coin.abs_a();
  if (!(std::abs(x) < a)) return 0.0;
  return std::sqrt(1.0 - a * a) /
         (kPi * (1.0 - x * x) * std::sqrt((a - x) * (a + x)));
}

unsigned sweep_thread_count() {
  if (const char* env = std::getenv("QWALK_THREADS")) {
    const std::string_view s(env);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc() && ptr == s.data() + s.size() && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

SweepRow sweep_row(const Coin& coin, const Scaling& scaling, std::size_t M,
                   Axis axis, double eps) {
  SweepRow row;
  row.M = M;
  double theta_star = std::numeric_limits<double>::quiet_NaN();
  if (const auto* fixed = std::get_if<FixedXi>(&scaling)) {
    row.xi = fixed->xi;
  } else {
    const auto& s = std::get<ThetaStarOverM>(scaling);
    theta_star = s.theta_star;
    row.xi = xi_from_theta(coin, s.theta_star / static_cast<double>(M), s.branch);
  }
  RegimeParams regime = regime_of_xi(coin, row.xi, eps);
  if (!std::isnan(theta_star)) regime.theta_star = theta_star;
  row.regime = regime.region;
  row.law = select_limit_law(regime, scaling, axis);
  if (regime.region == Region::Bin) {
    row.theta_star_effective = static_cast<double>(M) * *regime.theta;
  } else if (regime.region == Region::BoundaryB) {
    row.theta_star_effective = 0.0;
  }
  row.ks = ks_distance(stationary_distribution(M, coin, regime.omega, eps), row.law);
  return row;
}

}  // namespace

std::vector<SweepRow> convergence_sweep(const Coin& coin, const Scaling& scaling,
                                        std::span<const std::size_t> M_list,
                                        Axis axis, double eps, unsigned threads) {
  if (M_list.empty()) throw InvalidArgument("M list must not be empty");
  for (std::size_t i = 0; i < M_list.size(); ++i) {
    if (M_list[i] == 0) throw InvalidArgument("every M must be >= 1");
    if (i > 0 && M_list[i] <= M_list[i - 1]) {
      throw InvalidArgument("M list must be strictly increasing");
    }
  }

  std::vector<SweepRow> rows(M_list.size());
  if (threads == 0) threads = sweep_thread_count();
  threads = std::min<unsigned>(threads, static_cast<unsigned>(M_list.size()));

  // one slot per row so the reported failure does not depend on scheduling
  std::vector<std::exception_ptr> failures(M_list.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < M_list.size(); i = next++) {
      try {
        rows[i] = sweep_row(coin, scaling, M_list[i], axis, eps);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return rows;
}

}  // namespace qwalk
