#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace qwalk {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Default tolerance for deciding ||cos w| - |a|| == 0.
inline constexpr double kRegimeEps = 1e-10;

/// Tolerance on C^dagger C = I and on the abcd != 0 condition.
inline constexpr double kCoinTol = 1e-12;

/// The 2x2 unitary placed on every site of the perturbed path,
///
///   C0 = [ a  b ]
///        [ c  d ]
///
/// Row 0 feeds the L (left-moving) component, row 1 the R component.
/// Only constructible through make_coin, so every instance is unitary with
/// abcd != 0.
class Coin {
public:
  const cplx& a() const noexcept { return a_; }
  const cplx& b() const noexcept { return b_; }
  const cplx& c() const noexcept { return c_; }
  const cplx& d() const noexcept { return d_; }

  double abs_a() const noexcept { return std::abs(a_); }
  double abs_b() const noexcept { return std::abs(b_); }

  /// arg(det C0) reduced to [0, 2pi).
  double det_phase() const noexcept { return det_phase_; }

  friend Coin make_coin(cplx a, cplx b, cplx c, cplx d);

private:
  Coin(cplx a, cplx b, cplx c, cplx d, double det_phase)
      : a_(a), b_(b), c_(c), d_(d), det_phase_(det_phase) {}

  cplx a_, b_, c_, d_;
  double det_phase_;
};

/// Validates and builds a coin. Throws NotUnitary when C^dagger C deviates
/// from I by more than 1e-12 in any entry, TrivialCoin when an entry has
/// modulus <= 1e-12.
Coin make_coin(cplx a, cplx b, cplx c, cplx d);

Coin hadamard_coin();

/// Real rotation [[cos t, sin t], [-sin t, cos t]].
Coin rotation_coin(double angle);

enum class Region { Bout, BoundaryB, Bin };

std::string_view region_name(Region r) noexcept;
std::optional<Region> parse_region(std::string_view name) noexcept;

struct RegimeParams {
  double xi = 0.0;
  double omega = 0.0;
  Region region = Region::Bin;
  std::optional<double> theta;         // Bin only
  std::optional<double> theta_star;    // set by callers that scale theta with M
  std::optional<double> lambda_plus;   // Bout only
  std::optional<double> lambda_minus;  // Bout only
};

struct WalkConfig {
  std::size_t M;
  Coin coin;
  double xi;
};

/// Throws InvalidArgument when M == 0.
WalkConfig make_walk_config(std::size_t M, const Coin& coin, double xi);

/// Reduces an angle to [0, 2pi).
double wrap_angle(double angle) noexcept;

/// omega = arg(det C0)/2 + xi, reduced to [0, 2pi).
double omega_of(const Coin& coin, double xi) noexcept;

/// The Chebyshev argument x = cos(omega)/|a|.
double chebyshev_argument(const Coin& coin, double omega) noexcept;

/// Region from |cos omega| against |a| with tolerance eps. Fills theta in
/// Bin and lambda_pm in Bout; xi is recovered as omega - det_phase/2.
RegimeParams classify_regime(const Coin& coin, double omega,
                             double eps = kRegimeEps);

/// Same as classify_regime(coin, omega_of(coin, xi), eps), keeping the
/// caller's xi verbatim.
RegimeParams regime_of_xi(const Coin& coin, double xi,
                          double eps = kRegimeEps);

/// theta in (0, pi/2] with |a| cos(theta) = |cos omega|.
/// Throws OutOfRegime unless |cos omega| < |a|.
double theta_of(const Coin& coin, double omega);

struct LambdaRoots {
  double plus;   // |plus| > 1
  double minus;  // 1/plus
};

/// Real roots of l^2 - 2 x l + 1 = 0 with x = cos(omega)/|a|.
/// Throws OutOfRegime unless |cos omega| > |a|.
LambdaRoots lambda_roots(const Coin& coin, double omega);
LambdaRoots lambda_roots_at(double x);

/// zeta(m) = U_{m-1}(x) by the three-term recurrence, zeta(0) = 0.
double zeta(std::size_t m, double x) noexcept;

/// zeta(0), ..., zeta(count - 1).
std::vector<double> zeta_sequence(double x, std::size_t count);

/// zeta(m) at x = cos(omega)/|a|.
double chebyshev_zeta(std::size_t m, const Coin& coin, double omega) noexcept;

enum class Branch { Plus, Minus };

/// Inverse of theta_of(omega_of(.)): returns xi in [0, 2pi) with
/// cos(omega) = +|a| cos(theta) (Plus) or -|a| cos(theta) (Minus).
/// theta must lie in (0, pi/2]; throws InvalidArgument otherwise.
double xi_from_theta(const Coin& coin, double theta, Branch branch);

}  // namespace qwalk
