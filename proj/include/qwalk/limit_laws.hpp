#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/stationary.hpp"

namespace qwalk {

enum class LawKind { PointMass, Cubic, SineSquared, Uniform, Geometric };

std::string_view law_name(LawKind kind) noexcept;
std::optional<LawKind> parse_law_kind(std::string_view name) noexcept;

/// Limit law of the comfortability distribution. PointMass, Cubic,
/// SineSquared and Uniform live on the scaled axis x = n/M; Geometric lives on
/// the unscaled site axis.
class LimitLaw {
public:
  static LimitLaw point_mass() { return LimitLaw(LawKind::PointMass, 0.0, 0.0); }
  static LimitLaw cubic() { return LimitLaw(LawKind::Cubic, 0.0, 0.0); }
  static LimitLaw uniform() { return LimitLaw(LawKind::Uniform, 0.0, 0.0); }
  /// Throws InvalidArgument unless 0 < theta_star < inf.
  static LimitLaw sine_squared(double theta_star);
  /// Throws InvalidArgument unless |lambda_plus| > 1.
  static LimitLaw geometric(double lambda_plus);

  LawKind kind() const noexcept { return kind_; }
  double theta_star() const noexcept { return theta_star_; }
  double lambda_plus() const noexcept { return lambda_plus_; }
  bool on_site_axis() const noexcept { return kind_ == LawKind::Geometric; }

  friend bool operator==(const LimitLaw&, const LimitLaw&) = default;

private:
  LimitLaw(LawKind kind, double theta_star, double lambda_plus)
      : kind_(kind), theta_star_(theta_star), lambda_plus_(lambda_plus) {}

  LawKind kind_;
  double theta_star_;
  double lambda_plus_;
};

/// xi held fixed while M grows (theta* = inf inside B_in).
struct FixedXi {
  double xi = 0.0;
};

/// theta = theta_star / M, xi re-derived per M.
struct ThetaStarOverM {
  double theta_star = 1.0;
  Branch branch = Branch::Plus;
};

using Scaling = std::variant<FixedXi, ThetaStarOverM>;

enum class Axis { Scaled, Site };

/// Picks the law for the regime:
///   boundary, or B_in with theta* = 0       -> Cubic
///   B_in, 0 < theta* < inf                  -> SineSquared(theta*)
///   B_in with fixed xi (theta* = inf)       -> Uniform
///   B_out                                   -> PointMass (Scaled) / Geometric (Site)
/// Throws InconsistentScaling for theta scaling outside B_in or a site axis
/// outside B_out.
LimitLaw select_limit_law(const RegimeParams& regime, const Scaling& scaling,
                          Axis axis = Axis::Scaled);

/// c(theta*) = 2 / (1 - sin(2 theta*) / (2 theta*)), stable for small theta*.
double c_norm(double theta_star);

/// Density on [0, 1]; 0 outside. Throws Unsupported for PointMass and
/// Geometric.
double limit_density(const LimitLaw& law, double x);

/// Cumulative distribution on the law's own axis.
double limit_cdf(const LimitLaw& law, double y);

/// (1 - lambda^-2) lambda^(-2j).
double geometric_pmf(double lambda_plus, std::size_t j);

/// Throws OutOfRegime unless omega is in B_out.
double geometric_limit_pmf(const Coin& coin, double omega, std::size_t j);

/// sup_x |F_M(x) - F_limit(x)|, evaluated exactly at the jumps of F_M and
/// one-sided just before the next jump. Uses x = n/M, or the site index when
/// the law is Geometric.
double ks_distance(const StationaryProfile& profile, const LimitLaw& law);

/// sqrt(1 - |a|^2) / (pi (1 - x^2) sqrt(|a|^2 - x^2)) on (-|a|, |a|), else 0.
/// Finite but unbounded as |x| -> |a|.
double konno_density(const Coin& coin, double x);

struct SweepRow {
  std::size_t M = 0;
  double ks = 0.0;
  Region regime = Region::Bin;
  std::optional<double> theta_star_effective;  // M theta; 0 on the boundary, empty in B_out
  double xi = 0.0;
  LimitLaw law = LimitLaw::uniform();
};

/// One row per M: derive xi (via xi_from_theta for ThetaStarOverM), build the
/// closed-form profile, pick the law, record the KS distance. M_list must be
/// non-empty and strictly increasing. Rows are evaluated on up to
/// `threads` workers (0 = QWALK_THREADS or hardware concurrency) and returned
/// in input order.
std::vector<SweepRow> convergence_sweep(const Coin& coin, const Scaling& scaling,
                                        std::span<const std::size_t> M_list,
                                        Axis axis = Axis::Scaled,
                                        double eps = kRegimeEps,
                                        unsigned threads = 0);

/// Worker count from QWALK_THREADS, else hardware concurrency (at least 1).
unsigned sweep_thread_count();

}  // namespace qwalk
