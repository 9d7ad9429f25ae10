#pragma once

#include <cstddef>
#include <vector>

#include "qwalk/coin.hpp"

namespace qwalk {

/// Per-site squared norms of the stationary state on {0, ..., M-1}, their
/// sum (the comfortability) and the normalised distribution mu.
struct StationaryProfile {
  std::size_t M = 0;
  std::vector<double> site_norm_sq;
  double comfortability = 0.0;
  std::vector<double> mu;
};

/// Relative probability ||phi(n)||^2 at site n from the Chebyshev closed form:
///
///   (|a|^2 + |b|^2 zeta^2(M-n-1) + |b|^2 zeta^2(M-n)) / (|a|^2 + |b|^2 zeta^2(M))
///
/// Throws IndexOutOfRange unless n < M. Within eps of the boundary set the
/// argument is taken to be exactly +-1.
double site_relative_probability(std::size_t n, std::size_t M, const Coin& coin,
                                 double omega, double eps = kRegimeEps);

/// E_M(omega), the sum of the relative probabilities, via the closed form in
/// lambda_+ - lambda_-, or the boundary continuity formula within eps of the
/// boundary set.
double comfortability(std::size_t M, const Coin& coin, double omega,
                      double eps = kRegimeEps);

/// Assembles the full profile. Throws InvalidArgument when M == 0.
StationaryProfile stationary_distribution(std::size_t M, const Coin& coin,
                                          double omega,
                                          double eps = kRegimeEps);

/// Normalises a vector of site norms into a profile. Throws ZeroField when
/// the total is <= 1e-300.
StationaryProfile profile_from_norms(std::vector<double> site_norm_sq);

struct ABForm {
  double A;  // A_M
  double B;  // B_M(n)
};

/// mu_M(n) = B_M(n) / A_M written directly in theta:
///
///   A_M    = (|b|^2 + |a|^2 sin^2 t) M - |b|^2/4 sin(2Mt) sin(2t) / sin^2 t
///   B_M(n) = |a|^2 sin^2 t + |b|^2 sin^2((M-n-1)t) + |b|^2 sin^2((M-n)t)
///
/// Throws OutOfRegime unless theta in (0, pi/2], IndexOutOfRange unless n < M.
ABForm ab_form(std::size_t M, std::size_t n, const Coin& coin, double theta);

/// F_M(x) = sum of mu(j) over j/M <= x. Exactly 0 below the first site and
/// exactly 1 once every site is included.
double cumulative(const StationaryProfile& profile, double x);

/// Number of sites j with j/M <= x.
std::size_t sites_at_or_below(std::size_t M, double x);

}  // namespace qwalk
