#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/stationary.hpp"

namespace qwalk {

/// Two-component amplitude at one site, chirality basis (L, R).
struct Spinor {
  cplx l{};
  cplx r{};

  double norm_sq() const noexcept { return std::norm(l) + std::norm(r); }
};

using Field = std::vector<Spinor>;

/// Internal field of the driven walk on {0, ..., M-1}. The free left tail of
/// the initial state is never stored; it enters as one injected amplitude
/// per step. Everything that leaves the path is summed into the absorbed
/// counters.
struct WalkState {
  WalkConfig config;
  std::uint64_t t = 0;
  Field field;
  double absorbed_left = 0.0;
  double absorbed_right = 0.0;
};

WalkState init_walk(const WalkConfig& config);

/// One application of U_M restricted to the path:
///   field'(j) = P field(j+1) + Q field(j-1),  P = |L><L|C0, Q = |R><R|C0,
/// with exp(-i xi (t+1)) injected into the R slot of site 0.
WalkState step(WalkState state);

struct StationaryRun {
  Field phi_star;
  double residual = 0.0;  // max_j ||phi_{t+1}(j) - phi_t(j)|| for the returned phi_t
  std::uint64_t t = 0;
  bool converged = false;
};

inline constexpr double kDefaultStationaryTol = 1e-10;
inline constexpr std::uint64_t kDefaultMaxSteps = 100000;

/// Iterates the phase-corrected walk phi_t = exp(i xi t) psi_t from the empty
/// path until both the one-step residual and the estimated distance to the
/// fixed point are <= tol. On failure the last iterate is returned with
/// converged == false; require_converged turns that into NoConvergence.
StationaryRun run_until_stationary(const WalkConfig& config,
                                   double tol = kDefaultStationaryTol,
                                   std::uint64_t t_max = kDefaultMaxSteps);

const StationaryRun& require_converged(const StationaryRun& run);

/// Largest M accepted by the dense solver.
inline constexpr std::size_t kMaxDenseSites = 2048;

/// Direct solve of phi = exp(i xi) A phi + b, A the path-internal part of
/// U_M and b the unit R injection at site 0. Throws SingularSystem when the
/// condition estimate exceeds 1e12.
Field solve_fixed_point(const WalkConfig& config);

/// max_j ||phi(j) - (exp(i xi) A phi)(j) - b(j)||.
double eigen_residual(const Field& phi, const WalkConfig& config);

/// Profile from ||phi(n)||^2. Throws ZeroField for a vanishing field.
StationaryProfile empirical_distribution(const Field& phi);

}  // namespace qwalk
