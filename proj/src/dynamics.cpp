#include "qwalk/dynamics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {
namespace {

struct Exits {
  cplx left;   // L component leaving through site 0
  cplx right;  // R component leaving through site M-1
};

// out(j).l = phase * (C in(j+1)).l,  out(j).r = phase * (C in(j-1)).r,
// out(0).r = injection.
Exits propagate(const Field& in, const Coin& coin, cplx phase, cplx injection,
                Field& out) {
  const std::size_t M = in.size();
  out.assign(M, Spinor{});
  const cplx a = coin.a(), b = coin.b(), c = coin.c(), d = coin.d();
  Exits exits{};
  for (std::size_t j = 0; j < M; ++j) {
    const cplx to_left = a * in[j].l + b * in[j].r;
    const cplx to_right = c * in[j].l + d * in[j].r;
    if (j > 0) {
      out[j - 1].l = phase * to_left;
    } else {
      exits.left = to_left;
    }
    if (j + 1 < M) {
      out[j + 1].r = phase * to_right;
    } else {
      exits.right = to_right;
    }
  }
  out[0].r = injection;
  return exits;
}

double sup_distance(const Field& x, const Field& y) {
  double worst = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const Spinor diff{x[j].l - y[j].l, x[j].r - y[j].r};
    worst = std::max(worst, diff.norm_sq());
  }
  return std::sqrt(worst);
}

double sup_norm(const Field& x) {
  double worst = 0.0;
  for (const Spinor& s : x) worst = std::max(worst, s.norm_sq());
  return std::sqrt(worst);
}

}  // namespace

WalkState init_walk(const WalkConfig& config) {
  return WalkState{config, 0, Field(config.M), 0.0, 0.0};
}

WalkState step(WalkState state) {
  const double phase = -state.config.xi * static_cast<double>(state.t + 1);
  Field next;
  const Exits exits = propagate(state.field, state.config.coin, cplx{1.0, 0.0},
                                std::polar(1.0, phase), next);
  state.field = std::move(next);
  state.absorbed_left += std::norm(exits.left);
  state.absorbed_right += std::norm(exits.right);
  ++state.t;
  return state;
}

// Stopping rule. With r_t = ||phi_{t+1} - phi_t||_sup the distance to the
// fixed point is about r_t q / (1 - q) for contraction rate q, which can sit
// well above r_t when the truncated operator has spectral radius near 1.
// q is estimated from the decay of r over two windows of w = 2M + 2 steps
// (the larger estimate wins, which smooths out oscillating transients). The
// run stops when r_t <= tol and that bound is <= tol, or when r_t reaches
// the round-off floor of the iteration (only counted once r_t <= tol).
StationaryRun run_until_stationary(const WalkConfig& config, double tol,
                                   std::uint64_t t_max) {
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (t_max < 1) throw InvalidArgument("t_max must be >= 1");

  const cplx phase = std::polar(1.0, config.xi);
  const std::size_t window = 2 * config.M + 2;
  constexpr double kFloor = 64.0 * std::numeric_limits<double>::epsilon();

  Field phi(config.M);
  Field next;
  std::vector<double> history;
  history.reserve(std::min<std::uint64_t>(t_max + 1, 1u << 16));

  for (std::uint64_t t = 0;; ++t) {
    propagate(phi, config.coin, phase, cplx{1.0, 0.0}, next);
    const double r = sup_distance(next, phi);
    history.push_back(r);

    bool done = r <= tol && r <= kFloor * std::max(1.0, sup_norm(next));
    if (!done && r <= tol && history.size() > 2 * window) {
      const std::size_t k = history.size() - 1;
      const double w = static_cast<double>(window);
      const double q = std::max(std::pow(history[k] / history[k - window], 1.0 / w),
                                std::pow(history[k - window] / history[k - 2 * window], 1.0 / w));
      done = q < 1.0 && r * q / (1.0 - q) <= tol;
    }
    if (done) return {std::move(phi), r, t, true};
    if (t >= t_max) return {std::move(phi), r, t, false};
    std::swap(phi, next);
  }
}

const StationaryRun& require_converged(const StationaryRun& run) {
  if (!run.converged) {
    throw NoConvergence("no stationary state within " + std::to_string(run.t) +
                        " steps (residual " + std::to_string(run.residual) + ")");
  }
  return run;
}

Field solve_fixed_point(const WalkConfig& config) {
  const std::size_t M = config.M;
  if (M > kMaxDenseSites) {
    throw InvalidArgument("dense fixed-point solve supports M <= " +
                          std::to_string(kMaxDenseSites));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(2 * M);
  const cplx phase = std::polar(1.0, config.xi);
  const Coin& coin = config.coin;

  // unknowns ordered (L_0, R_0, L_1, R_1, ...)
  Eigen::MatrixXcd system = Eigen::MatrixXcd::Identity(n, n);
  for (std::size_t j = 0; j < M; ++j) {
    const Eigen::Index row_l = static_cast<Eigen::Index>(2 * j);
    const Eigen::Index row_r = row_l + 1;
    if (j + 1 < M) {
      system(row_l, row_l + 2) -= phase * coin.a();
      system(row_l, row_l + 3) -= phase * coin.b();
    }
    if (j > 0) {
      system(row_r, row_l - 2) -= phase * coin.c();
      system(row_r, row_l - 1) -= phase * coin.d();
    }
  }
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs(1) = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond >= 1e-12)) {
    throw SingularSystem("fixed-point system is numerically singular (rcond " +
                         std::to_string(rcond) + ")");
  }
  const Eigen::VectorXcd sol = lu.solve(rhs);

  Field phi(M);
  for (std::size_t j = 0; j < M; ++j) {
    phi[j].l = sol(static_cast<Eigen::Index>(2 * j));
    phi[j].r = sol(static_cast<Eigen::Index>(2 * j + 1));
  }
  return phi;
}

double eigen_residual(const Field& phi, const WalkConfig& config) {
  if (phi.size() != config.M) throw InvalidArgument("field size does not match M");
  Field next;
  propagate(phi, config.coin, std::polar(1.0, config.xi), cplx{1.0, 0.0}, next);
  return sup_distance(next, phi);
}

StationaryProfile empirical_distribution(const Field& phi) {
  std::vector<double> norms;
  norms.reserve(phi.size());
  for (const Spinor& s : phi) norms.push_back(s.norm_sq());
  return profile_from_norms(std::move(norms));
}

}  // namespace qwalk
