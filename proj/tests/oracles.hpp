#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/dynamics.hpp"

namespace qwalk::oracle {

/// Haar-random element of U(2), rejected until min(|a|, |b|) >= min_abs.
/// A U(2) element is e^{i phi} [[al, be], [-conj(be), conj(al)]] with
/// (al, be) uniform on the unit 3-sphere.
inline Coin random_coin(std::mt19937_64& rng, double min_abs = 0.2) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  while (true) {
    double v[4];
    double norm = 0.0;
    for (double& x : v) {
      x = gauss(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    const cplx al{v[0] / norm, v[1] / norm};
    const cplx be{v[2] / norm, v[3] / norm};
    const cplx g = std::polar(1.0, phase(rng));
    if (std::min(std::abs(al), std::abs(be)) < min_abs) continue;
    return make_coin(g * al, g * be, -g * std::conj(be), g * std::conj(al));
  }
}

/// U_{m-1}(x) from its closed forms: sin(m t)/sin(t) with x = cos t for
/// |x| < 1, (l+^m - l-^m)/(l+ - l-) for |x| > 1, m (times sign) at |x| = 1.
inline double zeta_closed_form(std::size_t m, double x) {
  const double mm = static_cast<double>(m);
  if (std::abs(x) < 1.0) {
    const double t = std::acos(x);
    return std::sin(mm * t) / std::sin(t);
  }
  if (std::abs(x) == 1.0) return std::pow(x, mm - 1.0) * mm;
  const double disc = std::sqrt(x * x - 1.0);
  const double lp = x + std::copysign(disc, x);
  const double lm = 1.0 / lp;
  return (std::pow(lp, mm) - std::pow(lm, mm)) / (lp - lm);
}

/// Site norms from the Chebyshev closed form, recurrence run in long double
/// (range ~1e4932, so large B_out paths stay finite without rescaling).
inline std::vector<double> site_norms_long_double(std::size_t M, double a2, double x) {
  std::vector<long double> z(M + 2, 0.0L);
  if (M + 2 > 1) z[1] = 1.0L;
  for (std::size_t m = 2; m < M + 2; ++m) z[m] = 2.0L * x * z[m - 1] - z[m - 2];
  const long double b2 = 1.0L - a2;
  const long double den = a2 + b2 * z[M] * z[M];
  std::vector<double> out(M);
  for (std::size_t n = 0; n < M; ++n) {
    out[n] = static_cast<double>(
        (a2 + b2 * z[M - n - 1] * z[M - n - 1] + b2 * z[M - n] * z[M - n]) / den);
  }
  return out;
}

/// Composite Simpson rule with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      int panels) {
  const double h = (hi - lo) / panels;
  double s = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return s * h / 3.0;
}

/// The walk written directly on a finite window of Z, straight from
///   (U psi)(j) = P(j+1) psi(j+1) + Q(j-1) psi(j-1),
/// with C(j) = C0 on {0..M-1} and I elsewhere. The window carries `tail`
/// sites on each side, enough that nothing reaches its edges during the
/// steps taken. The left tail starts as exp(i xi j)|R> on j <= -1.
class FullLineWalk {
public:
  FullLineWalk(const Coin& coin, std::size_t M, double xi, std::size_t tail)
      : coin_(coin), M_(M), tail_(tail), psi_(M + 2 * tail) {
    for (std::size_t k = 0; k < tail; ++k) {
      const double j = static_cast<double>(k) - static_cast<double>(tail);
      psi_[k].r = std::polar(1.0, xi * j);
    }
  }

  void step() {
    const std::size_t N = psi_.size();
    std::vector<Spinor> next(N);
    for (std::size_t k = 0; k < N; ++k) {
      if (k + 1 < N) next[k].l = apply(k + 1, psi_[k + 1]).l;
      if (k >= 1) next[k].r = apply(k - 1, psi_[k - 1]).r;
    }
    psi_ = std::move(next);
  }

  /// psi at path site j in {0..M-1}.
  const Spinor& site(std::size_t j) const { return psi_[tail_ + j]; }

  /// Squared norm on the outgoing parts: L amplitudes left of the path and
  /// R amplitudes right of it.
  double outflow_left() const {
    double s = 0.0;
    for (std::size_t k = 0; k < tail_; ++k) s += std::norm(psi_[k].l);
    return s;
  }
  double outflow_right() const {
    double s = 0.0;
    for (std::size_t k = tail_ + M_; k < psi_.size(); ++k) s += std::norm(psi_[k].r);
    return s;
  }

private:
  Spinor apply(std::size_t k, const Spinor& s) const {
    const bool inside = k >= tail_ && k < tail_ + M_;
    if (!inside) return s;
    return {coin_.a() * s.l + coin_.b() * s.r, coin_.c() * s.l + coin_.d() * s.r};
  }

  Coin coin_;
  std::size_t M_;
  std::size_t tail_;
  std::vector<Spinor> psi_;
};

}  // namespace qwalk::oracle
