#pragma once

// Special functions for the two-dimensional Onsager-Maier-Saupe model:
// modified Bessel functions of integer order, the inverse Lambda of the
// Bessel ratio I1/I0, the amplitude potential W^gamma and the derived
// equilibrium constants bundled in NematicParams.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace nematic {

inline constexpr int kMaxBesselOrder = 64;

namespace detail {

// e^{-x} I_nu(x), x >= 0, by the power series. All terms are positive so
// the sum is well conditioned; only used for x < 20.
inline double scaled_bessel_series(int nu, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int j = 1; j <= nu; ++j) term *= half / j;
  if (term == 0.0) return 0.0;
  const double q = half * half;
  double sum = term;
  for (int m = 1; m < 1000; ++m) {
    term *= q / (static_cast<double>(m) * (m + nu));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum * std::exp(-x);
}

// e^{-x} I_nu(x) from the large-argument expansion
//   I_nu(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k a_k(nu) / x^k.
// Summation stops at the smallest term.
inline double scaled_bessel_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < 500; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag > last && k > 2) break;
    sum += term;
    last = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

// e^{-x} I_k(x) for k = 0..nmax by Miller's backward recurrence,
// normalised with the asymptotic value of e^{-x} I_0(x).
inline std::vector<double> scaled_bessel_miller(int nmax, double x) {
  const int start = nmax + static_cast<int>(std::ceil(x)) + 40 +
                    static_cast<int>(std::ceil(6.0 * std::sqrt(x)));
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  double above = 0.0;
  double cur = 1e-200;
  for (int k = start; k >= 1; --k) {
    const double below = above + (2.0 * k / x) * cur;
    above = cur;
    cur = below;
    if (k - 1 <= nmax) out[static_cast<std::size_t>(k - 1)] = cur;
    if (std::abs(cur) > 1e200) {
      cur *= 1e-200;
      above *= 1e-200;
      for (auto& v : out) v *= 1e-200;
    }
  }
  const double norm = scaled_bessel_asymptotic(0, x) / out[0];
  for (auto& v : out) v *= norm;
  return out;
}

inline double scaled_bessel_nonneg(int nu, double x) {
  if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
  if (x < 20.0) return scaled_bessel_series(nu, x);
  if (nu <= 1 || x >= static_cast<double>(nu) * nu) return scaled_bessel_asymptotic(nu, x);
  return scaled_bessel_miller(nu, x)[static_cast<std::size_t>(nu)];
}

inline void check_order(int nu) {
  if (nu < 0 || nu > kMaxBesselOrder)
    throw std::domain_error("bessel order out of range [0, 64]");
}

}  // namespace detail

/// Exponentially scaled modified Bessel function e^{-|x|} I_nu(x).
inline double bessel_i_scaled(int nu, double x) {
  detail::check_order(nu);
  if (!std::isfinite(x)) throw std::domain_error("bessel_i: non-finite argument");
  const double v = detail::scaled_bessel_nonneg(nu, std::abs(x));
  return (x < 0.0 && (nu % 2) == 1) ? -v : v;
}

/// Modified Bessel function of the first kind I_nu(x) for integer
/// 0 <= nu <= 64. Throws std::overflow_error instead of returning inf.
inline double bessel_i(int nu, double x) {
  const double s = bessel_i_scaled(nu, x);
  if (s == 0.0) return 0.0;
  const double log_mag = std::log(std::abs(s)) + std::abs(x);
  if (log_mag >= std::log(std::numeric_limits<double>::max()))
    throw std::overflow_error("bessel_i: result not representable");
  return s * std::exp(std::abs(x));
}

/// ln I_0(x); finite for every finite x.
inline double log_bessel_i0(double x) {
  return std::log(bessel_i_scaled(0, x)) + std::abs(x);
}

/// I_k(x) / I_0(x) for k = 0..kmax, x >= 0. These are the Fourier
/// coefficients of the von Mises-type density exp(x cos t) / (2 pi I_0(x)).
inline std::vector<double> bessel_ratios(int kmax, double x) {
  detail::check_order(kmax);
  x = std::abs(x);
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1, 0.0);
  out[0] = 1.0;
  if (x == 0.0) return out;
  if (x >= 20.0 && kmax >= 2 && x < static_cast<double>(kmax) * kmax) {
    auto s = detail::scaled_bessel_miller(kmax, x);
    for (int k = 1; k <= kmax; ++k) out[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k)] / s[0];
    return out;
  }
  const double i0 = detail::scaled_bessel_nonneg(0, x);
  for (int k = 1; k <= kmax; ++k)
    out[static_cast<std::size_t>(k)] = detail::scaled_bessel_nonneg(k, x) / i0;
  return out;
}

/// I_1(x) / I_0(x).
inline double bessel_ratio_10(double x) {
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;
  const double v = detail::scaled_bessel_nonneg(1, ax) / detail::scaled_bessel_nonneg(0, ax);
  return x < 0.0 ? -v : v;
}

/// Lambda(r): inverse of I1/I0 on (-1, 1). Odd, increasing, with vertical
/// asymptotes at r = +-1.
inline double lambda_of(double r) {
  if (!(std::abs(r) < 1.0)) throw std::domain_error("lambda_of: |r| must be < 1");
  if (r == 0.0) return 0.0;
  if (r < 0.0) return -lambda_of(-r);

  // I1/I0(x) < x/2, so Lambda(r) > 2r; for r near 1, Lambda ~ 1/(2(1-r)).
  double lo = 2.0 * r;
  double hi = std::max(4.0 * r, 1.0 / (1.0 - r) + 2.0);
  while (bessel_ratio_10(hi) < r) hi *= 2.0;
  double x = r > 0.9 ? std::clamp(0.5 / (1.0 - r), lo, hi) : 2.0 * r + r * r * r;
  x = std::clamp(x, lo, hi);

  // Newton on the monotone ratio, falling back to bisection whenever a step
  // leaves the bracket. d/dx (I1/I0) = 1 - A/x - A^2.
  for (int it = 0; it < 200; ++it) {
    const double a = bessel_ratio_10(x);
    const double f = a - r;
    if (f == 0.0) return x;
    if (f < 0.0) lo = x; else hi = x;
    const double slope = 1.0 - a / x - a * a;
    double next = slope > 0.0 ? x - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * x || hi - lo <= 1e-15 * hi) return next;
    x = next;
  }
  return x;
}

/// Lambda(r) / r, continuous at r = 0 where it equals 2.
inline double lambda_over_r(double r) {
  if (std::abs(r) < 1e-6) return 2.0 + r * r;
  return lambda_of(r) / r;
}

class NematicParams;
NematicParams make_params(double gamma, double epsilon);

/// Concentration gamma, elastic modulus epsilon and the constants derived
/// from them. Immutable; construct with make_params.
class NematicParams {
 public:
  double gamma() const { return gamma_; }
  double epsilon() const { return epsilon_; }
  double r_eq() const { return r_eq_; }
  double tau_gamma() const { return tau_gamma_; }
  double c_gamma() const { return c_gamma_; }

 private:
  friend NematicParams make_params(double gamma, double epsilon);
  NematicParams() = default;

  double gamma_ = 0.0;
  double epsilon_ = 0.0;
  double r_eq_ = 0.0;
  double tau_gamma_ = 0.0;
  double c_gamma_ = 0.0;
};

namespace detail {

// W^gamma without the constant C_gamma.
inline double w_gamma_base(double r, double gamma) {
  const double lam = lambda_of(r);
  return -0.5 * gamma * r * r + r * lam - log_bessel_i0(lam);
}

// Positive root of gamma r = Lambda(r), found as the root x of
// gamma I1/I0(x) = x, so that r_eq = x / gamma.
inline double nematic_root(double gamma) {
  auto g = [gamma](double x) { return gamma * bessel_ratio_10(x) - x; };
  double lo = 0.5 * std::sqrt(8.0 * (gamma - 2.0) / gamma);
  double hi = gamma;
  while (g(lo) <= 0.0 && lo > 1e-300) lo *= 0.5;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return bessel_ratio_10(0.5 * (lo + hi));
}

// -min_r of the base potential: scan on a 1e-4 grid, then golden-section.
inline double potential_constant(double gamma, double r_eq) {
  constexpr double step = 1e-4;
  const int count = static_cast<int>(std::round((1.0 - step) / step));
  int best = 0;
  double best_val = w_gamma_base(0.0, gamma);
  for (int i = 1; i <= count; ++i) {
    const double v = w_gamma_base(i * step, gamma);
    if (v < best_val) { best_val = v; best = i; }
  }
  double a = std::max(0.0, (best - 1) * step);
  double b = std::min(1.0 - step, (best + 1) * step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = w_gamma_base(c, gamma);
  double fd = w_gamma_base(d, gamma);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (fc < fd) { b = d; d = c; fd = fc; c = b - inv_phi * (b - a); fc = w_gamma_base(c, gamma); }
    else { a = c; c = d; fc = fd; d = a + inv_phi * (b - a); fd = w_gamma_base(d, gamma); }
  }
  double min_val = std::min({best_val, fc, fd, w_gamma_base(r_eq, gamma)});
  return -min_val;
}

}  // namespace detail

/// Builds the parameter bundle. For gamma <= 2 the only root of
/// gamma r = Lambda(r) is r = 0 (isotropic regime); above the transition
/// the root with the smaller W^gamma is kept, which discards r = 0.
inline NematicParams make_params(double gamma, double epsilon) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("make_params: gamma must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("make_params: epsilon must be positive");
  NematicParams p;
  p.gamma_ = gamma;
  p.epsilon_ = epsilon;
  double r_eq = 0.0;
  if (gamma > 2.0) {
    const double root = detail::nematic_root(gamma);
    if (root > 0.0 && detail::w_gamma_base(root, gamma) < detail::w_gamma_base(0.0, gamma)) r_eq = root;
  }
  p.r_eq_ = r_eq;
  p.tau_gamma_ = r_eq > 0.0 ? 1.0 - std::exp(-2.0 * log_bessel_i0(gamma * r_eq)) : 0.0;
  p.c_gamma_ = detail::potential_constant(gamma, r_eq);
  return p;
}

inline void check_amplitude(double r, const char* where) {
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error(std::string(where) + ": amplitude outside [0, 1)");
}

/// W^gamma(r) = -gamma r^2/2 + r Lambda(r) - ln I0(Lambda(r)) + C_gamma.
inline double w_gamma(double r, const NematicParams& params) {
  check_amplitude(r, "w_gamma");
  return detail::w_gamma_base(r, params.gamma()) + params.c_gamma();
}

/// dW^gamma/dr = Lambda(r) - gamma r.
inline double w_gamma_prime(double r, const NematicParams& params) {
  check_amplitude(r, "w_gamma_prime");
  return lambda_of(r) - params.gamma() * r;
}

}  // namespace nematic
