#pragma once

// Reference computations used to check the library. None of them calls
// into the routines they are compared against.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nematic::oracle {

/// I_nu(x) by direct power-series summation in long double.
inline long double bessel_i(int nu, long double x) {
  const long double half = x / 2;
  long double term = 1;
  for (int j = 1; j <= nu; ++j) term *= half / j;
  long double sum = term;
  for (int m = 1; m < 5000; ++m) {
    term *= half * half / (static_cast<long double>(m) * (m + nu));
    sum += term;
    if (std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
  }
  return sum;
}

inline long double ratio10(long double x) { return bessel_i(1, x) / bessel_i(0, x); }

/// Lambda(r) by bisection on I1/I0, r in (0, 1).
inline double lambda(double r) {
  if (r == 0.0) return 0.0;
  if (r < 0.0) return -lambda(-r);
  long double lo = 0, hi = 1;
  while (ratio10(hi) < r) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-16L * hi; ++it) {
    const long double mid = (lo + hi) / 2;
    (ratio10(mid) < r ? lo : hi) = mid;
  }
  return static_cast<double>((lo + hi) / 2);
}

/// Largest root of I1(gamma r)/I0(gamma r) = r, bisected on (1e-6, 1).
inline double r_eq(double gamma) {
  if (gamma <= 2.0) return 0.0;
  auto f = [gamma](long double r) { return ratio10(gamma * r) - r; };
  long double lo = 1e-6L, hi = 1.0L - 1e-12L;
  if (f(lo) <= 0) return 0.0;
  for (int it = 0; it < 200; ++it) {
    const long double mid = (lo + hi) / 2;
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return static_cast<double>((lo + hi) / 2);
}

inline double tau_gamma(double gamma) {
  const long double i0 = bessel_i(0, gamma * static_cast<long double>(r_eq(gamma)));
  return static_cast<double>(1.0L - 1.0L / (i0 * i0));
}

/// Spatially homogeneous orientation dynamics solved directly in phi:
///   rho_t = d/dphi [ rho_phi + rho V_phi ],  V = -gamma Re(exp(-2i phi) n),
///   n = int exp(2i phi) rho dphi,
/// with fourth-order centred differences on m points and classical RK4.
class PhiGridSolver {
 public:
  PhiGridSolver(std::vector<double> rho, double gamma) : rho_(std::move(rho)), gamma_(gamma) {
    if (rho_.size() < 16) throw std::invalid_argument("PhiGridSolver: need at least 16 points");
    dphi_ = 2.0 * std::numbers::pi / static_cast<double>(rho_.size());
  }

  /// Density (1/2pi)(1 + 2 Re(conj(n) exp(2i phi))) with no higher moments.
  static std::vector<double> first_moment_density(std::complex<double> n, std::size_t m) {
    std::vector<double> rho(m);
    for (std::size_t q = 0; q < m; ++q) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(m);
      rho[q] = (1.0 + 2.0 * std::real(std::conj(n) * std::polar(1.0, 2.0 * phi))) / (2.0 * std::numbers::pi);
    }
    return rho;
  }

  std::complex<double> order_parameter() const { return moment(rho_); }

  void advance(double t_end, double dt) {
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    const double h = t_end / static_cast<double>(steps);
    const std::size_t m = rho_.size();
    std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
    for (std::size_t s = 0; s < steps; ++s) {
      rhs(rho_, k1);
      for (std::size_t i = 0; i < m; ++i) tmp[i] = rho_[i] + 0.5 * h * k1[i];
      rhs(tmp, k2);
      for (std::size_t i = 0; i < m; ++i) tmp[i] = rho_[i] + 0.5 * h * k2[i];
      rhs(tmp, k3);
      for (std::size_t i = 0; i < m; ++i) tmp[i] = rho_[i] + h * k3[i];
      rhs(tmp, k4);
      for (std::size_t i = 0; i < m; ++i) rho_[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }

  double stable_dt() const { return 0.25 * dphi_ * dphi_; }

 private:
  std::complex<double> moment(const std::vector<double>& rho) const {
    std::complex<double> s = 0.0;
    for (std::size_t q = 0; q < rho.size(); ++q) s += rho[q] * std::polar(1.0, 2.0 * static_cast<double>(q) * dphi_);
    return s * dphi_;
  }

  double d1(const std::vector<double>& f, std::size_t i) const {
    const std::size_t m = f.size();
    auto at = [&](long o) { return f[(i + m + static_cast<std::size_t>(o + static_cast<long>(m))) % m]; };
    return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * dphi_);
  }

  void rhs(const std::vector<double>& rho, std::vector<double>& out) const {
    const std::size_t m = rho.size();
    const std::complex<double> n = moment(rho);
    std::vector<double> flux(m);
    for (std::size_t q = 0; q < m; ++q) {
      const double phi = static_cast<double>(q) * dphi_;
      // V_phi for V = -gamma (Re n cos 2phi + Im n sin 2phi)
      const double v_phi = -gamma_ * (-2.0 * n.real() * std::sin(2.0 * phi) + 2.0 * n.imag() * std::cos(2.0 * phi));
      flux[q] = d1(rho, q) + rho[q] * v_phi;
    }
    for (std::size_t q = 0; q < m; ++q) out[q] = d1(flux, q);
  }

  std::vector<double> rho_;
  double gamma_;
  double dphi_;
};

}  // namespace nematic::oracle
