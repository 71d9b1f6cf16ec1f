#pragma once

// Free-energy functionals: the reduced (Ginzburg-Landau-like) energy of the
// order parameter, the locally-equilibrated density and its moments, the
// relative entropy, and the direct Onsager energy of an orientation density.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nematic/grid.hpp"
#include "nematic/specfun.hpp"

namespace nematic {

/// Truncated Fourier moments n^(k)(z) = int exp(2ik phi) rho dphi for
/// k = 0..k_max. moments[1] is the order parameter.
struct MomentState {
  Grid2D grid;
  int k_max = 0;
  std::vector<ComplexField> moments;

  MomentState(Grid2D g, int k) : grid(std::move(g)), k_max(k) {
    if (k < 1) throw std::invalid_argument("MomentState: k_max must be >= 1");
    moments.assign(static_cast<std::size_t>(k) + 1, ComplexField(grid));
    for (auto& v : moments[0].values()) v = 1.0;
  }

  const ComplexField& order_parameter() const { return moments[1]; }
  ComplexField& order_parameter() { return moments[1]; }
};

/// Orientation density sampled on phi_q = 2 pi q / m at every grid node;
/// values[p * m + q] = rho(phi_q, z_p).
struct OrientationDensity {
  Grid2D grid;
  std::size_t m = 0;
  std::vector<double> values;

  OrientationDensity(Grid2D g, std::size_t samples)
      : grid(std::move(g)), m(samples), values(grid.size() * samples, 0.0) {}

  double dphi() const { return 2.0 * std::numbers::pi / static_cast<double>(m); }
  std::span<double> at(std::size_t p) { return {values.data() + p * m, m}; }
  std::span<const double> at(std::size_t p) const { return {values.data() + p * m, m}; }
};

inline void check_order_parameter(const ComplexField& n, const char* where) {
  for (const auto& v : n.values()) {
    if (!(std::abs(v) < 1.0)) throw std::domain_error(std::string(where) + ": |n| must be < 1 everywhere");
  }
}

/// N(n) = int [eps^2/2 |grad n|^2 + W^gamma(|n|)] dv.
inline double reduced_energy(const ComplexField& n, const NematicParams& params) {
  check_order_parameter(n, "reduced_energy");
  const Grid2D& g = n.grid();
  double potential = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) potential += g.weight(i, j) * w_gamma(std::abs(n(i, j)), params);
  return params.epsilon() * params.epsilon() * dirichlet_energy(n) + potential;
}

/// k-th moment of the locally-equilibrated density at a single point:
/// I_k(Lambda(r))/I_0(Lambda(r)) * exp(i k arg n).
inline Complex equilibrium_moment(Complex n, int k) {
  if (k == 0) return 1.0;
  const double r = std::abs(n);
  if (!(r < 1.0)) throw std::domain_error("equilibrium_moments: |n| must be < 1");
  if (k == 1) return n;
  if (r == 0.0) return 0.0;
  const double ratio = bessel_ratios(k, lambda_of(r))[static_cast<std::size_t>(k)];
  return std::polar(ratio, k * std::arg(n));
}

inline ComplexField equilibrium_moments(const ComplexField& n, int k) {
  ComplexField out(n.grid());
  for (std::size_t idx = 0; idx < n.size(); ++idx) out[idx] = equilibrium_moment(n[idx], k);
  return out;
}

/// Moment state on the equilibrium family of n: n^(k) = equilibrium_moments(n, k).
inline MomentState equilibrium_state(const ComplexField& n, int k_max) {
  MomentState s(n.grid(), k_max);
  for (std::size_t idx = 0; idx < n.size(); ++idx) {
    const double r = std::abs(n[idx]);
    if (!(r < 1.0)) throw std::domain_error("equilibrium_state: |n| must be < 1");
    const auto ratios = bessel_ratios(k_max, lambda_of(r));
    const double a = std::arg(n[idx]);
    for (int k = 1; k <= k_max; ++k) s.moments[static_cast<std::size_t>(k)][idx] = std::polar(ratios[static_cast<std::size_t>(k)], k * a);
    s.moments[1][idx] = n[idx];
  }
  return s;
}

/// Locally-equilibrated density exp(Lambda cos(2 phi - arg n)) / (2 pi I0(Lambda)).
inline double equilibrated_density(Complex n, double phi) {
  const double r = std::abs(n);
  if (r == 0.0) return 0.5 / std::numbers::pi;
  const double lam = lambda_of(r);
  return std::exp(lam * (std::cos(2.0 * phi - std::arg(n)) - 1.0)) /
         (2.0 * std::numbers::pi * bessel_i_scaled(0, lam));
}

inline OrientationDensity equilibrated_density(const ComplexField& n, std::size_t m) {
  OrientationDensity rho(n.grid(), m);
  for (std::size_t p = 0; p < n.size(); ++p) {
    auto row = rho.at(p);
    for (std::size_t q = 0; q < m; ++q) row[q] = equilibrated_density(n[p], static_cast<double>(q) * rho.dphi());
  }
  return rho;
}

/// Order parameter of a sampled density, by the same phi-quadrature.
inline ComplexField order_parameter_of(const OrientationDensity& rho) {
  ComplexField n(rho.grid);
  const double dphi = rho.dphi();
  for (std::size_t p = 0; p < rho.grid.size(); ++p) {
    Complex sum = 0.0;
    auto row = rho.at(p);
    for (std::size_t q = 0; q < rho.m; ++q) sum += std::polar(row[q], 2.0 * static_cast<double>(q) * dphi);
    n[p] = sum * dphi;
  }
  return n;
}

/// rho(phi) = (1/2pi) [1 + 2 sum_k Re(conj(n^(k)) exp(2ik phi))]. Negative
/// overshoot below 1e-8 is clipped and the density renormalised; anything
/// larger means the moments do not describe a density.
inline OrientationDensity reconstruct_density(const MomentState& state, std::size_t m) {
  if (m < static_cast<std::size_t>(4 * state.k_max + 1))
    throw std::invalid_argument("reconstruct_density: too few phi samples for k_max");
  OrientationDensity rho(state.grid, m);
  const double dphi = rho.dphi();
  const double inv_2pi = 0.5 / std::numbers::pi;
  const std::size_t kk = static_cast<std::size_t>(state.k_max);
  std::vector<Complex> phases(m * kk);
  for (std::size_t q = 0; q < m; ++q)
    for (std::size_t k = 1; k <= kk; ++k)
      phases[q * kk + k - 1] = std::polar(1.0, 2.0 * static_cast<double>(k * q) * dphi);
  for (std::size_t p = 0; p < state.grid.size(); ++p) {
    auto row = rho.at(p);
    bool clipped = false;
    for (std::size_t q = 0; q < m; ++q) {
      double s = 1.0;
      for (std::size_t k = 1; k <= kk; ++k)
        s += 2.0 * std::real(std::conj(state.moments[k][p]) * phases[q * kk + k - 1]);
      double v = s * inv_2pi;
      if (v < 0.0) {
        if (v < -1e-8) throw std::domain_error("reconstruct_density: moments give a negative density");
        v = 0.0;
        clipped = true;
      }
      row[q] = v;
    }
    if (clipped) {
      double total = 0.0;
      for (double v : row) total += v;
      total *= dphi;
      for (double& v : row) v /= total;
    }
  }
  return rho;
}

/// int_Omega S(rho | rho_hat[n]) dv with S = int ln(rho/rho_hat) rho dphi.
inline double relative_entropy(const OrientationDensity& rho, const ComplexField& n) {
  if (!rho.grid.same_geometry(n.grid())) throw std::invalid_argument("relative_entropy: grid mismatch");
  if (rho.m < 64) throw std::invalid_argument("relative_entropy: need at least 64 phi samples");
  const Grid2D& g = n.grid();
  const double dphi = rho.dphi();
  double total = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const std::size_t p = g.index(i, j);
      const double r = std::abs(n[p]);
      if (!(r < 1.0)) throw std::domain_error("relative_entropy: |n| must be < 1");
      const double lam = lambda_of(r);
      const double theta = std::arg(n[p]);
      // ln rho_hat = Lambda cos(2phi - theta) - ln(2 pi I0(Lambda))
      const double log_norm = std::log(2.0 * std::numbers::pi) + log_bessel_i0(lam);
      double s = 0.0;
      auto row = rho.at(p);
      for (std::size_t q = 0; q < rho.m; ++q) {
        const double v = row[q];
        if (v < 0.0) throw std::domain_error("relative_entropy: negative density sample");
        if (v == 0.0) continue;
        const double log_hat = lam * std::cos(2.0 * static_cast<double>(q) * dphi - theta) - log_norm;
        s += v * (std::log(v) - log_hat);
      }
      total += g.weight(i, j) * s * dphi;
    }
  }
  return total;
}

/// Onsager energy int [f_ore(rho) + eps^2/2 |grad n|^2] dv evaluated directly,
/// including the double phi-integral of the alignment term. O(m^2) per node.
inline double onsager_energy(const OrientationDensity& rho, const NematicParams& params) {
  const Grid2D& g = rho.grid;
  const double dphi = rho.dphi();
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> cos_table(rho.m);
  for (std::size_t q = 0; q < rho.m; ++q) cos_table[q] = std::cos(2.0 * static_cast<double>(q) * dphi);
  double bulk = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      auto row = rho.at(g.index(i, j));
      double entropy = 0.0;
      for (double v : row) {
        if (v < 0.0) throw std::domain_error("onsager_energy: negative density sample");
        if (v > 0.0) entropy += v * std::log(two_pi * v);
      }
      entropy *= dphi;
      double align = 0.0;
      for (std::size_t a = 0; a < rho.m; ++a) {
        double inner = 0.0;
        for (std::size_t b = 0; b < rho.m; ++b) inner += cos_table[(a + rho.m - b) % rho.m] * row[b];
        align += row[a] * inner;
      }
      align *= dphi * dphi;
      bulk += g.weight(i, j) * (entropy - 0.5 * params.gamma() * align + params.c_gamma());
    }
  }
  const ComplexField n = order_parameter_of(rho);
  return bulk + params.epsilon() * params.epsilon() * dirichlet_energy(n);
}

/// Total energy through the decomposition N(n) + int S(rho | rho_hat[n]).
inline double total_energy(const OrientationDensity& rho, const NematicParams& params) {
  const ComplexField n = order_parameter_of(rho);
  return reduced_energy(n, params) + relative_entropy(rho, n);
}

}  // namespace nematic
