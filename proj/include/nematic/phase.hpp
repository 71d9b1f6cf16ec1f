#pragma once

// Phase field phi of a multi-vortex state: the Dirichlet trace
// phi = psi - sum_k d_k arg(z - z_k) on the boundary, its harmonic
// extension and heat flow with diffusivity 4 / (|Omega| tau_gamma).

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nematic/grid.hpp"
#include "nematic/specfun.hpp"
#include "nematic/vortex_config.hpp"

namespace nematic {

/// Continuous boundary trace along the boundary loop, anchored so that the
/// first node carries the principal value. Throws if the trace winds, i.e.
/// the vortex degrees do not match the winding of psi.
inline PhaseField boundary_trace(const Grid2D& grid, const VortexConfiguration& cfg) {
  const PhaseFunction& psi = cfg.psi ? cfg.psi : grid.boundary_phase();
  auto raw = [&](Complex z) {
    double a = psi(z);
    for (std::size_t k = 0; k < cfg.count(); ++k) a -= cfg.degrees[k] * std::arg(z - cfg.positions[k]);
    return a;
  };
  const auto loop = grid.boundary_loop();
  PhaseField phi(grid);
  double prev_raw = raw(grid.point(loop[0]));
  double value = wrap_angle(prev_raw);
  phi[loop[0]] = value;
  for (std::size_t s = 1; s <= loop.size(); ++s) {
    const double r = raw(grid.point(loop[s % loop.size()]));
    value += wrap_angle(r - prev_raw);
    prev_raw = r;
    if (s < loop.size()) phi[loop[s]] = value;
  }
  if (std::abs(value - phi[loop[0]]) > std::numbers::pi)
    throw std::invalid_argument("boundary_trace: vortex degrees are incompatible with the boundary winding");
  return phi;
}

namespace detail {

/// y = (shift I - c Lap) x on interior nodes; boundary entries of y are zero
/// and boundary entries of x are treated as zero.
inline void apply_dirichlet_operator(const Grid2D& g, double shift, double c, const std::vector<double>& x,
                                     std::vector<double>& y) {
  const std::size_t nx = g.nx();
  const double k = c / (g.h() * g.h());
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t p = g.index(i, j);
      if (g.is_boundary(i, j)) {
        y[p] = 0.0;
        continue;
      }
      auto at = [&](std::size_t q) { return g.is_boundary(q) ? 0.0 : x[q]; };
      y[p] = shift * x[p] - k * (at(p - 1) + at(p + 1) + at(p - nx) + at(p + nx) - 4.0 * x[p]);
    }
  }
}

}  // namespace detail

struct SolveReport {
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Solves (shift - c Lap) u = shift * f at interior nodes with the boundary
/// values of u held fixed, by conjugate gradients stopped at relative
/// residual `tol`. shift = 0 gives the Laplace problem.
inline SolveReport solve_dirichlet(RealField& u, const RealField& f, double shift, double c, double tol = 1e-10) {
  const Grid2D& g = u.grid();
  const std::size_t n = g.size();
  const double k = c / (g.h() * g.h());
  std::vector<double> x(n, 0.0), b(n, 0.0), r(n), p(n), ap(n);
  for (std::size_t j = 1; j + 1 < g.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < g.nx(); ++i) {
      const std::size_t q = g.index(i, j);
      double coupling = 0.0;
      for (std::size_t nb : {q - 1, q + 1, q - g.nx(), q + g.nx()})
        if (g.is_boundary(nb)) coupling += u[nb];
      b[q] = shift * f[q] + k * coupling;
      x[q] = u[q];
    }
  }
  detail::apply_dirichlet_operator(g, shift, c, x, ap);
  double rr = 0.0, bb = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    r[q] = b[q] - ap[q];
    p[q] = r[q];
    rr += r[q] * r[q];
    bb += b[q] * b[q];
  }
  const double target = tol * tol * std::max(bb, 1e-300);
  SolveReport rep;
  const std::size_t max_iter = 10 * n;
  while (rr > target && rep.iterations < max_iter) {
    detail::apply_dirichlet_operator(g, shift, c, p, ap);
    double pap = 0.0;
    for (std::size_t q = 0; q < n; ++q) pap += p[q] * ap[q];
    const double alpha = rr / pap;
    double rr_new = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      x[q] += alpha * p[q];
      r[q] -= alpha * ap[q];
      rr_new += r[q] * r[q];
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t q = 0; q < n; ++q) p[q] = r[q] + beta * p[q];
    ++rep.iterations;
  }
  rep.residual = std::sqrt(rr / std::max(bb, 1e-300));
  if (rr > target) throw std::runtime_error("solve_dirichlet: conjugate gradients did not converge");
  for (std::size_t j = 1; j + 1 < g.ny(); ++j)
    for (std::size_t i = 1; i + 1 < g.nx(); ++i) u(i, j) = x[g.index(i, j)];
  return rep;
}

/// Discrete harmonic extension of the boundary values already stored in u.
inline SolveReport laplace_dirichlet(RealField& u, double tol = 1e-10) { return solve_dirichlet(u, u, 0.0, 1.0, tol); }

/// Harmonic phase with the vortex boundary trace.
inline PhaseField solve_harmonic_phase(const VortexConfiguration& cfg, const Grid2D& grid) {
  PhaseField phi = boundary_trace(grid, cfg);
  laplace_dirichlet(phi);
  return phi;
}

/// D0 = 4 / (|Omega| tau_gamma).
inline double phase_diffusivity(const Grid2D& grid, const NematicParams& params) {
  if (!(params.tau_gamma() > 0.0)) throw std::domain_error("phase_diffusivity: needs gamma > 2 (tau_gamma = 0)");
  return 4.0 / (grid.area() * params.tau_gamma());
}

/// Phase diffusivity of the linearised kinetic hierarchy on the rescaled
/// clock, 4 r_eq^2 / tau_gamma. It differs from phase_diffusivity by the
/// factor r_eq^2 |Omega|.
inline double kinetic_phase_diffusivity(const NematicParams& params) {
  if (!(params.tau_gamma() > 0.0)) throw std::domain_error("kinetic_phase_diffusivity: needs gamma > 2");
  return 4.0 * params.r_eq() * params.r_eq() / params.tau_gamma();
}

/// Phase diffusivity of the maximal-entropy closure, 4 (1 - 1/gamma).
inline double closure_phase_diffusivity(const NematicParams& params) {
  if (!(params.gamma() > 2.0)) throw std::domain_error("closure_phase_diffusivity: needs gamma > 2");
  return 4.0 * (1.0 - 1.0 / params.gamma());
}

enum class HeatScheme { explicit_euler, backward_euler };

/// One heat step of phi with diffusivity D0, boundary held at the trace.
inline PhaseField step_heat_phase(const PhaseField& phi, const VortexConfiguration& cfg, const NematicParams& params,
                                  double dt, HeatScheme scheme = HeatScheme::backward_euler) {
  const Grid2D& g = phi.grid();
  const double d0 = phase_diffusivity(g, params);
  const PhaseField trace = boundary_trace(g, cfg);
  PhaseField next = phi;
  if (scheme == HeatScheme::explicit_euler) {
    if (dt * d0 > 0.25 * g.h() * g.h() * (1.0 + 1e-12))
      throw std::invalid_argument("step_heat_phase: explicit step exceeds h^2 / (4 D0)");
    const PhaseField lap = laplacian(phi);
    for (std::size_t p = 0; p < phi.size(); ++p) next[p] += dt * d0 * lap[p];
    copy_boundary(trace, next);
  } else {
    copy_boundary(trace, next);
    solve_dirichlet(next, phi, 1.0, dt * d0, 1e-12);
  }
  return next;
}

}  // namespace nematic
