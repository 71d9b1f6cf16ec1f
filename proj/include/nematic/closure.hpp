#pragma once

// Closed order-parameter equations: the maximal-entropy closure of the
// moment hierarchy and the Landau-de Gennes L2 gradient flow of the reduced
// energy N.
//
// Variational convention: dN/dconj(n) = -(eps^2/2) Lap n + W'(r) n / (2r),
// and dN/dn is its conjugate.

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "nematic/energy.hpp"
#include "nematic/errors.hpp"
#include "nematic/grid.hpp"
#include "nematic/kinetic.hpp"
#include "nematic/specfun.hpp"
#include "nematic/trajectory.hpp"
#include "nematic/vortex_field.hpp"

namespace nematic {

enum class ClosureScheme { maxent, ldg };
enum class ClosureStepping { euler, integrating_factor };

inline const char* scheme_name(ClosureScheme s) { return s == ClosureScheme::maxent ? "maxent" : "ldg"; }

/// (n^2/r^2)(1 - 2r/Lambda(r)) = n^(2) of the equilibrium family. Tends to
/// zero like r^2/2 at the origin.
inline Complex closure_coefficient(Complex n) {
  const double r = std::abs(n);
  if (!(r < 1.0)) throw std::domain_error("closure_coefficient: |n| must be < 1");
  if (r == 0.0) return 0.0;
  const double c = r < 1e-6 ? 0.5 * r * r : 1.0 - 2.0 / lambda_over_r(r);
  const Complex u = n / r;
  return c * u * u;
}

/// -4n + 2 [L n - (n^2/r^2)(1 - 2r/Lambda) L conj(n)] at every node.
inline ComplexField closure_rhs(const ComplexField& n, const NematicParams& params) {
  const ComplexField ln = apply_elastic_operator(n, params);
  const ComplexField ln_bar = apply_elastic_operator(conj(n), params);
  ComplexField out(n.grid());
  for (std::size_t p = 0; p < n.size(); ++p)
    out[p] = -4.0 * n[p] + 2.0 * (ln[p] - closure_coefficient(n[p]) * ln_bar[p]);
  return out;
}

/// W'(r) n / (2r), continuous through r = 0 where it vanishes.
inline Complex potential_force(Complex n, const NematicParams& params) {
  const double r = std::abs(n);
  if (!(r < 1.0)) throw std::domain_error("potential_force: |n| must be < 1");
  return 0.5 * (lambda_over_r(r) - params.gamma()) * n;
}

/// dN/dconj(n) = -(eps^2/2) Lap n + W'(r) n / (2r).
inline ComplexField dN_dnbar(const ComplexField& n, const NematicParams& params) {
  const ComplexField lap = laplacian(n);
  const double half_e2 = 0.5 * params.epsilon() * params.epsilon();
  ComplexField out(n.grid());
  for (std::size_t p = 0; p < n.size(); ++p) out[p] = -half_e2 * lap[p] + potential_force(n[p], params);
  return out;
}

inline ComplexField dN_dn(const ComplexField& n, const NematicParams& params) { return conj(dN_dnbar(n, params)); }

/// Landau-de Gennes flow -dN/dconj(n).
inline ComplexField ldg_rhs(const ComplexField& n, const NematicParams& params) {
  ComplexField out = dN_dnbar(n, params);
  out *= Complex(-1.0);
  return out;
}

/// 4 (n^2/r^2)(1 - 2r/Lambda) dN/dn - 4 dN/dconj(n): the closure written as a
/// gradient flow of N.
inline ComplexField closure_rhs_gradient_form(const ComplexField& n, const NematicParams& params) {
  const ComplexField dn = dN_dn(n, params);
  const ComplexField dnbar = dN_dnbar(n, params);
  ComplexField out(n.grid());
  for (std::size_t p = 0; p < n.size(); ++p) out[p] = 4.0 * closure_coefficient(n[p]) * dn[p] - 4.0 * dnbar[p];
  return out;
}

inline ComplexField tier2_rhs(const ComplexField& n, const NematicParams& params, ClosureScheme scheme) {
  return scheme == ClosureScheme::maxent ? closure_rhs(n, params) : ldg_rhs(n, params);
}

/// Growth rate of the pointwise linear part at n = 0 on the kinetic clock.
inline double linear_rate(const NematicParams& params, ClosureScheme scheme) {
  return scheme == ClosureScheme::maxent ? 2.0 * params.gamma() - 4.0 : 0.5 * (params.gamma() - 2.0);
}

/// Relaxation rate of the amplitude about the nematic state r_eq, or |linear_rate|
/// in the isotropic regime.
inline double reaction_stiffness(const NematicParams& params, ClosureScheme scheme) {
  const double r = params.r_eq();
  if (r == 0.0) return std::abs(linear_rate(params, scheme));
  const double lam = lambda_of(r);
  const double dlam = 1.0 / (1.0 - r / lam - r * r);
  return scheme == ClosureScheme::maxent ? 4.0 * (r * dlam / lam - 1.0) : 0.5 * (dlam - params.gamma());
}

/// Largest stable explicit Euler step on the kinetic clock, 2 / (spectral
/// radius): the five-point stencil contributes 32 eps^2/h^2 (maxent, whose
/// elastic part is at most 2 eps^2 (Lap n + |Lap conj n|)) or 4 eps^2/h^2
/// (ldg), and the potential adds reaction_stiffness.
inline double closure_dt_limit(const Grid2D& grid, const NematicParams& params, ClosureScheme scheme) {
  const double h2 = grid.h() * grid.h();
  const double e2 = params.epsilon() * params.epsilon();
  const double diffusion = scheme == ClosureScheme::maxent ? 32.0 * e2 / h2 : 4.0 * e2 / h2;
  return 2.0 / (diffusion + reaction_stiffness(params, scheme));
}

struct ClosureConfig {
  NematicParams params;
  Grid2D grid;
  ClosureScheme scheme = ClosureScheme::maxent;
  ClosureStepping stepping = ClosureStepping::euler;
  double dt = 1e-3;
  double t_end = 1.0;
  bool rescaled_time = false;
  double output_every = 0.0;
  bool store_states = true;

  double time_scale() const { return rescaled_time ? params.epsilon() * params.epsilon() : 1.0; }
  /// dt measured on the kinetic clock.
  double kinetic_dt() const { return dt / time_scale(); }
};

/// One step; boundary values are carried over from `n` unchanged.
inline ComplexField step_closure(const ComplexField& n, const NematicParams& params, double dt, ClosureScheme scheme,
                                 ClosureStepping stepping = ClosureStepping::euler) {
  const ComplexField f = tier2_rhs(n, params, scheme);
  ComplexField next(n.grid());
  if (stepping == ClosureStepping::euler) {
    for (std::size_t p = 0; p < n.size(); ++p) next[p] = n[p] + dt * f[p];
  } else {
    const double a = linear_rate(params, scheme);
    const double growth = std::exp(a * dt);
    const double gain = a == 0.0 ? dt : std::expm1(a * dt) / a;
    for (std::size_t p = 0; p < n.size(); ++p) next[p] = growth * n[p] + gain * (f[p] - a * n[p]);
  }
  copy_boundary(n, next);
  if (!(max_abs(next) < 1.0)) {
    std::ostringstream msg;
    msg << "step_closure (" << scheme_name(scheme) << "): |n| reached 1; reduce dt";
    throw InstabilityError(msg.str());
  }
  return next;
}

struct ClosureDiagnostics {
  double e_reduced = 0.0;
  std::vector<DetectedVortex> vortices;
};

using ClosureTrajectory = Trajectory<ComplexField, ClosureDiagnostics>;

inline ClosureTrajectory run_closure(const ComplexField& initial, const ClosureConfig& cfg,
                                     const std::function<void(double, const ComplexField&)>& observer = {}) {
  if (!initial.grid().same_geometry(cfg.grid)) throw std::invalid_argument("run_closure: grid mismatch");
  const double kdt = cfg.kinetic_dt();
  if (kdt > closure_dt_limit(cfg.grid, cfg.params, cfg.scheme) * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "run_closure: dt exceeds the explicit stability limit "
        << closure_dt_limit(cfg.grid, cfg.params, cfg.scheme) * cfg.time_scale();
    throw InstabilityError(msg.str());
  }
  ClosureTrajectory traj;
  traj.clock = cfg.rescaled_time ? Clock::rescaled : Clock::kinetic;
  ComplexField n = initial;
  impose_boundary(n, cfg.params.r_eq());
  const std::size_t steps = steps_for(cfg.t_end, cfg.dt);
  const std::size_t stride = record_stride(cfg.output_every, cfg.dt, steps);
  auto record = [&](double t) {
    traj.push(t, cfg.store_states ? n : ComplexField(n.grid()),
              ClosureDiagnostics{reduced_energy(n, cfg.params), detect_vortices(n)});
  };
  record(0.0);
  for (std::size_t s = 1; s <= steps; ++s) {
    n = step_closure(n, cfg.params, kdt, cfg.scheme, cfg.stepping);
    const double t = static_cast<double>(s) * cfg.dt;
    if (observer) observer(t, n);
    if (s % stride == 0 || s == steps) record(t);
  }
  return traj;
}

}  // namespace nematic
