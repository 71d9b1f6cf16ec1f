#pragma once

// Truncated Fourier-moment hierarchy for the orientation density:
//   d/dt n^(k) = -4k^2 n^(k) + 2k [n^(k-1) L n - n^(k+1) L conj(n)],
// with L = eps^2 Lap + gamma and n = n^(1).

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <vector>

#include "nematic/energy.hpp"
#include "nematic/errors.hpp"
#include "nematic/grid.hpp"
#include "nematic/specfun.hpp"
#include "nematic/trajectory.hpp"
#include "nematic/vortex_field.hpp"

namespace nematic {

/// How n^(K+1) is supplied to the last retained equation.
enum class Truncation { zero, equilibrium };

struct KineticConfig {
  NematicParams params;
  Grid2D grid;
  int k_max = 8;
  double dt = 1e-3;
  double t_end = 1.0;
  bool rescaled_time = false;
  Truncation truncation = Truncation::equilibrium;
  /// Record interval in time units; <= 0 records only the initial and final states.
  double output_every = 0.0;
  /// phi samples for density reconstruction in the diagnostics (raised to 4K+1 if needed).
  std::size_t density_samples = 128;
  bool store_states = true;

  double time_scale() const { return rescaled_time ? params.epsilon() * params.epsilon() : 1.0; }
};

/// Moment k+1 used to close the last equation.
inline ComplexField closing_moment(const MomentState& state, Truncation truncation) {
  if (truncation == Truncation::zero) return ComplexField(state.grid);
  return equilibrium_moments(state.order_parameter(), state.k_max + 1);
}

/// Coupling bracket 2k[n^(k-1) L n - n^(k+1) L conj(n)] for k = 1..K, without
/// the -4k^2 relaxation and without the time-scale factor. Entry 0 is zero.
inline std::vector<ComplexField> hierarchy_coupling(const MomentState& state, const KineticConfig& cfg) {
  const ComplexField& n = state.order_parameter();
  const ComplexField ln = apply_elastic_operator(n, cfg.params);
  const ComplexField ln_bar = apply_elastic_operator(conj(n), cfg.params);
  const ComplexField closing = closing_moment(state, cfg.truncation);
  std::vector<ComplexField> out(state.moments.size(), ComplexField(state.grid));
  for (int k = 1; k <= state.k_max; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const ComplexField& lower = state.moments[ku - 1];
    const ComplexField& upper = k == state.k_max ? closing : state.moments[ku + 1];
    ComplexField& b = out[ku];
    for (std::size_t p = 0; p < n.size(); ++p) b[p] = 2.0 * k * (lower[p] * ln[p] - upper[p] * ln_bar[p]);
  }
  return out;
}

/// Full right-hand side of the hierarchy on the configured clock, evaluated
/// at every node (the stepper re-pins the boundary afterwards).
inline std::vector<ComplexField> hierarchy_rhs(const MomentState& state, const KineticConfig& cfg) {
  auto out = hierarchy_coupling(state, cfg);
  const double inv_scale = 1.0 / cfg.time_scale();
  for (int k = 1; k <= state.k_max; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    ComplexField& f = out[ku];
    const ComplexField& m = state.moments[ku];
    for (std::size_t p = 0; p < f.size(); ++p) f[p] = inv_scale * (f[p] - 4.0 * k * k * m[p]);
  }
  return out;
}

/// Dirichlet data: n^(1) = r_eq exp(i psi) on the boundary and n^(k), k >= 2,
/// slaved to the equilibrium family of that value.
inline void pin_boundary(MomentState& state, const NematicParams& params) {
  const Grid2D& g = state.grid;
  const double lam = lambda_of(params.r_eq());
  const auto ratios = bessel_ratios(state.k_max, lam);
  for (std::size_t idx : g.boundary_loop()) {
    const double psi = g.boundary_psi(g.point(idx));
    for (int k = 1; k <= state.k_max; ++k) {
      const double a = k == 1 ? params.r_eq() : ratios[static_cast<std::size_t>(k)];
      state.moments[static_cast<std::size_t>(k)][idx] = std::polar(a, k * psi);
    }
  }
}

inline void check_moment_bound(const MomentState& state, double t) {
  for (int k = 1; k <= state.k_max; ++k) {
    if (max_abs(state.moments[static_cast<std::size_t>(k)]) > 1.0 + 1e-6) {
      std::ostringstream msg;
      msg << "kinetic step: |n^(" << k << ")| exceeded 1 at t = " << t << "; reduce dt";
      throw InstabilityError(msg.str());
    }
  }
}

/// One exponential-Euler step: the -4k^2 relaxation is integrated exactly and
/// the coupling is frozen over the step, which keeps every fixed point of the
/// hierarchy a fixed point of the scheme.
inline MomentState step_kinetic(const MomentState& state, const KineticConfig& cfg) {
  const auto coupling = hierarchy_coupling(state, cfg);
  const double scale = cfg.time_scale();
  MomentState next = state;
  for (int k = 1; k <= state.k_max; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double lam = 4.0 * k * k / scale;
    const double decay = std::exp(-lam * cfg.dt);
    const double gain = -std::expm1(-lam * cfg.dt) / lam / scale;
    ComplexField& m = next.moments[ku];
    const ComplexField& b = coupling[ku];
    for (std::size_t p = 0; p < m.size(); ++p) m[p] = decay * m[p] + gain * b[p];
  }
  pin_boundary(next, cfg.params);
  return next;
}

struct KineticDiagnostics {
  double e_total = 0.0;
  double e_reduced = 0.0;
  double s_rel = 0.0;
  std::vector<DetectedVortex> vortices;
};

/// Reduced energy of n^(1), relative entropy of the reconstructed density
/// and their sum. When the truncated moments do not describe a nonnegative
/// density the entropy terms are NaN.
inline KineticDiagnostics kinetic_diagnostics(const MomentState& state, const KineticConfig& cfg) {
  KineticDiagnostics d;
  d.e_reduced = reduced_energy(state.order_parameter(), cfg.params);
  const std::size_t m = std::max(cfg.density_samples, static_cast<std::size_t>(4 * state.k_max + 1));
  try {
    const auto rho = reconstruct_density(state, std::max<std::size_t>(m, 64));
    d.s_rel = relative_entropy(rho, state.order_parameter());
    d.e_total = d.e_reduced + d.s_rel;
  } catch (const std::domain_error&) {
    d.s_rel = std::nan("");
    d.e_total = std::nan("");
  }
  d.vortices = detect_vortices(state.order_parameter());
  return d;
}

using KineticTrajectory = Trajectory<MomentState, KineticDiagnostics>;

inline std::size_t steps_for(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("time stepping: dt and t_end must be positive");
  return static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
}

inline std::size_t record_stride(double output_every, double dt, std::size_t steps) {
  if (output_every <= 0.0) return steps;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(output_every / dt)));
}

/// Integrates to t_end, recording the state and diagnostics every
/// output_every (and always at the start and end). `observer`, if given,
/// sees every step.
inline KineticTrajectory run_kinetic(const MomentState& initial, const KineticConfig& cfg,
                                     const std::function<void(double, const MomentState&)>& observer = {}) {
  if (initial.k_max < 2) throw std::invalid_argument("run_kinetic: k_max must be >= 2");
  if (!initial.grid.same_geometry(cfg.grid)) throw std::invalid_argument("run_kinetic: grid mismatch");
  KineticTrajectory traj;
  traj.clock = cfg.rescaled_time ? Clock::rescaled : Clock::kinetic;
  MomentState state = initial;
  pin_boundary(state, cfg.params);
  const std::size_t steps = steps_for(cfg.t_end, cfg.dt);
  const std::size_t stride = record_stride(cfg.output_every, cfg.dt, steps);
  auto record = [&](double t) {
    traj.push(t, cfg.store_states ? state : MomentState(state.grid, state.k_max), kinetic_diagnostics(state, cfg));
  };
  record(0.0);
  for (std::size_t s = 1; s <= steps; ++s) {
    state = step_kinetic(state, cfg);
    const double t = static_cast<double>(s) * cfg.dt;
    check_moment_bound(state, t);
    if (observer) observer(t, state);
    if (s % stride == 0 || s == steps) record(t);
  }
  return traj;
}

// Spatially homogeneous hierarchy (L n = gamma n), used for phase-space
// studies and as a reference for the field solver.

/// moments[0] = 1, moments[k] for k = 1..K.
using HomogeneousMoments = std::vector<Complex>;

inline HomogeneousMoments homogeneous_rhs(const HomogeneousMoments& m, double gamma, Truncation truncation) {
  const int kmax = static_cast<int>(m.size()) - 1;
  HomogeneousMoments out(m.size(), 0.0);
  const Complex n = m[1];
  Complex closing = 0.0;
  if (truncation == Truncation::equilibrium) closing = equilibrium_moment(n, kmax + 1);
  for (int k = 1; k <= kmax; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const Complex upper = k == kmax ? closing : m[ku + 1];
    out[ku] = -4.0 * k * k * m[ku] + 2.0 * k * gamma * (m[ku - 1] * n - upper * std::conj(n));
  }
  return out;
}

/// Classical RK4 for the homogeneous hierarchy; dt * 4K^2 must stay below
/// the RK4 stability limit (about 2.7).
inline HomogeneousMoments integrate_homogeneous(HomogeneousMoments m, double gamma, Truncation truncation, double dt,
                                                double t_end) {
  const int kmax = static_cast<int>(m.size()) - 1;
  if (kmax < 1) throw std::invalid_argument("integrate_homogeneous: need at least one moment");
  if (dt * 4.0 * kmax * kmax > 2.5) throw std::invalid_argument("integrate_homogeneous: dt too large for k_max");
  const std::size_t steps = steps_for(t_end, dt);
  const double h = t_end / static_cast<double>(steps);
  auto axpy = [](const HomogeneousMoments& a, double s, const HomogeneousMoments& b) {
    HomogeneousMoments r(a);
    for (std::size_t i = 1; i < r.size(); ++i) r[i] += s * b[i];
    return r;
  };
  for (std::size_t s = 0; s < steps; ++s) {
    const auto k1 = homogeneous_rhs(m, gamma, truncation);
    const auto k2 = homogeneous_rhs(axpy(m, 0.5 * h, k1), gamma, truncation);
    const auto k3 = homogeneous_rhs(axpy(m, 0.5 * h, k2), gamma, truncation);
    const auto k4 = homogeneous_rhs(axpy(m, h, k3), gamma, truncation);
    for (std::size_t i = 1; i < m.size(); ++i) m[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return m;
}

/// Homogeneous state with moments[1] = n and all higher moments zero.
inline HomogeneousMoments homogeneous_state(Complex n, int k_max) {
  HomogeneousMoments m(static_cast<std::size_t>(k_max) + 1, 0.0);
  m[0] = 1.0;
  m[1] = n;
  return m;
}

}  // namespace nematic
