#pragma once

// Multi-vortex potential
//   U = -pi sum_{j != k} d_k d_j ln|z_k - z_j|
//       + sum_k d_k oint ln|z - z_k| dpsi
//       - 1/2 sum_{j,k} d_k d_j oint ln|z - z_k| darg(z - z_j),
// its gradient, and the vortex gradient flow dz_k/dt' = -dU/dconj(z_k).
// Contour integrals use the midpoint rule on the boundary polygon with
// wrapped phase increments.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "nematic/grid.hpp"
#include "nematic/specfun.hpp"
#include "nematic/trajectory.hpp"
#include "nematic/vortex_config.hpp"

namespace nematic {

namespace detail {

inline void check_vortices(const VortexConfiguration& cfg) {
  if (cfg.positions.size() != cfg.degrees.size()) throw std::invalid_argument("vortex potential: positions/degrees size mismatch");
  for (std::size_t a = 0; a < cfg.count(); ++a)
    for (std::size_t b = a + 1; b < cfg.count(); ++b)
      if (cfg.positions[a] == cfg.positions[b]) throw std::invalid_argument("vortex potential: coincident vortices");
}

/// Per-segment quantities of the boundary terms.
struct Segment {
  Complex a, b, mid;
  double dpsi;
};

inline std::vector<Segment> segments(const BoundaryContour& c) {
  std::vector<Segment> out(c.size());
  for (std::size_t s = 0; s < c.size(); ++s) {
    const std::size_t t = (s + 1) % c.size();
    out[s] = {c.nodes[s], c.nodes[t], 0.5 * (c.nodes[s] + c.nodes[t]), wrap_angle(c.psi[t] - c.psi[s])};
  }
  return out;
}

}  // namespace detail

inline double multivortex_potential(const VortexConfiguration& cfg) {
  detail::check_vortices(cfg);
  const auto& z = cfg.positions;
  const auto& d = cfg.degrees;
  const std::size_t nv = cfg.count();
  double pair = 0.0;
  for (std::size_t k = 0; k < nv; ++k)
    for (std::size_t j = 0; j < nv; ++j)
      if (j != k) pair -= std::numbers::pi * d[k] * d[j] * std::log(std::abs(z[k] - z[j]));
  if (cfg.free_space) return pair;
  double boundary = 0.0;
  for (const auto& seg : detail::segments(cfg.boundary)) {
    double a_sum = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < nv; ++k) {
      a_sum += d[k] * std::log(std::abs(seg.mid - z[k]));
      theta += d[k] * wrap_angle(std::arg(seg.b - z[k]) - std::arg(seg.a - z[k]));
    }
    boundary += a_sum * (seg.dpsi - 0.5 * theta);
  }
  return pair + boundary;
}

/// dU/dconj(z_k) for every vortex. The real gradient is (2 Re, 2 Im).
inline std::vector<Complex> potential_gradient(const VortexConfiguration& cfg) {
  detail::check_vortices(cfg);
  const auto& z = cfg.positions;
  const auto& d = cfg.degrees;
  const std::size_t nv = cfg.count();
  std::vector<Complex> grad(nv, 0.0);
  for (std::size_t k = 0; k < nv; ++k)
    for (std::size_t j = 0; j < nv; ++j)
      if (j != k) grad[k] -= std::numbers::pi * d[k] * d[j] / std::conj(z[k] - z[j]);
  if (cfg.free_space) return grad;
  const Complex i_unit(0.0, 1.0);
  for (const auto& seg : detail::segments(cfg.boundary)) {
    double a_sum = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < nv; ++k) {
      a_sum += d[k] * std::log(std::abs(seg.mid - z[k]));
      theta += d[k] * wrap_angle(std::arg(seg.b - z[k]) - std::arg(seg.a - z[k]));
    }
    const double weight = seg.dpsi - 0.5 * theta;
    for (std::size_t k = 0; k < nv; ++k) {
      const Complex d_log = -0.5 / std::conj(seg.mid - z[k]);
      const Complex d_arg = -0.5 * i_unit / std::conj(seg.b - z[k]) + 0.5 * i_unit / std::conj(seg.a - z[k]);
      grad[k] += static_cast<double>(d[k]) * (d_log * weight - 0.5 * a_sum * d_arg);
    }
  }
  return grad;
}

/// t' = -8 t / (pi tau_gamma ln eps), with t on the eps^2-rescaled clock.
inline double to_vortex_clock(double t_rescaled, const NematicParams& params) {
  if (!(params.tau_gamma() > 0.0)) throw std::domain_error("to_vortex_clock: tau_gamma must be positive");
  if (!(params.epsilon() < 1.0)) throw std::domain_error("to_vortex_clock: eps must be < 1");
  return -8.0 * t_rescaled / (std::numbers::pi * params.tau_gamma() * std::log(params.epsilon()));
}

inline double from_vortex_clock(double t_prime, const NematicParams& params) {
  return t_prime / to_vortex_clock(1.0, params);
}

struct VortexDynamicsOptions {
  double t_end = 1.0;
  double dt = 1e-3;
  /// Minimum allowed distance to the boundary (ignored in free space).
  double boundary_margin = 0.0;
  double output_every = 0.0;
};

inline const char* kStatusCloseApproach = "close-approach";

using VortexTrajectory = Trajectory<std::vector<Complex>, double>;

/// RK4 integration of dz_k/dt' = -dU/dconj(z_k). Stops with status
/// "close-approach" once a pair gets closer than four steps' travel or a
/// vortex enters the boundary margin.
inline VortexTrajectory run_vortex_dynamics(VortexConfiguration cfg, const VortexDynamicsOptions& opt) {
  cfg.validate(cfg.free_space ? 0.0 : opt.boundary_margin);
  VortexTrajectory traj;
  traj.clock = Clock::vortex;
  const std::size_t nv = cfg.count();
  auto velocity = [&](const std::vector<Complex>& pos) {
    VortexConfiguration c = cfg;
    c.positions = pos;
    auto g = potential_gradient(c);
    for (auto& v : g) v = -v;
    return g;
  };
  auto potential_at = [&](const std::vector<Complex>& pos) {
    VortexConfiguration c = cfg;
    c.positions = pos;
    return multivortex_potential(c);
  };
  auto shifted = [](const std::vector<Complex>& a, double s, const std::vector<Complex>& b) {
    std::vector<Complex> r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += s * b[i];
    return r;
  };
  std::vector<Complex> pos = cfg.positions;
  const std::size_t steps = static_cast<std::size_t>(std::llround(std::ceil(opt.t_end / opt.dt - 1e-9)));
  const std::size_t stride =
      opt.output_every > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(opt.output_every / opt.dt))) : steps;
  traj.push(0.0, pos, potential_at(pos));
  for (std::size_t s = 1; s <= steps; ++s) {
    const auto k1 = velocity(pos);
    double speed = 0.0;
    for (const auto& v : k1) speed = std::max(speed, std::abs(v));
    bool halt = false;
    for (std::size_t a = 0; a < nv && !halt; ++a)
      for (std::size_t b = a + 1; b < nv && !halt; ++b)
        if (std::abs(pos[a] - pos[b]) < 4.0 * speed * opt.dt) halt = true;
    if (!cfg.free_space)
      for (const auto& z : pos)
        if (cfg.boundary.distance(z) < opt.boundary_margin) halt = true;
    if (halt) {
      traj.status = kStatusCloseApproach;
      if (traj.times.back() != static_cast<double>(s - 1) * opt.dt)
        traj.push(static_cast<double>(s - 1) * opt.dt, pos, potential_at(pos));
      return traj;
    }
    const auto k2 = velocity(shifted(pos, 0.5 * opt.dt, k1));
    const auto k3 = velocity(shifted(pos, 0.5 * opt.dt, k2));
    const auto k4 = velocity(shifted(pos, opt.dt, k3));
    for (std::size_t i = 0; i < nv; ++i) pos[i] += opt.dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (s % stride == 0 || s == steps) traj.push(static_cast<double>(s) * opt.dt, pos, potential_at(pos));
  }
  return traj;
}

/// Writes t_prime,k,re_z,im_z,degree,U rows followed by a "# status=" line.
inline void write_vortex_trajectory_csv(const std::string& path, const VortexTrajectory& traj,
                                        const std::vector<int>& degrees) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("write_vortex_trajectory_csv: cannot open " + path);
  std::fputs("t_prime,k,re_z,im_z,degree,U\n", fp);
  for (std::size_t r = 0; r < traj.size(); ++r)
    for (std::size_t k = 0; k < traj.states[r].size(); ++k)
      std::fprintf(fp, "%.12e,%zu,%.12e,%.12e,%d,%.12e\n", traj.times[r], k, traj.states[r][k].real(),
                   traj.states[r][k].imag(), degrees[k], traj.diagnostics[r]);
  std::fprintf(fp, "# status=%s\n", traj.status.c_str());
  std::fclose(fp);
}

}  // namespace nematic
