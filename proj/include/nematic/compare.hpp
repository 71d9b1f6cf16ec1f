#pragma once

// Cross-tier comparison: vortex tracks, phase fields and energy curves of
// the kinetic and closure runs against the vortex/phase description.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nematic/closure.hpp"
#include "nematic/kinetic.hpp"
#include "nematic/phase.hpp"
#include "nematic/vortex.hpp"

namespace nematic {

struct TierComparison {
  /// Largest distance between a detected vortex and its tier-3 counterpart.
  double kinetic_track_error = 0.0;
  double closure_track_error = 0.0;
  /// Max |wrap(phi_tier - phi_harmonic)| at the final record, outside 5 eps disks.
  double kinetic_phase_error = 0.0;
  double closure_phase_error = 0.0;
  /// Largest relative difference between the two reduced-energy curves at common record times.
  double energy_curve_difference = 0.0;
  std::vector<double> times_prime;
};

/// Tier-3 positions at t' by linear interpolation (held after the last record).
inline std::vector<Complex> positions_at(const VortexTrajectory& traj, double t_prime) {
  if (traj.size() == 0) throw std::invalid_argument("positions_at: empty trajectory");
  if (t_prime <= traj.times.front()) return traj.states.front();
  for (std::size_t r = 1; r < traj.size(); ++r) {
    if (t_prime <= traj.times[r]) {
      const double w = (t_prime - traj.times[r - 1]) / (traj.times[r] - traj.times[r - 1]);
      std::vector<Complex> out(traj.states[r].size());
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = (1.0 - w) * traj.states[r - 1][k] + w * traj.states[r][k];
      return out;
    }
  }
  return traj.states.back();
}

/// Greedy nearest matching by degree; infinity if the counts differ.
inline double track_error(const std::vector<DetectedVortex>& found, const std::vector<Complex>& expected,
                          const std::vector<int>& degrees) {
  if (found.size() != expected.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(found.size(), false);
  double worst = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t pick = found.size();
    for (std::size_t f = 0; f < found.size(); ++f) {
      if (used[f] || found[f].degree != degrees[k]) continue;
      const double d = std::abs(found[f].position - expected[k]);
      if (d < best) best = d, pick = f;
    }
    if (pick == found.size()) return std::numeric_limits<double>::infinity();
    used[pick] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

/// max |wrap(arg n - sum d_k arg(z - z_k) - phi_ref)| over nodes further than
/// `exclusion` from every vortex.
inline double phase_error(const ComplexField& n, const VortexConfiguration& cfg, const PhaseField& phi_ref,
                          double exclusion) {
  const Grid2D& g = n.grid();
  double worst = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Complex z = g.point(p);
    bool near = false;
    double a = std::arg(n[p]) - phi_ref[p];
    for (std::size_t k = 0; k < cfg.count(); ++k) {
      if (std::abs(z - cfg.positions[k]) < exclusion) near = true;
      a -= cfg.degrees[k] * std::arg(z - cfg.positions[k]);
    }
    if (!near) worst = std::max(worst, std::abs(wrap_angle(a)));
  }
  return worst;
}

/// Compares runs that share grid and parameters. The kinetic and closure
/// runs must be on the eps^2-rescaled clock; the vortex run on t'.
inline TierComparison compare_tiers(const KineticTrajectory& kinetic, const ClosureTrajectory& closure,
                                    const VortexTrajectory& vortex, const VortexConfiguration& cfg,
                                    const NematicParams& params) {
  if (kinetic.clock != Clock::rescaled || closure.clock != Clock::rescaled)
    throw std::invalid_argument("compare_tiers: kinetic and closure runs must use the rescaled clock");
  if (vortex.clock != Clock::vortex) throw std::invalid_argument("compare_tiers: vortex run must use the t' clock");
  if (kinetic.size() == 0 || closure.size() == 0) throw std::invalid_argument("compare_tiers: empty run");
  const Grid2D& g = kinetic.states.front().grid;
  if (!g.same_geometry(closure.states.front().grid())) throw std::invalid_argument("compare_tiers: grid mismatch");
  TierComparison rep;
  const double exclusion = 5.0 * params.epsilon();
  auto config_at = [&](double t_prime) {
    VortexConfiguration c = cfg;
    c.positions = positions_at(vortex, t_prime);
    return c;
  };
  for (std::size_t r = 0; r < kinetic.size(); ++r) {
    const double tp = to_vortex_clock(kinetic.times[r], params);
    rep.times_prime.push_back(tp);
    rep.kinetic_track_error =
        std::max(rep.kinetic_track_error, track_error(kinetic.diagnostics[r].vortices, positions_at(vortex, tp), cfg.degrees));
  }
  for (std::size_t r = 0; r < closure.size(); ++r) {
    const double tp = to_vortex_clock(closure.times[r], params);
    rep.closure_track_error =
        std::max(rep.closure_track_error, track_error(closure.diagnostics[r].vortices, positions_at(vortex, tp), cfg.degrees));
  }
  {
    const auto c = config_at(to_vortex_clock(kinetic.times.back(), params));
    rep.kinetic_phase_error = phase_error(kinetic.back().order_parameter(), c, solve_harmonic_phase(c, g), exclusion);
  }
  {
    const auto c = config_at(to_vortex_clock(closure.times.back(), params));
    rep.closure_phase_error = phase_error(closure.back(), c, solve_harmonic_phase(c, g), exclusion);
  }
  for (std::size_t r = 0; r < kinetic.size(); ++r) {
    for (std::size_t q = 0; q < closure.size(); ++q) {
      if (std::abs(kinetic.times[r] - closure.times[q]) > 1e-12 * std::max(1.0, kinetic.times[r])) continue;
      const double a = kinetic.diagnostics[r].e_reduced;
      const double b = closure.diagnostics[q].e_reduced;
      rep.energy_curve_difference = std::max(rep.energy_curve_difference, std::abs(a - b) / std::max(std::abs(a), 1e-300));
    }
  }
  return rep;
}

}  // namespace nematic
