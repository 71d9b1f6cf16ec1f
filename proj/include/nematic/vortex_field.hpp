#pragma once

// Multi-vortex order-parameter fields and plaquette winding detection.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nematic/grid.hpp"
#include "nematic/vortex_config.hpp"

namespace nematic {

inline void check_distinct(const std::vector<Complex>& positions) {
  for (std::size_t a = 0; a < positions.size(); ++a)
    for (std::size_t b = a + 1; b < positions.size(); ++b)
      if (positions[a] == positions[b]) throw std::invalid_argument("multi_vortex_field: coincident vortices");
}

/// n(z) = r_eq exp(i phi(z) + i sum_k d_k arg(z - z_k)). With no phase
/// field phi is taken as zero.
inline ComplexField multi_vortex_field(const Grid2D& grid, const VortexConfiguration& cfg,
                                       const PhaseField* phase, const NematicParams& params) {
  check_distinct(cfg.positions);
  if (phase && !phase->grid().same_geometry(grid)) throw std::invalid_argument("multi_vortex_field: phase grid mismatch");
  ComplexField n(grid);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Complex z = grid.point(idx);
    double angle = phase ? (*phase)[idx] : 0.0;
    for (std::size_t k = 0; k < cfg.count(); ++k) angle += cfg.degrees[k] * std::arg(z - cfg.positions[k]);
    n[idx] = std::polar(params.r_eq(), angle);
  }
  return n;
}

inline ComplexField multi_vortex_field(const VortexConfiguration& cfg, const PhaseField& phase,
                                       const NematicParams& params) {
  return multi_vortex_field(phase.grid(), cfg, &phase, params);
}

/// Multi-vortex field with a resolved core: the amplitude is multiplied by
/// min(1, |z - z_k| / core_radius) for every vortex.
inline ComplexField tempered_vortex_field(const Grid2D& grid, const VortexConfiguration& cfg,
                                          const PhaseField* phase, const NematicParams& params,
                                          double core_radius) {
  ComplexField n = multi_vortex_field(grid, cfg, phase, params);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Complex z = grid.point(idx);
    double profile = 1.0;
    for (const auto& zk : cfg.positions) profile *= std::min(1.0, std::abs(z - zk) / core_radius);
    n[idx] *= profile;
  }
  return n;
}

struct DetectedVortex {
  Complex position;
  int degree = 0;
};

/// Scans every plaquette, summing the wrapped phase differences of arg n
/// around its four edges; a nonzero winding marks a vortex at the
/// plaquette centre.
inline std::vector<DetectedVortex> detect_vortices(const ComplexField& n) {
  const Grid2D& g = n.grid();
  std::vector<DetectedVortex> found;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t j = 0; j + 1 < g.ny(); ++j) {
    for (std::size_t i = 0; i + 1 < g.nx(); ++i) {
      const double a0 = std::arg(n(i, j));
      const double a1 = std::arg(n(i + 1, j));
      const double a2 = std::arg(n(i + 1, j + 1));
      const double a3 = std::arg(n(i, j + 1));
      const double total = wrap_angle(a1 - a0) + wrap_angle(a2 - a1) + wrap_angle(a3 - a2) + wrap_angle(a0 - a3);
      const int w = static_cast<int>(std::lround(total / two_pi));
      if (w != 0) found.push_back({g.point(i, j) + Complex(0.5 * g.h(), 0.5 * g.h()), w});
    }
  }
  return found;
}

/// Winding of arg n around the closed loop of node indices, in units of 2 pi.
inline int winding_along(const ComplexField& n, const std::vector<std::size_t>& loop) {
  double total = 0.0;
  for (std::size_t s = 0; s < loop.size(); ++s)
    total += wrap_angle(std::arg(n[loop[(s + 1) % loop.size()]]) - std::arg(n[loop[s]]));
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace nematic
