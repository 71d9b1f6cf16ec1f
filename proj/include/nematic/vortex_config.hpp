#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nematic/grid.hpp"

namespace nematic {

/// Closed counter-clockwise polygon sampling the domain boundary, with the
/// boundary phase psi at each node.
struct BoundaryContour {
  std::vector<Complex> nodes;
  std::vector<double> psi;

  std::size_t size() const { return nodes.size(); }

  /// Sum of wrapped psi increments, in units of 2 pi.
  int winding() const {
    double total = 0.0;
    for (std::size_t s = 0; s < nodes.size(); ++s) total += wrap_angle(psi[(s + 1) % psi.size()] - psi[s]);
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
  }

  /// Distance from z to the polygon.
  double distance(Complex z) const {
    double best = INFINITY;
    for (std::size_t s = 0; s < nodes.size(); ++s) {
      const Complex a = nodes[s];
      const Complex b = nodes[(s + 1) % nodes.size()];
      const Complex ab = b - a;
      const double t = std::clamp(std::real(std::conj(ab) * (z - a)) / std::norm(ab), 0.0, 1.0);
      best = std::min(best, std::abs(z - (a + t * ab)));
    }
    return best;
  }
};

/// Rectangle [origin, origin + lx + i ly] sampled at m_b points of uniform
/// arclength, starting at the lower-left corner.
inline BoundaryContour rectangle_contour(Complex origin, double lx, double ly, std::size_t m_b,
                                         const PhaseFunction& psi) {
  BoundaryContour c;
  const double perimeter = 2.0 * (lx + ly);
  c.nodes.reserve(m_b);
  for (std::size_t s = 0; s < m_b; ++s) {
    double t = perimeter * static_cast<double>(s) / static_cast<double>(m_b);
    Complex z;
    if (t < lx) z = origin + Complex(t, 0.0);
    else if ((t -= lx) < ly) z = origin + Complex(lx, t);
    else if ((t -= ly) < lx) z = origin + Complex(lx - t, ly);
    else z = origin + Complex(0.0, ly - (t - lx));
    c.nodes.push_back(z);
    c.psi.push_back(psi(z));
  }
  return c;
}

inline BoundaryContour rectangle_contour(const Grid2D& grid, std::size_t m_b, const PhaseFunction& psi) {
  return rectangle_contour(grid.origin(), grid.lx(), grid.ly(), m_b, psi);
}

inline BoundaryContour disk_contour(Complex center, double radius, std::size_t m_b, const PhaseFunction& psi) {
  BoundaryContour c;
  for (std::size_t s = 0; s < m_b; ++s) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(m_b);
    const Complex z = center + std::polar(radius, t);
    c.nodes.push_back(z);
    c.psi.push_back(psi(z));
  }
  return c;
}

/// Vortex positions z_k with degrees d_k = +-1, the boundary phase psi and
/// its polygonal sampling. In free-space mode the boundary is ignored.
struct VortexConfiguration {
  std::vector<Complex> positions;
  std::vector<int> degrees;
  PhaseFunction psi;
  BoundaryContour boundary;
  bool free_space = false;

  std::size_t count() const { return positions.size(); }

  int total_degree() const {
    int s = 0;
    for (int d : degrees) s += d;
    return s;
  }

  /// Boundary phase psi(z) = sum_k d_k arg(z - z_k) of the current vortices.
  static PhaseFunction matching_phase(std::vector<Complex> positions, std::vector<int> degrees) {
    return [positions = std::move(positions), degrees = std::move(degrees)](Complex z) {
      double s = 0.0;
      for (std::size_t k = 0; k < positions.size(); ++k) s += degrees[k] * std::arg(z - positions[k]);
      return s;
    };
  }

  /// Checks distinctness, degrees and (outside free space) degree
  /// compatibility and distance to the boundary.
  void validate(double boundary_margin = 0.0) const {
    if (positions.size() != degrees.size()) throw std::invalid_argument("VortexConfiguration: positions/degrees size mismatch");
    for (int d : degrees)
      if (d != 1 && d != -1) throw std::invalid_argument("VortexConfiguration: degrees must be +1 or -1");
    for (std::size_t a = 0; a < positions.size(); ++a)
      for (std::size_t b = a + 1; b < positions.size(); ++b)
        if (positions[a] == positions[b]) throw std::invalid_argument("VortexConfiguration: coincident vortices");
    if (free_space) return;
    if (boundary.size() < 3) throw std::invalid_argument("VortexConfiguration: boundary contour missing");
    if (boundary.winding() != total_degree())
      throw std::invalid_argument("VortexConfiguration: total degree differs from boundary winding");
    for (const auto& z : positions)
      if (boundary.distance(z) < boundary_margin) throw std::invalid_argument("VortexConfiguration: vortex too close to boundary");
  }
};

}  // namespace nematic
