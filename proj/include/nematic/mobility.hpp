#pragma once

// Leading logarithmic divergence of the vortex mobility coefficient,
//   (1/16) int [1 - 1/I0^2(Lambda(r(z)))] / |z - z_k|^2 dv  ~  -(pi tau_gamma / 8) ln eps,
// evaluated with the linear core profile r(z) = r_eq min(1, |z - z_k| / eps).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nematic/grid.hpp"
#include "nematic/specfun.hpp"

namespace nematic {

/// 1 - 1/I0^2(Lambda(r)).
inline double mobility_weight(double r) {
  if (r == 0.0) return 0.0;
  const double lam = lambda_of(r);
  return -std::expm1(-2.0 * log_bessel_i0(lam));
}

struct MobilityFit {
  std::vector<double> eps;
  std::vector<double> integrals;
  double slope = 0.0;
  double intercept = 0.0;
};

/// Mobility integral on the centred unit square for one eps, with the
/// vortex at a plaquette centre and h <= eps / cells_per_eps.
inline double mobility_integral(const NematicParams& params, double eps, int cells_per_eps = 8) {
  if (cells_per_eps < 8) throw std::invalid_argument("mobility_integral: core under-resolved (need h <= eps/8)");
  if (!(eps > 0.0) || !(eps < 0.5)) throw std::invalid_argument("mobility_integral: eps must lie in (0, 0.5)");
  std::size_t cells = static_cast<std::size_t>(std::ceil(cells_per_eps / eps));
  if (cells % 2 == 0) ++cells;  // odd cell count puts the origin at a plaquette centre
  const Grid2D g = Grid2D::centered(cells + 1, cells + 1, 1.0, 1.0);
  const double r_eq = params.r_eq();
  const double far = mobility_weight(r_eq);
  double total = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double rho = std::abs(g.point(i, j));
      const double w = rho >= eps ? far : mobility_weight(r_eq * rho / eps);
      total += g.weight(i, j) * w / (rho * rho);
    }
  }
  return total / 16.0;
}

/// Least-squares slope of the mobility integral against -ln eps.
inline MobilityFit mobility_log_divergence(const NematicParams& params, const std::vector<double>& eps_list,
                                           int cells_per_eps = 8) {
  if (eps_list.size() < 2) throw std::invalid_argument("mobility_log_divergence: need at least two eps values");
  MobilityFit fit;
  fit.eps = eps_list;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double e : eps_list) {
    const double y = mobility_integral(params, e, cells_per_eps);
    const double x = -std::log(e);
    fit.integrals.push_back(y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(eps_list.size());
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / m;
  return fit;
}

}  // namespace nematic
