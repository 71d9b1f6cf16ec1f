#pragma once

// Uniform rectangular grids with square cells, and real/complex fields on
// them. Node (i, j) sits at origin + h*(i + i*j); storage is row-major with
// x fastest: index = j*nx + i.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nematic/specfun.hpp"

namespace nematic {

using Complex = std::complex<double>;

/// Boundary phase psi(z): the Dirichlet data for the order parameter is
/// r_eq * exp(i psi(z)). Only psi mod 2 pi matters.
using PhaseFunction = std::function<double(Complex)>;

/// Principal value of an angle in (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

class Grid2D {
 public:
  Grid2D(std::size_t nx, std::size_t ny, double lx, double ly, Complex origin = {0.0, 0.0},
         PhaseFunction boundary_psi = {})
      : nx_(nx), ny_(ny), lx_(lx), ly_(ly), origin_(origin), psi_(std::move(boundary_psi)) {
    if (nx < 3 || ny < 3) throw std::invalid_argument("Grid2D: need at least 3 nodes per direction");
    if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("Grid2D: extents must be positive");
    h_ = lx / static_cast<double>(nx - 1);
    const double hy = ly / static_cast<double>(ny - 1);
    if (std::abs(h_ - hy) > 1e-12 * h_) throw std::invalid_argument("Grid2D: cells must be square");
    if (!psi_) psi_ = [](Complex) { return 0.0; };
  }

  /// Grid whose domain is centred on the origin.
  static Grid2D centered(std::size_t nx, std::size_t ny, double lx, double ly, PhaseFunction psi = {}) {
    return Grid2D(nx, ny, lx, ly, Complex(-0.5 * lx, -0.5 * ly), std::move(psi));
  }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double h() const { return h_; }
  double area() const { return lx_ * ly_; }
  Complex origin() const { return origin_; }

  std::size_t index(std::size_t i, std::size_t j) const { return j * nx_ + i; }
  Complex point(std::size_t i, std::size_t j) const {
    return origin_ + Complex(h_ * static_cast<double>(i), h_ * static_cast<double>(j));
  }
  Complex point(std::size_t idx) const { return point(idx % nx_, idx / nx_); }
  bool is_boundary(std::size_t i, std::size_t j) const {
    return i == 0 || j == 0 || i + 1 == nx_ || j + 1 == ny_;
  }
  bool is_boundary(std::size_t idx) const { return is_boundary(idx % nx_, idx / nx_); }

  /// Distance from z to the rectangle's boundary (negative outside).
  double distance_to_boundary(Complex z) const {
    const Complex d = z - origin_;
    return std::min({d.real(), lx_ - d.real(), d.imag(), ly_ - d.imag()});
  }

  double boundary_psi(Complex z) const { return psi_(z); }
  const PhaseFunction& boundary_phase() const { return psi_; }
  Grid2D with_boundary_phase(PhaseFunction psi) const {
    return Grid2D(nx_, ny_, lx_, ly_, origin_, std::move(psi));
  }

  /// Boundary node indices, counter-clockwise starting at the lower-left corner.
  std::vector<std::size_t> boundary_loop() const {
    std::vector<std::size_t> loop;
    loop.reserve(2 * (nx_ + ny_) - 4);
    for (std::size_t i = 0; i + 1 < nx_; ++i) loop.push_back(index(i, 0));
    for (std::size_t j = 0; j + 1 < ny_; ++j) loop.push_back(index(nx_ - 1, j));
    for (std::size_t i = nx_ - 1; i > 0; --i) loop.push_back(index(i, ny_ - 1));
    for (std::size_t j = ny_ - 1; j > 0; --j) loop.push_back(index(0, j));
    return loop;
  }

  /// Winding of boundary_psi around the boundary loop, in units of 2 pi.
  int boundary_winding() const {
    const auto loop = boundary_loop();
    double total = 0.0;
    for (std::size_t s = 0; s < loop.size(); ++s) {
      const double a = psi_(point(loop[s]));
      const double b = psi_(point(loop[(s + 1) % loop.size()]));
      total += wrap_angle(b - a);
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
  }

  /// Trapezoidal quadrature weight of node (i, j), including h^2.
  double weight(std::size_t i, std::size_t j) const {
    const double wx = (i == 0 || i + 1 == nx_) ? 0.5 : 1.0;
    const double wy = (j == 0 || j + 1 == ny_) ? 0.5 : 1.0;
    return wx * wy * h_ * h_;
  }

  bool same_geometry(const Grid2D& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && std::abs(h_ - o.h_) <= 1e-12 * h_ &&
           std::abs(origin_ - o.origin_) <= 1e-12 * (1.0 + std::abs(origin_));
  }

 private:
  std::size_t nx_;
  std::size_t ny_;
  double lx_;
  double ly_;
  double h_ = 0.0;
  Complex origin_;
  PhaseFunction psi_;
};

/// Scalar field sampled on the nodes of a Grid2D.
template <class T>
class Field {
 public:
  using value_type = T;

  explicit Field(Grid2D grid, T fill = T{}) : grid_(std::move(grid)), values_(grid_.size(), fill) {}
  Field(Grid2D grid, std::vector<T> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("Field: value count does not match grid");
  }

  template <class Fn>
  static Field from_function(const Grid2D& grid, Fn&& fn) {
    Field f(grid);
    for (std::size_t idx = 0; idx < grid.size(); ++idx) f.values_[idx] = fn(grid.point(idx));
    return f;
  }

  const Grid2D& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  T& operator[](std::size_t idx) { return values_[idx]; }
  const T& operator[](std::size_t idx) const { return values_[idx]; }
  T& operator()(std::size_t i, std::size_t j) { return values_[grid_.index(i, j)]; }
  const T& operator()(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)]; }
  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  Field& operator+=(const Field& o) {
    check_compatible(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_compatible(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
  }
  Field& operator*=(T s) {
    for (auto& v : values_) v *= s;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(T s, Field a) { return a *= s; }

  void check_compatible(const Field& o) const {
    if (!grid_.same_geometry(o.grid_)) throw std::invalid_argument("Field: grid mismatch");
  }

 private:
  Grid2D grid_;
  std::vector<T> values_;
};

using ComplexField = Field<Complex>;
using RealField = Field<double>;
/// Real phase field phi(z) in radians.
using PhaseField = RealField;

inline ComplexField conj(const ComplexField& f) {
  ComplexField out(f.grid());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = std::conj(f[k]);
  return out;
}

inline double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

/// Five-point Laplacian. At boundary nodes a missing neighbour is replaced
/// by the node's own value, so the stencil only uses the stored Dirichlet
/// data; these rows never feed back into the interior update.
template <class T>
Field<T> laplacian(const Field<T>& f) {
  const Grid2D& g = f.grid();
  const std::size_t nx = g.nx();
  const std::size_t ny = g.ny();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  Field<T> out(g);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const T c = f(i, j);
      const T w = i > 0 ? f(i - 1, j) : c;
      const T e = i + 1 < nx ? f(i + 1, j) : c;
      const T s = j > 0 ? f(i, j - 1) : c;
      const T n = j + 1 < ny ? f(i, j + 1) : c;
      out(i, j) = (w + e + s + n - 4.0 * c) * inv_h2;
    }
  }
  return out;
}

/// L f = eps^2 * Lap f + gamma * f.
inline ComplexField apply_elastic_operator(const ComplexField& f, const NematicParams& params) {
  ComplexField out = laplacian(f);
  const double e2 = params.epsilon() * params.epsilon();
  const double g = params.gamma();
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = e2 * out[k] + g * f[k];
  return out;
}

/// Trapezoidal integral over the rectangle.
template <class T>
T integrate(const Field<T>& f) {
  const Grid2D& g = f.grid();
  T sum{};
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) sum += g.weight(i, j) * f(i, j);
  return sum;
}

/// Discrete Dirichlet integral (1/2) * int |grad f|^2, summed over grid
/// edges; edges lying on the boundary carry weight 1/2. Its derivative with
/// respect to conj(f) at an interior node is -(h^2/2) Lap f.
template <class T>
double dirichlet_energy(const Field<T>& f) {
  const Grid2D& g = f.grid();
  double sum = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i + 1 < g.nx(); ++i) {
      const double w = (j == 0 || j + 1 == g.ny()) ? 0.5 : 1.0;
      sum += w * std::norm(f(i + 1, j) - f(i, j));
    }
  }
  for (std::size_t j = 0; j + 1 < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double w = (i == 0 || i + 1 == g.nx()) ? 0.5 : 1.0;
      sum += w * std::norm(f(i, j + 1) - f(i, j));
    }
  }
  return 0.5 * sum;
}

/// Dirichlet data r_eq * exp(i psi(z)) written onto the boundary nodes.
inline void impose_boundary(ComplexField& n, double amplitude) {
  const Grid2D& g = n.grid();
  for (std::size_t idx : g.boundary_loop()) {
    const Complex z = g.point(idx);
    n[idx] = std::polar(amplitude, g.boundary_psi(z));
  }
}

/// Copies the boundary values of `from` onto `to`.
template <class T>
void copy_boundary(const Field<T>& from, Field<T>& to) {
  for (std::size_t idx : from.grid().boundary_loop()) to[idx] = from[idx];
}

}  // namespace nematic
