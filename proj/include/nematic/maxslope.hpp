#pragma once

// Finite-dimensional gradient flows x' = -D(x) dE(x): generalized inverses,
// the maximal-slope residual, metrics induced on submanifolds, the
// asymptotic inverse of a singularly perturbed block matrix, and the
// reduction of a stiff penalised flow onto its constraint manifold.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace nematic::maxslope {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline void check_symmetric(const Matrix& m, const char* where) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(where) + ": matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument(std::string(where) + ": matrix must be symmetric");
}

/// Pseudo-inverse of a symmetric PSD matrix through its eigendecomposition;
/// eigenvalues below rank_tol * lambda_max are treated as kernel.
inline Matrix generalized_inverse(const Matrix& m, double rank_tol = 1e-10) {
  check_symmetric(m, "generalized_inverse");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  const Vector& lam = es.eigenvalues();
  const double top = lam.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (std::abs(lam[i]) > rank_tol * top) inv[i] = 1.0 / lam[i];
  const Matrix& v = es.eigenvectors();
  return v * inv.asDiagonal() * v.transpose();
}

struct SampledCurve {
  std::vector<double> times;
  std::vector<Vector> points;
};

struct EnergyFunction {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

using MobilityFunction = std::function<Matrix(const Vector&)>;

/// Centred-difference velocities, one-sided at the ends.
inline std::vector<Vector> curve_velocities(const SampledCurve& c) {
  const std::size_t n = c.times.size();
  if (n < 2 || c.points.size() != n) throw std::invalid_argument("curve_velocities: need at least two samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(c.times[i] > c.times[i - 1])) throw std::invalid_argument("curve_velocities: times must increase");
  std::vector<Vector> v(n);
  v[0] = (c.points[1] - c.points[0]) / (c.times[1] - c.times[0]);
  v[n - 1] = (c.points[n - 1] - c.points[n - 2]) / (c.times[n - 1] - c.times[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) v[i] = (c.points[i + 1] - c.points[i - 1]) / (c.times[i + 1] - c.times[i - 1]);
  return v;
}

/// E(x(0)) - E(x(T)) - 1/2 int (|dE|_D^2 + |x'|_G^2) dt, with G the
/// generalized inverse of D. Nonpositive for admissible curves and zero
/// exactly on gradient-flow trajectories.
inline double maximal_slope_residual(const SampledCurve& curve, const EnergyFunction& energy,
                                     const MobilityFunction& mobility, double rank_tol = 1e-10) {
  const auto vel = curve_velocities(curve);
  const std::size_t n = curve.times.size();
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix d = mobility(curve.points[i]);
    const Matrix g = generalized_inverse(d, rank_tol);
    const Vector& v = vel[i];
    const Vector off_range = v - d * (g * v);
    if (off_range.norm() > 1e-8 * std::max(1.0, v.norm()))
      throw std::domain_error("maximal_slope_residual: curve velocity leaves the range of D");
    const Vector de = energy.gradient(curve.points[i]);
    integrand[i] = de.dot(d * de) + v.dot(g * v);
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    integral += 0.5 * (curve.times[i] - curve.times[i - 1]) * (integrand[i] + integrand[i - 1]);
  return energy.value(curve.points.front()) - energy.value(curve.points.back()) - 0.5 * integral;
}

/// G~ = J^T G J for an embedding with Jacobian J (n x m, full column rank).
inline Matrix induced_metric(const Matrix& jacobian, const Matrix& g) {
  check_symmetric(g, "induced_metric");
  if (jacobian.rows() != g.rows()) throw std::invalid_argument("induced_metric: dimension mismatch");
  Eigen::ColPivHouseholderQR<Matrix> qr(jacobian);
  qr.setThreshold(1e-12);
  if (qr.rank() < jacobian.cols()) throw std::invalid_argument("induced_metric: jacobian is rank deficient");
  const Matrix out = jacobian.transpose() * g * jacobian;
  return 0.5 * (out + out.transpose());
}

struct BlockSystem {
  Matrix a11;
  Matrix b11, b12, b21, b22;
  Matrix c11, c12, c21, c22;

  /// A = (1/delta) [A11 0; 0 0] + B + delta C.
  Matrix assemble(double delta) const {
    const Eigen::Index p = a11.rows();
    const Eigen::Index q = b22.rows();
    Matrix a = Matrix::Zero(p + q, p + q);
    a.topLeftCorner(p, p) = a11 / delta + b11 + delta * c11;
    a.topRightCorner(p, q) = b12 + delta * c12;
    a.bottomLeftCorner(q, p) = b21 + delta * c21;
    a.bottomRightCorner(q, q) = b22 + delta * c22;
    return a;
  }
};

/// Two-term expansion of A^{-1}:
///   [0 0; 0 B22^-1] + delta [A11^-1, D12; D21, D22],
///   D12 = -A11^-1 B12 B22^-1 = D21^T,
///   D22 = B22^-1 (B21 A11^-1 B12 - C22) B22^-1.
inline Matrix block_inverse_asymptotic(const BlockSystem& s, double delta) {
  const Eigen::Index p = s.a11.rows();
  const Eigen::Index q = s.b22.rows();
  if ((s.b12 - s.b21.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("block_inverse_asymptotic: B12 must equal B21^T");
  Eigen::FullPivLU<Matrix> lu_a(s.a11), lu_b(s.b22);
  if (!lu_a.isInvertible()) throw std::invalid_argument("block_inverse_asymptotic: A11 is singular");
  if (!lu_b.isInvertible()) throw std::invalid_argument("block_inverse_asymptotic: B22 is singular");
  const Matrix a_inv = lu_a.inverse();
  const Matrix b_inv = lu_b.inverse();
  const Matrix d12 = -a_inv * s.b12 * b_inv;
  const Matrix d22 = b_inv * (s.b21 * a_inv * s.b12 - s.c22) * b_inv;
  Matrix out = Matrix::Zero(p + q, p + q);
  out.topLeftCorner(p, p) = delta * a_inv;
  out.topRightCorner(p, q) = delta * d12;
  out.bottomLeftCorner(q, p) = delta * d12.transpose();
  out.bottomRightCorner(q, q) = b_inv + delta * d22;
  return out;
}

/// Penalised flow x' = -D (dU + (1/eps) dzeta^T dV(zeta(x))) against the
/// reduced flow y' = -D~ dU~(y) on the chart chi of M = {zeta = 0}.
struct ReductionProblem {
  std::function<Vector(const Vector&)> u_gradient;
  std::function<Vector(const Vector&)> v_gradient;  // gradient of V in zeta
  std::function<Vector(const Vector&)> zeta;
  std::function<Matrix(const Vector&)> zeta_jacobian;
  std::function<Vector(const Vector&)> chart;             // chi(y)
  std::function<Matrix(const Vector&)> chart_jacobian;    // dchi/dy
  std::function<Vector(const Vector&)> chart_inverse;     // eta(x), defined near M
  MobilityFunction mobility;                              // defaults to identity
  /// Largest allowed distance |x - chi(eta(x))| before the run is abandoned.
  double chart_radius = 0.5;
};

struct ReductionReport {
  std::vector<double> eps;
  std::vector<double> distance;
  double orthogonality = 0.0;
  bool monotone = true;
};

namespace detail {

template <class F>
Vector rk4_step(const F& f, const Vector& x, double h) {
  const Vector k1 = f(x);
  const Vector k2 = f(x + 0.5 * h * k1);
  const Vector k3 = f(x + 0.5 * h * k2);
  const Vector k4 = f(x + h * k3);
  return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline Matrix numeric_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x, double step = 1e-6) {
  const Vector f0 = f(x);
  Matrix j(f0.size(), x.size());
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    Vector xp = x, xm = x;
    xp[c] += step;
    xm[c] -= step;
    j.col(c) = (f(xp) - f(xm)) / (2.0 * step);
  }
  return j;
}

}  // namespace detail

/// Integrates both flows over [0, t_end] with RK4 (step limited by the
/// penalty stiffness) and reports the sup-norm distance between x^eps(t)
/// and chi(y(t)) for each eps. Also measures max |dzeta D deta^T| along
/// the reduced trajectory.
inline ReductionReport reduction_demo(const ReductionProblem& prob, const std::vector<double>& eps_list,
                                      const Vector& x0, double t_end, double dt_max = 1e-3) {
  auto mobility = [&](const Vector& x) {
    return prob.mobility ? prob.mobility(x) : Matrix(Matrix::Identity(x.size(), x.size()));
  };
  const Vector y0 = prob.chart_inverse(x0);
  ReductionReport rep;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw std::invalid_argument("reduction_demo: eps must be positive");
    const double dt_target = std::min(dt_max, 0.5 * eps);
    const std::size_t steps = static_cast<std::size_t>(std::ceil(t_end / dt_target));
    const double dt = t_end / static_cast<double>(steps);
    auto full = [&](const Vector& x) -> Vector {
      const Vector grad = prob.u_gradient(x) + prob.zeta_jacobian(x).transpose() * prob.v_gradient(prob.zeta(x)) / eps;
      return -mobility(x) * grad;
    };
    auto reduced = [&](const Vector& y) -> Vector {
      const Vector xm = prob.chart(y);
      const Matrix jac = prob.chart_jacobian(y);
      const Matrix g_tilde = induced_metric(jac, generalized_inverse(mobility(xm)));
      return -generalized_inverse(g_tilde) * (jac.transpose() * prob.u_gradient(xm));
    };
    Vector x = x0, y = y0;
    double worst = (x - prob.chart(y)).norm();
    for (std::size_t s = 0; s < steps; ++s) {
      x = detail::rk4_step(full, x, dt);
      y = detail::rk4_step(reduced, y, dt);
      if (!x.allFinite() || (x - prob.chart(prob.chart_inverse(x))).norm() > prob.chart_radius)
        throw std::runtime_error("reduction_demo: trajectory left the chart");
      worst = std::max(worst, (x - prob.chart(y)).norm());
      const Vector xm = prob.chart(y);
      const Matrix orth = prob.zeta_jacobian(xm) * mobility(xm) *
                          detail::numeric_jacobian(prob.chart_inverse, xm).transpose();
      rep.orthogonality = std::max(rep.orthogonality, orth.cwiseAbs().maxCoeff());
    }
    rep.eps.push_back(eps);
    rep.distance.push_back(worst);
  }
  for (std::size_t i = 1; i < rep.distance.size(); ++i)
    if ((rep.eps[i] < rep.eps[i - 1]) != (rep.distance[i] < rep.distance[i - 1])) rep.monotone = false;
  return rep;
}

/// Unit circle in the plane with U(x) = x_1 and V(zeta) = zeta^2,
/// zeta = |x| - 1; the reduced flow is theta' = sin(theta).
inline ReductionProblem circle_problem() {
  ReductionProblem p;
  p.u_gradient = [](const Vector& x) { return Vector(Vector::Unit(x.size(), 0)); };
  p.v_gradient = [](const Vector& z) { return Vector(2.0 * z); };
  p.zeta = [](const Vector& x) { return Vector::Constant(1, x.norm() - 1.0).eval(); };
  p.zeta_jacobian = [](const Vector& x) { return Matrix(x.transpose() / x.norm()); };
  p.chart = [](const Vector& y) { return Vector((Vector(2) << std::cos(y[0]), std::sin(y[0])).finished()); };
  p.chart_jacobian = [](const Vector& y) { return Matrix((Matrix(2, 1) << -std::sin(y[0]), std::cos(y[0])).finished()); };
  p.chart_inverse = [](const Vector& x) { return Vector::Constant(1, std::atan2(x[1], x[0])).eval(); };
  return p;
}

}  // namespace nematic::maxslope
