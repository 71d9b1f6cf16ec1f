#pragma once

// Acceptance checks shared by the acceptance test binary and the
// `validate` subcommand. Each check prints nothing; it returns a result
// with a one-line summary of the measured quantities.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nematic/nematic.hpp"
#include "oracles.hpp"

namespace nematic::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline CriterionResult named(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

namespace detail {

inline std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

/// Max relative deviation of the remainder dE - dE_lin across steps, and the
/// largest energy increment.
struct StepStats {
  double max_remainder = 0.0;
  double max_increase = -INFINITY;
};

template <class State, class Step, class Energy, class Along>
StepStats dissipation_stats(State x, const Step& step, const Energy& energy, const Along& along, double dt,
                            int steps) {
  StepStats st;
  for (int m = 0; m < steps; ++m) {
    State y = step(x, dt);
    const double e0 = energy(x);
    const double e1 = energy(y);
    const double s = 1e-3;
    const double linear = (energy(along(x, y, s)) - energy(along(x, y, -s))) / (2.0 * s);
    st.max_remainder = std::max(st.max_remainder, std::abs(e1 - e0 - linear));
    st.max_increase = std::max(st.max_increase, e1 - e0);
    x = std::move(y);
  }
  return st;
}

struct DissipationOutcome {
  bool ok;
  std::string text;
};

template <class State, class Step, class Energy, class Along>
DissipationOutcome dissipation_check(const char* label, const State& x0, const Step& step, const Energy& energy,
                                     const Along& along, double dt, int steps) {
  const auto a = dissipation_stats(x0, step, energy, along, dt, steps);
  const auto b = dissipation_stats(x0, step, energy, along, 0.5 * dt, 2 * steps);
  const double c = a.max_remainder / (dt * dt);
  const double ratio = a.max_remainder / b.max_remainder;
  const bool ok = ratio >= 3.5 && ratio <= 4.5 && a.max_increase <= c * dt * dt &&
                  b.max_increase <= c * 0.25 * dt * dt;
  return {ok, format("%s ratio=%.2f C=%.3g max dE=%.2e", label, ratio, c, b.max_increase)};
}

inline ComplexField along_field(const ComplexField& x, const ComplexField& y, double s) {
  ComplexField r = x;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += s * (y[i] - x[i]);
  return r;
}

inline MomentState along_state(const MomentState& x, const MomentState& y, double s) {
  MomentState r = x;
  for (std::size_t k = 0; k < r.moments.size(); ++k)
    for (std::size_t i = 0; i < r.moments[k].size(); ++i) r.moments[k][i] += s * (y.moments[k][i] - x.moments[k][i]);
  return r;
}

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

}  // namespace detail

using detail::format;

inline CriterionResult special_functions() {
  CriterionResult r = named(1, "special functions");
  double round_trip = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = -0.999 + 1.998 * (i + 0.5) / 200.0;
    const long double lam = lambda_of(x);
    round_trip = std::max(round_trip, static_cast<double>(std::fabs(oracle::ratio10(lam) - x)));
  }
  double w_max = 0.0, wp_max = 0.0, req_err = 0.0;
  for (double g : {3.0, 4.0, 6.0, 10.0}) {
    const auto p = make_params(g, 0.1);
    w_max = std::max(w_max, std::abs(w_gamma(p.r_eq(), p)));
    wp_max = std::max(wp_max, std::abs(w_gamma_prime(p.r_eq(), p)));
    req_err = std::max(req_err, std::abs(p.r_eq() - oracle::r_eq(g)));
  }
  const auto p2 = make_params(2.0, 0.1);
  r.passed = round_trip <= 1e-10 && w_max <= 1e-10 && wp_max <= 1e-10 && req_err <= 1e-10 && p2.r_eq() == 0.0 &&
             p2.tau_gamma() == 0.0;
  r.detail = format("round trip %.1e, |W(r_eq)| %.1e, |W'(r_eq)| %.1e, r_eq vs bisection %.1e, gamma=2 r_eq=%g",
                    round_trip, w_max, wp_max, req_err, p2.r_eq());
  return r;
}

inline CriterionResult stationarity() {
  CriterionResult r = named(2, "uniform equilibrium is a fixed point");
  const auto p = make_params(6.0, 0.05);
  const double theta = 0.7;
  const Grid2D g = Grid2D::centered(32, 32, 1.0, 1.0, [theta](Complex) { return theta; });
  const ComplexField n(g, std::polar(p.r_eq(), theta));
  const MomentState s = equilibrium_state(n, 8);
  KineticConfig kc{p, g, 8, 1e-3, 1.0};
  const MomentState s1 = step_kinetic(s, kc);
  double dk = 0.0;
  for (int k = 0; k <= 8; ++k) dk = std::max(dk, max_abs(s1.moments[k] - s.moments[k]));
  const double dm = max_abs(step_closure(n, p, closure_dt_limit(g, p, ClosureScheme::maxent), ClosureScheme::maxent) - n);
  const double dl = max_abs(step_closure(n, p, closure_dt_limit(g, p, ClosureScheme::ldg), ClosureScheme::ldg) - n);
  r.passed = dk <= 1e-9 && dm <= 1e-9 && dl <= 1e-9;
  r.detail = format("per-step change: kinetic %.1e, maxent %.1e, ldg %.1e", dk, dm, dl);
  return r;
}

inline CriterionResult dissipation() {
  CriterionResult r = named(3, "energy dissipation up to C dt^2");
  const auto p = make_params(6.0, 0.1);
  const Grid2D g = Grid2D::centered(17, 17, 1.0, 1.0);
  ComplexField n0 = ComplexField::from_function(g, [&](Complex z) {
    return std::polar(p.r_eq() * (0.6 + 0.3 * std::cos(3.0 * z.real())), std::sin(3.0 * z.imag()) + z.real());
  });
  impose_boundary(n0, p.r_eq());
  auto reduced = [&](const ComplexField& x) { return reduced_energy(x, p); };
  std::vector<detail::DissipationOutcome> out;
  for (auto scheme : {ClosureScheme::maxent, ClosureScheme::ldg}) {
    out.push_back(detail::dissipation_check(
        scheme_name(scheme), n0, [&](const ComplexField& x, double dt) { return step_closure(x, p, dt, scheme); },
        reduced, detail::along_field, 0.01, 20));
  }
  const int k_max = 12;
  KineticConfig kc{p, g, k_max, 0.01, 1.0};
  auto total = [&](const MomentState& x) {
    return reduced_energy(x.order_parameter(), p) + relative_entropy(reconstruct_density(x, 128), x.order_parameter());
  };
  out.push_back(detail::dissipation_check(
      "kinetic(K=12)", equilibrium_state(n0, k_max),
      [&](const MomentState& x, double dt) {
        KineticConfig c = kc;
        c.dt = dt;
        return step_kinetic(x, c);
      },
      total, detail::along_state, 0.01, 20));
  r.passed = true;
  for (const auto& o : out) {
    r.passed = r.passed && o.ok;
    r.detail += (r.detail.empty() ? "" : "; ") + o.text;
  }
  return r;
}

inline CriterionResult hierarchy_oracle() {
  CriterionResult r = named(4, "hierarchy vs phi-grid solution");
  const std::complex<double> n0(0.3, 0.1);
  oracle::PhiGridSolver solver(oracle::PhiGridSolver::first_moment_density(n0, 256), 6.0);
  solver.advance(1.0, solver.stable_dt());
  const auto ref = solver.order_parameter();
  const auto m = integrate_homogeneous(homogeneous_state(n0, 8), 6.0, Truncation::equilibrium, 1e-3, 1.0);
  const double diff = std::abs(m[1] - ref);
  r.passed = diff <= 1e-4;
  r.detail = format("|n_hier - n_phi| = %.2e at t = 1 (K = 8, M = 256)", diff);
  return r;
}

inline CriterionResult two_vortex_laws() {
  CriterionResult r = named(5, "free-space two-vortex laws");
  const double s0 = 1.0;
  VortexConfiguration pair;
  pair.positions = {{-0.5 * s0, 0.0}, {0.5 * s0, 0.0}};
  pair.free_space = true;
  // opposite signs: s^2 = s0^2 - 4 pi t, collision at s0^2 / (4 pi)
  pair.degrees = {1, -1};
  const double t_c = s0 * s0 / (4.0 * std::numbers::pi);
  const auto a = run_vortex_dynamics(pair, {t_c * 1.5, t_c * 1e-4, 0.0, t_c * 1e-2});
  double worst_a = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double s2 = std::norm(a.states[i][0] - a.states[i][1]);
    const double pred = s0 * s0 - 4.0 * std::numbers::pi * a.times[i];
    if (a.times[i] <= 0.99 * t_c) worst_a = std::max(worst_a, std::abs(s2 - pred) / pred);
  }
  const double halt_err = std::abs(a.times.back() - t_c) / t_c;
  // same signs: s^2 = s0^2 + 4 pi t
  pair.degrees = {1, 1};
  const auto b = run_vortex_dynamics(pair, {1.0, 1e-3, 0.0, 1e-2});
  double worst_b = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double s2 = std::norm(b.states[i][0] - b.states[i][1]);
    const double pred = s0 * s0 + 4.0 * std::numbers::pi * b.times[i];
    worst_b = std::max(worst_b, std::abs(s2 - pred) / pred);
  }
  r.passed = a.status == kStatusCloseApproach && worst_a <= 0.01 && halt_err <= 0.01 && b.status == "ok" &&
             worst_b <= 0.01 && b.times.back() == 1.0;
  r.detail = format("opposite: s^2 rel err %.1e, halt at %.5f vs %.5f (%.1e); same: s^2 rel err %.1e at t = %g",
                    worst_a, a.times.back(), t_c, halt_err, worst_b, b.times.back());
  return r;
}

inline CriterionResult gradient_oracle() {
  CriterionResult r = named(6, "potential gradient vs finite differences");
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::uniform_int_distribution<int> sign(0, 1);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    VortexConfiguration c;
    std::vector<Complex> anchors;
    for (int k = 0; k < 3; ++k) {
      c.positions.push_back({u(rng), u(rng)});
      c.degrees.push_back(sign(rng) ? 1 : -1);
      anchors.push_back({u(rng), u(rng)});
    }
    c.psi = VortexConfiguration::matching_phase(anchors, c.degrees);
    c.boundary = rectangle_contour(Complex(-0.5, -0.5), 1.0, 1.0, 2048, c.psi);
    const auto grad = potential_gradient(c);
    for (std::size_t k = 0; k < 3; ++k) {
      const double h = 1e-5;
      double fd[2];
      for (int dir = 0; dir < 2; ++dir) {
        const Complex e = dir ? Complex(0.0, h) : Complex(h, 0.0);
        VortexConfiguration cp = c, cm = c;
        cp.positions[k] += e;
        cm.positions[k] -= e;
        fd[dir] = (multivortex_potential(cp) - multivortex_potential(cm)) / (2.0 * h);
      }
      const Complex expected(0.5 * fd[0], 0.5 * fd[1]);
      worst = std::max(worst, std::abs(expected - grad[k]) / std::abs(expected));
    }
  }
  r.passed = worst <= 1e-6;
  r.detail = format("max relative deviation %.2e over 10 configurations (m_b = 2048)", worst);
  return r;
}

inline CriterionResult heat_coefficient() {
  CriterionResult r = named(7, "heat-phase decay rate");
  const auto p = make_params(6.0, 0.05);
  const Grid2D g(129, 129, 1.0, 1.0);
  VortexConfiguration cfg;
  cfg.psi = [](Complex) { return 0.0; };
  PhaseField phi = PhaseField::from_function(g, [](Complex z) {
    return std::sin(std::numbers::pi * z.real()) * std::sin(std::numbers::pi * z.imag());
  });
  const double d0 = 4.0 / (g.area() * oracle::tau_gamma(6.0));
  const double dt = 0.2 * g.h() * g.h() / d0;
  const int steps = 2000;
  const double a0 = phi(64, 64);
  for (int s = 0; s < steps; ++s) phi = step_heat_phase(phi, cfg, p, dt, HeatScheme::explicit_euler);
  const double rate = -std::log(phi(64, 64) / a0) / (steps * dt);
  const double expected = 2.0 * std::numbers::pi * std::numbers::pi * d0;
  const double rel = std::abs(rate / expected - 1.0);
  r.passed = rel <= 0.02;
  r.detail = format("rate %.4f vs 2 pi^2 D0 = %.4f (rel %.1e, h = 1/128)", rate, expected, rel);
  return r;
}

inline CriterionResult mobility_divergence() {
  CriterionResult r = named(8, "mobility log divergence");
  const auto p = make_params(6.0, 0.05);
  const auto fit = mobility_log_divergence(p, {0.08, 0.04, 0.02});
  const double expected = std::numbers::pi * oracle::tau_gamma(6.0) / 8.0;
  const double rel = std::abs(fit.slope / expected - 1.0);
  r.passed = rel <= 0.10;
  r.detail = format("slope %.5f vs pi tau/8 = %.5f (rel %.1e)", fit.slope, expected, rel);
  return r;
}

inline CriterionResult energy_scaling() {
  CriterionResult r = named(9, "tempered vortex energy scaling");
  std::vector<double> xs, ys;
  for (double eps : {0.1, 0.05, 0.025}) {
    const auto p = make_params(6.0, eps);
    auto cells = static_cast<std::size_t>(std::ceil(2.0 * 8.0 / eps));
    if (cells % 2 == 0) ++cells;
    const Grid2D g = Grid2D::centered(cells + 1, cells + 1, 2.0, 2.0);
    VortexConfiguration c;
    c.positions = {{0.0, 0.0}};
    c.degrees = {1};
    const ComplexField n = tempered_vortex_field(g, c, nullptr, p, eps);
    xs.push_back(-std::log(eps));
    ys.push_back(reduced_energy(n, p) / (eps * eps));
  }
  const double slope = detail::fit_slope(xs, ys);
  const double req = oracle::r_eq(6.0);
  const double expected = std::numbers::pi * req * req;
  const double rel = std::abs(slope / expected - 1.0);
  r.passed = rel <= 0.10;
  r.detail = format("slope %.4f vs pi r_eq^2 = %.4f (rel %.1e)", slope, expected, rel);
  return r;
}

inline CriterionResult frozen_vortices() {
  CriterionResult r = named(10, "vortices frozen while the phase relaxes");
  const double eps = 0.05;
  const auto p = make_params(6.0, eps);
  const std::vector<Complex> anchors{{0.2, 0.0}, {-0.2, 0.0}};
  const std::vector<int> degrees{1, 1};
  auto config = [&](double a) {
    VortexConfiguration c;
    c.positions = {{a, 0.0}, {-a, 0.0}};
    c.degrees = degrees;
    c.psi = VortexConfiguration::matching_phase(anchors, degrees);
    c.boundary = rectangle_contour(Complex(-0.5, -0.5), 1.0, 1.0, 2048, c.psi);
    return c;
  };
  // Critical point of U along the symmetric family.
  double lo = 0.3, hi = 0.45;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (potential_gradient(config(mid))[0].real() < 0.0 ? lo : hi) = mid;
  }
  const VortexConfiguration c = config(0.5 * (lo + hi));
  const double tier3_speed = std::abs(potential_gradient(c)[0]);
  const Grid2D g = Grid2D::centered(64, 64, 1.0, 1.0, c.psi);
  const PhaseField harmonic = solve_harmonic_phase(c, g);
  const PhaseField mode = PhaseField::from_function(g, [](Complex z) {
    return std::cos(std::numbers::pi * z.real()) * std::cos(std::numbers::pi * z.imag());
  });
  const double amp = 0.2;
  PhaseField phi0 = harmonic;
  for (std::size_t i = 0; i < g.size(); ++i) phi0[i] += amp * mode[i];
  const ComplexField n0 = tempered_vortex_field(g, c, &phi0, p, eps);
  // Projection of the phase deviation on the perturbation mode, away from cores.
  auto mode_amplitude = [&](const ComplexField& n) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Complex z = g.point(i);
      double a = std::arg(n[i]) - harmonic[i];
      bool near = false;
      for (std::size_t k = 0; k < c.count(); ++k) {
        a -= c.degrees[k] * std::arg(z - c.positions[k]);
        near = near || std::abs(z - c.positions[k]) < 5.0 * eps;
      }
      if (near) continue;
      num += wrap_angle(a) * mode[i];
      den += mode[i] * mode[i];
    }
    return num / den;
  };
  KineticConfig kc{p, g, 8, 1.5e-5, 0.05, true};
  kc.output_every = 0.01;
  kc.density_samples = 64;
  const auto traj = run_kinetic(equilibrium_state(n0, 8), kc);
  const auto& start = traj.diagnostics.front().vortices;
  double displacement = 0.0;
  bool counts_ok = start.size() == 2;
  for (const auto& d : traj.diagnostics) {
    counts_ok = counts_ok && track_error(d.vortices, {start[0].position, start[1].position},
                                         {start[0].degree, start[1].degree}) < INFINITY;
    if (counts_ok)
      displacement = std::max(displacement, track_error(d.vortices, {start[0].position, start[1].position},
                                                        {start[0].degree, start[1].degree}));
  }
  const double a_start = mode_amplitude(traj.states.front().order_parameter());
  const double a_end = mode_amplitude(traj.back().order_parameter());
  r.passed = counts_ok && displacement < 2.0 * g.h() && std::abs(a_end) < 0.5 * std::abs(a_start);
  r.detail = format("max displacement %.4f (2h = %.4f), tier-3 speed %.1e, phase mode %.3f -> %.3f over t = %.2f",
                    displacement, 2.0 * g.h(), tier3_speed, a_start, a_end, traj.times.back());
  return r;
}

inline CriterionResult maxslope_suite() {
  using namespace maxslope;
  CriterionResult r = named(11, "maximal-slope toolkit");
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  auto random = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = nd(rng);
    return m;
  };
  double mp = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index n = 5;
    const Eigen::Index rank = 1 + t % n;
    const Matrix a = random(n, rank);
    const Matrix m = a * a.transpose();
    const Matrix gi = generalized_inverse(m);
    const double scale = std::max(1.0, m.norm());
    mp = std::max({mp, (m * gi * m - m).norm() / scale, (gi * m * gi - gi).norm() / std::max(1.0, gi.norm()),
                   (m * gi - (m * gi).transpose()).norm()});
  }
  EnergyFunction quad{[](const Vector& x) { return 0.5 * x.squaredNorm(); }, [](const Vector& x) { return x; }};
  MobilityFunction ident = [](const Vector& x) { return Matrix(Matrix::Identity(x.size(), x.size())); };
  Vector x0(2);
  x0 << 1.0, -0.5;
  auto exact_curve = [&](double dt) {
    SampledCurve c;
    for (double t = 0.0; t <= 2.0 + 1e-12; t += dt) c.times.push_back(t), c.points.push_back(x0 * std::exp(-t));
    return c;
  };
  const double res1 = maximal_slope_residual(exact_curve(1e-2), quad, ident);
  const double res2 = maximal_slope_residual(exact_curve(5e-3), quad, ident);
  SampledCurve line;
  for (int i = 0; i <= 200; ++i) {
    const double t = 2.0 * i / 200.0;
    line.times.push_back(t);
    line.points.push_back(x0 + (t / 2.0) * (x0 * std::exp(-2.0) - x0));
  }
  const double res_line = maximal_slope_residual(line, quad, ident);
  BlockSystem bs;
  auto sym = [&](Eigen::Index n) {
    const Matrix m = random(n, n);
    return Matrix(m + m.transpose() + 2.0 * static_cast<double>(n) * Matrix::Identity(n, n));
  };
  bs.a11 = sym(3);
  bs.b11 = sym(3);
  bs.b22 = sym(2);
  bs.b12 = random(3, 2);
  bs.b21 = bs.b12.transpose();
  bs.c11 = sym(3);
  bs.c22 = sym(2);
  bs.c12 = random(3, 2);
  bs.c21 = bs.c12.transpose();
  const double e1 = (block_inverse_asymptotic(bs, 1e-3) - bs.assemble(1e-3).inverse()).norm();
  const double e2 = (block_inverse_asymptotic(bs, 5e-4) - bs.assemble(5e-4).inverse()).norm();
  Vector xc(2);
  xc << std::cos(1.0), std::sin(1.0);
  const auto demo = reduction_demo(circle_problem(), {1e-1, 1e-2, 1e-3}, xc, 3.0);
  const bool exact_ok = std::abs(res1) <= 1e-4 && std::abs(res2) <= 0.3 * std::abs(res1) + 1e-12;
  r.passed = mp <= 1e-10 && exact_ok && res_line < -1e-3 && e1 / e2 >= 3.5 && e1 / e2 <= 4.5 && e1 < 1e-4 &&
             demo.monotone;
  r.detail = format("MP %.1e; exact-flow residual %.1e -> %.1e; line residual %.3f; block ratio %.2f (err %.1e); "
                    "reduction %.2e/%.2e/%.2e",
                    mp, res1, res2, res_line, e1 / e2, e1, demo.distance[0], demo.distance[1], demo.distance[2]);
  return r;
}

inline CriterionResult closure_consistency() {
  CriterionResult r = named(12, "closure equals its gradient form");
  const auto p = make_params(6.0, 0.1);
  const Grid2D g = Grid2D::centered(33, 33, 1.0, 1.0);
  double identity = 0.0;
  for (int t = 0; t < 3; ++t) {
    const ComplexField n = ComplexField::from_function(g, [t](Complex z) {
      return std::polar(0.45 + 0.4 * std::sin(2.0 * z.real() + t) * std::cos(3.0 * z.imag()),
                        (t + 1) * z.real() - 2.0 * z.imag() * z.imag());
    });
    identity = std::max(identity, max_abs(closure_rhs(n, p) - closure_rhs_gradient_form(n, p)) / max_abs(closure_rhs(n, p)));
  }
  double coef = 0.0;
  for (double x : {0.05, 0.3, 0.6, 0.9, 0.99})
    coef = std::max(coef, std::abs(std::abs(closure_coefficient(x)) - (1.0 - 2.0 * x / oracle::lambda(x))));
  double small_ratio = 0.0;
  for (double x : {1e-2, 1e-3, 1e-4}) small_ratio = std::max(small_ratio, std::abs(std::abs(closure_coefficient(x)) / (0.5 * x * x) - 1.0));
  const ComplexField tiny = ComplexField::from_function(g, [](Complex z) {
    return std::polar(1e-4 * (1.0 + 0.5 * std::cos(3.0 * z.real())), 2.0 * z.imag());
  });
  ComplexField four_ldg = dN_dnbar(tiny, p);
  four_ldg *= Complex(-4.0);
  const double transition = max_abs(closure_rhs(tiny, p) - four_ldg) / max_abs(four_ldg);
  r.passed = identity <= 1e-8 && coef <= 1e-10 && small_ratio <= 1e-3 && transition <= 1e-7;
  r.detail = format("identity %.1e; coefficient vs bisected Lambda %.1e; c/(r^2/2)-1 %.1e; |rhs + 4 dN/dnbar| rel %.1e "
                    "at |n| ~ 1e-4",
                    identity, coef, small_ratio, transition);
  return r;
}

inline std::vector<std::function<CriterionResult()>> all_criteria() {
  return {special_functions, stationarity,      dissipation,    hierarchy_oracle,
          two_vortex_laws,   gradient_oracle,   heat_coefficient, mobility_divergence,
          energy_scaling,    frozen_vortices,   maxslope_suite, closure_consistency};
}

/// Runs the selected criteria (all when `ids` is empty), timing each and
/// turning exceptions into failures.
inline std::vector<CriterionResult> run_all(const std::vector<int>& ids = {},
                                            const std::function<void(const CriterionResult&)>& report = {}) {
  const auto checks = all_criteria();
  std::vector<CriterionResult> out;
  for (int id = 1; id <= static_cast<int>(checks.size()); ++id) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = checks[static_cast<std::size_t>(id - 1)]();
    } catch (const std::exception& e) {
      res.id = id;
      res.name = "criterion " + std::to_string(id);
      res.passed = false;
      res.detail = std::string("exception: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (report) report(res);
    out.push_back(res);
  }
  return out;
}

inline std::string result_line(const CriterionResult& r) {
  return format("[%s] %02d %s: %s (%.2f s)", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
                r.seconds);
}

}  // namespace nematic::validation
