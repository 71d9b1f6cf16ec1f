#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "nematic/vortex.hpp"

using namespace nematic;

namespace {

VortexConfiguration free_pair(double s0, int d1, int d2) {
  VortexConfiguration c;
  c.positions = {{-0.5 * s0, 0.0}, {0.5 * s0, 0.0}};
  c.degrees = {d1, d2};
  c.free_space = true;
  return c;
}

VortexConfiguration disk_vortex(std::size_t m_b) {
  VortexConfiguration c;
  c.positions = {{0.0, 0.0}};
  c.degrees = {1};
  c.psi = [](Complex z) { return std::arg(z); };
  c.boundary = disk_contour({0.0, 0.0}, 1.0, m_b, c.psi);
  return c;
}

VortexConfiguration generic_three(std::size_t m_b) {
  VortexConfiguration c;
  c.positions = {{0.12, -0.05}, {-0.2, 0.17}, {0.03, 0.25}};
  c.degrees = {1, -1, 1};
  c.psi = VortexConfiguration::matching_phase({{0.1, 0.1}, {-0.1, -0.2}, {0.2, -0.1}}, c.degrees);
  c.boundary = rectangle_contour(Complex(-0.5, -0.5), 1.0, 1.0, m_b, c.psi);
  return c;
}

}  // namespace

TEST(Potential, FreeSpacePair) {
  const auto c = free_pair(0.3, 1, 1);
  EXPECT_NEAR(multivortex_potential(c), -2.0 * std::numbers::pi * std::log(0.3), 1e-13);
  const auto g = potential_gradient(c);
  const Complex z12 = c.positions[0] - c.positions[1];
  EXPECT_NEAR(std::abs(g[0] - (-std::numbers::pi / std::conj(z12))), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(g[0] + g[1]), 0.0, 1e-13);
}

TEST(Potential, DiskCentredVortexHasZeroGradient) {
  const auto g = potential_gradient(disk_vortex(2048));
  EXPECT_LT(std::abs(g[0]), 1e-10);
}

TEST(Potential, ContourQuadratureConverges) {
  const double u1 = multivortex_potential(generic_three(512));
  const double u2 = multivortex_potential(generic_three(1024));
  const double u3 = multivortex_potential(generic_three(2048));
  const double ratio = std::abs(u1 - u2) / std::abs(u2 - u3);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(std::abs(u2 - u3), 1e-4);
}

TEST(Potential, InvariantUnderRelabelling) {
  auto c = generic_three(1024);
  auto r = c;
  std::swap(r.positions[0], r.positions[2]);
  std::swap(r.degrees[0], r.degrees[2]);
  EXPECT_NEAR(multivortex_potential(c), multivortex_potential(r), 1e-10);
}

TEST(Potential, FreeSpaceTranslationInvariance) {
  auto c = generic_three(16);
  c.free_space = true;
  auto t = c;
  for (auto& z : t.positions) z += Complex(0.31, -0.72);
  EXPECT_NEAR(multivortex_potential(c), multivortex_potential(t), 1e-12);
}

TEST(Potential, SymmetricPairHasOpposedGradients) {
  VortexConfiguration c;
  c.positions = {{0.2, 0.0}, {-0.2, 0.0}};
  c.degrees = {1, 1};
  c.psi = VortexConfiguration::matching_phase({{0.1, 0.0}, {-0.1, 0.0}}, c.degrees);
  c.boundary = rectangle_contour(Complex(-0.5, -0.5), 1.0, 1.0, 2048, c.psi);
  const auto g = potential_gradient(c);
  EXPECT_LT(std::abs(g[0] + g[1]), 1e-10);
}

TEST(Potential, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (bool free : {true, false}) {
    for (int trial = 0; trial < 10; ++trial) {
      VortexConfiguration c;
      std::vector<Complex> anchors;
      for (int k = 0; k < 3; ++k) {
        c.positions.push_back({u(rng), u(rng)});
        c.degrees.push_back(k == 1 ? -1 : 1);
        anchors.push_back({u(rng), u(rng)});
      }
      c.free_space = free;
      c.psi = VortexConfiguration::matching_phase(anchors, c.degrees);
      c.boundary = rectangle_contour(Complex(-0.5, -0.5), 1.0, 1.0, 2048, c.psi);
      const auto g = potential_gradient(c);
      for (std::size_t k = 0; k < 3; ++k) {
        const double h = 1e-5;
        double fd[2];
        for (int dir = 0; dir < 2; ++dir) {
          auto cp = c, cm = c;
          cp.positions[k] += dir ? Complex(0.0, h) : Complex(h, 0.0);
          cm.positions[k] -= dir ? Complex(0.0, h) : Complex(h, 0.0);
          fd[dir] = (multivortex_potential(cp) - multivortex_potential(cm)) / (2.0 * h);
        }
        const Complex expected(0.5 * fd[0], 0.5 * fd[1]);
        EXPECT_LT(std::abs(g[k] - expected), 1e-6 * std::abs(expected)) << free << " " << trial << " " << k;
      }
    }
  }
}

TEST(Potential, CoincidentVorticesRejected) {
  auto c = free_pair(0.2, 1, -1);
  c.positions[1] = c.positions[0];
  EXPECT_THROW(multivortex_potential(c), std::invalid_argument);
  EXPECT_THROW(potential_gradient(c), std::invalid_argument);
}

TEST(Dynamics, OppositeSignsCollide) {
  const double s0 = 0.5;
  const double t_c = s0 * s0 / (4.0 * std::numbers::pi);
  const auto traj = run_vortex_dynamics(free_pair(s0, 1, -1), {t_c * 2.0, t_c * 1e-4, 0.0, t_c * 0.01});
  EXPECT_EQ(traj.status, kStatusCloseApproach);
  EXPECT_EQ(traj.clock, Clock::vortex);
  EXPECT_NEAR(traj.times.back() / t_c, 1.0, 0.01);
  for (std::size_t r = 0; r < traj.size(); ++r) {
    const double s2 = std::norm(traj.states[r][0] - traj.states[r][1]);
    if (traj.times[r] < 0.99 * t_c) EXPECT_NEAR(s2, s0 * s0 - 4.0 * std::numbers::pi * traj.times[r], 0.01 * s2);
  }
}

TEST(Dynamics, SameSignsRepel) {
  const auto traj = run_vortex_dynamics(free_pair(1.0, -1, -1), {1.0, 1e-3, 0.0, 0.1});
  EXPECT_EQ(traj.status, "ok");
  EXPECT_NEAR(std::norm(traj.back()[0] - traj.back()[1]), 1.0 + 4.0 * std::numbers::pi, 0.01 * (1.0 + 4.0 * std::numbers::pi));
}

TEST(Dynamics, PotentialNonincreasing) {
  auto c = generic_three(1024);
  const auto traj = run_vortex_dynamics(c, {0.02, 1e-4, 0.03, 1e-3});
  ASSERT_GT(traj.size(), 2u);
  for (std::size_t r = 1; r < traj.size(); ++r) EXPECT_LE(traj.diagnostics[r], traj.diagnostics[r - 1] + 1e-9);
}

TEST(Dynamics, BoundaryMarginHalts) {
  VortexConfiguration c;
  c.positions = {{0.3, 0.0}};
  c.degrees = {1};
  c.psi = [](Complex z) { return std::arg(z); };
  c.boundary = rectangle_contour(Complex(-0.5, -0.5), 1.0, 1.0, 1024, c.psi);
  EXPECT_THROW(run_vortex_dynamics(c, {1.0, 1e-3, 0.25, 0.0}), std::invalid_argument);
}

TEST(Dynamics, IncompatibleDegreesRejected) {
  auto c = generic_three(256);
  c.degrees[0] = -1;
  EXPECT_THROW(run_vortex_dynamics(c, {0.1, 1e-3, 0.0, 0.0}), std::invalid_argument);
}

TEST(Dynamics, TrajectoryCsvEndsWithStatus) {
  const auto c = free_pair(0.4, 1, -1);
  const auto traj = run_vortex_dynamics(c, {1.0, 1e-4, 0.0, 1e-3});
  const auto path = std::filesystem::temp_directory_path() / "nematic_vortex_traj.csv";
  write_vortex_trajectory_csv(path.string(), traj, c.degrees);
  std::ifstream in(path);
  std::string line, last;
  std::getline(in, line);
  EXPECT_EQ(line, "t_prime,k,re_z,im_z,degree,U");
  while (std::getline(in, line)) last = line;
  EXPECT_EQ(last, "# status=close-approach");
  std::filesystem::remove(path);
}

TEST(Clock, VortexClockConversion) {
  const auto p = make_params(6.0, 0.05);
  const double tp = to_vortex_clock(0.3, p);
  EXPECT_NEAR(tp, -8.0 * 0.3 / (std::numbers::pi * p.tau_gamma() * std::log(0.05)), 1e-15);
  EXPECT_NEAR(from_vortex_clock(tp, p), 0.3, 1e-15);
  EXPECT_THROW(to_vortex_clock(1.0, make_params(2.0, 0.05)), std::domain_error);
}
