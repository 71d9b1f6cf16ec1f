#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nematic/energy.hpp"
#include "nematic/vortex_field.hpp"
#include "oracles.hpp"

using namespace nematic;

class EnergyTest : public ::testing::Test {
 protected:
  NematicParams p = make_params(6.0, 0.1);
  Grid2D g = Grid2D::centered(17, 17, 1.0, 1.0);
};

TEST_F(EnergyTest, UniformGroundStateHasZeroEnergy) {
  EXPECT_NEAR(reduced_energy(ComplexField(g, std::polar(p.r_eq(), 0.4)), p), 0.0, 1e-12);
}

TEST_F(EnergyTest, IsotropicStateEnergy) {
  EXPECT_NEAR(reduced_energy(ComplexField(g), p), g.area() * p.c_gamma(), 1e-12);
}

TEST_F(EnergyTest, DomainError) {
  ComplexField n(g, 0.5);
  n[40] = 1.0;
  EXPECT_THROW(reduced_energy(n, p), std::domain_error);
  EXPECT_THROW(equilibrium_moments(n, 2), std::domain_error);
}

TEST_F(EnergyTest, EquilibriumMoments) {
  const ComplexField n = ComplexField::from_function(g, [](Complex z) { return std::polar(0.3 + 0.2 * z.real(), z.imag()); });
  const ComplexField m0 = equilibrium_moments(n, 0);
  const ComplexField m1 = equilibrium_moments(n, 1);
  const ComplexField m2 = equilibrium_moments(n, 2);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(m0[k], Complex(1.0, 0.0));
    EXPECT_EQ(m1[k], n[k]);
    const double r = std::abs(n[k]);
    const double lam = oracle::lambda(r);
    const double i2_over_i0 = static_cast<double>(oracle::bessel_i(2, lam) / oracle::bessel_i(0, lam));
    const Complex u = n[k] / r;
    EXPECT_NEAR(std::abs(m2[k] - i2_over_i0 * u * u), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(m2[k] - (1.0 - 2.0 * r / lam) * u * u), 0.0, 1e-12);
  }
}

TEST_F(EnergyTest, EquilibratedDensityHasMomentsOfFamily) {
  const ComplexField n = ComplexField::from_function(g, [](Complex z) { return std::polar(0.5, 3.0 * z.real()); });
  const auto rho = equilibrated_density(n, 128);
  EXPECT_LT(max_abs(order_parameter_of(rho) - n), 1e-12);
  EXPECT_NEAR(relative_entropy(rho, n), 0.0, 1e-8);
}

TEST_F(EnergyTest, UniformDensityEntropy) {
  const ComplexField n = ComplexField::from_function(g, [](Complex z) { return std::polar(0.2 + 0.3 * z.real() * z.real(), z.imag()); });
  OrientationDensity rho(g, 128);
  for (auto& v : rho.values) v = 0.5 / std::numbers::pi;
  // S(1/2pi | rho_hat) = ln I0(Lambda(r)) per point.
  RealField expected = RealField::from_function(g, [](Complex) { return 0.0; });
  for (std::size_t k = 0; k < g.size(); ++k) expected[k] = std::log(static_cast<double>(oracle::bessel_i(0, oracle::lambda(std::abs(n[k])))));
  const double s = relative_entropy(rho, n);
  EXPECT_GT(s, 0.0);
  EXPECT_NEAR(s, integrate(expected), 1e-10);
}

TEST_F(EnergyTest, EntropyIsQuadraticInPerturbation) {
  const Grid2D one(3, 3, 1.0, 1.0);
  const ComplexField n(one, Complex(0.4, 0.1));
  auto perturbed = [&](double delta) {
    OrientationDensity rho = equilibrated_density(n, 256);
    for (std::size_t p_ = 0; p_ < one.size(); ++p_) {
      auto row = rho.at(p_);
      double total = 0.0;
      for (std::size_t q = 0; q < rho.m; ++q) {
        row[q] *= 1.0 + delta * std::cos(4.0 * static_cast<double>(q) * rho.dphi());
        total += row[q];
      }
      for (auto& v : row) v /= total * rho.dphi();
    }
    return relative_entropy(rho, n);
  };
  const double ratio = perturbed(0.02) / perturbed(0.01);
  EXPECT_NEAR(ratio, 4.0, 0.1);
}

TEST_F(EnergyTest, NegativeDensityRejected) {
  const ComplexField n(g, 0.2);
  OrientationDensity rho = equilibrated_density(n, 64);
  rho.values[5] = -1e-3;
  EXPECT_THROW(relative_entropy(rho, n), std::domain_error);
}

TEST_F(EnergyTest, EntropyVanishesOnlyOnFamily) {
  const ComplexField n(g, Complex(0.3, 0.2));
  const auto on = equilibrated_density(n, 128);
  EXPECT_NEAR(relative_entropy(on, n), 0.0, 1e-10);
  OrientationDensity off = on;
  for (std::size_t p_ = 0; p_ < g.size(); ++p_) {
    auto row = off.at(p_);
    for (std::size_t q = 0; q < off.m; ++q) row[q] *= 1.0 + 0.1 * std::cos(6.0 * static_cast<double>(q) * off.dphi());
  }
  EXPECT_GT(relative_entropy(off, n), 1e-6);
}

TEST(EnergyDecomposition, DirectEqualsReducedPlusEntropy) {
  const auto p = make_params(6.0, 0.1);
  const Grid2D g = Grid2D::centered(64, 64, 1.0, 1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const ComplexField n = ComplexField::from_function(g, [&](Complex z) {
      return std::polar(0.4 + 0.2 * std::sin(2.0 * z.real() + a) * std::cos(z.imag() + b), 2.0 * c * z.real() + z.imag());
    });
    MomentState s = equilibrium_state(n, 16);
    // Move n^(2) off the family while keeping the density positive.
    for (std::size_t k = 0; k < g.size(); ++k) s.moments[2][k] *= 0.9 + 0.05 * u(rng);
    const auto rho = reconstruct_density(s, 128);
    const double direct = onsager_energy(rho, p);
    const double split = total_energy(rho, p);
    EXPECT_NEAR(direct, split, 1e-4 * std::abs(direct)) << trial;
  }
}

TEST(Reconstruction, RecoversMoments) {
  const Grid2D g(3, 3, 1.0, 1.0);
  const ComplexField n(g, Complex(0.2, -0.3));
  const MomentState s = equilibrium_state(n, 10);
  const auto rho = reconstruct_density(s, 64);
  EXPECT_LT(max_abs(order_parameter_of(rho) - n), 1e-12);
  EXPECT_THROW(reconstruct_density(s, 32), std::invalid_argument);
}
