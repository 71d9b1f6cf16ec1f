#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "nematic/grid.hpp"
#include "nematic/snapshot.hpp"
#include "nematic/vortex_field.hpp"

using namespace nematic;

TEST(Grid, GeometryAndIndexing) {
  const Grid2D g = Grid2D::centered(5, 9, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(g.h(), 0.25);
  EXPECT_EQ(g.index(2, 3), 3u * 5u + 2u);
  EXPECT_EQ(g.point(0, 0), Complex(-0.5, -1.0));
  EXPECT_EQ(g.point(g.index(4, 8)), Complex(0.5, 1.0));
  EXPECT_TRUE(g.is_boundary(0, 4));
  EXPECT_FALSE(g.is_boundary(2, 4));
  EXPECT_EQ(g.boundary_loop().size(), 2u * (5 + 9) - 4);
  EXPECT_THROW(Grid2D(5, 5, 1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(Grid2D(2, 5, 1.0, 4.0), std::invalid_argument);
}

TEST(Grid, QuadratureWeightsSumToArea) {
  const Grid2D g(7, 13, 1.5, 3.0);
  RealField one(g, 1.0);
  EXPECT_NEAR(integrate(one), g.area(), 1e-13);
}

TEST(ElasticOperator, ConstantField) {
  const auto p = make_params(6.0, 0.3);
  const Grid2D g = Grid2D::centered(9, 9, 1.0, 1.0);
  const Complex c(0.2, -0.1);
  const ComplexField out = apply_elastic_operator(ComplexField(g, c), p);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(std::abs(out[k] - 6.0 * c), 0.0, 1e-13);
}

TEST(ElasticOperator, QuadraticIsExact) {
  const auto p = make_params(6.0, 0.3);
  const Grid2D g = Grid2D::centered(11, 11, 1.0, 1.0);
  const ComplexField f = ComplexField::from_function(g, [](Complex z) {
    return Complex(z.real() * z.real(), z.imag() * z.imag());
  });
  const ComplexField out = apply_elastic_operator(f, p);
  const double e2 = 0.09;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.is_boundary(k)) continue;
    EXPECT_NEAR(std::abs(out[k] - (e2 * Complex(2.0, 2.0) + 6.0 * f[k])), 0.0, 1e-11);
  }
}

TEST(ElasticOperator, ZeroEpsilonLimit) {
  // eps only enters as eps^2 Lap; a tiny eps leaves gamma f to rounding.
  const auto p = make_params(3.0, 1e-12);
  const Grid2D g = Grid2D::centered(7, 7, 1.0, 1.0);
  const ComplexField f = ComplexField::from_function(g, [](Complex z) { return std::exp(z); });
  const ComplexField out = apply_elastic_operator(f, p);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(std::abs(out[k] - 3.0 * f[k]), 0.0, 1e-12);
}

TEST(DirichletEnergy, LinearField) {
  const Grid2D g(9, 9, 1.0, 1.0);
  const RealField f = RealField::from_function(g, [](Complex z) { return 2.0 * z.real(); });
  // (1/2) int |grad f|^2 = 2 on the unit square.
  EXPECT_NEAR(dirichlet_energy(f), 2.0, 1e-12);
}

TEST(WrapAngle, PrincipalRange) {
  EXPECT_NEAR(wrap_angle(3.0 * std::numbers::pi), std::numbers::pi, 1e-15);
  EXPECT_NEAR(wrap_angle(-std::numbers::pi), std::numbers::pi, 1e-15);
  EXPECT_NEAR(wrap_angle(0.5), 0.5, 0.0);
}

TEST(ImposeBoundary, UsesBoundaryPhase) {
  const Grid2D g = Grid2D::centered(6, 6, 1.0, 1.0, [](Complex z) { return std::arg(z); });
  ComplexField n(g);
  impose_boundary(n, 0.7);
  for (std::size_t idx : g.boundary_loop()) EXPECT_NEAR(std::abs(n[idx] - std::polar(0.7, std::arg(g.point(idx)))), 0.0, 1e-15);
  EXPECT_EQ(n(2, 2), Complex(0.0, 0.0));
  EXPECT_EQ(g.boundary_winding(), 1);
}

TEST(Snapshot, RoundTripAndCsv) {
  const Grid2D g(4, 3, 3.0, 2.0);
  const ComplexField a = ComplexField::from_function(g, [](Complex z) { return z * z; });
  const ComplexField b = ComplexField::from_function(g, [](Complex z) { return std::conj(z) + 1.0; });
  const auto dir = std::filesystem::temp_directory_path() / "nematic_grid_test";
  std::filesystem::create_directories(dir);
  write_snapshot((dir / "s.nemf").string(), {a, b});
  const auto back = read_snapshot((dir / "s.nemf").string(), g);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(back[0][k], a[k]);
    EXPECT_EQ(back[1][k], b[k]);
  }
  EXPECT_THROW(read_snapshot((dir / "s.nemf").string(), Grid2D(5, 3, 4.0, 2.0)), std::runtime_error);
  write_field_csv((dir / "f.csv").string(), a);
  std::ifstream in(dir / "f.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x,y,re,im,abs,arg");
  std::filesystem::remove_all(dir);
}

TEST(Snapshot, HeaderLayout) {
  const Grid2D g(3, 3, 1.0, 1.0);
  const auto path = std::filesystem::temp_directory_path() / "nematic_layout.nemf";
  write_snapshot(path.string(), {ComplexField(g, Complex(1.5, -2.0))});
  std::ifstream in(path, std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  EXPECT_EQ(std::string(magic, 4), "NEMF");
  std::uint32_t version = 0;
  std::uint64_t nx = 0, ny = 0, nc = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&nx), 8);
  in.read(reinterpret_cast<char*>(&ny), 8);
  in.read(reinterpret_cast<char*>(&nc), 8);
  double re = 0, im = 0;
  in.read(reinterpret_cast<char*>(&re), 8);
  in.read(reinterpret_cast<char*>(&im), 8);
  EXPECT_EQ(version, 1u);
  EXPECT_EQ(nx, 3u);
  EXPECT_EQ(ny, 3u);
  EXPECT_EQ(nc, 1u);
  EXPECT_EQ(re, 1.5);
  EXPECT_EQ(im, -2.0);
  std::filesystem::remove(path);
}

class VortexFieldTest : public ::testing::Test {
 protected:
  NematicParams p = make_params(6.0, 0.05);
  Grid2D g = Grid2D::centered(41, 41, 1.0, 1.0);
};

TEST_F(VortexFieldTest, SingleVortexAtOrigin) {
  VortexConfiguration c;
  c.positions = {{0.0, 0.0}};
  c.degrees = {1};
  // Shift off the node at the origin.
  c.positions[0] = {0.5 * g.h() * 0.3, 0.0};
  const ComplexField n = multi_vortex_field(g, c, nullptr, p);
  for (std::size_t k = 0; k < g.size(); k += 17)
    EXPECT_NEAR(std::abs(n[k] - std::polar(p.r_eq(), std::arg(g.point(k) - c.positions[0]))), 0.0, 1e-14);
}

TEST_F(VortexFieldTest, DetectionRoundTrip) {
  VortexConfiguration c;
  c.positions = {{-0.21, 0.13}, {0.17, -0.08}};
  c.degrees = {1, -1};
  const ComplexField n = multi_vortex_field(g, c, nullptr, p);
  const auto found = detect_vortices(n);
  ASSERT_EQ(found.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    bool matched = false;
    for (const auto& f : found)
      if (f.degree == c.degrees[k] && std::abs(f.position - c.positions[k]) < g.h()) matched = true;
    EXPECT_TRUE(matched) << k;
  }
  // Boundary loop encloses both: net winding zero.
  EXPECT_EQ(winding_along(n, g.boundary_loop()), 0);
}

TEST_F(VortexFieldTest, ConjugateSymmetry) {
  VortexConfiguration c;
  c.positions = {{0.11, 0.07}, {-0.2, -0.1}};
  c.degrees = {1, 1};
  PhaseField phi = PhaseField::from_function(g, [](Complex z) { return 0.3 * z.real() - z.imag(); });
  VortexConfiguration neg = c;
  neg.degrees = {-1, -1};
  PhaseField mphi = phi;
  mphi *= -1.0;
  const ComplexField a = multi_vortex_field(g, c, &phi, p);
  const ComplexField b = multi_vortex_field(g, neg, &mphi, p);
  EXPECT_LT(max_abs(conj(a) - b), 1e-14);
  const auto found = detect_vortices(conj(a));
  ASSERT_EQ(found.size(), 2u);
  EXPECT_EQ(found[0].degree, -1);
  EXPECT_EQ(winding_along(a, g.boundary_loop()), 2);
}

TEST_F(VortexFieldTest, UniformFieldHasNoVortices) {
  EXPECT_TRUE(detect_vortices(ComplexField(g, Complex(0.3, 0.4))).empty());
}

TEST_F(VortexFieldTest, CoincidentVorticesRejected) {
  VortexConfiguration c;
  c.positions = {{0.1, 0.1}, {0.1, 0.1}};
  c.degrees = {1, -1};
  EXPECT_THROW(multi_vortex_field(g, c, nullptr, p), std::invalid_argument);
}

TEST_F(VortexFieldTest, TemperedCoreVanishesAtCentre) {
  VortexConfiguration c;
  c.positions = {{0.5 * g.h(), 0.5 * g.h()}};
  c.degrees = {1};
  const ComplexField n = tempered_vortex_field(g, c, nullptr, p, 0.1);
  EXPECT_LT(std::abs(n(20, 20)), p.r_eq() * std::sqrt(0.5) * g.h() / 0.1 + 1e-12);
  EXPECT_NEAR(std::abs(n(0, 0)), p.r_eq(), 1e-14);
}
