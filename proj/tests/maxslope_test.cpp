#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nematic/maxslope.hpp"

using namespace nematic::maxslope;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = nd(rng);
  return m;
}

MobilityFunction identity_mobility() {
  return [](const Vector& x) { return Matrix(Matrix::Identity(x.size(), x.size())); };
}

EnergyFunction half_norm() {
  return {[](const Vector& x) { return 0.5 * x.squaredNorm(); }, [](const Vector& x) { return x; }};
}

}  // namespace

TEST(GeneralizedInverse, IdentityAndDiagonal) {
  EXPECT_LT((generalized_inverse(Matrix::Identity(4, 4)) - Matrix::Identity(4, 4)).norm(), 1e-14);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 0.5;
  EXPECT_LT((generalized_inverse(d) - expected).norm(), 1e-14);
}

TEST(GeneralizedInverse, PenroseConditions) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index rank = 1 + t % 5;
    const Matrix a = random_matrix(rng, 5, rank);
    const Matrix m = a * a.transpose();
    const Matrix g = generalized_inverse(m);
    const double scale = std::max(1.0, m.norm());
    EXPECT_LT((m * g * m - m).norm() / scale, 1e-10);
    EXPECT_LT((g * m * g - g).norm() / std::max(1.0, g.norm()), 1e-10);
    EXPECT_LT((m * g - (m * g).transpose()).norm(), 1e-10);
    EXPECT_LT((g - g.transpose()).norm(), 1e-10);
  }
}

TEST(GeneralizedInverse, RankThreeProjector) {
  std::mt19937_64 rng(5);
  const Matrix a = random_matrix(rng, 5, 3);
  const Matrix m = a * a.transpose();
  const Matrix proj = m * generalized_inverse(m);
  EXPECT_NEAR(proj.trace(), 3.0, 1e-10);
  EXPECT_LT((proj * proj - proj).norm(), 1e-10);
}

TEST(GeneralizedInverse, RejectsNonSymmetric) {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 1) = 1.0;
  EXPECT_THROW(generalized_inverse(m), std::invalid_argument);
}

TEST(Residual, ExactFlowConvergesToZero) {
  Vector x0(2);
  x0 << 1.0, -0.5;
  auto curve = [&](double dt) {
    SampledCurve c;
    for (int i = 0; i * dt <= 2.0 + 1e-12; ++i) c.times.push_back(i * dt), c.points.push_back(x0 * std::exp(-i * dt));
    return c;
  };
  const double r1 = maximal_slope_residual(curve(1e-2), half_norm(), identity_mobility());
  const double r2 = maximal_slope_residual(curve(5e-3), half_norm(), identity_mobility());
  EXPECT_LT(std::abs(r1), 1e-4);
  EXPECT_LT(std::abs(r2), 0.3 * std::abs(r1) + 1e-14);
}

TEST(Residual, StraightLineIsStrictlyNegative) {
  Vector x0(2);
  x0 << 1.0, -0.5;
  SampledCurve line;
  for (int i = 0; i <= 200; ++i) {
    const double t = 0.01 * i;
    line.times.push_back(t);
    line.points.push_back(x0 + (t / 2.0) * (x0 * std::exp(-2.0) - x0));
  }
  EXPECT_LT(maximal_slope_residual(line, half_norm(), identity_mobility()), -1e-3);
}

TEST(Residual, ConstantCurveAtCriticalPoint) {
  SampledCurve c;
  for (int i = 0; i <= 10; ++i) c.times.push_back(0.1 * i), c.points.push_back(Vector::Zero(3));
  EXPECT_EQ(maximal_slope_residual(c, half_norm(), identity_mobility()), 0.0);
}

TEST(Residual, DegenerateMobilityFlowAndRangeCheck) {
  MobilityFunction d = [](const Vector&) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    return m;
  };
  Vector x0(2);
  x0 << 1.0, 0.3;
  SampledCurve flow, off;
  for (int i = 0; i <= 400; ++i) {
    const double t = 0.005 * i;
    flow.times.push_back(t);
    flow.points.push_back((Vector(2) << std::exp(-t), 0.3).finished());
    off.times.push_back(t);
    off.points.push_back((Vector(2) << 1.0, 0.3 + t).finished());
  }
  EXPECT_LT(std::abs(maximal_slope_residual(flow, half_norm(), d)), 1e-4);
  EXPECT_THROW(maximal_slope_residual(off, half_norm(), d), std::domain_error);
}

TEST(InducedMetric, Cases) {
  EXPECT_LT((induced_metric(Matrix::Identity(3, 3), Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm(), 1e-15);
  for (double th : {0.0, 0.7, 2.1}) {
    Matrix j(2, 1);
    j << -std::sin(th), std::cos(th);
    EXPECT_NEAR(induced_metric(j, Matrix::Identity(2, 2))(0, 0), 1.0, 1e-14);
  }
  Matrix j(2, 1);
  j << 3.0, -2.0;
  EXPECT_NEAR(induced_metric(j, Matrix::Identity(2, 2))(0, 0), 13.0, 1e-13);
  Matrix rank_def(3, 2);
  rank_def << 1, 2, 2, 4, 3, 6;
  EXPECT_THROW(induced_metric(rank_def, Matrix::Identity(3, 3)), std::invalid_argument);
}

class BlockInverseTest : public ::testing::Test {
 protected:
  std::mt19937_64 rng{7};
  Matrix sym(Eigen::Index n) {
    const Matrix m = random_matrix(rng, n, n);
    return m + m.transpose() + 2.0 * static_cast<double>(n) * Matrix::Identity(n, n);
  }
  BlockSystem random_system(Eigen::Index p, Eigen::Index q) {
    BlockSystem s;
    s.a11 = sym(p);
    s.b11 = sym(p);
    s.b22 = sym(q);
    s.b12 = random_matrix(rng, p, q);
    s.b21 = s.b12.transpose();
    s.c11 = sym(p);
    s.c22 = sym(q);
    s.c12 = random_matrix(rng, p, q);
    s.c21 = s.c12.transpose();
    return s;
  }
};

TEST_F(BlockInverseTest, ErrorIsSecondOrder) {
  const BlockSystem s = random_system(3, 2);
  double prev = 0.0;
  for (double delta : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
    const double err = (block_inverse_asymptotic(s, delta) - s.assemble(delta).inverse()).norm();
    if (prev > 0.0) {
      EXPECT_NEAR(prev / err, 4.0, 0.5);
    }
    prev = err;
  }
}

TEST_F(BlockInverseTest, DecoupledBlocks) {
  BlockSystem s = random_system(2, 2);
  s.b12.setZero();
  s.b21.setZero();
  s.c12.setZero();
  s.c21.setZero();
  const double delta = 1e-3;
  const Matrix approx = block_inverse_asymptotic(s, delta);
  EXPECT_LT(approx.topRightCorner(2, 2).norm(), 1e-15);
  const Matrix lower = s.b22.inverse() - delta * s.b22.inverse() * s.c22 * s.b22.inverse();
  EXPECT_LT((approx.bottomRightCorner(2, 2) - lower).norm(), 1e-14);
}

TEST_F(BlockInverseTest, ScalarClosedForm) {
  BlockSystem s;
  auto scalar = [](double v) { return Matrix::Constant(1, 1, v); };
  const double a = 2.0, b11 = 0.5, b = 0.3, b22 = 1.5, c11 = 0.2, c12 = -0.4, c22 = 0.7;
  s.a11 = scalar(a);
  s.b11 = scalar(b11);
  s.b12 = s.b21 = scalar(b);
  s.b22 = scalar(b22);
  s.c11 = scalar(c11);
  s.c12 = s.c21 = scalar(c12);
  s.c22 = scalar(c22);
  const double delta = 1e-3;
  const Matrix approx = block_inverse_asymptotic(s, delta);
  EXPECT_NEAR(approx(0, 0), delta / a, 1e-15);
  EXPECT_NEAR(approx(0, 1), -delta * b / (a * b22), 1e-15);
  EXPECT_NEAR(approx(1, 1), 1.0 / b22 + delta * (b * b / a - c22) / (b22 * b22), 1e-15);
  // Exact 2x2 inverse as the independent reference.
  const double p = a / delta + b11 + delta * c11, q = b + delta * c12, r = b22 + delta * c22;
  const double det = p * r - q * q;
  EXPECT_NEAR(approx(1, 1), p / det, 10.0 * delta * delta);
  EXPECT_NEAR(approx(0, 1), -q / det, 10.0 * delta * delta);
}

TEST_F(BlockInverseTest, SingularBlocksRejected) {
  BlockSystem s = random_system(2, 2);
  BlockSystem bad_a = s;
  bad_a.a11.setZero();
  EXPECT_THROW(block_inverse_asymptotic(bad_a, 1e-3), std::invalid_argument);
  BlockSystem bad_b = s;
  bad_b.b22.setZero();
  EXPECT_THROW(block_inverse_asymptotic(bad_b, 1e-3), std::invalid_argument);
  BlockSystem asym = s;
  asym.b21(0, 0) += 1.0;
  EXPECT_THROW(block_inverse_asymptotic(asym, 1e-3), std::invalid_argument);
}

TEST(Reduction, CircleDistanceShrinksWithEps) {
  Vector x0(2);
  x0 << std::cos(1.0), std::sin(1.0);
  const auto rep = reduction_demo(circle_problem(), {1e-1, 1e-2, 1e-3}, x0, 3.0);
  ASSERT_EQ(rep.distance.size(), 3u);
  EXPECT_TRUE(rep.monotone);
  EXPECT_LT(rep.distance[2], 1e-2);
  EXPECT_LT(rep.orthogonality, 1e-6);
}

TEST(Reduction, CriticalPointStart) {
  Vector x0(2);
  x0 << 1.0, 0.0;
  const auto rep = reduction_demo(circle_problem(), {1e-1, 1e-2}, x0, 1.0);
  for (std::size_t i = 0; i < rep.eps.size(); ++i) EXPECT_LE(rep.distance[i], rep.eps[i]);
}

TEST(Reduction, ConstantEnergyStaysPut) {
  auto prob = circle_problem();
  prob.u_gradient = [](const Vector& x) { return Vector(Vector::Zero(x.size())); };
  Vector x0(2);
  x0 << std::cos(0.4), std::sin(0.4);
  const auto rep = reduction_demo(prob, {1e-1, 1e-2}, x0, 1.0);
  for (double d : rep.distance) EXPECT_LT(d, 1e-12);
}
