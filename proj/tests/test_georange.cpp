#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"

using namespace transrad;
using namespace testing_support;

namespace {

const Matrix I2 = Matrix::Identity(2, 2);

PointCloud cloud(std::vector<Complex> p) { return {std::move(p), CloudSource::Points}; }

void expect_encloses(const std::vector<Complex>& p, const Circle& c) {
  for (const Complex& z : p) EXPECT_LE(std::abs(z - c.center), c.radius * (1 + 1e-12) + 1e-12);
  ASSERT_FALSE(c.support.empty());
  for (std::size_t i : c.support) EXPECT_NEAR(std::abs(p[i] - c.center), c.radius, 1e-9 * std::max(1.0, c.radius));
}

}  // namespace

TEST(EnclosingCircle, SinglePoint) {
  const Circle c = enclosing_circle(cloud({Complex(2, -1)}));
  EXPECT_EQ(c.center, Complex(2, -1));
  EXPECT_EQ(c.radius, 0.0);
}

TEST(EnclosingCircle, FourUnitPoints) {
  const std::vector<Complex> p = {1.0, -1.0, Complex(0, 1), Complex(0, -1)};
  const Circle c = enclosing_circle(cloud(p));
  EXPECT_NEAR(std::abs(c.center), 0.0, 1e-15);
  EXPECT_NEAR(c.radius, 1.0, 1e-15);
  expect_encloses(p, c);
}

TEST(EnclosingCircle, TwoPoints) {
  const Circle c = enclosing_circle(cloud({0.0, 2.0}));
  EXPECT_NEAR(std::abs(c.center - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(c.radius, 1.0, 1e-15);
}

TEST(EnclosingCircle, MatchesBruteForce) {
  Rng rng(81);
  for (int k = 0; k < 40; ++k) {
    std::vector<Complex> p;
    const int m = 2 + k % 12;
    for (int j = 0; j < m; ++j) p.push_back(random_complex(rng, 3.0));
    const Circle c = enclosing_circle(cloud(p));
    const auto [center, r] = brute_force_circle(p);
    EXPECT_NEAR(c.radius, r, 1e-10 * std::max(1.0, r));
    EXPECT_NEAR(std::abs(c.center - center), 0.0, 1e-8);
    expect_encloses(p, c);
  }
}

TEST(EnclosingCircle, CollinearAndDuplicatePoints) {
  const std::vector<Complex> p = {0.0, 1.0, 2.0, 3.0, 3.0, 1.5};
  const Circle c = enclosing_circle(cloud(p));
  EXPECT_NEAR(c.radius, 1.5, 1e-14);
  expect_encloses(p, c);
}

TEST(EnclosingCircle, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(enclosing_circle(cloud({})), Error);
  EXPECT_THROW(enclosing_circle(cloud({Complex(std::numeric_limits<double>::quiet_NaN(), 0)})), Error);
}

TEST(WrangeDistanceFn, Examples) {
  EXPECT_NEAR(wrange_distance(I2).distance, 1.0, 1e-8);
  const WrangeDistance refl = wrange_distance(diag({1.0, -1.0}));
  EXPECT_EQ(refl.distance, 0.0);
  EXPECT_LE(refl.signed_value, 1e-12);
  EXPECT_NEAR(wrange_distance(diag({1.0, 2.0})).distance, 1.0, 1e-8);
  // W of the Jordan block is the disk of radius 1/2 around 0
  EXPECT_EQ(wrange_distance(jordan2()).distance, 0.0);
  // shifted disk: center 2, radius 1/2
  EXPECT_NEAR(wrange_distance(jordan2() + 2.0 * I2).distance, 1.5, 1e-8);
}

TEST(WrangeDistanceFn, SampledRangeStaysOutside) {
  Rng rng(82);
  for (int k = 0; k < 5; ++k) {
    const Matrix a = positive_definite(3, rng) * std::polar(1.0, 0.7 * k);
    const WrangeDistance w = wrange_distance(a);
    EXPECT_GT(w.distance, 0.0);
    for (const Complex& z : sample_numerical_range(a, 2000, k).points) EXPECT_GE(std::abs(z), w.distance - 1e-8);
  }
}

TEST(WrangeDistanceFn, AgreesWithSampledSupportFunction) {
  // the distance is attained: some direction has all of W(A) beyond it
  Rng rng(83);
  const Matrix a = ginibre(3, rng) + 2.0 * Matrix::Identity(3, 3);
  const WrangeDistance w = wrange_distance(a);
  double best = -1e300;
  for (int k = 0; k < 20000; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / 20000;
    const Matrix h = 0.5 * (std::polar(1.0, theta) * a + std::polar(1.0, -theta) * a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    best = std::max(best, es.eigenvalues()(0));
  }
  EXPECT_NEAR(w.signed_value, best, 1e-6);
}

TEST(GeneralizedRange, MultipleOfA) {
  Rng rng(84);
  const Matrix a = ginibre(3, rng) + Matrix::Identity(3, 3);
  const Complex mu(0.5, 2.0);
  for (const Complex& z : sample_generalized_range(OperatorPair(mu * a, a, {}), 200, 1).points) {
    EXPECT_NEAR(std::abs(z - mu), 0.0, 1e-12);
  }
}

TEST(GeneralizedRange, ReflectionIsRealSegment) {
  const PointCloud c = sample_generalized_range(OperatorPair(diag({1.0, -1.0}), I2, {}), 500, 2);
  EXPECT_EQ(c.source, CloudSource::GeneralizedRange);
  for (const Complex& z : c.points) {
    EXPECT_NEAR(z.imag(), 0.0, 1e-15);
    EXPECT_LE(std::abs(z.real()), 1.0 + 1e-15);
  }
}

TEST(GeneralizedRange, JordanBlockHalfDisk) {
  const PointCloud c = sample_generalized_range(OperatorPair(jordan2(), I2, {}), 5000, 3);
  double largest = 0.0;
  for (const Complex& z : c.points) largest = std::max(largest, std::abs(z));
  EXPECT_LE(largest, 0.5 + 1e-12);
  EXPECT_NEAR(largest, 0.5, 1e-2);
}

TEST(SpectrumRadius, Examples) {
  const Circle four = spectrum_radius(diag({1.0, -1.0, Complex(0, 1), Complex(0, -1)}));
  EXPECT_NEAR(four.radius, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(four.center), 0.0, 1e-12);
  const Circle id = spectrum_radius(Matrix::Identity(3, 3));
  EXPECT_NEAR(id.radius, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(id.center - 1.0), 0.0, 1e-12);
  const Circle nil = spectrum_radius(jordan2());
  EXPECT_NEAR(nil.radius, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(nil.center), 0.0, 1e-12);
  // strict gap between radius and spectral circle for the Jordan block
  EXPECT_NEAR(radius(OperatorPair(jordan2(), I2, {})).value, 1.0, 1e-8);
}

TEST(ChainCheck, EqualOperators) {
  Rng rng(85);
  const Matrix a = positive_definite(3, rng);
  const ChainReport c = chain_check(OperatorPair(a, a, {}), {2000, 0, 16});
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.standard, 0.0, 1e-8);
  EXPECT_NEAR(c.tilde.value(), 0.0, 1e-6);
  EXPECT_NEAR(c.lower, 0.0, 1e-8);
}

TEST(ChainCheck, DiagonalPair) {
  const OperatorPair p(diag({1.0, -1.0}), diag({1.0, 2.0}), {});
  const ChainReport c = chain_check(p);
  EXPECT_TRUE(c.pass);
  ASSERT_TRUE(c.tilde_applicable);
  EXPECT_GE(*c.tilde, c.standard - c.tolerance);
  EXPECT_GE(c.standard, c.lower - c.tolerance);
  EXPECT_NEAR(c.standard, oracle_radius(p, Variant::Standard).value, 5e-3);
  EXPECT_NEAR(*c.tilde, oracle_radius(p, Variant::Tilde).value, 5e-3);
}

TEST(ChainCheck, TildeSkippedWhenZeroInRange) {
  const ChainReport c = chain_check(OperatorPair(jordan2(), diag({1.0, -1.0}), {}), {2000, 0, 16});
  EXPECT_FALSE(c.tilde_applicable);
  EXPECT_FALSE(c.tilde.has_value());
  EXPECT_TRUE(c.pass);
}

TEST(ChainCheck, RandomPositiveDefinite) {
  Rng rng(86);
  for (int k = 0; k < 10; ++k) {
    const ChainReport c = chain_check(OperatorPair(ginibre(3, rng), positive_definite(3, rng), {}), {3000, 0, 16});
    EXPECT_TRUE(c.pass) << "upper " << c.upper_gap << " lower " << c.lower_gap;
  }
}
