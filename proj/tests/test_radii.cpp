#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace transrad;
using namespace testing_support;

namespace {

const Matrix I2 = Matrix::Identity(2, 2);

template <typename F>
ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NumericalFailure;
}

}  // namespace

TEST(Radius, EqualOperatorsGiveZero) {
  Rng rng(31);
  const Matrix a = ginibre(3, rng) + Matrix::Identity(3, 3);
  const RadiusResult r = radius(OperatorPair(a, a, {}));
  EXPECT_NEAR(r.value, 0.0, 1e-12);
}

TEST(Radius, NormalDiagonalMatchesCircle) {
  const RadiusResult r = radius(OperatorPair(diag({1.0, -1.0, Complex(0, 1), Complex(0, -1)}),
                                             Matrix::Identity(4, 4), {}));
  EXPECT_NEAR(r.value, 1.0, 1e-6);
  EXPECT_TRUE(r.converged);
}

TEST(Radius, JordanBlockAttainedAtSecondBasisVector) {
  const RadiusResult r = radius(OperatorPair(jordan2(), I2, {}));
  EXPECT_NEAR(r.value, 1.0, 1e-8);
  EXPECT_GE(std::abs(r.maximizer(1)), 1.0 - 1e-6);
  EXPECT_NEAR(r.report.value, r.value, 1e-9);
  EXPECT_EQ(r.starts_used, 2 + 1 + 16);
}

TEST(Radius, MaximizerIsGaugeFixed) {
  Rng rng(32);
  const RadiusResult r = radius(OperatorPair(ginibre(3, rng), ginibre(3, rng) + Matrix::Identity(3, 3), {}));
  Eigen::Index first = 0;
  while (std::abs(r.maximizer(first)) <= 1e-8) ++first;
  EXPECT_GT(r.maximizer(first).real(), 0.0);
  EXPECT_EQ(r.maximizer(first).imag(), 0.0);
}

TEST(Radius, DeterministicForFixedSeed) {
  Rng rng(33);
  const OperatorPair p(ginibre(4, rng), ginibre(4, rng) + Matrix::Identity(4, 4), {});
  const RadiusResult a = radius(p, 16, 7);
  const RadiusResult b = radius(p, 16, 7);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.maximizer.vec(), b.maximizer.vec());
}

TEST(Radius, SingularARejected) {
  EXPECT_EQ(code_of([] { radius(OperatorPair(jordan2(), diag({1.0, 0.0}), {})); }), ErrorCode::SingularDirection);
}

TEST(RadiusTilde, EqualOperatorsGiveZero) {
  Rng rng(34);
  const Matrix a = positive_definite(3, rng);
  EXPECT_NEAR(radius_tilde(OperatorPair(a, a, {})).value, 0.0, 1e-8);
}

TEST(RadiusTilde, CoincidesWithStandardAtIdentity) {
  Rng rng(35);
  for (int k = 0; k < 5; ++k) {
    const OperatorPair p(ginibre(3, rng), Matrix::Identity(3, 3), {});
    const double s = radius(p).value;
    const double t = radius_tilde(p).value;
    EXPECT_NEAR(t, s, 1e-6 * std::max(1.0, s));
  }
}

TEST(RadiusTilde, DiagonalPairAgainstOracle) {
  const OperatorPair p(diag({1.0, -1.0}), diag({1.0, 2.0}), {});
  const double tilde = radius_tilde(p).value;
  const OracleResult o = oracle_radius(p, Variant::Tilde);
  EXPECT_NEAR(tilde, o.value, 5e-3);
  EXPECT_GE(tilde, o.value - 1e-4);
  EXPECT_GE(tilde, radius(p).value - 1e-8);
}

TEST(RadiusTilde, ZeroInNumericalRangeRejected) {
  EXPECT_EQ(code_of([] { radius_tilde(OperatorPair(jordan2(), diag({1.0, -1.0}), {})); }),
            ErrorCode::NumericalRangeZero);
}

TEST(Oracle, EqualOperators) {
  const OracleResult o = oracle_radius(OperatorPair(I2, I2, {}), Variant::Standard, {90, 90, 0});
  EXPECT_NEAR(o.value, 0.0, 1e-15);
}

TEST(Oracle, JordanBlock) {
  // closed form: the squared deviation at (a, b) is |b|⁴, maximum 1
  const OracleResult o = oracle_radius(OperatorPair(jordan2(), I2, {}), Variant::Standard);
  EXPECT_NEAR(o.value, 1.0, 1e-4);
}

TEST(Oracle, Reflection) {
  const OracleResult o = oracle_radius(OperatorPair(diag({1.0, -1.0}), I2, {}), Variant::Standard);
  EXPECT_NEAR(o.value, 1.0, 1e-4);
  EXPECT_NEAR(o.alpha, std::numbers::pi / 4, 1e-2);
}

TEST(Oracle, OnlyForTwoByTwo) {
  const Matrix i3 = Matrix::Identity(3, 3);
  EXPECT_EQ(code_of([&] { oracle_radius(OperatorPair(i3, i3, {}), Variant::Standard); }),
            ErrorCode::UnsupportedDimension);
}

TEST(RadiusInvariants, AgreesWithOracleOnRandomPairs) {
  Rng rng(36);
  for (int k = 0; k < 8; ++k) {
    const OperatorPair p(ginibre(2, rng) * 2.0, well_conditioned(2, rng, 0.3), {});
    const double r = radius(p).value;
    const double o = oracle_radius(p, Variant::Standard, {360, 360, 0}).value;
    EXPECT_GE(r, o - 1e-4);
    EXPECT_LE(std::abs(r - o), 5e-3);
  }
}

TEST(RadiusInvariants, TranslationInDirectionOfA) {
  Rng rng(37);
  for (int k = 0; k < 6; ++k) {
    const Matrix t = ginibre(3, rng);
    const Matrix a = ginibre(3, rng) + Matrix::Identity(3, 3);
    const Complex mu = random_complex(rng);
    const double base = radius(OperatorPair(t, a, {})).value;
    const double moved = radius(OperatorPair(t + mu * a, a, {})).value;
    EXPECT_NEAR(moved, base, 1e-6 * std::max(1.0, base));
  }
}

TEST(RadiusInvariants, UnitaryEquivalence) {
  Rng rng(38);
  for (int k = 0; k < 6; ++k) {
    const Matrix t = ginibre(3, rng);
    const Matrix a = ginibre(3, rng) + Matrix::Identity(3, 3);
    const Matrix u = unitary(3, rng);
    const Matrix v = unitary(3, rng);
    const double base = radius(OperatorPair(t, a, {})).value;
    const double moved = radius(OperatorPair(u * t * v, u * a * v, {})).value;
    EXPECT_NEAR(moved, base, 1e-6 * std::max(1.0, base));
  }
}

TEST(RadiusInvariants, TildeDominatesStandard) {
  Rng rng(39);
  for (int k = 0; k < 6; ++k) {
    const OperatorPair p(ginibre(3, rng), positive_definite(3, rng), {});
    EXPECT_GE(radius_tilde(p).value, radius(p).value - p.tol().opt_tol);
  }
}

TEST(RadiusInvariants, NormalOperatorAtIdentityMatchesSpectrumCircle) {
  Rng rng(40);
  for (int k = 0; k < 5; ++k) {
    const Matrix t = normal_matrix(4, rng);
    const OperatorPair p(t, Matrix::Identity(4, 4), {});
    EXPECT_NEAR(radius(p).value, spectrum_radius(t).radius, 5e-3);
  }
}

TEST(RadiusInvariants, ClassicalLowerBoundsAtIdentity) {
  Rng rng(41);
  for (int k = 0; k < 5; ++k) {
    const Matrix t = ginibre(3, rng) * 2.0;
    const double m = radius(OperatorPair(t, Matrix::Identity(3, 3), {})).value;
    EXPECT_GE(m, spectrum_radius(t).radius - 5e-3);
    EXPECT_GE(m, enclosing_circle(sample_numerical_range(t, 4000, k)).radius - 5e-3);
  }
}

TEST(RadiusInvariants, StationaryAtMaximizer) {
  Rng rng(42);
  for (int n : {2, 3, 5, 8}) {
    const OperatorPair p(ginibre(n, rng), ginibre(n, rng) + Matrix::Identity(n, n), {});
    const RadiusResult r = radius(p);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.stationary_residual, p.tol().opt_tol * std::max(1.0, r.value * r.value));
  }
}
