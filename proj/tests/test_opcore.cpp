#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace transrad;
using namespace testing_support;

TEST(SpectralNorm, DiagonalAndZero) {
  EXPECT_NEAR(spectral_norm(diag({2.0, 0.0})), 2.0, 1e-14);
  EXPECT_EQ(spectral_norm(Matrix::Zero(3, 3)), 0.0);
}

TEST(SpectralNorm, JordanBlockIsOne) {
  EXPECT_NEAR(spectral_norm(jordan2()), 1.0, 1e-14);
  EXPECT_NEAR(closed_form_norm2(jordan2()), 1.0, 1e-14);
}

TEST(SpectralNorm, MatchesClosedFormOn2x2) {
  Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const Matrix m = ginibre(2, rng) * 3.0;
    EXPECT_NEAR(spectral_norm(m), closed_form_norm2(m), 1e-12 * closed_form_norm2(m));
  }
}

TEST(SpectralNorm, UnitaryInvariance) {
  Rng rng(12);
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k < 5; ++k) {
      const Matrix m = ginibre(n, rng);
      const double base = spectral_norm(m);
      const double moved = spectral_norm(unitary(n, rng) * m * unitary(n, rng));
      EXPECT_NEAR(moved, base, 1e-9 * base) << "n=" << n;
    }
  }
}

TEST(SpectralNorm, Homogeneity) {
  Rng rng(13);
  for (int k = 0; k < 20; ++k) {
    const Matrix m = ginibre(4, rng);
    const Complex c = random_complex(rng, 5.0);
    EXPECT_NEAR(spectral_norm(c * m), std::abs(c) * spectral_norm(m), 1e-9 * std::abs(c) * spectral_norm(m));
  }
}

TEST(SpectralNorm, NonFiniteRejected) {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    spectral_norm(m);
    FAIL() << "expected InvalidMatrix";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidMatrix);
  }
}

TEST(HermitianEigensystem, Diagonal) {
  const auto es = hermitian_eigensystem(diag({1.0, -1.0}));
  EXPECT_NEAR(es.values(0), -1.0, 1e-14);
  EXPECT_NEAR(es.values(1), 1.0, 1e-14);
}

TEST(HermitianEigensystem, Identity3) {
  const auto es = hermitian_eigensystem(Matrix::Identity(3, 3));
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(es.values(k), 1.0, 1e-14);
}

TEST(HermitianEigensystem, SwapMatrix) {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  const auto es = hermitian_eigensystem(m);
  EXPECT_NEAR(es.values(0), -1.0, 1e-14);
  EXPECT_NEAR(es.values(1), 1.0, 1e-14);
  // eigenvectors (1, -1)/√2 and (1, 1)/√2 up to phase
  const Vector minus = vec2(1.0, -1.0) / std::sqrt(2.0);
  const Vector plus = vec2(1.0, 1.0) / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(minus.dot(es.vectors.col(0))), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(plus.dot(es.vectors.col(1))), 1.0, 1e-12);
}

TEST(HermitianEigensystem, Reconstruction) {
  Rng rng(14);
  for (int n = 1; n <= 8; ++n) {
    const Matrix h = hermitian(n, rng);
    const auto es = hermitian_eigensystem(h);
    const Matrix back = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    EXPECT_LE(spectral_norm(h - back), 1e-8 * spectral_norm(h));
  }
}

TEST(HermitianEigensystem, RejectsNonHermitian) {
  try {
    hermitian_eigensystem(jordan2());
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
}

TEST(OperatorPair, IdentityPair) {
  const OperatorPair p(Matrix::Identity(2, 2), Matrix::Identity(2, 2), {});
  EXPECT_NEAR(p.sigma_min_A(), 1.0, 1e-14);
  EXPECT_TRUE(p.invertible());
}

TEST(OperatorPair, SingularAIsAcceptedButFlagged) {
  Rng rng(15);
  const OperatorPair p(ginibre(2, rng), diag({1.0, 0.0}), {});
  EXPECT_EQ(p.sigma_min_A(), 0.0);
  EXPECT_FALSE(p.invertible());
  try {
    require_invertible(p);
    FAIL() << "expected SingularDirection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularDirection);
  }
}

TEST(OperatorPair, DiagonalA) {
  Rng rng(16);
  const OperatorPair p(ginibre(2, rng), diag({1.0, 2.0}), {});
  EXPECT_NEAR(p.sigma_min_A(), 1.0, 1e-14);
}

TEST(OperatorPair, SigmaMinIsInverseNormOfInverse) {
  Rng rng(17);
  for (int n = 1; n <= 6; ++n) {
    const Matrix a = ginibre(n, rng) + Matrix::Identity(n, n);
    const OperatorPair p(ginibre(n, rng), a, {});
    const double expected = 1.0 / norm_via_gram(a.inverse());
    EXPECT_NEAR(p.sigma_min_A(), expected, 1e-8 * expected);
  }
}

TEST(OperatorPair, Rejections) {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NumericalFailure;  // sentinel: nothing thrown
  };
  EXPECT_EQ(code_of([] { OperatorPair(Matrix::Identity(2, 2), Matrix::Identity(3, 3), {}); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { OperatorPair(Matrix::Zero(2, 3), Matrix::Zero(2, 3), {}); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { OperatorPair(Matrix(0, 0), Matrix(0, 0), {}); }), ErrorCode::InvalidMatrix);
  EXPECT_EQ(code_of([] {
              ToleranceSet t;
              t.opt_tol = 0.0;
              OperatorPair(Matrix::Identity(2, 2), Matrix::Identity(2, 2), t);
            }),
            ErrorCode::InvalidTolerance);
  EXPECT_EQ(code_of([] {
              Matrix m = Matrix::Identity(2, 2);
              m(0, 0) = std::numeric_limits<double>::infinity();
              OperatorPair(m, Matrix::Identity(2, 2), {});
            }),
            ErrorCode::InvalidMatrix);
}

TEST(UnitVector, NormalizesAndRejectsZero) {
  const UnitVector u(vec2(3.0, 4.0));
  EXPECT_NEAR(u.vec().norm(), 1.0, 1e-15);
  EXPECT_NEAR(u(0).real(), 0.6, 1e-15);
  try {
    UnitVector z(Vector::Zero(2));
    FAIL() << "expected InvalidVector";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidVector);
  }
}

TEST(GaugeFixed, FirstSignificantComponentRealPositive) {
  const Vector v = vec2(0.0, Complex(0.0, -2.0));
  const Vector g = gauge_fixed(v);
  EXPECT_NEAR(g(1).real(), 2.0, 1e-15);
  EXPECT_EQ(g(1).imag(), 0.0);
  Rng rng(18);
  const Vector r = random_vector(4, rng);
  const Complex phase = std::polar(1.0, 1.234);
  EXPECT_LE((gauge_fixed(r) - gauge_fixed(phase * r)).norm(), 1e-14);
}

TEST(WrangeDistance, CachedOnPair) {
  const OperatorPair p(Matrix::Identity(2, 2), diag({1.0, 2.0}), {});
  EXPECT_NEAR(p.wrange_distance(), 1.0, 1e-8);
  EXPECT_EQ(p.wrange_distance(), p.wrange_distance());
}
