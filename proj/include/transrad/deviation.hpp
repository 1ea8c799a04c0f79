#pragma once

// Pointwise deviation of a unit vector f from being an eigenvector of the
// generalized problem Tf = λAf.

#include "transrad/opcore.hpp"

namespace transrad {

enum class Variant { Standard, Tilde };

constexpr std::string_view to_string(Variant v) noexcept {
  return v == Variant::Standard ? "standard" : "tilde";
}

struct DeviationReport {
  Complex lambda;  // coefficient of Af removed from Tf
  Vector h;        // residual Tf - lambda Af
  double value = 0.0;
  Variant variant = Variant::Standard;
};

/// Standard deviation: lambda = (Tf,Af)/(Af,Af), h is the component of Tf
/// orthogonal to Af.
inline DeviationReport deviation_at(const OperatorPair& pair, const UnitVector& f) {
  if (f.size() != pair.n()) throw Error(ErrorCode::DimensionMismatch, "vector dimension differs from pair");
  const Vector tf = pair.T() * f.vec();
  const Vector af = pair.A() * f.vec();
  const double af2 = af.squaredNorm();
  if (std::sqrt(af2) <= pair.tol().rank_tol) {
    throw Error(ErrorCode::KernelVector, "A nearly annihilates f");
  }
  DeviationReport r;
  r.lambda = af.dot(tf) / af2;
  r.h = tf - r.lambda * af;
  r.value = r.h.norm();
  r.variant = Variant::Standard;
  return r;
}

/// Tilde deviation: lambda = (Tf,f)/(Af,f).
inline DeviationReport deviation_tilde_at(const OperatorPair& pair, const UnitVector& f) {
  if (f.size() != pair.n()) throw Error(ErrorCode::DimensionMismatch, "vector dimension differs from pair");
  const Vector tf = pair.T() * f.vec();
  const Vector af = pair.A() * f.vec();
  const Complex afw = f.vec().dot(af);
  if (std::abs(afw) <= pair.tol().rank_tol) {
    throw Error(ErrorCode::NumericalRangeZero, "(Af, f) vanishes: f witnesses 0 in W(A)");
  }
  DeviationReport r;
  r.lambda = f.vec().dot(tf) / afw;
  r.h = tf - r.lambda * af;
  r.value = r.h.norm();
  r.variant = Variant::Tilde;
  return r;
}

inline DeviationReport deviation(const OperatorPair& pair, const UnitVector& f, Variant v) {
  return v == Variant::Standard ? deviation_at(pair, f) : deviation_tilde_at(pair, f);
}

/// ‖Tf‖² − |(Tf,Af)|²/(Af,Af); the squared standard deviation by expansion.
inline double deviation_squared_expanded(const OperatorPair& pair, const UnitVector& f) {
  const Vector tf = pair.T() * f.vec();
  const Vector af = pair.A() * f.vec();
  return tf.squaredNorm() - std::norm(af.dot(tf)) / af.squaredNorm();
}

/// The tilde deviation never falls below the standard one at the same f,
/// since lambda(f) is the least-squares coefficient.
inline bool pointwise_dominance_check(const OperatorPair& pair, const UnitVector& f) {
  const double tilde = deviation_tilde_at(pair, f).value;
  const double standard = deviation_at(pair, f).value;
  return tilde >= standard - pair.tol().identity_tol * std::max(1.0, standard);
}

}  // namespace transrad
