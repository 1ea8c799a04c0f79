#pragma once

// Complex linear-algebra contracts shared by every module: matrix and vector
// types, tolerances, spectral norm, Hermitian eigensystems and the validated
// operator pair (T, A).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "transrad/errors.hpp"

namespace transrad {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct ToleranceSet {
  double identity_tol = 1e-9;
  double opt_tol = 1e-8;
  double rank_tol = 1e-12;

  void validate() const {
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(identity_tol) || !positive(opt_tol) || !positive(rank_tol)) {
      throw Error(ErrorCode::InvalidTolerance, "tolerances must be finite and strictly positive");
    }
    if (identity_tol < rank_tol) {
      throw Error(ErrorCode::InvalidTolerance, "identity_tol must be >= rank_tol");
    }
  }
};

inline bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

inline void require_finite(const Matrix& m, const char* name = "matrix") {
  if (m.size() == 0) throw Error(ErrorCode::InvalidMatrix, std::string(name) + " is empty");
  if (!all_finite(m)) throw Error(ErrorCode::InvalidMatrix, std::string(name) + " has non-finite entries");
}

inline void require_square(const Matrix& m, const char* name = "matrix") {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(name) + " is not square");
  }
}

/// A vector of unit Euclidean norm. Construction normalizes.
class UnitVector {
 public:
  explicit UnitVector(Vector v) : v_(std::move(v)) {
    if (v_.size() == 0 || !all_finite(v_)) {
      throw Error(ErrorCode::InvalidVector, "vector is empty or has non-finite entries");
    }
    const double norm = v_.norm();
    if (!(norm > 0.0)) throw Error(ErrorCode::InvalidVector, "cannot normalize the zero vector");
    v_ /= norm;
  }

  static UnitVector basis(Eigen::Index n, Eigen::Index k) {
    Vector e = Vector::Zero(n);
    e(k) = 1.0;
    return UnitVector(std::move(e));
  }

  [[nodiscard]] const Vector& vec() const noexcept { return v_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return v_.size(); }
  Complex operator()(Eigen::Index i) const { return v_(i); }
  operator const Vector&() const noexcept { return v_; }  // NOLINT(google-explicit-constructor)

 private:
  Vector v_;
};

/// Rotates the global phase so the first component with modulus above 1e-8
/// (relative to the vector norm) is real and positive.
inline Vector gauge_fixed(Vector v) {
  const double norm = v.norm();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mod = std::abs(v(i));
    if (mod > 1e-8 * norm) {
      v *= std::conj(v(i)) / mod;
      v(i) = Complex(v(i).real(), 0.0);
      break;
    }
  }
  return v;
}

inline UnitVector gauge_fixed(const UnitVector& f) { return UnitVector(gauge_fixed(f.vec())); }

/// Singular values in decreasing order.
inline Eigen::VectorXd singular_values(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

inline double spectral_norm(const Matrix& m) {
  if (!all_finite(m)) throw Error(ErrorCode::InvalidMatrix, "non-finite entries");
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

inline double smallest_singular_value(const Matrix& m) {
  const Eigen::VectorXd s = singular_values(m);
  return s(s.size() - 1);
}

inline bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tol * m.norm();
}

struct HermitianEigensystem {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // columns orthonormal
};

/// Eigen-decomposition of a Hermitian matrix. Hermiticity is checked with the
/// Frobenius norm against identity_tol.
inline HermitianEigensystem hermitian_eigensystem(const Matrix& m, double identity_tol = 1e-9) {
  require_finite(m);
  require_square(m);
  if (!is_hermitian(m, identity_tol)) {
    throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian within tolerance");
  }
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "Hermitian eigensolver failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent stream for sub-task `index` of a run seeded with `seed`.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
template <typename F>
std::pair<double, double> golden_maximize(F&& fn, double lo, double hi, double xtol, int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = fn(x1);
  double f2 = fn(x2);
  for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = fn(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = fn(x2);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

template <typename F>
std::pair<double, double> golden_minimize(F&& fn, double lo, double hi, double xtol, int max_iter = 200) {
  auto [x, f] = golden_maximize([&](double t) { return -fn(t); }, lo, hi, xtol, max_iter);
  return {x, -f};
}

/// Smallest eigenvalue of the Hermitian part of e^{iθ}A.
inline double rotated_hermitian_min(const Matrix& a, double theta) {
  const Complex rot = std::polar(1.0, theta);
  const Matrix h = 0.5 * (rot * a + std::conj(rot) * a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

struct RangeScan {
  double signed_value = 0.0;  // max over θ of λ_min(Re(e^{iθ}A))
  double theta = 0.0;
};

/// θ-grid scan of λ_min(Re(e^{iθ}A)) with golden-section refinement around the
/// best grid angle. A positive maximum is the distance from 0 to W(A).
inline RangeScan range_scan(const Matrix& a, int theta_steps, double refine_tol) {
  const int steps = std::max(theta_steps, 8);
  const double dtheta = 2.0 * std::numbers::pi / steps;
  RangeScan best{-std::numeric_limits<double>::infinity(), 0.0};
  for (int k = 0; k < steps; ++k) {
    const double theta = k * dtheta;
    const double v = rotated_hermitian_min(a, theta);
    if (v > best.signed_value) best = {v, theta};
  }
  auto [theta, value] = golden_maximize([&](double t) { return rotated_hermitian_min(a, t); },
                                        best.theta - dtheta, best.theta + dtheta, refine_tol);
  if (value > best.signed_value) best = {value, theta};
  return best;
}

struct PairCache {
  std::once_flag once;
  RangeScan scan;
};

}  // namespace detail

/// Validated operator pair (T, A) of equal square dimension. Validation never
/// rejects a singular A; each consumer checks the hypothesis it needs.
class OperatorPair {
 public:
  OperatorPair(Matrix t, Matrix a, ToleranceSet tol)
      : t_(std::move(t)), a_(std::move(a)), tol_(tol), cache_(std::make_shared<detail::PairCache>()) {
    tol_.validate();
    require_finite(t_, "T");
    require_finite(a_, "A");
    require_square(t_, "T");
    require_square(a_, "A");
    if (t_.rows() != a_.rows()) throw Error(ErrorCode::DimensionMismatch, "T and A differ in dimension");
    const Eigen::VectorXd sa = singular_values(a_);
    norm_a_ = sa(0);
    sigma_min_a_ = sa(sa.size() - 1);
    norm_t_ = spectral_norm(t_);
  }

  [[nodiscard]] const Matrix& T() const noexcept { return t_; }
  [[nodiscard]] const Matrix& A() const noexcept { return a_; }
  [[nodiscard]] Eigen::Index n() const noexcept { return t_.rows(); }
  [[nodiscard]] const ToleranceSet& tol() const noexcept { return tol_; }
  [[nodiscard]] double sigma_min_A() const noexcept { return sigma_min_a_; }
  [[nodiscard]] double norm_T() const noexcept { return norm_t_; }
  [[nodiscard]] double norm_A() const noexcept { return norm_a_; }

  /// 0 ∉ σ_app(A); in finite dimension, A invertible.
  [[nodiscard]] bool invertible() const noexcept { return sigma_min_a_ > tol_.rank_tol; }

  /// Distance from 0 to W(A) (0 when 0 ∈ W(A)), computed on first use with a
  /// 512-step θ-grid.
  [[nodiscard]] double wrange_distance() const { return std::max(wrange_signed(), 0.0); }

  [[nodiscard]] double wrange_signed() const {
    std::call_once(cache_->once, [this] { cache_->scan = detail::range_scan(a_, 512, tol_.opt_tol); });
    return cache_->scan.signed_value;
  }

  /// The adjoint pair (T*, A*).
  [[nodiscard]] OperatorPair adjoint() const { return {t_.adjoint(), a_.adjoint(), tol_}; }

 private:
  Matrix t_;
  Matrix a_;
  ToleranceSet tol_;
  double sigma_min_a_ = 0.0;
  double norm_t_ = 0.0;
  double norm_a_ = 0.0;
  std::shared_ptr<detail::PairCache> cache_;
};

inline OperatorPair validate_pair(const Matrix& t, const Matrix& a, const ToleranceSet& tol = {}) {
  return {t, a, tol};
}

inline void require_invertible(const OperatorPair& pair) {
  if (!pair.invertible()) {
    throw Error(ErrorCode::SingularDirection, "A is singular (0 is an approximate eigenvalue of A)");
  }
}

/// Uniformly distributed unit vector (normalized complex Gaussian).
template <typename Rng>
UnitVector random_unit_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(normal(rng), normal(rng));
  return UnitVector(std::move(v));
}

/// Top right-singular vector of m.
inline UnitVector top_right_singular_vector(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  return UnitVector(svd.matrixV().col(0));
}

}  // namespace transrad
