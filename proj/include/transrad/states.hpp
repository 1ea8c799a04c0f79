#pragma once

// States on the algebra of n×n matrices, represented as density matrices ρ
// with g(U) = trace(ρU), and the functional
//   G(ρ) = g(T*T) − |g(A*T)|² / g(A*A)
// whose supremum over states equals the squared translatable radius.

#include <cstdint>
#include <optional>
#include <vector>

#include "transrad/radii.hpp"
#include "transrad/translation.hpp"

namespace transrad {

class DensityMatrix {
 public:
  /// Validates Hermitian, positive semidefinite, unit trace (all to identity_tol).
  explicit DensityMatrix(Matrix rho, double identity_tol = 1e-9) : rho_(std::move(rho)) {
    if (rho_.size() == 0 || rho_.rows() != rho_.cols() || !all_finite(rho_)) {
      throw Error(ErrorCode::NotAState, "density matrix must be square and finite");
    }
    if ((rho_ - rho_.adjoint()).norm() > identity_tol * std::max(1.0, rho_.norm())) {
      throw Error(ErrorCode::NotAState, "density matrix is not Hermitian");
    }
    rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
    const Complex tr = rho_.trace();
    if (std::abs(tr - 1.0) > identity_tol) throw Error(ErrorCode::NotAState, "trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues()(0) < -identity_tol) throw Error(ErrorCode::NotAState, "density matrix is not positive");
  }

  static DensityMatrix pure(const UnitVector& x) { return DensityMatrix(x.vec() * x.vec().adjoint()); }

  static DensityMatrix maximally_mixed(Eigen::Index n) {
    return DensityMatrix(Matrix::Identity(n, n) / static_cast<double>(n));
  }

  /// Random mixed state W W* / trace(W W*) with W a complex Gaussian n×n matrix.
  template <typename Rng>
  static DensityMatrix random(Eigen::Index n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix w(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) w(i, j) = Complex(normal(rng), normal(rng));
    const Matrix g = w * w.adjoint();
    return DensityMatrix(g / g.trace().real());
  }

  [[nodiscard]] const Matrix& matrix() const noexcept { return rho_; }
  [[nodiscard]] Eigen::Index n() const noexcept { return rho_.rows(); }

  /// g(U) = trace(ρU).
  [[nodiscard]] Complex apply(const Matrix& u) const { return (rho_ * u).trace(); }

 private:
  Matrix rho_;
};

/// Nearest density matrix in Frobenius norm: eigenvalues projected onto the
/// probability simplex.
inline Matrix project_to_states(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (x + x.adjoint()));
  const Eigen::VectorXd& mu = solver.eigenvalues();
  const Eigen::Index n = mu.size();
  // Sort-based simplex projection (eigenvalues are ascending).
  double cumulative = 0.0;
  double shift = 0.0;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    cumulative += mu(k);
    const double candidate = (cumulative - 1.0) / static_cast<double>(n - k);
    if (mu(k) - candidate > 0.0) shift = candidate;
  }
  Eigen::VectorXd p = (mu.array() - shift).max(0.0);
  p /= p.sum();
  return solver.eigenvectors() * p.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
}

struct StateFunctionalResult {
  double value = 0.0;
  DensityMatrix rho;
  double denominator = 0.0;  // g(A*A)
};

namespace detail {

struct StateOperators {
  Matrix tt;  // T*T
  Matrix at;  // A*T
  Matrix aa;  // A*A

  explicit StateOperators(const OperatorPair& pair)
      : tt(pair.T().adjoint() * pair.T()), at(pair.A().adjoint() * pair.T()), aa(pair.A().adjoint() * pair.A()) {}

  struct Value {
    double value;
    Complex q;
    double r;
  };

  [[nodiscard]] Value eval(const Matrix& rho) const {
    const double p = (rho * tt).trace().real();
    const Complex q = (rho * at).trace();
    const double r = (rho * aa).trace().real();
    return {p - std::norm(q) / r, q, r};
  }

  /// Gradient of G with respect to the real trace pairing ⟨X, dρ⟩ = tr(X dρ).
  [[nodiscard]] Matrix gradient(const Value& v) const {
    return tt - (std::conj(v.q) * at + v.q * at.adjoint()) / v.r + (std::norm(v.q) / (v.r * v.r)) * aa;
  }
};

struct StateAscent {
  Matrix rho;
  double value;
  bool converged;
};

/// Projected gradient ascent over density matrices with Armijo backtracking
/// along the projection arc.
inline StateAscent ascend_state(const StateOperators& ops, Matrix rho, double rank_tol, double tol, int max_iter) {
  auto cur = ops.eval(rho);
  double step = 1.0 / std::max(1e-300, ops.tt.norm() + ops.aa.norm());
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    const Matrix grad = ops.gradient(cur);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Matrix trial = project_to_states(rho + step * grad);
      const Matrix diff = trial - rho;
      const double decrease = (grad * diff).trace().real();
      const double r = (trial * ops.aa).trace().real();
      if (r > rank_tol) {
        const auto tv = ops.eval(trial);
        if (tv.value >= cur.value + 1e-4 * decrease) {
          const double moved = diff.norm() / step;
          rho = trial;
          cur = tv;
          accepted = true;
          step *= 2.0;
          if (moved <= tol * std::max(1.0, std::abs(cur.value))) converged = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      converged = true;  // stationary at working precision
      break;
    }
    if (converged) break;
  }
  return {rho, cur.value, converged};
}

}  // namespace detail

inline StateFunctionalResult state_value(const OperatorPair& pair, const DensityMatrix& rho) {
  if (rho.n() != pair.n()) throw Error(ErrorCode::DimensionMismatch, "state dimension differs from pair");
  const Matrix& t = pair.T();
  const Matrix& a = pair.A();
  const double r = rho.apply(a.adjoint() * a).real();
  if (r <= pair.tol().rank_tol) throw Error(ErrorCode::StateOutsideP, "g(A*A) vanishes");
  const double p = rho.apply(t.adjoint() * t).real();
  const Complex q = rho.apply(a.adjoint() * t);
  return {p - std::norm(q) / r, rho, r};
}

struct StateSupremumOptions {
  int starts = 16;
  std::uint64_t seed = 0;
  int max_iter = 2000;
};

struct StateSupremumResult {
  StateFunctionalResult best;
  double best_unseeded = 0.0;  // best over starts that do not use radius maximizers
  int starts_used = 0;
  int converged_starts = 0;
  double radius_value = 0.0;  // M_T(A) of the radius run that seeded the search
};

/// Maximizes G over density matrices. Starts: the maximally mixed state,
/// seeded random mixed states, and the pure state at the radius maximizer.
inline StateSupremumResult state_supremum(const OperatorPair& pair, const StateSupremumOptions& opt = {}) {
  require_invertible(pair);
  const detail::StateOperators ops(pair);
  const Eigen::Index n = pair.n();
  const double rank_tol = pair.tol().rank_tol;
  const double tol = pair.tol().opt_tol;

  std::vector<Matrix> starts;
  starts.push_back(DensityMatrix::maximally_mixed(n).matrix());
  for (int k = 0; k < opt.starts; ++k) {
    auto rng = detail::stream(opt.seed, 0x5eed0000ULL + static_cast<std::uint64_t>(k));
    starts.push_back(DensityMatrix::random(n, rng).matrix());
  }
  const std::size_t unseeded = starts.size();
  const RadiusResult rad = radius(pair, opt.starts, opt.seed);
  starts.push_back(DensityMatrix::pure(rad.maximizer).matrix());

  StateSupremumResult out{state_value(pair, DensityMatrix(starts.front())), 0.0, 0, 0, rad.value};
  out.best_unseeded = -std::numeric_limits<double>::infinity();
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const auto run = detail::ascend_state(ops, starts[k], rank_tol, tol, opt.max_iter);
    if (run.converged) ++out.converged_starts;
    if (k < unseeded) out.best_unseeded = std::max(out.best_unseeded, run.value);
    if (run.value > best_value) {
      best_value = run.value;
      out.best = state_value(pair, DensityMatrix(project_to_states(run.rho)));
    }
  }
  out.starts_used = static_cast<int>(starts.size());
  return out;
}

struct WilliamsResult {
  bool holds = false;  // ‖T‖ ≤ ‖T − λI‖ for all λ, decided via λ₀ = 0
  std::optional<DensityMatrix> rho;
  Complex lambda0;
  Complex trace_rho_t;  // g(T)
  double trace_rho_tt = 0.0;  // g(T*T)
  double norm_tt = 0.0;       // ‖T*T‖
};

namespace detail {

/// Minimum-modulus point of the convex hull of a few complex numbers, as
/// barycentric weights. Checks vertices, edge projections and triangle
/// containment exhaustively.
inline std::vector<double> min_norm_hull_weights(const std::vector<Complex>& w) {
  const std::size_t m = w.size();
  std::vector<double> best(m, 0.0);
  double best_mod = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(w[i]) < best_mod) {
      best_mod = std::abs(w[i]);
      std::fill(best.begin(), best.end(), 0.0);
      best[i] = 1.0;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const Complex d = w[j] - w[i];
      const double dd = std::norm(d);
      if (dd == 0.0) continue;
      const double s = std::clamp(-(std::conj(d) * w[i]).real() / dd, 0.0, 1.0);
      const double mod = std::abs(w[i] + s * d);
      if (mod < best_mod) {
        best_mod = mod;
        std::fill(best.begin(), best.end(), 0.0);
        best[i] = 1.0 - s;
        best[j] = s;
      }
    }
  }
  if (best_mod == 0.0) return best;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        // Barycentric coordinates of 0 in triangle (w_i, w_j, w_k).
        const Complex e1 = w[j] - w[i];
        const Complex e2 = w[k] - w[i];
        const double det = (std::conj(e1) * e2).imag();
        if (std::abs(det) < 1e-300) continue;
        const double b1 = (std::conj(-w[i]) * e2).imag() / det;
        const double b2 = (std::conj(e1) * -w[i]).imag() / det;
        const double b0 = 1.0 - b1 - b2;
        if (b0 >= 0.0 && b1 >= 0.0 && b2 >= 0.0) {
          std::fill(best.begin(), best.end(), 0.0);
          best[i] = b0;
          best[j] = b1;
          best[k] = b2;
          return best;
        }
      }
    }
  }
  return best;
}

}  // namespace detail

/// Williams' criterion: ‖T‖ ≤ ‖T − λI‖ for all λ iff some state g has
/// g(T*T) = ‖T*T‖ and g(T) = 0. The left side is decided by the minimal
/// translation in the direction of I; when it holds, a certificate ρ is built
/// on the top eigenspace of T*T as a mixture of pure states whose values
/// (Tx, x) surround 0.
inline WilliamsResult williams_certificate(const Matrix& t, const ToleranceSet& tol = {}) {
  require_finite(t, "T");
  require_square(t, "T");
  const Eigen::Index n = t.rows();
  const OperatorPair pair(t, Matrix::Identity(n, n), tol);
  WilliamsResult out;
  out.lambda0 = minimal_translation(pair).lambda0;
  const Matrix tt = t.adjoint() * t;
  out.norm_tt = pair.norm_T() * pair.norm_T();
  out.holds = std::abs(out.lambda0) <= tol.opt_tol * std::max(1.0, pair.norm_T());
  if (!out.holds) return out;

  // Top eigenspace of T*T.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (tt + tt.adjoint()));
  const Eigen::VectorXd& mu = solver.eigenvalues();
  const double top = mu(n - 1);
  const double cluster = tol.opt_tol * std::max(1.0, top);
  Eigen::Index dim = 0;
  while (dim < n && mu(n - 1 - dim) >= top - cluster) ++dim;
  const Matrix basis = solver.eigenvectors().rightCols(dim);
  const Matrix compressed = basis.adjoint() * t * basis;

  // Atoms: extreme points of W(compressed) in a fan of directions, then
  // Frank-Wolfe style atoms pointing against the current min-norm point.
  std::vector<Vector> atoms;
  std::vector<Complex> values;
  auto add_atom = [&](const Vector& y) {
    atoms.push_back(y.normalized());
    values.push_back(atoms.back().dot(compressed * atoms.back()));
  };
  auto extreme = [&](Complex direction) {
    // Minimizer over W of Re(conj(direction)·z).
    const Matrix h = 0.5 * (std::conj(direction) * compressed + direction * compressed.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    return Vector(es.eigenvectors().col(0));
  };
  add_atom(Vector::Unit(dim, 0));
  for (int k = 0; k < 16; ++k) add_atom(extreme(std::polar(1.0, 2.0 * std::numbers::pi * k / 16)));
  std::vector<double> weights;
  Complex z;
  for (;;) {
    weights = detail::min_norm_hull_weights(values);
    z = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) z += weights[k] * values[k];
    if (std::abs(z) <= 1e-3 * tol.opt_tol * std::max(1.0, pair.norm_T()) || atoms.size() >= 64) break;
    add_atom(extreme(z));
  }
  Matrix rho_small = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < atoms.size(); ++k) rho_small += weights[k] * atoms[k] * atoms[k].adjoint();
  const DensityMatrix rho(basis * rho_small * basis.adjoint());
  out.trace_rho_t = rho.apply(t);
  out.trace_rho_tt = rho.apply(tt).real();
  if (std::abs(out.trace_rho_t) > tol.opt_tol * std::max(1.0, pair.norm_T()) ||
      out.trace_rho_tt < out.norm_tt - tol.opt_tol * std::max(1.0, out.norm_tt)) {
    throw Error(ErrorCode::CertificateNotFound, "no state on the top eigenspace of T*T annihilates T");
  }
  out.rho = rho;
  return out;
}

}  // namespace transrad
