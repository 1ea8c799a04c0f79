#pragma once

// Translatable radii: the suprema of the standard and tilde deviations over
// the unit sphere, computed by multi-start ascent, plus an exhaustive grid
// oracle for 2x2 pairs.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "transrad/deviation.hpp"

namespace transrad {

struct RadiusOptions {
  int starts = 16;  // seeded random starts, in addition to the deterministic ones
  std::uint64_t seed = 0;
  int max_iter = 4000;
  std::vector<UnitVector> extra_starts;  // appended to the deterministic starts
};

struct RadiusResult {
  double value = 0.0;
  UnitVector maximizer;
  DeviationReport report;
  int starts_used = 0;
  int converged_starts = 0;
  // Standard: ‖(T*−λ̄A*)(T−λA)f − ‖h‖²f‖ at the maximizer.
  // Tilde: norm of the numeric sphere gradient of the squared deviation.
  double stationary_residual = 0.0;
  bool converged = false;  // the reported maximizer came from a converged run
  Variant variant = Variant::Standard;
};

namespace detail {

struct StandardEval {
  Vector f;
  Complex lambda;
  Vector h;
  double phi = 0.0;  // ‖h‖²
  Vector r;          // (T−λA)*h − ‖h‖²f, the sphere gradient up to a factor 2
  double residual = 0.0;
};

inline StandardEval eval_standard(const Matrix& t, const Matrix& a, Vector f) {
  f.normalize();
  const Vector tf = t * f;
  const Vector af = a * f;
  StandardEval e;
  e.lambda = af.dot(tf) / af.squaredNorm();
  e.h = tf - e.lambda * af;
  e.phi = e.h.squaredNorm();
  e.r = t.adjoint() * e.h - std::conj(e.lambda) * (a.adjoint() * e.h) - e.phi * f;
  e.residual = e.r.norm();
  e.f = std::move(f);
  return e;
}

/// Projection of f onto the eigenspace of the top cluster of B, normalized
/// with nonnegative real overlap with f. Falls back to the top eigenvector
/// when f is orthogonal to that cluster.
inline Vector top_cluster_projection(const Matrix& b, const Vector& f, double cluster_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(b);
  const Eigen::VectorXd& mu = solver.eigenvalues();
  const Matrix& v = solver.eigenvectors();
  const Eigen::Index n = mu.size();
  const double top = mu(n - 1);
  const double tol = cluster_tol * std::max(1.0, std::abs(top));
  Vector p = Vector::Zero(n);
  for (Eigen::Index k = n - 1; k >= 0 && mu(k) >= top - tol; --k) {
    p += v.col(k) * v.col(k).dot(f);
  }
  if (p.norm() < 1e-8) p = v.col(n - 1);
  const Complex overlap = p.dot(f);
  if (std::abs(overlap) > 0.0) p *= overlap / std::abs(overlap);
  return p.normalized();
}

struct AscentRun {
  Vector f;
  double value2 = 0.0;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Ascent for the standard deviation. Primary step: the self-consistent
/// update f ← top eigenvector of (T−λA)*(T−λA) at λ = λ(f). It is accepted
/// only if the deviation does not drop by more than opt_tol and the
/// stationarity residual shrinks; otherwise a projected gradient step with
/// Armijo backtracking is taken.
inline AscentRun ascend_standard(const Matrix& t, const Matrix& a, const Vector& start, const ToleranceSet& tol,
                                 int max_iter) {
  StandardEval cur = eval_standard(t, a, start);
  const double scale_b = std::pow(spectral_norm(t) + spectral_norm(a) * std::abs(cur.lambda) + 1e-300, 2);
  double step = 1.0 / scale_b;
  int scf_cooldown = 0;
  AscentRun run;
  for (int it = 0; it < max_iter; ++it) {
    run.iterations = it;
    const double scale = std::max(1.0, cur.phi);
    if (cur.residual <= tol.opt_tol * scale) {
      run.converged = true;
      break;
    }
    if (scf_cooldown == 0) {
      const Matrix m = t - cur.lambda * a;
      StandardEval next = eval_standard(t, a, top_cluster_projection(m.adjoint() * m, cur.f, tol.identity_tol));
      if (next.phi >= cur.phi - tol.opt_tol * scale && next.residual < cur.residual) {
        cur = std::move(next);
        continue;
      }
      scf_cooldown = 10;
    } else {
      --scf_cooldown;
    }
    // Directional derivative of ‖h‖² along r is 2‖r‖².
    const double slope = 2.0 * cur.residual * cur.residual;
    bool accepted = false;
    // Near a maximum the Armijo gain drops below the resolution of ‖h‖²;
    // there a step is taken if it shrinks the residual without losing value.
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() * scale;
    for (int bt = 0; bt < 80; ++bt) {
      StandardEval trial = eval_standard(t, a, cur.f + step * cur.r);
      if (trial.phi >= cur.phi + 1e-4 * step * slope ||
          (trial.phi >= cur.phi - floor && trial.residual < 0.9 * cur.residual)) {
        cur = std::move(trial);
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no ascent possible at working precision
  }
  run.converged = run.converged || cur.residual <= tol.opt_tol * std::max(1.0, cur.phi);
  run.f = std::move(cur.f);
  run.value2 = cur.phi;
  run.residual = cur.residual;
  return run;
}

/// Squared tilde deviation at the (unnormalized) vector f, or -inf where
/// (Af, f) vanishes.
inline double tilde_value2(const Matrix& t, const Matrix& a, const Vector& x, double rank_tol) {
  const Vector f = x.normalized();
  const Vector tf = t * f;
  const Vector af = a * f;
  const Complex afw = f.dot(af);
  if (std::abs(afw) <= rank_tol) return -std::numeric_limits<double>::infinity();
  return (tf - (f.dot(tf) / afw) * af).squaredNorm();
}

/// Central-difference gradient of the squared tilde deviation on the real
/// 2n-dimensional chart, projected onto the tangent space at f.
inline Vector tilde_gradient(const Matrix& t, const Matrix& a, const Vector& f, double rank_tol) {
  constexpr double eps = 1e-6;
  const Eigen::Index n = f.size();
  Vector g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector xp = f;
    Vector xm = f;
    xp(i) += eps;
    xm(i) -= eps;
    const double dre = (tilde_value2(t, a, xp, rank_tol) - tilde_value2(t, a, xm, rank_tol)) / (2 * eps);
    xp = f;
    xm = f;
    xp(i) += Complex(0, eps);
    xm(i) -= Complex(0, eps);
    const double dim = (tilde_value2(t, a, xp, rank_tol) - tilde_value2(t, a, xm, rank_tol)) / (2 * eps);
    g(i) = Complex(dre, dim);
  }
  // Remove the radial component (real part of the overlap with f).
  g -= f * f.dot(g).real();
  return g;
}

inline AscentRun ascend_tilde(const Matrix& t, const Matrix& a, const Vector& start, const ToleranceSet& tol,
                              int max_iter) {
  Vector f = start.normalized();
  double psi = tilde_value2(t, a, f, tol.rank_tol);
  const double grad_tol = 1e-6;
  double step = 1.0 / std::pow(spectral_norm(t) + spectral_norm(a) + 1e-300, 2);
  AscentRun run;
  Vector g = tilde_gradient(t, a, f, tol.rank_tol);
  for (int it = 0; it < max_iter; ++it) {
    run.iterations = it;
    if (g.norm() <= grad_tol * std::max(1.0, psi)) {
      run.converged = true;
      break;
    }
    const double slope = g.squaredNorm();
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      const Vector trial = (f + step * g).normalized();
      const double trial_psi = tilde_value2(t, a, trial, tol.rank_tol);
      if (trial_psi >= psi + 1e-4 * step * slope) {
        f = trial;
        psi = trial_psi;
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    g = tilde_gradient(t, a, f, tol.rank_tol);
  }
  run.converged = run.converged || g.norm() <= grad_tol * std::max(1.0, psi);
  run.f = std::move(f);
  run.value2 = psi;
  run.residual = g.norm();
  return run;
}

/// Strict ordering used to reduce runs: larger value first, then the
/// lexicographically smaller gauge-fixed maximizer.
inline bool better_run(double va, const Vector& fa, double vb, const Vector& fb) {
  if (va != vb) return va > vb;
  for (Eigen::Index i = 0; i < fa.size(); ++i) {
    if (fa(i).real() != fb(i).real()) return fa(i).real() < fb(i).real();
    if (fa(i).imag() != fb(i).imag()) return fa(i).imag() < fb(i).imag();
  }
  return false;
}

inline std::vector<Vector> start_vectors(const OperatorPair& pair, const RadiusOptions& opt) {
  const Eigen::Index n = pair.n();
  std::vector<Vector> starts;
  for (Eigen::Index k = 0; k < n; ++k) starts.push_back(UnitVector::basis(n, k).vec());
  starts.push_back(top_right_singular_vector(pair.T()).vec());
  for (const auto& s : opt.extra_starts) {
    if (s.size() != n) throw Error(ErrorCode::DimensionMismatch, "extra start has wrong dimension");
    starts.push_back(s.vec());
  }
  for (int k = 0; k < opt.starts; ++k) {
    auto rng = stream(opt.seed, static_cast<std::uint64_t>(k));
    starts.push_back(random_unit_vector(n, rng).vec());
  }
  return starts;
}

template <typename Ascend>
RadiusResult run_starts(const OperatorPair& pair, const RadiusOptions& opt, Variant variant, Ascend&& ascend) {
  const std::vector<Vector> starts = start_vectors(pair, opt);
  std::optional<AscentRun> best;
  Vector best_gauge;
  int converged = 0;
  for (const Vector& s : starts) {
    AscentRun run = ascend(s);
    if (run.converged) ++converged;
    Vector gauge = gauge_fixed(run.f);
    if (!best || better_run(run.value2, gauge, best->value2, best_gauge)) {
      best = std::move(run);
      best_gauge = std::move(gauge);
    }
  }
  UnitVector maximizer(best_gauge);
  DeviationReport report = deviation(pair, maximizer, variant);
  RadiusResult result{report.value, maximizer, report, static_cast<int>(starts.size()), converged,
                      best->residual, best->converged, variant};
  return result;
}

}  // namespace detail

/// M_T(A): supremum of the standard deviation over unit vectors. Requires A
/// invertible. The result reports the best local maximum over all starts; a
/// run that never met the stationarity tolerance is flagged unconverged
/// rather than thrown.
inline RadiusResult radius(const OperatorPair& pair, const RadiusOptions& opt) {
  require_invertible(pair);
  return detail::run_starts(pair, opt, Variant::Standard, [&](const Vector& s) {
    return detail::ascend_standard(pair.T(), pair.A(), s, pair.tol(), opt.max_iter);
  });
}

inline RadiusResult radius(const OperatorPair& pair, int starts = 16, std::uint64_t seed = 0) {
  RadiusOptions opt;
  opt.starts = starts;
  opt.seed = seed;
  return radius(pair, opt);
}

/// M̃_T(A): supremum of the tilde deviation. Requires 0 ∉ W(A).
inline RadiusResult radius_tilde(const OperatorPair& pair, const RadiusOptions& opt) {
  if (pair.wrange_distance() <= pair.tol().rank_tol) {
    throw Error(ErrorCode::NumericalRangeZero, "0 lies in the closure of W(A)");
  }
  return detail::run_starts(pair, opt, Variant::Tilde, [&](const Vector& s) {
    return detail::ascend_tilde(pair.T(), pair.A(), s, pair.tol(), opt.max_iter);
  });
}

inline RadiusResult radius_tilde(const OperatorPair& pair, int starts = 16, std::uint64_t seed = 0) {
  RadiusOptions opt;
  opt.starts = starts;
  opt.seed = seed;
  return radius_tilde(pair, opt);
}

struct OracleConfig {
  int alpha_steps = 720;
  int beta_steps = 720;
  std::uint64_t seed = 0;  // unused by the deterministic grid; kept for report provenance
};

struct OracleResult {
  double value = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  long excluded = 0;  // grid points violating the variant's precondition
};

/// Exhaustive grid over f(α, β) = (cos α, e^{iβ} sin α), α ∈ [0, π/2],
/// β ∈ [0, 2π). Phase invariance makes this a complete parametrization of
/// deviation values on the sphere in C². Returns a lower bound on the radius.
inline OracleResult oracle_radius(const OperatorPair& pair, Variant variant, const OracleConfig& cfg = {}) {
  if (pair.n() != 2) throw Error(ErrorCode::UnsupportedDimension, "grid oracle needs a 2x2 pair");
  if (cfg.alpha_steps < 8 || cfg.beta_steps < 8) {
    throw Error(ErrorCode::InvalidTolerance, "oracle grids need at least 8 steps");
  }
  const Eigen::Matrix2cd t = pair.T();
  const Eigen::Matrix2cd a = pair.A();
  const double rank_tol = pair.tol().rank_tol;
  OracleResult best{-1.0, 0.0, 0.0, 0};
  long excluded = 0;
  for (int i = 0; i <= cfg.alpha_steps; ++i) {
    const double alpha = 0.5 * std::numbers::pi * i / cfg.alpha_steps;
    for (int j = 0; j < cfg.beta_steps; ++j) {
      const double beta = 2.0 * std::numbers::pi * j / cfg.beta_steps;
      const Eigen::Vector2cd f(std::cos(alpha), std::polar(std::sin(alpha), beta));
      const Eigen::Vector2cd tf = t * f;
      const Eigen::Vector2cd af = a * f;
      double value2 = 0.0;
      if (variant == Variant::Standard) {
        const double af2 = af.squaredNorm();
        if (std::sqrt(af2) <= rank_tol) {
          ++excluded;
          continue;
        }
        value2 = (tf - (af.dot(tf) / af2) * af).squaredNorm();
      } else {
        const Complex afw = f.dot(af);
        if (std::abs(afw) <= rank_tol) {
          ++excluded;
          continue;
        }
        value2 = (tf - (f.dot(tf) / afw) * af).squaredNorm();
      }
      if (value2 > best.value) best = {value2, alpha, beta, 0};
    }
  }
  best.value = std::sqrt(std::max(best.value, 0.0));
  best.excluded = excluded;
  return best;
}

}  // namespace transrad
