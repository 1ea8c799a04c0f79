#pragma once

// Stationary distance vectors: certification of the stationarity equation
// (T*−λ̄A*)(T−λA)f = ‖h‖²f, a branch-following search for stationary points,
// the adjoint duality of maximizers, and the two-eigenvector decomposition
// for selfadjoint pairs.

#include <optional>

#include "transrad/radii.hpp"

namespace transrad {

struct StationaryCertificate {
  UnitVector f;
  Complex lambda;
  double h_norm = 0.0;
  double residual = 0.0;  // ‖(T*−λ̄A*)(T−λA)f − ‖h‖²f‖
  bool is_stationary = false;
  int iterations = 0;
};

inline StationaryCertificate stationarity_certificate(const OperatorPair& pair, const UnitVector& f,
                                                      std::optional<double> tol = std::nullopt) {
  const DeviationReport dev = deviation_at(pair, f);
  const Matrix m = pair.T() - dev.lambda * pair.A();
  const double h2 = dev.value * dev.value;
  const double residual = (m.adjoint() * dev.h - h2 * f.vec()).norm();
  const double threshold = tol.value_or(pair.tol().opt_tol) * std::max(1.0, h2);
  return {f, dev.lambda, dev.value, residual, residual <= threshold, 0};
}

namespace detail {

inline Vector stationarity_residual_vector(const Matrix& t, const Matrix& a, const Vector& x) {
  const Vector f = x.normalized();
  const Vector tf = t * f;
  const Vector af = a * f;
  const Complex lambda = af.dot(tf) / af.squaredNorm();
  const Vector h = tf - lambda * af;
  return t.adjoint() * h - std::conj(lambda) * (a.adjoint() * h) - h.squaredNorm() * f;
}

inline Eigen::VectorXd realify(const Vector& v) {
  Eigen::VectorXd out(2 * v.size());
  out << v.real(), v.imag();
  return out;
}

/// One Levenberg-Marquardt step on the stationarity residual over the real
/// 2n-dimensional chart, with a central-difference Jacobian. Returns the
/// trial vector minimizing ‖r‖ over a short ladder of damping values.
inline Vector levenberg_step(const Matrix& t, const Matrix& a, const Vector& f, double current) {
  const Eigen::Index n = f.size();
  constexpr double eps = 1e-7;
  Eigen::MatrixXd jac(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    Vector xp = f;
    Vector xm = f;
    const Complex d = i < n ? Complex(eps, 0) : Complex(0, eps);
    xp(i % n) += d;
    xm(i % n) -= d;
    jac.col(i) = (realify(stationarity_residual_vector(t, a, xp)) -
                  realify(stationarity_residual_vector(t, a, xm))) / (2 * eps);
  }
  const Eigen::VectorXd r = realify(stationarity_residual_vector(t, a, f));
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  const Eigen::VectorXd jtr = jac.transpose() * r;
  const double base = std::max(jtj.diagonal().maxCoeff(), 1e-300);
  Vector best = f;
  double best_res = current;
  for (double damping : {1e-12, 1e-9, 1e-6, 1e-3, 1.0}) {
    const Eigen::MatrixXd lhs = jtj + damping * base * Eigen::MatrixXd::Identity(2 * n, 2 * n);
    const Eigen::VectorXd delta = lhs.ldlt().solve(-jtr);
    if (!delta.allFinite()) continue;
    Vector trial = f;
    trial.real() += delta.head(n);
    trial.imag() += delta.tail(n);
    trial.normalize();
    const double res = stationarity_residual_vector(t, a, trial).norm();
    if (res < best_res) {
      best_res = res;
      best = trial;
    }
  }
  return best;
}

}  // namespace detail

/// Self-consistent iteration f ← eigenvector of (T−λA)*(T−λA) at λ = λ(f),
/// choosing the eigen-branch with maximal overlap with the current iterate
/// (ties broken by the eigenvalue nearest ‖h‖²). Fixed points are exactly
/// the stationary vectors, of any index. Superpositions across eigen-branches
/// are repelling under this map, so whenever a branch step fails to reduce
/// the residual, and always once the residual is small, a Levenberg-Marquardt
/// step on the residual is taken instead.
/// The certificate of the last iterate is returned; is_stationary is false
/// when max_iter was exhausted.
inline StationaryCertificate find_stationary(const OperatorPair& pair, const UnitVector& start, int max_iter = 500,
                                             std::optional<double> tol = std::nullopt) {
  Vector f = start.vec();
  StationaryCertificate cert = stationarity_certificate(pair, start, tol);
  const double cluster_tol = pair.tol().identity_tol;
  for (int it = 0; it < max_iter && !cert.is_stationary; ++it) {
    // Near a stationary point polish locally first; a branch step there can
    // jump to a different stationary vector.
    if (cert.residual <= 1e-4 * std::max(1.0, cert.h_norm * cert.h_norm)) {
      const Vector lm = detail::levenberg_step(pair.T(), pair.A(), f, cert.residual);
      if (lm != f) {
        f = lm;
        cert = stationarity_certificate(pair, UnitVector(lm), tol);
        cert.iterations = it + 1;
        continue;
      }
    }
    const Matrix m = pair.T() - cert.lambda * pair.A();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.adjoint() * m);
    const Eigen::VectorXd& mu = solver.eigenvalues();
    const Matrix& v = solver.eigenvectors();
    const Eigen::Index n = mu.size();
    const double scale = std::max(1.0, std::abs(mu(n - 1)));
    const double target = cert.h_norm * cert.h_norm;

    // Project f onto each eigenvalue cluster; keep the largest projection.
    Vector best_p;
    double best_overlap = -1.0;
    double best_dist = 0.0;
    for (Eigen::Index k = 0; k < n;) {
      Eigen::Index end = k + 1;
      while (end < n && mu(end) - mu(end - 1) <= cluster_tol * scale) ++end;
      Vector p = Vector::Zero(n);
      for (Eigen::Index j = k; j < end; ++j) p += v.col(j) * v.col(j).dot(f);
      const double overlap = p.norm();
      const double dist = std::abs(0.5 * (mu(k) + mu(end - 1)) - target);
      if (overlap > best_overlap + 1e-12 || (std::abs(overlap - best_overlap) <= 1e-12 && dist < best_dist)) {
        best_p = std::move(p);
        best_overlap = overlap;
        best_dist = dist;
      }
      k = end;
    }
    const Complex phase = best_p.dot(f);
    if (std::abs(phase) > 0.0) best_p *= phase / std::abs(phase);
    StationaryCertificate next = stationarity_certificate(pair, UnitVector(best_p), tol);
    if (next.residual >= cert.residual) {
      const Vector lm = detail::levenberg_step(pair.T(), pair.A(), f, cert.residual);
      if (lm == f) break;  // neither step makes progress
      next = stationarity_certificate(pair, UnitVector(lm), tol);
    }
    f = next.f.vec();
    cert = std::move(next);
    cert.iterations = it + 1;
  }
  return cert;
}

struct DualityReport {
  double gap = 0.0;                // |M_{T*}(A*) − deviation of (T*, A*) at h/‖h‖|
  double adjoint_radius = 0.0;     // M_{T*}(A*) from an independent ascent
  double deviation_at_h = 0.0;
  Complex adjoint_lambda;          // coefficient of the adjoint pair at h/‖h‖
  Complex expected_lambda;         // conj of the primal coefficient
  double lambda_gap = 0.0;
};

/// If M_T(A) is attained at f then M_{T*}(A*) is attained at h/‖h‖. The
/// adjoint radius is recomputed from scratch so the comparison is between
/// independent pipelines.
inline DualityReport adjoint_duality_check(const OperatorPair& pair, const RadiusResult& radius_result,
                                           const RadiusOptions& opt = {}) {
  const DeviationReport& rep = radius_result.report;
  if (rep.h.norm() <= pair.tol().rank_tol) {
    throw Error(ErrorCode::DegenerateMaximizer, "residual vanishes at the maximizer (T is a multiple of A)");
  }
  const OperatorPair adj = pair.adjoint();
  const UnitVector g(rep.h);
  const DeviationReport at_h = deviation_at(adj, g);
  const RadiusResult adj_radius = radius(adj, opt);
  DualityReport out;
  out.adjoint_radius = adj_radius.value;
  out.deviation_at_h = at_h.value;
  out.gap = std::abs(adj_radius.value - at_h.value);
  out.adjoint_lambda = at_h.lambda;
  out.expected_lambda = std::conj(rep.lambda);
  out.lambda_gap = std::abs(out.adjoint_lambda - out.expected_lambda);
  return out;
}

struct Decomposition {
  Vector g1;  // h + ‖h‖f, eigenvector of T − λA for +‖h‖
  Vector g2;  // h − ‖h‖f, eigenvector of T − λA for −‖h‖
  Complex lambda;
  double h_norm = 0.0;
  double reconstruction_error = 0.0;  // ‖f − (g1 − g2)/(2‖h‖)‖
  double eigen_error1 = 0.0;          // ‖(T − λA)g1 − ‖h‖g1‖
  double eigen_error2 = 0.0;          // ‖(T − λA)g2 + ‖h‖g2‖
  double scale = 0.0;                 // ‖T‖ + |λ|‖A‖
  bool verified = false;              // both eigen-relations within identity_tol·scale
};

/// For selfadjoint T, A and a stationary f with (Tf, Af) real, writes f as
/// (g1 − g2)/(2‖h‖) with g1, g2 eigenvectors of T − λA for ±‖h‖, so that
/// Tg1 = (λA + ‖h‖)g1 and Tg2 = (λA − ‖h‖)g2.
inline Decomposition selfadjoint_decomposition(const OperatorPair& pair, const StationaryCertificate& cert) {
  const ToleranceSet& tol = pair.tol();
  const Matrix& t = pair.T();
  const Matrix& a = pair.A();
  if (spectral_norm(t - t.adjoint()) > tol.identity_tol * pair.norm_T() ||
      spectral_norm(a - a.adjoint()) > tol.identity_tol * pair.norm_A()) {
    throw Error(ErrorCode::NotSelfadjoint, "T and A must be selfadjoint");
  }
  if (!cert.is_stationary) throw Error(ErrorCode::HypothesisViolated, "f is not a certified stationary vector");
  const Vector& f = cert.f.vec();
  const Complex tfaf = (a * f).dot(t * f);
  if (std::abs(tfaf.imag()) > tol.identity_tol * std::abs(tfaf)) {
    throw Error(ErrorCode::HypothesisViolated, "(Tf, Af) is not real");
  }
  const DeviationReport dev = deviation_at(pair, cert.f);
  if (dev.value <= tol.rank_tol) {
    throw Error(ErrorCode::DegenerateStationary, "f is already an eigenvector (h = 0)");
  }
  // (Tf, Af) is real and (Af, Af) > 0, so λ is real up to rounding.
  const double lambda = dev.lambda.real();
  const Vector h = t * f - lambda * (a * f);
  const double hn = h.norm();

  Decomposition d;
  d.lambda = lambda;
  d.h_norm = hn;
  d.g1 = h + hn * f;
  d.g2 = h - hn * f;
  const Matrix m = t - lambda * a;
  d.eigen_error1 = (m * d.g1 - hn * d.g1).norm();
  d.eigen_error2 = (m * d.g2 + hn * d.g2).norm();
  d.reconstruction_error = (f - (d.g1 - d.g2) / (2.0 * hn)).norm();
  d.scale = pair.norm_T() + std::abs(lambda) * pair.norm_A();
  const double bound = tol.identity_tol * d.scale;
  d.verified = d.eigen_error1 <= bound && d.eigen_error2 <= bound;
  return d;
}

}  // namespace transrad
