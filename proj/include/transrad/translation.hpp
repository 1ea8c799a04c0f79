#pragma once

// Minimal-norm translation: the unique λ₀ minimizing ‖T − λA‖ over λ ∈ C.

#include <cstdint>
#include <numbers>

#include "transrad/opcore.hpp"
#include "transrad/radii.hpp"

namespace transrad {

struct TranslationOptions {
  int grid = 33;        // coarse grid points per axis over the search disk
  int probes = 64;      // random probes for the optimality certificate
  std::uint64_t seed = 0;
};

struct TranslationResult {
  Complex lambda0;
  double min_norm = 0.0;
  // max over probe λ of min_norm − ‖T − λA‖; positive means a probe beat the optimum
  double probe_gap = 0.0;
  int iterations = 0;  // spectral-norm evaluations
  double search_radius = 0.0;
};

namespace detail {

class PencilNorm {
 public:
  PencilNorm(const Matrix& t, const Matrix& a) : t_(t), a_(a) {}

  double operator()(Complex lambda) {
    ++evaluations;
    return singular_values(t_ - lambda * a_)(0);
  }

  /// c = u*Av for the top singular pair of T − λA. When the top singular
  /// value is simple, ∇φ in (Re λ, Im λ) is (−Re c, Im c).
  std::pair<Complex, double> top_coupling(Complex lambda) {
    ++evaluations;
    const Matrix m = t_ - lambda * a_;
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double gap = s.size() > 1 ? s(0) - s(1) : s(0);
    const Vector v = svd.matrixV().col(0);
    const Vector u = m * v / s(0);
    return {u.dot(a_ * v), gap};
  }

  long evaluations = 0;

 private:
  const Matrix& t_;
  const Matrix& a_;
};

/// Nested golden-section minimization of a convex function of (x, y) over a
/// box. Partial minimization over y preserves convexity in x.
template <typename F>
std::pair<Complex, double> nested_golden(F&& fn, double x0, double x1, double y0, double y1, double xtol) {
  double best_y = 0.0;
  auto inner = [&](double x) {
    auto [y, v] = golden_minimize([&](double yy) { return fn(Complex(x, yy)); }, y0, y1, xtol);
    best_y = y;
    return v;
  };
  auto [x, v] = golden_minimize(inner, x0, x1, xtol);
  inner(x);
  return {Complex(x, best_y), v};
}

}  // namespace detail

/// Minimizes φ(λ) = ‖T − λA‖ over λ ∈ C. Any minimizer lies in the disk
/// |λ| ≤ 2‖T‖/σ_min(A), because φ(λ) ≥ |λ|σ_min(A) − ‖T‖ and φ(0) = ‖T‖.
/// A coarse grid locates the basin, nested golden-section search on a box
/// around it finds the minimum (the box grows while the minimum sits on its
/// edge), and where the top singular value is simple the stationarity
/// condition u*Av = 0 is polished with Newton steps.
inline TranslationResult minimal_translation(const OperatorPair& pair, const TranslationOptions& opt = {}) {
  require_invertible(pair);
  const Matrix& t = pair.T();
  const Matrix& a = pair.A();
  detail::PencilNorm phi(t, a);

  TranslationResult res;
  const double radius = 2.0 * pair.norm_T() / pair.sigma_min_A();
  res.search_radius = radius;
  if (radius == 0.0) {
    res.lambda0 = 0.0;
    res.min_norm = 0.0;
    return res;
  }

  const int g = std::max(opt.grid, 5);
  const double cell = 2.0 * radius / (g - 1);
  Complex best = 0.0;
  double best_val = phi(best);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const Complex z(-radius + i * cell, -radius + j * cell);
      if (std::abs(z) > radius + 0.5 * cell) continue;
      const double v = phi(z);
      if (v < best_val || (v == best_val && (z.real() < best.real() ||
                                              (z.real() == best.real() && z.imag() < best.imag())))) {
        best = z;
        best_val = v;
      }
    }
  }

  const double xtol = 1e-13 * std::max(1.0, radius);
  double half = 2.0 * cell;
  for (int round = 0; round < 40; ++round) {
    const Complex center = best;
    auto [z, v] = detail::nested_golden([&](Complex l) { return phi(l); }, center.real() - half,
                                        center.real() + half, center.imag() - half, center.imag() + half, xtol);
    if (v <= best_val) {
      best = z;
      best_val = v;
    }
    const double edge = 1e-3 * half;
    const bool on_edge = std::abs(z.real() - center.real()) > half - edge ||
                         std::abs(z.imag() - center.imag()) > half - edge;
    if (!on_edge || half > 4.0 * radius) break;
    half *= 2.0;
  }

  // Newton polish on c(λ) = 0 when the top singular value is simple.
  for (int it = 0; it < 8; ++it) {
    auto [c, gap] = phi.top_coupling(best);
    if (gap <= 1e-6 * std::max(1.0, best_val) || std::abs(c) <= 1e-15 * pair.norm_A()) break;
    const double hstep = 1e-7 * std::max(1.0, std::abs(best));
    const Complex cx = (phi.top_coupling(best + hstep).first - phi.top_coupling(best - hstep).first) / (2 * hstep);
    const Complex cy = (phi.top_coupling(best + Complex(0, hstep)).first -
                        phi.top_coupling(best - Complex(0, hstep)).first) /
                       (2 * hstep);
    Eigen::Matrix2d jac;
    jac << cx.real(), cy.real(), cx.imag(), cy.imag();
    const Eigen::Vector2d delta = jac.colPivHouseholderQr().solve(Eigen::Vector2d(-c.real(), -c.imag()));
    if (!delta.allFinite()) break;
    const Complex next = best + Complex(delta(0), delta(1));
    const double next_val = phi(next);
    const double noise = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, best_val);
    if (next_val > best_val + noise || std::abs(phi.top_coupling(next).first) >= std::abs(c)) break;
    best = next;
    best_val = next_val;
  }

  res.lambda0 = best;
  res.min_norm = best_val;

  // Optimality certificate: no probe λ may beat the optimum.
  auto rng = detail::stream(opt.seed, 0x7a11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  res.probe_gap = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < opt.probes; ++k) {
    // half the probes across the search disk, half close to λ₀
    const double r = (k % 2 == 0 ? radius : 1e-3 * std::max(radius, 1e-300)) * std::sqrt(unit(rng));
    const double ang = 2.0 * std::numbers::pi * unit(rng);
    const Complex probe = (k % 2 == 0 ? Complex(0.0) : best) + std::polar(r, ang);
    res.probe_gap = std::max(res.probe_gap, best_val - phi(probe));
  }
  res.iterations = static_cast<int>(phi.evaluations);
  return res;
}

/// |‖T − λ₀A‖ − M_T(A)|: the gap between the two independent pipelines.
inline double translation_radius_equality(const TranslationResult& translation, const RadiusResult& radius_result) {
  return std::abs(translation.min_norm - radius_result.value);
}

inline double translation_radius_equality(const OperatorPair& pair, const RadiusResult& radius_result) {
  return translation_radius_equality(minimal_translation(pair), radius_result);
}

/// Checks ‖T − c_T I‖² + |λ|² ≤ ‖T − c_T I + λI‖² for `trials` seeded λ drawn
/// uniformly from the disk |λ| ≤ 2‖T‖, where c_T is the minimal translation
/// of T in the direction of I.
inline bool stampfli_inequality_check(const Matrix& t, int trials, std::uint64_t seed, const ToleranceSet& tol = {}) {
  require_finite(t, "T");
  require_square(t, "T");
  const Eigen::Index n = t.rows();
  const OperatorPair pair(t, Matrix::Identity(n, n), tol);
  const TranslationResult tr = minimal_translation(pair);
  const Matrix centered = t - tr.lambda0 * Matrix::Identity(n, n);
  const double base = std::pow(spectral_norm(centered), 2);
  const double disk = 2.0 * pair.norm_T();
  const double slack = tol.identity_tol * std::max(1.0, pair.norm_T() * pair.norm_T());
  auto rng = detail::stream(seed, 0x57a);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < trials; ++k) {
    const Complex lambda = std::polar(disk * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
    const double rhs = std::pow(spectral_norm(centered + lambda * Matrix::Identity(n, n)), 2);
    if (base + std::norm(lambda) > rhs + slack) return false;
  }
  return true;
}

}  // namespace transrad
