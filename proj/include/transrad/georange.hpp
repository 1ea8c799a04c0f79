#pragma once

// Planar geometry of the radii: numerical range distance, sampled generalized
// range W_T(A), smallest enclosing circles, and the chain
//   M̃_T(A) ≥ M_T(A) ≥ m_T(A) / ‖A⁻¹‖.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "transrad/radii.hpp"

namespace transrad {

enum class CloudSource { Spectrum, NumericalRange, GeneralizedRange, Points };

struct PointCloud {
  std::vector<Complex> points;
  CloudSource source = CloudSource::Points;
};

struct Circle {
  Complex center;
  double radius = 0.0;
  std::vector<std::size_t> support;  // at most 3 indices into the cloud
};

namespace detail {

inline Circle circle_two(const std::vector<Complex>& p, std::size_t i, std::size_t j) {
  return {0.5 * (p[i] + p[j]), 0.5 * std::abs(p[i] - p[j]), {i, j}};
}

inline Circle circle_three(const std::vector<Complex>& p, std::size_t i, std::size_t j, std::size_t k) {
  const Complex b = p[j] - p[i];
  const Complex c = p[k] - p[i];
  const double d = 2.0 * (b.real() * c.imag() - b.imag() * c.real());
  if (std::abs(d) <= 1e-300) {
    // Collinear: the circle on the farthest pair.
    Circle best = circle_two(p, i, j);
    for (const Circle& cand : {circle_two(p, i, k), circle_two(p, j, k)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  const double b2 = std::norm(b);
  const double c2 = std::norm(c);
  const Complex u((c.imag() * b2 - b.imag() * c2) / d, (b.real() * c2 - c.real() * b2) / d);
  return {p[i] + u, std::abs(u), {i, j, k}};
}

inline bool inside(const Circle& c, Complex z, double eps) { return std::abs(z - c.center) <= c.radius + eps; }

}  // namespace detail

/// Minimal enclosing circle (randomized incremental algorithm with a fixed
/// shuffle seed, so the output is deterministic).
inline Circle enclosing_circle(const PointCloud& cloud) {
  const std::vector<Complex>& p = cloud.points;
  if (p.empty()) throw Error(ErrorCode::InvalidVector, "empty point cloud");
  double scale = 0.0;
  for (const Complex& z : p) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::InvalidVector, "point cloud has non-finite entries");
    }
    scale = std::max(scale, std::abs(z));
  }
  const double eps = 1e-12 * std::max(1.0, scale);

  std::vector<std::size_t> order(p.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(0x5ec);
  std::shuffle(order.begin(), order.end(), rng);

  Circle c{p[order[0]], 0.0, {order[0]}};
  for (std::size_t a = 1; a < order.size(); ++a) {
    const std::size_t i = order[a];
    if (detail::inside(c, p[i], eps)) continue;
    c = {p[i], 0.0, {i}};
    for (std::size_t b = 0; b < a; ++b) {
      const std::size_t j = order[b];
      if (detail::inside(c, p[j], eps)) continue;
      c = detail::circle_two(p, i, j);
      for (std::size_t d = 0; d < b; ++d) {
        const std::size_t k = order[d];
        if (detail::inside(c, p[k], eps)) continue;
        c = detail::circle_three(p, i, j, k);
      }
    }
  }
  return c;
}

struct WrangeDistance {
  double distance = 0.0;      // max(signed_value, 0)
  double signed_value = 0.0;  // max over θ of λ_min(Re(e^{iθ}A)); ≤ 0 iff 0 ∈ W(A)
  double theta = 0.0;         // maximizing angle
};

/// Distance from 0 to the numerical range W(A). W(A) is convex and compact,
/// so its distance to 0 is the largest support offset max_θ λ_min(Re(e^{iθ}A))
/// when that is positive.
inline WrangeDistance wrange_distance(const Matrix& a, int theta_steps = 512, double refine_tol = 1e-8) {
  require_finite(a, "A");
  require_square(a, "A");
  const detail::RangeScan scan = detail::range_scan(a, theta_steps, refine_tol);
  return {std::max(scan.signed_value, 0.0), scan.signed_value, scan.theta};
}

/// Uniformly sampled points (Af, f) of W(A), plus the standard basis.
inline PointCloud sample_numerical_range(const Matrix& a, int samples, std::uint64_t seed) {
  require_finite(a, "A");
  require_square(a, "A");
  const Eigen::Index n = a.rows();
  PointCloud cloud{{}, CloudSource::NumericalRange};
  for (Eigen::Index k = 0; k < n; ++k) cloud.points.push_back(a(k, k));
  auto rng = detail::stream(seed, 0xa11);
  for (int s = 0; s < samples; ++s) {
    const UnitVector f = random_unit_vector(n, rng);
    cloud.points.push_back(f.vec().dot(a * f.vec()));
  }
  return cloud;
}

/// Inner approximation of W_T(A) = {(Tf,Af)/(Af,Af)}: λ(f) at seeded random
/// unit vectors, the standard basis and any extra vectors supplied.
inline PointCloud sample_generalized_range(const OperatorPair& pair, int samples, std::uint64_t seed,
                                           const std::vector<UnitVector>& extra = {}) {
  require_invertible(pair);
  const Eigen::Index n = pair.n();
  PointCloud cloud{{}, CloudSource::GeneralizedRange};
  for (Eigen::Index k = 0; k < n; ++k) cloud.points.push_back(deviation_at(pair, UnitVector::basis(n, k)).lambda);
  for (const UnitVector& f : extra) cloud.points.push_back(deviation_at(pair, f).lambda);
  auto rng = detail::stream(seed, 0x6e2);
  for (int s = 0; s < samples; ++s) {
    cloud.points.push_back(deviation_at(pair, random_unit_vector(n, rng)).lambda);
  }
  return cloud;
}

/// Smallest circle containing the spectrum of T.
inline Circle spectrum_radius(const Matrix& t) {
  require_finite(t, "T");
  require_square(t, "T");
  Eigen::ComplexEigenSolver<Matrix> solver(t, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigensolver failed");
  PointCloud cloud{{}, CloudSource::Spectrum};
  const Eigen::VectorXcd ev = solver.eigenvalues();
  for (Eigen::Index k = 0; k < ev.size(); ++k) cloud.points.push_back(ev(k));
  return enclosing_circle(cloud);
}

struct ChainOptions {
  int samples = 10000;
  std::uint64_t seed = 0;
  int starts = 16;
};

struct ChainReport {
  std::optional<double> tilde;  // M̃_T(A), absent when 0 ∈ W(A)
  double standard = 0.0;        // M_T(A)
  double lower = 0.0;           // m_T(A) · σ_min(A), m_T(A) from the sampled cloud
  double m_sampled = 0.0;
  double wrange_distance = 0.0;
  double upper_gap = 0.0;  // M_T(A) − M̃_T(A) (≤ 0 when the first link holds)
  double lower_gap = 0.0;  // lower − M_T(A) (≤ 0 when the second link holds)
  double tolerance = 0.0;
  bool tilde_applicable = false;
  bool pass = false;
};

/// Evaluates both links of the chain. The sampled m_T(A) is only a lower
/// bound of the true one, which can only make the second link easier to
/// satisfy. The tilde link is skipped when 0 ∈ W(A).
inline ChainReport chain_check(const OperatorPair& pair, const ChainOptions& opt = {}) {
  require_invertible(pair);
  ChainReport rep;
  const RadiusResult std_rad = radius(pair, opt.starts, opt.seed);
  rep.standard = std_rad.value;
  rep.wrange_distance = pair.wrange_distance();
  rep.tilde_applicable = rep.wrange_distance > pair.tol().rank_tol;
  rep.tolerance = 10.0 * pair.tol().opt_tol * std::max(1.0, rep.standard);
  if (rep.tilde_applicable) {
    RadiusOptions topt;
    topt.starts = opt.starts;
    topt.seed = opt.seed;
    topt.extra_starts.push_back(std_rad.maximizer);
    rep.tilde = radius_tilde(pair, topt).value;
    rep.upper_gap = rep.standard - *rep.tilde;
  }
  const PointCloud cloud = sample_generalized_range(pair, opt.samples, opt.seed, {std_rad.maximizer});
  rep.m_sampled = enclosing_circle(cloud).radius;
  rep.lower = rep.m_sampled * pair.sigma_min_A();
  rep.lower_gap = rep.lower - rep.standard;
  rep.pass = rep.lower_gap <= rep.tolerance && (!rep.tilde_applicable || rep.upper_gap <= rep.tolerance);
  return rep;
}

}  // namespace transrad
