#pragma once

// Extraction of covariant 2-tensors from two-point functions by finite
// differences along unfolded curve pairs, potential-function checks, and
// the f <-> g correspondence.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "qig/divergences.hpp"
#include "qig/metrics.hpp"
#include "qig/states.hpp"

namespace qig {

inline constexpr double kDefaultStep = 1e-3;

/// s ↦ (U e^{isH}, p + s a) through base with velocity generator.
struct CurveFamily {
  UnfoldedPoint base;
  UnfoldedTangent generator;

  [[nodiscard]] UnfoldedPoint realize(double s) const { return advance(base, generator, s); }
  [[nodiscard]] DensityMatrix state(double s) const { return fold(realize(s)); }
};

struct ExtractionReport {
  double value_ll = 0.0;
  double value_rr = 0.0;
  double value_lr = 0.0;
  double value_rl = 0.0;
  std::pair<double, double> first_order_residuals{0.0, 0.0};
  double step = kDefaultStep;
  bool richardson_used = true;

  /// g = −g_lr.
  [[nodiscard]] double tensor() const noexcept { return -value_lr; }
  [[nodiscard]] double consistency_delta() const {
    return std::max({std::abs(value_ll - value_rr), std::abs(value_ll + value_lr),
                     std::abs(value_lr - value_rl)});
  }
};

namespace detail {

inline void require_step(double h) {
  if (!(h >= 1e-5 && h <= 1e-2)) throw DomainError("extraction: step h must lie in [1e-5, 1e-2]");
}

inline double finite_or_throw(double v) {
  if (!std::isfinite(v)) throw DomainError("extraction: non-finite divergence evaluation");
  return v;
}

inline double richardson(const std::function<double(double)>& stencil, double h, bool use) {
  const double coarse = stencil(h);
  if (!use) return coarse;
  return (4.0 * stencil(0.5 * h) - coarse) / 3.0;
}

/// d/ds S(c(s), base) (left) or S(base, c(s)) (right) at s = 0.
inline double first_derivative(const DivergenceSpec& spec, const CurveFamily& c, bool left, double h,
                               bool use_richardson) {
  const DensityMatrix base = fold(c.base);
  auto eval = [&](double s) {
    const DensityMatrix moved = c.state(s);
    return finite_or_throw(left ? spec(moved, base) : spec(base, moved));
  };
  // Central differences cancel even orders, so Richardson removes the h² term.
  return richardson([&](double k) { return (eval(k) - eval(-k)) / (2.0 * k); }, h, use_richardson);
}

/// d²/ds² S(c(s), base) (left) or S(base, c(s)) (right) at s = 0.
inline double pure_second(const DivergenceSpec& spec, const CurveFamily& c, bool left, double h,
                          bool use_richardson) {
  const DensityMatrix base = fold(c.base);
  const double centre = finite_or_throw(spec(base, base));
  auto eval = [&](double s) {
    const DensityMatrix moved = c.state(s);
    return finite_or_throw(left ? spec(moved, base) : spec(base, moved));
  };
  return richardson([&](double k) { return (eval(k) - 2.0 * centre + eval(-k)) / (k * k); }, h,
                    use_richardson);
}

/// ∂²/∂s∂u S(c1(s), c2(u)) at 0.
inline double mixed_second(const DivergenceSpec& spec, const CurveFamily& c1, const CurveFamily& c2,
                           double h, bool use_richardson) {
  auto stencil = [&](double k) {
    const DensityMatrix l_plus = c1.state(k);
    const DensityMatrix l_minus = c1.state(-k);
    const DensityMatrix r_plus = c2.state(k);
    const DensityMatrix r_minus = c2.state(-k);
    const double pp = finite_or_throw(spec(l_plus, r_plus));
    const double pm = finite_or_throw(spec(l_plus, r_minus));
    const double mp = finite_or_throw(spec(l_minus, r_plus));
    const double mm = finite_or_throw(spec(l_minus, r_minus));
    return (pp - pm - mp + mm) / (4.0 * k * k);
  };
  return richardson(stencil, h, use_richardson);
}

/// Bilinear value from pure second derivatives by polarization.
inline double polarized(const DivergenceSpec& spec, const UnfoldedPoint& x, const UnfoldedTangent& t1,
                        const UnfoldedTangent& t2, bool left, double h, bool use_richardson) {
  const double plus = pure_second(spec, {x, t1 + t2}, left, h, use_richardson);
  const double minus = pure_second(spec, {x, t1 - t2}, left, h, use_richardson);
  return 0.25 * (plus - minus);
}

}  // namespace detail

/// Absolute first derivatives of S along t in the left and right slots.
inline std::pair<double, double> check_potential(const DivergenceSpec& spec, const UnfoldedPoint& x,
                                                 const UnfoldedTangent& t, double h = kDefaultStep,
                                                 bool use_richardson = true) {
  detail::require_step(h);
  const CurveFamily c{x, t};
  return {std::abs(detail::first_derivative(spec, c, true, h, use_richardson)),
          std::abs(detail::first_derivative(spec, c, false, h, use_richardson))};
}

inline ExtractionReport extract_tensor(const DivergenceSpec& spec, const UnfoldedPoint& x,
                                       const UnfoldedTangent& t1, const UnfoldedTangent& t2,
                                       double h = kDefaultStep, bool use_richardson = true) {
  detail::require_step(h);
  if (x.dim() != t1.dim() || x.dim() != t2.dim()) {
    throw DimensionMismatch("extract_tensor: dimension mismatch");
  }
  const CurveFamily c1{x, t1};
  const CurveFamily c2{x, t2};
  ExtractionReport r;
  r.step = h;
  r.richardson_used = use_richardson;
  r.value_ll = detail::polarized(spec, x, t1, t2, true, h, use_richardson);
  r.value_rr = detail::polarized(spec, x, t1, t2, false, h, use_richardson);
  r.value_lr = detail::mixed_second(spec, c1, c2, h, use_richardson);
  r.value_rl = detail::mixed_second(spec, c2, c1, h, use_richardson);
  const auto p1 = check_potential(spec, x, t1, h, use_richardson);
  const auto p2 = check_potential(spec, x, t2, h, use_richardson);
  r.first_order_residuals = {std::max(p1.first, p2.first), std::max(p1.second, p2.second)};
  return r;
}

/// −∂²/∂p_j∂q_k of a classical two-point function at q = p, for raw
/// coordinate directions (no simplex constraint).
inline Eigen::MatrixXd extract_classical(const std::function<double(const RVector&, const RVector&)>& fn,
                                         const RVector& p, double h = kDefaultStep,
                                         bool use_richardson = true) {
  detail::require_step(h);
  const Eigen::Index n = p.size();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      auto stencil = [&](double s) {
        RVector lp = p, lm = p, rp = p, rm = p;
        lp(j) += s;
        lm(j) -= s;
        rp(k) += s;
        rm(k) -= s;
        const double v = fn(lp, rp) - fn(lp, rm) - fn(lm, rp) + fn(lm, rm);
        return detail::finite_or_throw(v) / (4.0 * s * s);
      };
      out(j, k) = -detail::richardson(stencil, h, use_richardson);
    }
  }
  return out;
}

/// Σ p_j ln(p_j/q_j) on unnormalized positive vectors.
inline double kl_sum(const RVector& p, const RVector& q) {
  return (p.array() * (p.array().log() - q.array().log())).sum();
}

// ---------------------------------------------------------------------------
// f <-> g

/// f(x) = (1−x)² / (g(x) + x g(1/x)). Near x = 1 the quotient cancels, so
/// for |ln x| < 1e-2 the even function φ(u) = f(eᵘ) e^{−u/2} is replaced by
/// φ(0) + A u² + B u⁴ with φ(0) = 1/g''(1) and A, B fitted at u = 1e-2, 2e-2.
inline MonotoneFunction f_from_g(const GFunction& g) {
  if (std::abs(g(1.0)) > tol::kConstruct) {
    throw DomainError("f_from_g: g(1) != 0 for '" + g.name() + "'");
  }
  const double curvature = g.normalized_curvature() ? 1.0 : g.second_derivative_at_one();
  if (!(curvature > 0.0)) throw DomainError("f_from_g: g''(1) must be positive");
  auto direct = [g](double x) {
    const double e = x - 1.0;
    const double denom = g(x) + x * g(1.0 / x);
    if (!(denom > 0.0)) {
      throw DomainError("f_from_g: g(x) + x g(1/x) vanishes at x = " + std::to_string(x));
    }
    return e * e / denom;
  };
  constexpr double u0 = 1e-2;
  const double phi0 = 1.0 / curvature;
  const double d1 = direct(std::exp(u0)) * std::exp(-0.5 * u0) - phi0;
  const double d2 = direct(std::exp(2.0 * u0)) * std::exp(-u0) - phi0;
  const double s = u0 * u0;
  const double quartic = (d2 - 4.0 * d1) / (12.0 * s * s);
  const double quadratic = (d1 - quartic * s * s) / s;
  auto eval = [direct, phi0, quadratic, quartic](double x) {
    const double u = std::log(x);
    if (std::abs(u) >= u0) return direct(x);
    const double u2 = u * u;
    return std::exp(0.5 * u) * (phi0 + u2 * (quadratic + quartic * u2));
  };
  for (double x : log_spaced_grid()) eval(x);
  return {"f_from_g(" + g.name() + ")", eval, true, std::abs(curvature - 1.0) <= tol::kConstruct};
}

struct CorrespondenceReport {
  int trials = 0;
  double max_relative_error = 0.0;
  double max_theta3_value = 0.0;
  double tolerance = 1e-4;
  [[nodiscard]] bool passed() const {
    return max_relative_error <= tolerance && max_theta3_value <= tolerance;
  }
};

/// Compares the tensor extracted from g_entropy(g) with π*G_f, f = f_from_g(g),
/// on random tangent pairs at x, and checks that θ³ directions give zero.
inline CorrespondenceReport verify_correspondence(const GFunction& g, const UnfoldedPoint& x, int trials,
                                                  Rng& rng, double h = kDefaultStep,
                                                  double tolerance = 1e-4) {
  const MonotoneFunction f = f_from_g(g);
  const DivergenceSpec spec = g_entropy_spec(g);
  const Eigen::Index n = x.dim();
  CorrespondenceReport rep;
  rep.tolerance = tolerance;
  for (int i = 0; i < trials; ++i) {
    const UnfoldedTangent t1 = random_unfolded_tangent(n, rng);
    const UnfoldedTangent t2 = random_unfolded_tangent(n, rng);
    const double extracted = extract_tensor(spec, x, t1, t2, h).tensor();
    const double reference = pullback_eval(f, x, t1, t2);
    const double err = std::abs(extracted - reference) / std::max(1.0, std::abs(reference));
    rep.max_relative_error = std::max(rep.max_relative_error, err);
    ++rep.trials;
  }
  for (const auto& label : su_basis_labels(static_cast<int>(n))) {
    if (label.kind != SuKind::kTau3) continue;
    const UnfoldedTangent t3{Hermitian(label.matrix(static_cast<int>(n))), RVector::Zero(n)};
    const double extracted = extract_tensor(spec, x, t3, t3, h).tensor();
    rep.max_theta3_value = std::max(rep.max_theta3_value, std::abs(extracted));
  }
  return rep;
}

}  // namespace qig
