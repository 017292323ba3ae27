#pragma once

// Fisher-Rao geodesics on the open simplex, universal geodesics
// U diag(p(t)) U† on faithful states, and a discrete first-variation
// certificate of the geodesic property under any monotone metric.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "qig/metrics.hpp"
#include "qig/states.hpp"

namespace qig {

inline constexpr double kGeodesicFloor = 1e-8;

/// t ↦ cos²(θ) p_j + sin²(θ) a_j²/(‖a‖² p_j) + sin(2θ) a_j/‖a‖, θ = t‖a‖/2.
class FRGeodesic {
 public:
  FRGeodesic(ProbVector p0, RVector a) : p0_(std::move(p0)), a_(std::move(a)) {
    if (a_.size() != p0_.size()) throw DimensionMismatch("FRGeodesic: p0 and a lengths differ");
    const double scale = std::max(1.0, a_.cwiseAbs().maxCoeff());
    if (std::abs(a_.sum()) > tol::kConstruct * scale) {
      throw InvariantViolation("FRGeodesic: a must sum to zero");
    }
    norm_ = std::sqrt((a_.array().square() / p0_.values().array()).sum());
    if (!(norm_ > 0.0)) throw DomainError("FRGeodesic: a must be nonzero");
    t_forward_ = exit_time(1.0);
    t_backward_ = exit_time(-1.0);
    t_max_ = std::min(t_forward_, t_backward_);
  }

  [[nodiscard]] const ProbVector& p0() const noexcept { return p0_; }
  [[nodiscard]] const RVector& a() const noexcept { return a_; }
  /// ‖a‖_FR = √(Σ a_j²/p_j).
  [[nodiscard]] double norm() const noexcept { return norm_; }
  /// Largest t with p_j(±t') ≥ 1e-8 for all |t'| ≤ t.
  [[nodiscard]] double t_max() const noexcept { return t_max_; }

  /// Closed form without the boundary check.
  [[nodiscard]] RVector raw(double t) const {
    const double theta = 0.5 * t * norm_;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const auto& p = p0_.values().array();
    return (c * c * p + s * s * a_.array().square() / (norm_ * norm_ * p) +
            std::sin(2.0 * theta) * a_.array() / norm_)
        .matrix();
  }

  /// Throws once the curve has reached the floor between 0 and t, even if the
  /// closed form re-enters the simplex afterwards.
  [[nodiscard]] ProbVector operator()(double t) const {
    RVector p = raw(t);
    if (t > t_forward_ || -t > t_backward_ || p.minCoeff() < kGeodesicFloor) {
      throw DomainError("fr_geodesic: t = " + std::to_string(t) + " leaves the faithful region");
    }
    return ProbVector(std::move(p));
  }

  /// Velocity dp/dt.
  [[nodiscard]] RVector velocity(double t) const {
    const double theta = 0.5 * t * norm_;
    const auto& p = p0_.values().array();
    const double ds2 = 0.5 * norm_ * std::sin(2.0 * theta);
    return (-ds2 * p + ds2 * a_.array().square() / (norm_ * norm_ * p) +
            norm_ * std::cos(2.0 * theta) * a_.array() / norm_)
        .matrix();
  }

 private:
  /// First t > 0 (direction sign) at which some p_j reaches the floor.
  [[nodiscard]] double exit_time(double sign) const {
    // √p_j(θ) = cos θ √p_j + sin θ u_j, u_j = sign·a_j/(‖a‖ √p_j), first zero θ_j ∈ (0, π).
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < a_.size(); ++j) {
      const double r = std::sqrt(p0_(j));
      const double u = sign * a_(j) / (norm_ * r);
      double zero = std::atan2(r, -u);
      if (zero <= 0.0) zero += std::numbers::pi;
      auto amp = [&](double th) { return std::cos(th) * r + std::sin(th) * u; };
      const double level = std::sqrt(kGeodesicFloor);
      double lo = 0.0;
      double hi = zero;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        // The amplitude is unimodal on [0, zero] and starts above the level.
        if (amp(mid) >= level) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      best = std::min(best, 2.0 * lo / norm_);
    }
    return best;
  }

  ProbVector p0_;
  RVector a_;
  double norm_ = 0.0;
  double t_max_ = 0.0;
  double t_forward_ = 0.0;
  double t_backward_ = 0.0;
};

inline ProbVector fr_geodesic(const ProbVector& p0, const RVector& a, double t) {
  return FRGeodesic(p0, a)(t);
}

/// U diag(p(t)) U†.
inline DensityMatrix universal_geodesic(const UnfoldedPoint& x, const RVector& a, double t) {
  const ProbVector p = fr_geodesic(x.probabilities(), a, t);
  return fold(UnfoldedPoint(x.unitary(), p));
}

// ---------------------------------------------------------------------------
// First-variation certificate

struct ResidualOptions {
  int segments = 400;
  int variations = 16;
  double epsilon = 1e-5;
  double bump_width = 0.2;
  std::uint64_t seed = 7;
};

struct ResidualReport {
  double residual = 0.0;
  double energy = 0.0;
  /// residual / energy.
  [[nodiscard]] double relative() const { return energy > 0.0 ? residual / energy : residual; }
};

using StateCurve = std::function<CMatrix(double)>;

namespace detail {

/// Σ_i G_f(mid_i; Δγ_i/Δt, Δγ_i/Δt) Δt over segments [first, last).
inline double segment_energy(const MonotoneFunction& f, const std::vector<CMatrix>& pts, double dt,
                             std::size_t first, std::size_t last) {
  double e = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    const DensityMatrix mid(Hermitian::symmetrized(0.5 * (pts[i] + pts[i + 1])));
    const TangentVector v = TangentVector::projected((pts[i + 1] - pts[i]) / dt);
    e += petz_metric(f, mid, v, v) * dt;
  }
  return e;
}

}  // namespace detail

/// Max over m random compactly supported variations of |dE/dε| for the
/// discretized energy of curve on [t0, t1].
inline ResidualReport curve_residual(const MonotoneFunction& f, const StateCurve& curve, double t0,
                                     double t1, const ResidualOptions& opt = {}) {
  if (!(t1 > t0)) throw DomainError("geodesic_residual: need t1 > t0");
  const auto n_seg = static_cast<std::size_t>(opt.segments);
  const double dt = (t1 - t0) / static_cast<double>(n_seg);
  std::vector<CMatrix> pts(n_seg + 1);
  for (std::size_t i = 0; i <= n_seg; ++i) pts[i] = curve(t0 + dt * static_cast<double>(i));
  const auto dim = pts.front().rows();

  ResidualReport rep;
  rep.energy = detail::segment_energy(f, pts, dt, 0, n_seg);

  Rng rng(opt.seed);
  const double width = opt.bump_width * (t1 - t0);
  std::uniform_real_distribution<double> centre(t0 + 0.5 * width, t1 - 0.5 * width);
  for (int m = 0; m < opt.variations; ++m) {
    const CMatrix dir = random_tangent(dim, rng).matrix();
    const double c = centre(rng);
    std::vector<double> bump(n_seg + 1, 0.0);
    std::size_t lo = n_seg;
    std::size_t hi = 0;
    for (std::size_t i = 0; i <= n_seg; ++i) {
      const double u = (t0 + dt * static_cast<double>(i) - c) / width + 0.5;
      if (u > 0.0 && u < 1.0) {
        const double s = std::sin(std::numbers::pi * u);
        bump[i] = s * s;
        lo = std::min(lo, i);
        hi = std::max(hi, i);
      }
    }
    if (lo > hi) continue;
    const std::size_t first = lo == 0 ? 0 : lo - 1;
    const std::size_t last = std::min(hi + 1, n_seg);
    auto energy = [&](double eps) {
      std::vector<CMatrix> moved = pts;
      for (std::size_t i = lo; i <= hi; ++i) moved[i] += eps * bump[i] * dir;
      return detail::segment_energy(f, moved, dt, first, last);
    };
    auto central = [&](double eps) { return (energy(eps) - energy(-eps)) / (2.0 * eps); };
    const double deriv = (4.0 * central(0.5 * opt.epsilon) - central(opt.epsilon)) / 3.0;
    rep.residual = std::max(rep.residual, std::abs(deriv));
  }
  return rep;
}

/// Residual of the universal geodesic through x with velocity a on [0, span].
inline ResidualReport geodesic_residual(const MonotoneFunction& f, const UnfoldedPoint& x, const RVector& a,
                                        double span, const ResidualOptions& opt = {}) {
  const FRGeodesic geo(x.probabilities(), a);
  if (span >= geo.t_max()) throw DomainError("geodesic_residual: span reaches the simplex boundary");
  const CMatrix u = x.unitary();
  return curve_residual(
      f, [&](double t) -> CMatrix { return u * diag(geo(t).values()) * u.adjoint(); }, 0.0, span, opt);
}

/// Negative control: the same curve with p(t) + δ sin(π t/span) c added,
/// c a fixed zero-sum direction.
inline ResidualReport bent_curve_residual(const MonotoneFunction& f, const UnfoldedPoint& x,
                                          const RVector& a, double span, double amplitude,
                                          const RVector& bend, const ResidualOptions& opt = {}) {
  const FRGeodesic geo(x.probabilities(), a);
  if (span >= geo.t_max()) throw DomainError("bent_curve_residual: span reaches the simplex boundary");
  const CMatrix u = x.unitary();
  return curve_residual(
      f,
      [&](double t) -> CMatrix {
        const RVector p = geo(t).values() + amplitude * std::sin(std::numbers::pi * t / span) * bend;
        return u * diag(p) * u.adjoint();
      },
      0.0, span, opt);
}

}  // namespace qig
