#pragma once

// Petz monotone metrics G_f, the closed forms for the Bures-Helstrom,
// Wigner-Yanase and Bogoliubov-Kubo-Mori members, the Fisher-Rao metric,
// and the pullback of G_f to the unfolding space.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qig/identifications.hpp"
#include "qig/matcore.hpp"
#include "qig/states.hpp"

namespace qig {

/// 32 log-spaced sample points on [1e-3, 1e3].
inline std::vector<double> log_spaced_grid(int count = 32, double lo = 1e-3, double hi = 1e3) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(count));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) xs.push_back(std::exp(a + (b - a) * i / (count - 1)));
  return xs;
}

/// Scalar function f on (0, ∞) labelling a monotone metric. The flags are
/// verified numerically at construction: f(1) = 1 when normalized, and
/// f(x) = x f(1/x) on the log-spaced grid when symmetric.
class MonotoneFunction {
 public:
  using Eval = std::function<double(double)>;

  MonotoneFunction(std::string name, Eval eval, bool symmetric, bool normalized)
      : name_(std::move(name)), eval_(std::move(eval)), symmetric_(symmetric), normalized_(normalized) {
    if (normalized_ && std::abs(eval_(1.0) - 1.0) > tol::kConstruct) {
      throw InvariantViolation("MonotoneFunction '" + name_ + "': f(1) != 1");
    }
    if (symmetric_) {
      for (double x : log_spaced_grid()) {
        const double fx = eval_(x);
        if (std::abs(fx - x * eval_(1.0 / x)) > 1e-10 * std::max(1.0, std::abs(fx))) {
          throw InvariantViolation("MonotoneFunction '" + name_ + "': f(x) != x f(1/x) at x = " +
                                   std::to_string(x));
        }
      }
    }
  }

  double operator()(double x) const { return eval_(x); }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] bool symmetric() const noexcept { return symmetric_; }
  [[nodiscard]] bool normalized() const noexcept { return normalized_; }

  /// p_k f(p_j/p_k), with the ratio formed in log space.
  [[nodiscard]] double mean(double pj, double pk) const {
    return pk * eval_(std::exp(std::log(pj) - std::log(pk)));
  }

 private:
  std::string name_;
  Eval eval_;
  bool symmetric_;
  bool normalized_;
};

inline MonotoneFunction builtin_f(Family family) {
  switch (family) {
    case Family::kBH:
      return {"BH", [](double x) { return 0.5 * (1.0 + x); }, true, true};
    case Family::kWY:
      return {"WY",
              [](double x) {
                const double s = 1.0 + std::sqrt(x);
                return 0.25 * s * s;
              },
              true, true};
    case Family::kBKM:
      return {"BKM",
              [](double x) {
                const double t = std::log(x);
                return std::abs(t) < 1e-9 ? 1.0 + t / 2.0 + t * t / 6.0 : std::expm1(t) / t;
              },
              true, true};
  }
  throw DomainError("builtin_f: unknown family");
}

inline MonotoneFunction builtin_f(const std::string& name) { return builtin_f(family_from_string(name)); }

inline std::vector<MonotoneFunction> registry_f() {
  return {builtin_f(Family::kBH), builtin_f(Family::kWY), builtin_f(Family::kBKM)};
}

namespace detail {
inline void require_petz(const MonotoneFunction& f) {
  if (!f.symmetric() || !f.normalized()) {
    throw InvariantViolation("petz_metric: f '" + f.name() +
                             "' must be flagged symmetric and normalized");
  }
}
}  // namespace detail

/// (G_f)_ρ(v, w) = Σ_jk conj(v_jk) w_jk / (p_k f(p_j/p_k)) in ρ's eigenbasis.
inline double petz_metric(const MonotoneFunction& f, const DensityMatrix& rho, const TangentVector& v,
                          const TangentVector& w) {
  detail::require_petz(f);
  if (rho.dim() != v.dim() || rho.dim() != w.dim()) {
    throw DimensionMismatch("petz_metric: dimension mismatch");
  }
  const Spectrum& s = rho.spectrum();
  const CMatrix ve = s.to_eigenbasis(v.matrix());
  const CMatrix we = s.to_eigenbasis(w.matrix());
  double acc = 0.0;
  for (Eigen::Index j = 0; j < s.dim(); ++j) {
    for (Eigen::Index k = 0; k < s.dim(); ++k) {
      acc += (std::conj(ve(j, k)) * we(j, k)).real() / f.mean(s.values(j), s.values(k));
    }
  }
  return acc;
}

inline double petz_metric(Family family, const DensityMatrix& rho, const TangentVector& v,
                          const TangentVector& w) {
  return petz_metric(builtin_f(family), rho, v, w);
}

/// Tr(ρ{a,b}) − Tr(ρa)Tr(ρb).
inline double bh_closed(const DensityMatrix& rho, const ObservableParam& a, const ObservableParam& b) {
  const CMatrix& r = rho.matrix();
  const double jordan = (r * anticomm_super(a, b).matrix()).trace().real();
  return jordan - (r * a.matrix()).trace().real() * (r * b.matrix()).trace().real();
}

/// Tr(ρ{a,b}) + Tr(√ρ a √ρ b) − 2 Tr(ρa)Tr(ρb).
inline double wy_closed(const DensityMatrix& rho, const ObservableParam& a, const ObservableParam& b) {
  const CMatrix& r = rho.matrix();
  const CMatrix root = matrix_function(rho.spectrum(), [](double x) { return std::sqrt(x); }).matrix();
  const double jordan = (r * anticomm_super(a, b).matrix()).trace().real();
  const double sandwich = (root * a.matrix() * root * b.matrix()).trace().real();
  return jordan + sandwich - 2.0 * (r * a.matrix()).trace().real() * (r * b.matrix()).trace().real();
}

/// ∫₀¹ Tr(ρ^λ a ρ^{1−λ} b) dλ − Tr(ρa)Tr(ρb), summed in ρ's eigenbasis with
/// the logarithmic mean as the λ-integral of p_j^λ p_k^{1−λ}.
inline double bkm_closed(const DensityMatrix& rho, const ObservableParam& a, const ObservableParam& b) {
  const Spectrum& s = rho.spectrum();
  const CMatrix ae = s.to_eigenbasis(a.matrix());
  const CMatrix be = s.to_eigenbasis(b.matrix());
  double acc = 0.0;
  for (Eigen::Index j = 0; j < s.dim(); ++j) {
    for (Eigen::Index k = 0; k < s.dim(); ++k) {
      acc += (ae(j, k) * be(k, j)).real() * logarithmic_mean(s.values(j), s.values(k));
    }
  }
  const CMatrix& r = rho.matrix();
  return acc - (r * a.matrix()).trace().real() * (r * b.matrix()).trace().real();
}

/// Σ_j a_j b_j / p_j.
inline double fisher_rao(const ProbVector& p, const RVector& a, const RVector& b) {
  if (a.size() != p.size() || b.size() != p.size()) {
    throw DimensionMismatch("fisher_rao: dimension mismatch");
  }
  const double scale = std::max(1.0, std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));
  if (std::abs(a.sum()) > tol::kConstruct * scale || std::abs(b.sum()) > tol::kConstruct * scale) {
    throw InvariantViolation("fisher_rao: tangent directions must sum to zero");
  }
  return (a.array() * b.array() / p.values().array()).sum();
}

// ---------------------------------------------------------------------------
// Unfolded pullback

/// Coordinates of a traceless Hermitian H along su_basis(n):
/// H = Σ c_i τ_i (τ1 pairs, τ2 pairs, τ3 adjacent).
inline RVector su_coordinates(const CMatrix& h) {
  const auto n = static_cast<int>(h.rows());
  const auto labels = su_basis_labels(n);
  RVector c(static_cast<Eigen::Index>(labels.size()));
  double cumulative = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& l = labels[i];
    switch (l.kind) {
      case SuKind::kTau1:
        c(static_cast<Eigen::Index>(i)) = h(l.j, l.k).real();
        break;
      case SuKind::kTau2:
        c(static_cast<Eigen::Index>(i)) = -h(l.j, l.k).imag();
        break;
      case SuKind::kTau3:
        cumulative += h(l.j, l.j).real();
        c(static_cast<Eigen::Index>(i)) = cumulative;
        break;
    }
  }
  return c;
}

/// π*G_f in the left-invariant coframe: per pair j<k a common coefficient
/// for θ1⊗θ1 and θ2⊗θ2, a vanishing θ3 block, and the Fisher-Rao block
/// diag(1/p_j) in the over-complete dp coordinates.
struct PullbackMetricMatrix {
  int dim = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> theta1;
  std::vector<double> theta2;
  Eigen::MatrixXd theta3;
  Eigen::MatrixXd fisher;

  /// Contract with two unfolded tangents.
  [[nodiscard]] double evaluate(const UnfoldedTangent& t1, const UnfoldedTangent& t2) const {
    double quantum = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto [j, k] = pairs[i];
      const Complex h = t1.h()(j, k);
      const Complex g = t2.h()(j, k);
      // θ1 = Re H_jk, θ2 = −Im H_jk.
      quantum += theta1[i] * h.real() * g.real() + theta2[i] * h.imag() * g.imag();
    }
    return quantum + t1.a().dot(fisher * t2.a());
  }
};

inline PullbackMetricMatrix pullback_metric(const MonotoneFunction& f, const UnfoldedPoint& x) {
  detail::require_petz(f);
  const RVector& p = x.p();
  const int n = static_cast<int>(p.size());
  PullbackMetricMatrix m;
  m.dim = n;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double d = p(k) - p(j);
      const double c = 2.0 * d * d / f.mean(p(j), p(k));
      m.pairs.emplace_back(j, k);
      m.theta1.push_back(c);
      m.theta2.push_back(c);
    }
  }
  m.theta3 = Eigen::MatrixXd::Zero(std::max(n - 1, 0), std::max(n - 1, 0));
  m.fisher = p.cwiseInverse().asDiagonal();
  return m;
}

struct PullbackSplit {
  double quantum = 0.0;
  double classical = 0.0;
  [[nodiscard]] double total() const noexcept { return quantum + classical; }
};

/// Σ_jk H_kj K_jk (p_k − p_j)² / (p_k f(p_j/p_k)) + Σ_j a_j b_j / p_j.
inline PullbackSplit pullback_split(const MonotoneFunction& f, const UnfoldedPoint& x,
                                    const UnfoldedTangent& t1, const UnfoldedTangent& t2) {
  detail::require_petz(f);
  if (x.dim() != t1.dim() || x.dim() != t2.dim()) {
    throw DimensionMismatch("pullback_eval: dimension mismatch");
  }
  const RVector& p = x.p();
  PullbackSplit out;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      if (j == k) continue;
      const double d = p(k) - p(j);
      out.quantum += (t1.h()(k, j) * t2.h()(j, k)).real() * d * d / f.mean(p(j), p(k));
    }
  }
  out.classical = fisher_rao(x.probabilities(), t1.a(), t2.a());
  return out;
}

inline double pullback_eval(const MonotoneFunction& f, const UnfoldedPoint& x, const UnfoldedTangent& t1,
                            const UnfoldedTangent& t2) {
  return pullback_split(f, x, t1, t2).total();
}

}  // namespace qig
