#pragma once

// CPTP maps in Kraus form and randomized monotonicity trials for metrics
// and divergences.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "qig/divergences.hpp"
#include "qig/metrics.hpp"
#include "qig/states.hpp"

namespace qig {

inline constexpr double kCompleteness = 1e-11;
inline constexpr double kChannelFloor = 1e-8;

/// Φ(x) = Σ K x K† with Σ K†K = I_in.
class KrausMap {
 public:
  explicit KrausMap(std::vector<CMatrix> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) throw InvariantViolation("KrausMap: at least one Kraus operator required");
    const auto rows = ops_.front().rows();
    const auto cols = ops_.front().cols();
    CMatrix sum = CMatrix::Zero(cols, cols);
    for (const auto& k : ops_) {
      if (k.rows() != rows || k.cols() != cols) {
        throw DimensionMismatch("KrausMap: Kraus operators differ in shape");
      }
      sum += k.adjoint() * k;
    }
    if (max_abs(sum - CMatrix::Identity(cols, cols)) > kCompleteness) {
      throw InvariantViolation("KrausMap: completeness sum K^dagger K = I violated");
    }
  }

  [[nodiscard]] const std::vector<CMatrix>& kraus_ops() const noexcept { return ops_; }
  [[nodiscard]] Eigen::Index dim_in() const noexcept { return ops_.front().cols(); }
  [[nodiscard]] Eigen::Index dim_out() const noexcept { return ops_.front().rows(); }

 private:
  std::vector<CMatrix> ops_;
};

inline Hermitian apply_channel(const KrausMap& phi, const Hermitian& a) {
  if (a.dim() != phi.dim_in()) throw DimensionMismatch("apply_channel: dimension mismatch");
  CMatrix out = CMatrix::Zero(phi.dim_out(), phi.dim_out());
  for (const auto& k : phi.kraus_ops()) out += k * a.matrix() * k.adjoint();
  return Hermitian::symmetrized(out);
}

inline KrausMap identity_channel(Eigen::Index n) { return KrausMap({CMatrix::Identity(n, n)}); }

inline KrausMap unitary_channel(const CMatrix& v) {
  if (!is_unitary(v)) throw InvariantViolation("unitary_channel: V is not unitary");
  return KrausMap({v});
}

/// Kraus set {X^a Z^b / n}: every state goes to I/n.
inline KrausMap full_depolarizing(Eigen::Index n) {
  CMatrix shift = CMatrix::Zero(n, n);
  CMatrix clock = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    shift((j + 1) % n, j) = 1.0;
    clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  }
  std::vector<CMatrix> ops;
  CMatrix xa = CMatrix::Identity(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    CMatrix zb = CMatrix::Identity(n, n);
    for (Eigen::Index b = 0; b < n; ++b) {
      ops.emplace_back(xa * zb / static_cast<double>(n));
      zb = clock * zb;
    }
    xa = shift * xa;
  }
  return KrausMap(std::move(ops));
}

/// Tr_B on H_A ⊗ H_B, Kraus operators I_A ⊗ <j|.
inline KrausMap partial_trace_channel(Eigen::Index dim_a, Eigen::Index dim_b) {
  std::vector<CMatrix> ops;
  for (Eigen::Index j = 0; j < dim_b; ++j) {
    CMatrix k = CMatrix::Zero(dim_a, dim_a * dim_b);
    for (Eigen::Index i = 0; i < dim_a; ++i) k(i, i * dim_b + j) = 1.0;
    ops.push_back(std::move(k));
  }
  return KrausMap(std::move(ops));
}

/// Haar isometry C^{dim_in} → C^{dim_out·n_kraus} sliced into Kraus blocks.
inline KrausMap random_kraus(Eigen::Index dim_in, Eigen::Index dim_out, Eigen::Index n_kraus, Rng& rng) {
  if (dim_in < 1 || dim_out < 1 || n_kraus < 1) {
    throw DomainError("random_kraus: dimensions and Kraus count must be >= 1");
  }
  if (dim_out * n_kraus < dim_in) {
    throw DomainError("random_kraus: need dim_out * n_kraus >= dim_in");
  }
  const CMatrix w = haar_isometry(dim_out * n_kraus, dim_in, rng);
  std::vector<CMatrix> ops;
  for (Eigen::Index i = 0; i < n_kraus; ++i) ops.emplace_back(w.middleRows(i * dim_out, dim_out));
  return KrausMap(std::move(ops));
}

inline KrausMap random_kraus(Eigen::Index dim_in, Eigen::Index dim_out, Eigen::Index n_kraus,
                             std::uint64_t seed) {
  Rng rng(seed);
  return random_kraus(dim_in, dim_out, n_kraus, rng);
}

/// Random channel on n-level inputs with output dimension in {2..n} and
/// between ceil(n/dim_out) and ceil(n/dim_out)+2 Kraus operators.
inline KrausMap random_channel(Eigen::Index n, Rng& rng) {
  std::uniform_int_distribution<Eigen::Index> out_dist(std::min<Eigen::Index>(2, n), n);
  const Eigen::Index dim_out = out_dist(rng);
  const Eigen::Index min_kraus = (n + dim_out - 1) / dim_out;
  std::uniform_int_distribution<Eigen::Index> kraus_dist(min_kraus, min_kraus + 2);
  const Eigen::Index n_kraus = kraus_dist(rng);
  return random_kraus(n, dim_out, n_kraus, rng);
}

// ---------------------------------------------------------------------------
// Monotonicity trials

/// Image of a state under Φ followed, when the smallest eigenvalue is
/// <= 1e-8, by x ↦ (1−ε)x + ε Tr(x) I/m. The composite is again CPTP.
struct PushedState {
  DensityMatrix state;
  bool floored = false;
};

inline PushedState push_state(const KrausMap& phi, const DensityMatrix& rho) {
  Hermitian out = apply_channel(phi, rho.hermitian());
  const auto m = phi.dim_out();
  const Spectrum s = spectral_decompose(out);
  bool floored = false;
  CMatrix mat = out.matrix();
  if (s.values.minCoeff() <= kChannelFloor) {
    mat = (1.0 - kChannelFloor) * mat + kChannelFloor * CMatrix::Identity(m, m) / static_cast<double>(m);
    floored = true;
  }
  mat /= mat.trace().real();
  return {DensityMatrix(Hermitian::symmetrized(mat)), floored};
}

inline TangentVector push_tangent(const KrausMap& phi, const TangentVector& v, bool floored) {
  const double scale = floored ? 1.0 - kChannelFloor : 1.0;
  return TangentVector::projected(scale * apply_channel(phi, v.hermitian()).matrix());
}

struct TrialResult {
  double margin = 0.0;
  double value_in = 0.0;
  double value_out = 0.0;
  bool floored = false;
};

/// G_f(ρ; v, v) − G_f(Φρ; Φv, Φv).
inline TrialResult metric_monotonicity_trial(const MonotoneFunction& f, const KrausMap& phi,
                                             const DensityMatrix& rho, const TangentVector& v) {
  const PushedState out = push_state(phi, rho);
  const TangentVector w = push_tangent(phi, v, out.floored);
  TrialResult r;
  r.value_in = petz_metric(f, rho, v, v);
  r.value_out = petz_metric(f, out.state, w, w);
  r.margin = r.value_in - r.value_out;
  r.floored = out.floored;
  return r;
}

/// S(ρ, σ) − S(Φρ, Φσ).
inline TrialResult divergence_monotonicity_trial(const DivergenceSpec& spec, const KrausMap& phi,
                                                 const DensityMatrix& rho, const DensityMatrix& sigma) {
  const PushedState a = push_state(phi, rho);
  const PushedState b = push_state(phi, sigma);
  TrialResult r;
  r.value_in = spec(rho, sigma);
  r.value_out = spec(a.state, b.state);
  r.margin = r.value_in - r.value_out;
  r.floored = a.floored || b.floored;
  return r;
}

struct SweepSummary {
  int trials = 0;
  int floored = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double mean_margin = 0.0;
  std::vector<double> margins;

  void add(const TrialResult& r) {
    ++trials;
    floored += r.floored ? 1 : 0;
    min_margin = std::min(min_margin, r.margin);
    mean_margin += (r.margin - mean_margin) / trials;
    margins.push_back(r.margin);
  }
  [[nodiscard]] int violations(double tolerance) const {
    return static_cast<int>(std::count_if(margins.begin(), margins.end(),
                                          [tolerance](double m) { return m < -tolerance; }));
  }
};

inline SweepSummary metric_sweep(const MonotoneFunction& f, Eigen::Index n, int trials, Rng& rng) {
  SweepSummary s;
  for (int i = 0; i < trials; ++i) {
    const KrausMap phi = random_channel(n, rng);
    const DensityMatrix rho = random_density(n, rng);
    const TangentVector v = random_tangent(n, rng);
    s.add(metric_monotonicity_trial(f, phi, rho, v));
  }
  return s;
}

inline SweepSummary divergence_sweep(const DivergenceSpec& spec, Eigen::Index n, int trials, Rng& rng) {
  SweepSummary s;
  for (int i = 0; i < trials; ++i) {
    const KrausMap phi = random_channel(n, rng);
    const DensityMatrix rho = random_density(n, rng);
    const DensityMatrix sigma = random_density(n, rng);
    s.add(divergence_monotonicity_trial(spec, phi, rho, sigma));
  }
  return s;
}

/// Largest |margin| / max(1, |value|) over Haar-random unitary channels,
/// for the metric (f) and divergence (spec) tests.
inline double unitary_metric_margin(const MonotoneFunction& f, Eigen::Index n, int trials, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const KrausMap phi = unitary_channel(random_unitary(n, rng));
    const TrialResult r = metric_monotonicity_trial(f, phi, random_density(n, rng), random_tangent(n, rng));
    worst = std::max(worst, std::abs(r.margin) / std::max(1.0, std::abs(r.value_in)));
  }
  return worst;
}

inline double unitary_divergence_margin(const DivergenceSpec& spec, Eigen::Index n, int trials, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const KrausMap phi = unitary_channel(random_unitary(n, rng));
    const TrialResult r =
        divergence_monotonicity_trial(spec, phi, random_density(n, rng), random_density(n, rng));
    worst = std::max(worst, std::abs(r.margin) / std::max(1.0, std::abs(r.value_in)));
  }
  return worst;
}

}  // namespace qig
