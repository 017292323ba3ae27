#pragma once

// Faithful density matrices, tangent vectors, and the unfolding map
// π(U, p) = U diag(p) U† from SU(n) × (open simplex) onto states.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "qig/matcore.hpp"

namespace qig {

using Rng = std::mt19937_64;

/// Strictly positive probability vector.
class ProbVector {
 public:
  ProbVector() = default;
  explicit ProbVector(RVector p) : p_(std::move(p)) {
    if (p_.size() < 1) throw InvariantViolation("ProbVector: empty");
    if (p_.minCoeff() <= tol::kProbability) {
      throw InvariantViolation("ProbVector: entries must be > 1e-12");
    }
    if (std::abs(p_.sum() - 1.0) > tol::kProbability) {
      throw InvariantViolation("ProbVector: entries must sum to 1");
    }
  }

  [[nodiscard]] const RVector& values() const noexcept { return p_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return p_.size(); }
  double operator()(Eigen::Index j) const { return p_(j); }

 private:
  RVector p_;
};

/// Faithful quantum state: Hermitian, unit trace, smallest eigenvalue > 1e-10.
/// The spectrum is computed once at construction and cached.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Hermitian rho) : rho_(std::move(rho)), spec_(spectral_decompose(rho_)) {
    if (std::abs(rho_.trace() - 1.0) > tol::kConstruct) {
      throw InvariantViolation("DensityMatrix: trace must be 1 (got " +
                               std::to_string(rho_.trace()) + ")");
    }
    if (spec_.values.minCoeff() <= tol::kFaithful) {
      throw InvariantViolation("DensityMatrix: state is not faithful (min eigenvalue " +
                               std::to_string(spec_.values.minCoeff()) + ")");
    }
  }
  explicit DensityMatrix(const CMatrix& m) : DensityMatrix(Hermitian(m)) {}

  /// Diagonal state diag(p).
  static DensityMatrix diagonal(const RVector& p) { return DensityMatrix(Hermitian(diag(p))); }
  static DensityMatrix maximally_mixed(Eigen::Index n) {
    return diagonal(RVector::Constant(n, 1.0 / static_cast<double>(n)));
  }

  [[nodiscard]] const Hermitian& hermitian() const noexcept { return rho_; }
  [[nodiscard]] const CMatrix& matrix() const noexcept { return rho_.matrix(); }
  [[nodiscard]] const Spectrum& spectrum() const noexcept { return spec_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return rho_.dim(); }

 private:
  Hermitian rho_;
  Spectrum spec_;
};

/// Traceless Hermitian operator: the linear identification of T_ρS(H).
class TangentVector {
 public:
  TangentVector() = default;
  explicit TangentVector(Hermitian v) : v_(std::move(v)) {
    const double scale = std::max(1.0, max_abs(v_.matrix()));
    if (std::abs(v_.matrix().trace()) > tol::kConstruct * scale) {
      throw InvariantViolation("TangentVector: trace must vanish");
    }
  }
  explicit TangentVector(const CMatrix& m) : TangentVector(Hermitian(m)) {}

  /// Removes the trace part, for pushed-forward tangents carrying rounding.
  static TangentVector projected(const CMatrix& m) {
    const auto n = static_cast<double>(m.rows());
    CMatrix t = m;
    t.diagonal().array() -= m.trace() / n;
    return TangentVector(Hermitian::symmetrized(t));
  }

  [[nodiscard]] const Hermitian& hermitian() const noexcept { return v_; }
  [[nodiscard]] const CMatrix& matrix() const noexcept { return v_.matrix(); }
  [[nodiscard]] Eigen::Index dim() const noexcept { return v_.dim(); }

 private:
  Hermitian v_;
};

inline bool is_unitary(const CMatrix& u, double tolerance = tol::kUnitary) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols())) <= tolerance;
}

/// Point (U, p) of SU(n) × Δ_n.
class UnfoldedPoint {
 public:
  UnfoldedPoint() = default;
  UnfoldedPoint(CMatrix u, ProbVector p) : u_(std::move(u)), p_(std::move(p)) {
    if (u_.rows() != u_.cols() || u_.rows() != p_.size()) {
      throw DimensionMismatch("UnfoldedPoint: U and p dimensions differ");
    }
    if (!is_unitary(u_)) throw InvariantViolation("UnfoldedPoint: U is not unitary");
    if (std::abs(u_.determinant() - Complex(1.0, 0.0)) > tol::kDeterminant) {
      throw InvariantViolation("UnfoldedPoint: det(U) != 1");
    }
  }

  [[nodiscard]] const CMatrix& unitary() const noexcept { return u_; }
  [[nodiscard]] const ProbVector& probabilities() const noexcept { return p_; }
  [[nodiscard]] const RVector& p() const noexcept { return p_.values(); }
  [[nodiscard]] Eigen::Index dim() const noexcept { return p_.size(); }

 private:
  CMatrix u_;
  ProbVector p_;
};

/// Tangent (iH, a) at an unfolded point: H traceless Hermitian, Σa = 0.
class UnfoldedTangent {
 public:
  UnfoldedTangent() = default;
  UnfoldedTangent(Hermitian h, RVector a) : h_(std::move(h)), a_(std::move(a)) {
    if (h_.dim() != a_.size()) throw DimensionMismatch("UnfoldedTangent: H and a dimensions differ");
    const double hs = std::max(1.0, max_abs(h_.matrix()));
    if (std::abs(h_.matrix().trace()) > tol::kConstruct * hs) {
      throw InvariantViolation("UnfoldedTangent: Tr(H) must vanish");
    }
    const double as = std::max(1.0, a_.cwiseAbs().maxCoeff());
    if (std::abs(a_.sum()) > tol::kConstruct * as) {
      throw InvariantViolation("UnfoldedTangent: a must sum to zero");
    }
  }

  static UnfoldedTangent simplex_only(const RVector& a) {
    return {Hermitian::zero(a.size()), a};
  }

  [[nodiscard]] const Hermitian& generator() const noexcept { return h_; }
  [[nodiscard]] const CMatrix& h() const noexcept { return h_.matrix(); }
  [[nodiscard]] const RVector& a() const noexcept { return a_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return a_.size(); }

  UnfoldedTangent operator+(const UnfoldedTangent& o) const {
    return {h_ + o.h_, a_ + o.a_};
  }
  UnfoldedTangent operator-(const UnfoldedTangent& o) const {
    return {h_ - o.h_, a_ - o.a_};
  }
  UnfoldedTangent operator*(double s) const { return {h_ * s, s * a_}; }

 private:
  Hermitian h_;
  RVector a_;
};

// ---------------------------------------------------------------------------

/// Multiplies one column by a phase so that det(U) = 1.
inline CMatrix fix_determinant(CMatrix u) {
  const Complex det = u.determinant();
  const Complex phase = det / std::abs(det);
  u.col(0) *= std::conj(phase);
  return u;
}

/// Spectral unfolding ρ = U diag(p) U†, p ascending, det(U) = 1. A fully
/// degenerate spectrum returns U = I.
inline UnfoldedPoint unfold(const DensityMatrix& rho) {
  const Spectrum& s = rho.spectrum();
  const Eigen::Index n = rho.dim();
  const double spread = s.values.maxCoeff() - s.values.minCoeff();
  CMatrix u = spread <= tol::kConstruct ? CMatrix::Identity(n, n) : fix_determinant(s.vectors);
  return {std::move(u), ProbVector(s.values)};
}

/// π(U, p) = U diag(p) U†.
inline DensityMatrix fold(const UnfoldedPoint& x) {
  return DensityMatrix(Hermitian::symmetrized(x.unitary() * diag(x.p()) * x.unitary().adjoint()));
}

/// T_{(U,p)}π(iH, a) = U (i[H, diag(p)] + diag(a)) U†.
inline TangentVector tangent_map_pi(const UnfoldedPoint& x, const UnfoldedTangent& t) {
  if (x.dim() != t.dim()) throw DimensionMismatch("tangent_map_pi: dimension mismatch");
  const CMatrix rho0 = diag(x.p());
  const CMatrix inner = kI * (t.h() * rho0 - rho0 * t.h()) + diag(t.a());
  return TangentVector::projected(x.unitary() * inner * x.unitary().adjoint());
}

/// exp(i s H) for Hermitian H.
inline CMatrix exp_i(const Hermitian& h, double s) {
  const Spectrum sp = spectral_decompose(h);
  Eigen::VectorXcd phases(sp.dim());
  for (Eigen::Index j = 0; j < sp.dim(); ++j) phases(j) = std::exp(kI * (s * sp.values(j)));
  return sp.vectors * phases.asDiagonal() * sp.vectors.adjoint();
}

/// Curve s ↦ (U e^{isH}, p + s a) through x with velocity t.
inline UnfoldedPoint advance(const UnfoldedPoint& x, const UnfoldedTangent& t, double s) {
  RVector p = x.p() + s * t.a();
  if (p.minCoeff() <= tol::kFaithful) {
    throw DomainError("advance: curve leaves the faithful region");
  }
  return {x.unitary() * exp_i(t.generator(), s), ProbVector(p)};
}

/// Real dimension 2nk − k² − 1 of the rank-k stratum.
inline int stratum_dimension(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw DomainError("stratum_dimension: need 1 <= k <= n");
  return 2 * n * k - k * k - 1;
}

// ---------------------------------------------------------------------------
// Sampling

inline CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(s * re, s * im);
    }
  }
  return g;
}

/// Matrix with orthonormal columns, Haar-distributed (QR of a Ginibre
/// matrix with the phases of R's diagonal absorbed into Q).
inline CMatrix haar_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  if (rows < cols) throw DomainError("haar_isometry: rows < cols");
  const CMatrix g = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    const double ad = std::abs(d);
    if (ad > 0.0) q.col(j) *= d / ad;
  }
  return q;
}

inline CMatrix random_unitary(Eigen::Index n, Rng& rng) {
  if (n < 1) throw DomainError("random_unitary: n must be >= 1");
  return fix_determinant(haar_isometry(n, n, rng));
}

inline CMatrix random_unitary(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(n, rng);
}

/// ρ = GG†/Tr(GG†), resampled while the smallest eigenvalue is <= 1e-8.
inline DensityMatrix random_density(Eigen::Index n, Rng& rng) {
  if (n < 1) throw DomainError("random_density: n must be >= 1");
  for (;;) {
    const CMatrix g = ginibre(n, n, rng);
    CMatrix m = g * g.adjoint();
    m /= m.trace().real();
    Hermitian h = Hermitian::symmetrized(m);
    const Spectrum s = spectral_decompose(h);
    if (s.values.minCoeff() > 1e-8) {
      // Exact unit trace after symmetrization rounding.
      return DensityMatrix(Hermitian::symmetrized(h.matrix() / h.trace()));
    }
  }
}

inline DensityMatrix random_density(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(n, rng);
}

/// Gaussian traceless Hermitian matrix with unit Hilbert-Schmidt norm.
inline TangentVector random_tangent(Eigen::Index n, Rng& rng) {
  const CMatrix g = ginibre(n, n, rng);
  CMatrix h = 0.5 * (g + g.adjoint());
  h.diagonal().array() -= h.trace() / static_cast<double>(n);
  h /= h.norm();
  return TangentVector::projected(h);
}

/// Gaussian zero-sum real vector with unit Euclidean norm.
inline RVector random_zero_sum(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RVector a(n);
  for (Eigen::Index j = 0; j < n; ++j) a(j) = normal(rng);
  a.array() -= a.mean();
  return a / a.norm();
}

inline UnfoldedTangent random_unfolded_tangent(Eigen::Index n, Rng& rng) {
  const TangentVector h = random_tangent(n, rng);
  return {h.hermitian(), random_zero_sum(n, rng)};
}

/// Random probability vector with entries bounded away from zero and
/// strictly ascending (inside the Weyl chamber).
inline ProbVector random_chamber_point(Eigen::Index n, Rng& rng, double floor = 0.05) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (;;) {
    RVector w(n);
    for (Eigen::Index j = 0; j < n; ++j) w(j) = -std::log(1.0 - uni(rng));
    w /= w.sum();
    std::sort(w.data(), w.data() + n);
    RVector p = floor / static_cast<double>(n) + (1.0 - floor) * w.array();
    bool distinct = true;
    for (Eigen::Index j = 1; j < n; ++j) distinct = distinct && (p(j) - p(j - 1) > 1e-3);
    if (distinct) {
      p /= p.sum();
      return ProbVector(p);
    }
  }
}

inline UnfoldedPoint random_unfolded_point(Eigen::Index n, Rng& rng) {
  CMatrix u = random_unitary(n, rng);
  return {std::move(u), random_chamber_point(n, rng)};
}

}  // namespace qig
