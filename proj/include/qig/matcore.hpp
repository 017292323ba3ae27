#pragma once

// Dense complex-matrix kernel: Hermitian algebra, spectral calculus,
// Hilbert-Schmidt geometry and the generalized Pauli basis of su(n).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qig/errors.hpp"

namespace qig {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Largest absolute entry.
inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline void require_same_dim(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(op) + ": dimension mismatch (" +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
  }
}

/// Self-adjoint matrix. Construction checks a = a† to 1e-12 (relative to
/// the entry scale) and then stores the exact symmetrization (a + a†)/2.
class Hermitian {
 public:
  Hermitian() = default;

  explicit Hermitian(const CMatrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
      throw InvariantViolation("Hermitian: matrix must be square with n >= 1");
    }
    const double scale = std::max(1.0, max_abs(m));
    if (max_abs(m - m.adjoint()) > tol::kConstruct * scale) {
      throw InvariantViolation("Hermitian: a != a^dagger");
    }
    m_ = 0.5 * (m + m.adjoint());
  }

  /// Symmetrizes without checking; for results of Hermiticity-preserving
  /// arithmetic whose asymmetry is pure rounding.
  static Hermitian symmetrized(const CMatrix& m) {
    Hermitian h;
    h.m_ = 0.5 * (m + m.adjoint());
    return h;
  }

  static Hermitian identity(Eigen::Index n) { return symmetrized(CMatrix::Identity(n, n)); }
  static Hermitian zero(Eigen::Index n) { return symmetrized(CMatrix::Zero(n, n)); }

  [[nodiscard]] const CMatrix& matrix() const noexcept { return m_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return m_.rows(); }
  [[nodiscard]] double trace() const { return m_.trace().real(); }

  Hermitian operator+(const Hermitian& o) const {
    require_same_dim(m_, o.m_, "Hermitian::operator+");
    return symmetrized(m_ + o.m_);
  }
  Hermitian operator-(const Hermitian& o) const {
    require_same_dim(m_, o.m_, "Hermitian::operator-");
    return symmetrized(m_ - o.m_);
  }
  Hermitian operator*(double s) const { return symmetrized(s * m_); }
  friend Hermitian operator*(double s, const Hermitian& h) { return h * s; }

 private:
  CMatrix m_;
};

/// <a, b> = Tr(a† b).
inline Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "hs_inner");
  return (a.adjoint() * b).trace();
}

inline double hs_inner(const Hermitian& a, const Hermitian& b) {
  return hs_inner(a.matrix(), b.matrix()).real();
}

/// a = U diag(values) U†, values ascending, U unitary.
struct Spectrum {
  RVector values;
  CMatrix vectors;

  [[nodiscard]] Eigen::Index dim() const noexcept { return values.size(); }

  /// Express an operator in the eigenbasis: U† m U.
  [[nodiscard]] CMatrix to_eigenbasis(const CMatrix& m) const {
    return vectors.adjoint() * m * vectors;
  }
  [[nodiscard]] CMatrix from_eigenbasis(const CMatrix& m) const {
    return vectors * m * vectors.adjoint();
  }
};

inline Spectrum spectral_decompose(const Hermitian& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error("spectral_decompose: eigensolver failed");
  }
  // Eigen already returns ascending eigenvalues.
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

/// Applies an entrywise kernel in the eigenbasis of a spectrum:
/// result = U (K ∘ U† m U) U† with K_jk = kernel(p_j, p_k, j, k).
template <typename Kernel>
CMatrix eigenbasis_scale(const Spectrum& s, const CMatrix& m, Kernel&& kernel) {
  CMatrix x = s.to_eigenbasis(m);
  const Eigen::Index n = s.dim();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      x(j, k) *= kernel(s.values(j), s.values(k), j, k);
    }
  }
  return s.from_eigenbasis(x);
}

/// U φ(Λ) U†. φ must return a finite value on every eigenvalue; a
/// non-finite result is reported as a domain error.
template <typename Fn>
Hermitian matrix_function(const Spectrum& s, Fn&& phi) {
  RVector mapped(s.dim());
  for (Eigen::Index j = 0; j < s.dim(); ++j) {
    const double v = phi(s.values(j));
    if (!std::isfinite(v)) {
      throw DomainError("matrix_function: eigenvalue " + std::to_string(s.values(j)) +
                        " outside the domain of the scalar function");
    }
    mapped(j) = v;
  }
  return Hermitian::symmetrized(s.vectors * mapped.asDiagonal() * s.vectors.adjoint());
}

template <typename Fn>
Hermitian matrix_function(const Hermitian& a, Fn&& phi) {
  return matrix_function(spectral_decompose(a), std::forward<Fn>(phi));
}

inline Hermitian sqrtm(const Hermitian& a) {
  return matrix_function(a, [](double x) {
    if (x < -tol::kConstruct) return std::nan("");
    return std::sqrt(std::max(x, 0.0));
  });
}

inline Hermitian logm(const Hermitian& a) {
  return matrix_function(a, [](double x) { return x > 0.0 ? std::log(x) : std::nan(""); });
}

/// a^power for positive definite a.
inline Hermitian powm(const Hermitian& a, double power) {
  return matrix_function(a, [power](double x) { return x > 0.0 ? std::pow(x, power) : std::nan(""); });
}

/// A_ρ(x) = (ρx + xρ)/2.
inline Hermitian anticomm_super(const Hermitian& rho, const Hermitian& x) {
  require_same_dim(rho.matrix(), x.matrix(), "anticomm_super");
  return Hermitian::symmetrized(0.5 * (rho.matrix() * x.matrix() + x.matrix() * rho.matrix()));
}

/// Solves A_ρ(x) = v. Entry (j,k) in ρ's eigenbasis is divided by (p_j+p_k)/2.
inline Hermitian anticomm_solve(const Spectrum& rho, const Hermitian& v) {
  if (rho.dim() != v.dim()) throw DimensionMismatch("anticomm_solve: dimension mismatch");
  if (rho.values.minCoeff() <= tol::kFaithful) {
    throw DomainError("anticomm_solve: rho is not strictly positive");
  }
  return Hermitian::symmetrized(eigenbasis_scale(
      rho, v.matrix(), [](double pj, double pk, auto, auto) { return 2.0 / (pj + pk); }));
}

inline Hermitian anticomm_solve(const Hermitian& rho, const Hermitian& v) {
  require_same_dim(rho.matrix(), v.matrix(), "anticomm_solve");
  return anticomm_solve(spectral_decompose(rho), v);
}

// ---------------------------------------------------------------------------
// Generalized Pauli basis

enum class SuKind { kTau1, kTau2, kTau3 };

/// Label of one basis element; indices are 0-based with j < k
/// (k = j + 1 for kTau3).
struct SuBasisElement {
  SuKind kind;
  int j;
  int k;

  [[nodiscard]] CMatrix matrix(int n) const {
    if (j < 0 || k >= n || j >= k || (kind == SuKind::kTau3 && k != j + 1)) {
      throw DomainError("SuBasisElement: index out of range");
    }
    CMatrix m = CMatrix::Zero(n, n);
    switch (kind) {
      case SuKind::kTau1:
        m(j, k) = 1.0;
        m(k, j) = 1.0;
        break;
      case SuKind::kTau2:
        m(j, k) = -kI;
        m(k, j) = kI;
        break;
      case SuKind::kTau3:
        m(j, j) = 1.0;
        m(k, k) = -1.0;
        break;
    }
    return m;
  }
};

/// τ1 pairs lexicographic, τ2 pairs lexicographic, τ3 adjacent pairs.
inline std::vector<SuBasisElement> su_basis_labels(int n) {
  if (n < 2) throw DomainError("su_basis: n must be >= 2");
  std::vector<SuBasisElement> out;
  out.reserve(static_cast<std::size_t>(n * n - 1));
  for (auto kind : {SuKind::kTau1, SuKind::kTau2}) {
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) out.push_back({kind, j, k});
    }
  }
  for (int l = 0; l + 1 < n; ++l) out.push_back({SuKind::kTau3, l, l + 1});
  return out;
}

/// n²−1 traceless Hermitian matrices; for n = 2 these are σ1, σ2, σ3.
inline std::vector<Hermitian> su_basis(int n) {
  std::vector<Hermitian> out;
  for (const auto& label : su_basis_labels(n)) out.push_back(Hermitian(label.matrix(n)));
  return out;
}

inline CMatrix pauli_x() { return (CMatrix(2, 2) << 0, 1, 1, 0).finished(); }
inline CMatrix pauli_y() { return (CMatrix(2, 2) << 0, -kI, kI, 0).finished(); }
inline CMatrix pauli_z() { return (CMatrix(2, 2) << 1, 0, 0, -1).finished(); }

/// (x − y)/(ln x − ln y), continuously extended by x on the diagonal.
/// Evaluated as y·expm1(t)/t with t = ln x − ln y.
inline double logarithmic_mean(double x, double y) {
  const double t = std::log(x) - std::log(y);
  if (std::abs(t) < 1e-9) return y * (1.0 + t / 2.0 + t * t / 6.0);
  return y * std::expm1(t) / t;
}

inline CMatrix diag(const RVector& d) {
  return d.cast<Complex>().asDiagonal();
}

}  // namespace qig
