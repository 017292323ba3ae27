#pragma once

// Jordan, square-root and exponential identifications of tangent vectors
// with Hermitian "observable" parameters, their inverses, and the vector
// fields Y_a, W_a, Z_a, X_b.
//
// All three forward maps act entrywise in the eigenbasis of ρ on the
// centered parameter a' = a − Tr(ρa)·I:
//   Jordan       a'_jk (p_j + p_k)/2
//   square-root  a'_jk (√p_j + √p_k)²/2
//   exponential  a'_jk L(p_j, p_k),  L the logarithmic mean
// so each inverse is an entrywise division. The solves return the
// representative with Tr(ρa) = 0.

#include <cmath>
#include <string>

#include "qig/matcore.hpp"
#include "qig/states.hpp"

namespace qig {

/// Hermitian parameter of an identification (not necessarily traceless).
using ObservableParam = Hermitian;

enum class Family { kBH, kWY, kBKM };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::kBH:
      return "BH";
    case Family::kWY:
      return "WY";
    case Family::kBKM:
      return "BKM";
  }
  return "?";
}

inline Family family_from_string(const std::string& name) {
  if (name == "BH") return Family::kBH;
  if (name == "WY") return Family::kWY;
  if (name == "BKM") return Family::kBKM;
  throw DomainError("unknown metric family '" + name + "' (expected BH, WY or BKM)");
}

namespace detail {

inline double jordan_weight(double pj, double pk) { return 0.5 * (pj + pk); }

inline double sqrt_weight(double pj, double pk) {
  const double s = std::sqrt(pj) + std::sqrt(pk);
  return 0.5 * s * s;
}

inline double exp_weight(double pj, double pk) { return logarithmic_mean(pj, pk); }

inline double weight(Family f, double pj, double pk) {
  switch (f) {
    case Family::kBH:
      return jordan_weight(pj, pk);
    case Family::kWY:
      return sqrt_weight(pj, pk);
    case Family::kBKM:
      return exp_weight(pj, pk);
  }
  return 0.0;
}

inline void require_dims(const DensityMatrix& rho, const Hermitian& a, const char* op) {
  if (rho.dim() != a.dim()) throw DimensionMismatch(std::string(op) + ": dimension mismatch");
}

inline double expectation(const DensityMatrix& rho, const Hermitian& a) {
  return (rho.matrix() * a.matrix()).trace().real();
}

inline ObservableParam solve(Family f, const DensityMatrix& rho, const TangentVector& v,
                             const char* op) {
  if (rho.dim() != v.dim()) throw DimensionMismatch(std::string(op) + ": dimension mismatch");
  const Spectrum& s = rho.spectrum();
  if (s.values.minCoeff() <= tol::kFaithful) {
    throw DomainError(std::string(op) + ": rho is singular");
  }
  CMatrix a = eigenbasis_scale(s, v.matrix(),
                               [f](double pj, double pk, auto, auto) { return 1.0 / weight(f, pj, pk); });
  // Gauge Tr(ρa) = 0 holds analytically (it equals Tr v); remove rounding.
  const double c = (rho.matrix() * a).trace().real();
  a.diagonal().array() -= c;
  return Hermitian::symmetrized(a);
}

}  // namespace detail

/// J_ρ^a = {ρ, a} − Tr(aρ)ρ with the Jordan product {x, y} = (xy + yx)/2.
inline TangentVector jordan_forward(const DensityMatrix& rho, const ObservableParam& a) {
  detail::require_dims(rho, a, "jordan_forward");
  const CMatrix v =
      anticomm_super(rho.hermitian(), a).matrix() - detail::expectation(rho, a) * rho.matrix();
  return TangentVector::projected(v);
}

/// S_ρ^a = {ρ, a} + √ρ a √ρ − 2Tr(aρ)ρ.
inline TangentVector sqrt_forward(const DensityMatrix& rho, const ObservableParam& a) {
  detail::require_dims(rho, a, "sqrt_forward");
  const CMatrix root = matrix_function(rho.spectrum(), [](double x) { return std::sqrt(x); }).matrix();
  const CMatrix v = anticomm_super(rho.hermitian(), a).matrix() + root * a.matrix() * root -
                    2.0 * detail::expectation(rho, a) * rho.matrix();
  return TangentVector::projected(v);
}

/// E_ρ^a = ∫₀¹ ρ^λ a ρ^{1−λ} dλ − Tr(ρa)ρ, via the eigenbasis closed form.
inline TangentVector exp_forward(const DensityMatrix& rho, const ObservableParam& a) {
  detail::require_dims(rho, a, "exp_forward");
  const CMatrix integral = eigenbasis_scale(
      rho.spectrum(), a.matrix(), [](double pj, double pk, auto, auto) { return logarithmic_mean(pj, pk); });
  return TangentVector::projected(integral - detail::expectation(rho, a) * rho.matrix());
}

inline ObservableParam jordan_solve(const DensityMatrix& rho, const TangentVector& v) {
  return detail::solve(Family::kBH, rho, v, "jordan_solve");
}

inline ObservableParam sqrt_solve(const DensityMatrix& rho, const TangentVector& v) {
  return detail::solve(Family::kWY, rho, v, "sqrt_solve");
}

inline ObservableParam exp_solve(const DensityMatrix& rho, const TangentVector& v) {
  return detail::solve(Family::kBKM, rho, v, "exp_solve");
}

/// Y_a, W_a or Z_a evaluated at ρ.
inline TangentVector gradient_field(Family kind, const DensityMatrix& rho, const ObservableParam& a) {
  switch (kind) {
    case Family::kBH:
      return jordan_forward(rho, a);
    case Family::kWY:
      return sqrt_forward(rho, a);
    case Family::kBKM:
      return exp_forward(rho, a);
  }
  throw DomainError("gradient_field: unknown family");
}

/// Inverse of gradient_field in the gauge Tr(ρa) = 0.
inline ObservableParam gradient_solve(Family kind, const DensityMatrix& rho, const TangentVector& v) {
  return detail::solve(kind, rho, v, "gradient_solve");
}

/// X_b(ρ) = (i/2)(bρ − ρb), generator of the unitary orbit.
inline TangentVector unitary_field(const DensityMatrix& rho, const Hermitian& b) {
  detail::require_dims(rho, b, "unitary_field");
  const CMatrix v = 0.5 * kI * (b.matrix() * rho.matrix() - rho.matrix() * b.matrix());
  return TangentVector::projected(v);
}

}  // namespace qig
