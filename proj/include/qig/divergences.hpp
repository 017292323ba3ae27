#pragma once

// Quantum and classical divergence functions.

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qig/matcore.hpp"
#include "qig/states.hpp"

namespace qig {

/// Scalar function g labelling a relative g-entropy. The vanishing and
/// curvature flags are verified at construction; operator convexity is
/// trusted metadata.
class GFunction {
 public:
  using Eval = std::function<double(double)>;

  GFunction(std::string name, Eval eval, bool vanishing_at_one, bool normalized_curvature,
            bool operator_convex)
      : name_(std::move(name)),
        eval_(std::move(eval)),
        vanishing_at_one_(vanishing_at_one),
        normalized_curvature_(normalized_curvature),
        operator_convex_(operator_convex) {
    if (vanishing_at_one_ && std::abs(eval_(1.0)) > tol::kConstruct) {
      throw InvariantViolation("GFunction '" + name_ + "': g(1) != 0");
    }
    if (normalized_curvature_ && std::abs(second_derivative_at_one() - 1.0) > 1e-6) {
      throw InvariantViolation("GFunction '" + name_ + "': g''(1) != 1");
    }
  }

  double operator()(double x) const { return eval_(x); }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] bool vanishing_at_one() const noexcept { return vanishing_at_one_; }
  [[nodiscard]] bool normalized_curvature() const noexcept { return normalized_curvature_; }
  [[nodiscard]] bool operator_convex() const noexcept { return operator_convex_; }

  /// Central second difference at x = 1 (step 1e-4).
  [[nodiscard]] double second_derivative_at_one() const {
    constexpr double h = 1e-4;
    return (eval_(1.0 + h) - 2.0 * eval_(1.0) + eval_(1.0 - h)) / (h * h);
  }

 private:
  std::string name_;
  Eval eval_;
  bool vanishing_at_one_;
  bool normalized_curvature_;
  bool operator_convex_;
};

/// Built-in g: "BKM" −ln x, "BH" (1−x)²/(1+x), "WY" 4(1−√x).
inline GFunction builtin_g(const std::string& name) {
  if (name == "BKM") return {"BKM", [](double x) { return -std::log(x); }, true, true, true};
  if (name == "BH") {
    return {"BH",
            [](double x) {
              const double d = 1.0 - x;
              return d * d / (1.0 + x);
            },
            true, true, true};
  }
  if (name == "WY") return {"WY", [](double x) { return 4.0 * (1.0 - std::sqrt(x)); }, true, true, true};
  throw DomainError("builtin_g: unknown name '" + name + "' (expected BKM, BH or WY)");
}

inline std::vector<GFunction> registry_g() {
  return {builtin_g("BKM"), builtin_g("BH"), builtin_g("WY")};
}

namespace detail {
inline void require_pair(const DensityMatrix& rho, const DensityMatrix& sigma, const char* op) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch(std::string(op) + ": dimension mismatch");
}
}  // namespace detail

/// S_g(ρ, σ) = Σ_jk g(q_j/p_k) p_k |<k|U†V|j>|² for ρ = U diag(p) U†,
/// σ = V diag(q) V†.
inline double g_entropy(const GFunction& g, const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_pair(rho, sigma, "g_entropy");
  const Spectrum& r = rho.spectrum();
  const Spectrum& s = sigma.spectrum();
  const CMatrix overlap = r.vectors.adjoint() * s.vectors;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < r.dim(); ++k) {
    const double pk = r.values(k);
    const double log_pk = std::log(pk);
    for (Eigen::Index j = 0; j < s.dim(); ++j) {
      const double ratio = std::exp(std::log(s.values(j)) - log_pk);
      acc += g(ratio) * pk * std::norm(overlap(k, j));
    }
  }
  return acc;
}

/// Tr(ρ ln ρ − ρ ln σ).
inline double vnu_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_pair(rho, sigma, "vnu_entropy");
  const RVector& p = rho.spectrum().values;
  const double self = (p.array() * p.array().log()).sum();
  const Hermitian log_sigma =
      matrix_function(sigma.spectrum(), [](double x) { return x > 0.0 ? std::log(x) : std::nan(""); });
  return self - (rho.matrix() * log_sigma.matrix()).trace().real();
}

/// [Tr √(√ρ σ √ρ)]².
inline double bures_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_pair(rho, sigma, "bures_fidelity");
  const CMatrix root = matrix_function(rho.spectrum(), [](double x) { return std::sqrt(x); }).matrix();
  const Spectrum inner = spectral_decompose(Hermitian::symmetrized(root * sigma.matrix() * root));
  const double t = inner.values.cwiseMax(0.0).cwiseSqrt().sum();
  return t * t;
}

/// 2(1 − √F).
inline double bures_divergence(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return 2.0 * (1.0 - std::sqrt(bures_fidelity(rho, sigma)));
}

namespace detail {
inline void require_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha)) {
    throw DomainError("Renyi divergence: alpha must lie in (0,1) or (1,inf); use vnu_entropy at alpha = 1");
  }
}

inline Hermitian spectral_power(const DensityMatrix& rho, double power) {
  return matrix_function(rho.spectrum(), [power](double x) { return std::pow(x, power); });
}
}  // namespace detail

/// (α−1)⁻¹ log Tr[(ρ^{α/2z} σ^{(1−α)/z} ρ^{α/2z})^z].
inline double alpha_z_renyi(double alpha, double z, const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_alpha(alpha);
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("alpha_z_renyi: z must be positive");
  detail::require_pair(rho, sigma, "alpha_z_renyi");
  const CMatrix outer = detail::spectral_power(rho, alpha / (2.0 * z)).matrix();
  const CMatrix middle = detail::spectral_power(sigma, (1.0 - alpha) / z).matrix();
  const Spectrum s = spectral_decompose(Hermitian::symmetrized(outer * middle * outer));
  const double trace = s.values.cwiseMax(0.0).array().pow(z).sum();
  return std::log(trace) / (alpha - 1.0);
}

/// z = 1 preset: (α−1)⁻¹ log Tr(ρ^α σ^{1−α}).
inline double petz_renyi(double alpha, const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_alpha(alpha);
  detail::require_pair(rho, sigma, "petz_renyi");
  const CMatrix a = detail::spectral_power(rho, alpha).matrix();
  const CMatrix b = detail::spectral_power(sigma, 1.0 - alpha).matrix();
  return std::log((a * b).trace().real()) / (alpha - 1.0);
}

/// z = α preset: (α−1)⁻¹ log Tr[(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α].
inline double sandwiched_renyi(double alpha, const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_alpha(alpha);
  detail::require_pair(rho, sigma, "sandwiched_renyi");
  const CMatrix outer = detail::spectral_power(sigma, (1.0 - alpha) / (2.0 * alpha)).matrix();
  const Spectrum s = spectral_decompose(Hermitian::symmetrized(outer * rho.matrix() * outer));
  const double trace = s.values.cwiseMax(0.0).array().pow(alpha).sum();
  return std::log(trace) / (alpha - 1.0);
}

// ---------------------------------------------------------------------------
// Classical divergences

inline void require_same_length(const ProbVector& p, const ProbVector& q, const char* op) {
  if (p.size() != q.size()) throw DimensionMismatch(std::string(op) + ": length mismatch");
}

/// Σ p_j ln p_j − p_j ln q_j.
inline double classical_kl(const ProbVector& p, const ProbVector& q) {
  require_same_length(p, q, "classical_kl");
  return (p.values().array() * (p.values().array().log() - q.values().array().log())).sum();
}

/// Σ f(p_j/q_j) q_j for convex f with f(1) = 0.
inline double classical_f_div(const std::function<double(double)>& fconv, const ProbVector& p,
                              const ProbVector& q) {
  require_same_length(p, q, "classical_f_div");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j) acc += fconv(p(j) / q(j)) * q(j);
  return acc;
}

// ---------------------------------------------------------------------------
// Registry

/// Named two-point function on faithful states.
struct DivergenceSpec {
  using Evaluator = std::function<double(const DensityMatrix&, const DensityMatrix&)>;

  std::string name;
  Evaluator evaluator;
  std::map<std::string, double> parameters;
  /// S ≥ 0 with S(ρ, ρ) = 0.
  bool divergence = true;
  /// Contracts under every CPTP map.
  bool monotone = true;

  double operator()(const DensityMatrix& rho, const DensityMatrix& sigma) const {
    return evaluator(rho, sigma);
  }
};

inline DivergenceSpec vnu_spec() { return {"vnu", vnu_entropy, {}, true, true}; }

inline DivergenceSpec bures_spec() { return {"bures", bures_divergence, {}, true, true}; }

inline DivergenceSpec g_entropy_spec(const GFunction& g) {
  return {"g_" + g.name(),
          [g](const DensityMatrix& r, const DensityMatrix& s) { return g_entropy(g, r, s); },
          {},
          g.vanishing_at_one(),
          g.operator_convex()};
}

inline DivergenceSpec petz_renyi_spec(double alpha) {
  detail::require_alpha(alpha);
  // Data processing holds for α ∈ (0,1) ∪ (1,2].
  return {"petz_renyi",
          [alpha](const DensityMatrix& r, const DensityMatrix& s) { return petz_renyi(alpha, r, s); },
          {{"alpha", alpha}, {"z", 1.0}},
          true,
          alpha <= 2.0};
}

inline DivergenceSpec sandwiched_renyi_spec(double alpha) {
  detail::require_alpha(alpha);
  return {"sandwiched_renyi",
          [alpha](const DensityMatrix& r, const DensityMatrix& s) { return sandwiched_renyi(alpha, r, s); },
          {{"alpha", alpha}, {"z", alpha}},
          true,
          alpha >= 0.5};
}

/// Monotonicity is flagged only inside the region 0<α<1, z ≥ max(α, 1−α);
/// 1<α≤2, α/2 ≤ z ≤ α; α ≥ 2, α−1 ≤ z ≤ α.
inline DivergenceSpec alpha_z_spec(double alpha, double z) {
  detail::require_alpha(alpha);
  if (!(z > 0.0)) throw DomainError("alpha_z_spec: z must be positive");
  bool monotone = false;
  if (alpha < 1.0) {
    monotone = z >= std::max(alpha, 1.0 - alpha);
  } else if (alpha <= 2.0) {
    monotone = z >= alpha / 2.0 && z <= alpha;
  } else {
    monotone = z >= alpha - 1.0 && z <= alpha;
  }
  return {"alpha_z",
          [alpha, z](const DensityMatrix& r, const DensityMatrix& s) { return alpha_z_renyi(alpha, z, r, s); },
          {{"alpha", alpha}, {"z", z}},
          true,
          monotone};
}

/// Every registered divergence function.
inline std::vector<DivergenceSpec> registry_divergences() {
  std::vector<DivergenceSpec> out{vnu_spec(), bures_spec()};
  for (const auto& g : registry_g()) out.push_back(g_entropy_spec(g));
  out.push_back(petz_renyi_spec(0.5));
  out.push_back(sandwiched_renyi_spec(0.75));
  out.push_back(sandwiched_renyi_spec(2.0));
  return out;
}

/// Names: vnu, bures, g_BKM, g_BH, g_WY, petz_renyi, sandwiched_renyi,
/// alpha_z (the Rényi entries take α and z).
inline DivergenceSpec divergence_by_name(const std::string& name, double alpha = 0.5, double z = 1.0) {
  if (name == "vnu") return vnu_spec();
  if (name == "bures") return bures_spec();
  if (name.rfind("g_", 0) == 0) return g_entropy_spec(builtin_g(name.substr(2)));
  if (name == "petz_renyi") return petz_renyi_spec(alpha);
  if (name == "sandwiched_renyi") return sandwiched_renyi_spec(alpha);
  if (name == "alpha_z") return alpha_z_spec(alpha, z);
  throw DomainError("unknown divergence '" + name + "'");
}

/// Deliberately broken two-point function Tr(ρσ); not a potential function.
inline DivergenceSpec trace_product_spec() {
  return {"trace_product",
          [](const DensityMatrix& r, const DensityMatrix& s) { return (r.matrix() * s.matrix()).trace().real(); },
          {},
          false,
          false};
}

}  // namespace qig
