#pragma once

// Invariant suites shared by the `verify` CLI verb and the acceptance
// binary. Every suite is deterministic given the configured seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qig/channels.hpp"
#include "qig/divergences.hpp"
#include "qig/extraction.hpp"
#include "qig/geodesics.hpp"
#include "qig/identifications.hpp"
#include "qig/json_io.hpp"
#include "qig/metrics.hpp"
#include "qig/states.hpp"

namespace qig::verify {

using io::Json;

struct SuiteConfig {
  std::vector<int> dims{2, 3, 4};
  int trials = 200;
  int monotonicity_trials = 500;
  int geodesic_trials = 2;
  std::uint64_t seed = 20240611;
  double h = kDefaultStep;
  /// Multiplies every tolerance; 0 forces failure.
  double tolerance_scale = 1.0;
  /// Per-check tolerance overrides, keyed "suite/check".
  std::map<std::string, double> tolerances;
  std::string output_dir = "qig-report";

  void validate() const {
    if (dims.empty()) throw InvariantViolation("SuiteConfig: dims must be non-empty");
    for (int n : dims) {
      if (n < 2 || n > 8) throw InvariantViolation("SuiteConfig: dims must lie in {2,...,8}");
    }
    if (trials < 1 || monotonicity_trials < 1 || geodesic_trials < 1) {
      throw InvariantViolation("SuiteConfig: trial counts must be >= 1");
    }
    if (!(h >= 1e-5 && h <= 1e-2)) throw InvariantViolation("SuiteConfig: h must lie in [1e-5, 1e-2]");
    if (!(tolerance_scale >= 0.0)) throw InvariantViolation("SuiteConfig: tolerance_scale must be >= 0");
  }
};

inline SuiteConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw io::FormatError("config must be a JSON object");
  SuiteConfig c;
  try {
    if (j.contains("dims")) c.dims = j.at("dims").get<std::vector<int>>();
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("monotonicity_trials")) c.monotonicity_trials = j.at("monotonicity_trials").get<int>();
    if (j.contains("geodesic_trials")) c.geodesic_trials = j.at("geodesic_trials").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("h")) c.h = j.at("h").get<double>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("tolerance")) {
      const Json& t = j.at("tolerance");
      if (t.is_number()) {
        c.tolerance_scale = t.get<double>();
      } else {
        if (t.contains("scale")) c.tolerance_scale = t.at("scale").get<double>();
        if (t.contains("overrides")) c.tolerances = t.at("overrides").get<std::map<std::string, double>>();
      }
    }
  } catch (const Json::exception& e) {
    throw io::FormatError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline Json to_json(const SuiteConfig& c) {
  return {{"dims", c.dims},
          {"trials", c.trials},
          {"monotonicity_trials", c.monotonicity_trials},
          {"geodesic_trials", c.geodesic_trials},
          {"seed", c.seed},
          {"h", c.h},
          {"tolerance", {{"scale", c.tolerance_scale}, {"overrides", c.tolerances}}}};
}

struct Sample {
  int n = 0;
  int trial = 0;
  double value = 0.0;
};

/// One named acceptance check. `at_least` checks require every sample to be
/// at least the tolerance; the others require at most.
struct Check {
  std::string name;
  double tolerance = 0.0;
  bool at_least = false;
  std::vector<Sample> samples;

  void record(int n, int trial, double value) { samples.push_back({n, trial, value}); }

  [[nodiscard]] double worst() const {
    if (samples.empty()) return 0.0;
    double w = samples.front().value;
    for (const auto& s : samples) w = at_least ? std::min(w, s.value) : std::max(w, s.value);
    return w;
  }

  [[nodiscard]] bool passed() const {
    for (const auto& s : samples) {
      if (!std::isfinite(s.value)) return false;
      if (at_least ? s.value < tolerance : s.value > tolerance) return false;
    }
    return true;
  }
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;

  [[nodiscard]] bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
  }
};

namespace detail {

inline Rng suite_rng(const SuiteConfig& cfg, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return Rng(seq);
}

inline Check make_check(const SuiteConfig& cfg, const std::string& suite, const std::string& name,
                        double tolerance, bool at_least = false) {
  const auto it = cfg.tolerances.find(suite + "/" + name);
  const double base = it == cfg.tolerances.end() ? tolerance : it->second;
  return {name, at_least ? base : base * cfg.tolerance_scale, at_least, {}};
}

inline double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

/// Step h scaled by the smallest probability, clamped to the admissible range.
inline double scaled_step(double h, const RVector& p) { return std::max(1e-5, h * p.minCoeff()); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Suites

/// Closed forms against the superoperator path with solved parameters.
inline SuiteResult closed_form_suite(const SuiteConfig& cfg) {
  const std::string s = "closed_form";
  Rng rng = detail::suite_rng(cfg, 1);
  Check bh = detail::make_check(cfg, s, "bh", 1e-10);
  Check wy = detail::make_check(cfg, s, "wy", 1e-9);
  Check bkm = detail::make_check(cfg, s, "bkm", 1e-9);
  for (int n : cfg.dims) {
    for (int i = 0; i < cfg.trials; ++i) {
      const DensityMatrix rho = random_density(n, rng);
      const TangentVector v = random_tangent(n, rng);
      const TangentVector w = random_tangent(n, rng);
      const double g_bh = petz_metric(Family::kBH, rho, v, w);
      bh.record(n, i, detail::rel_err(bh_closed(rho, jordan_solve(rho, v), jordan_solve(rho, w)), g_bh));
      const double g_wy = petz_metric(Family::kWY, rho, v, w);
      wy.record(n, i, detail::rel_err(2.0 * wy_closed(rho, sqrt_solve(rho, v), sqrt_solve(rho, w)), g_wy));
      const double g_bkm = petz_metric(Family::kBKM, rho, v, w);
      bkm.record(n, i, detail::rel_err(bkm_closed(rho, exp_solve(rho, v), exp_solve(rho, w)), g_bkm));
    }
  }
  return {s, {bh, wy, bkm}};
}

/// Diagonal tangents at ρ = U diag(p) U†: every f gives Fisher-Rao.
inline SuiteResult commuting_suite(const SuiteConfig& cfg) {
  const std::string s = "commuting_reduction";
  Rng rng = detail::suite_rng(cfg, 2);
  std::vector<Check> checks;
  for (const auto& f : registry_f()) {
    Check c = detail::make_check(cfg, s, f.name(), 1e-12);
    for (int n : cfg.dims) {
      for (int i = 0; i < cfg.trials; ++i) {
        const UnfoldedPoint x = random_unfolded_point(n, rng);
        const RVector a = random_zero_sum(n, rng);
        const RVector b = random_zero_sum(n, rng);
        const CMatrix& u = x.unitary();
        const DensityMatrix rho = fold(x);
        const TangentVector v = TangentVector::projected(u * diag(a) * u.adjoint());
        const TangentVector w = TangentVector::projected(u * diag(b) * u.adjoint());
        c.record(n, i, detail::rel_err(petz_metric(f, rho, v, w), fisher_rao(x.probabilities(), a, b)));
      }
    }
    checks.push_back(std::move(c));
  }
  return {s, std::move(checks)};
}

/// Haar conjugation leaves every metric and divergence unchanged.
inline SuiteResult unitary_invariance_suite(const SuiteConfig& cfg) {
  const std::string s = "unitary_invariance";
  Rng rng = detail::suite_rng(cfg, 3);
  std::vector<Check> checks;
  auto conj = [](const CMatrix& v, const CMatrix& m) { return CMatrix(v * m * v.adjoint()); };
  for (const auto& f : registry_f()) {
    Check c = detail::make_check(cfg, s, "metric_" + f.name(), 1e-10);
    for (int n : cfg.dims) {
      for (int i = 0; i < cfg.trials; ++i) {
        const DensityMatrix rho = random_density(n, rng);
        const TangentVector v = random_tangent(n, rng);
        const TangentVector w = random_tangent(n, rng);
        const CMatrix u = random_unitary(n, rng);
        const double before = petz_metric(f, rho, v, w);
        const double after = petz_metric(f, DensityMatrix(Hermitian::symmetrized(conj(u, rho.matrix()))),
                                         TangentVector::projected(conj(u, v.matrix())),
                                         TangentVector::projected(conj(u, w.matrix())));
        c.record(n, i, detail::rel_err(after, before));
      }
    }
    checks.push_back(std::move(c));
  }
  for (const auto& spec : registry_divergences()) {
    std::string label = spec.name;
    if (spec.parameters.count("alpha")) label += "_" + io::format_double(spec.parameters.at("alpha"));
    Check c = detail::make_check(cfg, s, "divergence_" + label, 1e-10);
    for (int n : cfg.dims) {
      for (int i = 0; i < cfg.trials; ++i) {
        const DensityMatrix rho = random_density(n, rng);
        const DensityMatrix sigma = random_density(n, rng);
        const CMatrix u = random_unitary(n, rng);
        const double before = spec(rho, sigma);
        const double after = spec(DensityMatrix(Hermitian::symmetrized(conj(u, rho.matrix()))),
                                  DensityMatrix(Hermitian::symmetrized(conj(u, sigma.matrix()))));
        c.record(n, i, detail::rel_err(after, before));
      }
    }
    checks.push_back(std::move(c));
  }
  return {s, std::move(checks)};
}

/// Pullback formula against T π followed by the Petz metric; diagonal
/// generators reduce to Fisher-Rao.
inline SuiteResult unfolded_split_suite(const SuiteConfig& cfg) {
  const std::string s = "unfolded_split";
  Rng rng = detail::suite_rng(cfg, 4);
  std::vector<Check> checks;
  for (const auto& f : registry_f()) {
    Check direct = detail::make_check(cfg, s, "direct_" + f.name(), 1e-10);
    Check theta3 = detail::make_check(cfg, s, "theta3_" + f.name(), 1e-10);
    for (int n : cfg.dims) {
      for (int i = 0; i < cfg.trials; ++i) {
        const UnfoldedPoint x = random_unfolded_point(n, rng);
        const UnfoldedTangent t1 = random_unfolded_tangent(n, rng);
        const UnfoldedTangent t2 = random_unfolded_tangent(n, rng);
        const DensityMatrix rho = fold(x);
        const double ref = petz_metric(f, rho, tangent_map_pi(x, t1), tangent_map_pi(x, t2));
        direct.record(n, i, detail::rel_err(pullback_eval(f, x, t1, t2), ref));
        // Diagonal generator: only the θ³ and simplex components survive.
        RVector d = random_zero_sum(n, rng);
        const UnfoldedTangent t3{Hermitian(diag(d)), random_zero_sum(n, rng)};
        const double fr = fisher_rao(x.probabilities(), t1.a(), t3.a());
        const double split = pullback_eval(f, x, t1, t3);
        const double via_pi = petz_metric(f, rho, tangent_map_pi(x, t1), tangent_map_pi(x, t3));
        theta3.record(n, i, std::max(detail::rel_err(split, fr), detail::rel_err(via_pi, fr)));
      }
    }
    checks.push_back(std::move(direct));
    checks.push_back(std::move(theta3));
  }
  return {s, std::move(checks)};
}

/// Tensors extracted from divergences against the metrics they induce.
inline SuiteResult extraction_suite(const SuiteConfig& cfg) {
  const std::string s = "extraction";
  Rng rng = detail::suite_rng(cfg, 5);
  Check vnu = detail::make_check(cfg, s, "vnu_vs_bkm", 1e-5);
  std::vector<Check> corr;
  for (const auto& g : registry_g()) corr.push_back(detail::make_check(cfg, s, "g_" + g.name(), 1e-4));
  Check kl = detail::make_check(cfg, s, "kl_entries", 1e-8);
  Check consistency = detail::make_check(cfg, s, "ll_rr_lr_consistency", 1e-4);
  const auto gs = registry_g();
  for (int n : cfg.dims) {
    for (int i = 0; i < cfg.trials; ++i) {
      const UnfoldedPoint x = random_unfolded_point(n, rng);
      const UnfoldedTangent t1 = random_unfolded_tangent(n, rng);
      const UnfoldedTangent t2 = random_unfolded_tangent(n, rng);
      const ExtractionReport r = extract_tensor(vnu_spec(), x, t1, t2, cfg.h);
      const double ref = petz_metric(Family::kBKM, fold(x), tangent_map_pi(x, t1), tangent_map_pi(x, t2));
      vnu.record(n, i, detail::rel_err(r.tensor(), ref));
      consistency.record(n, i, r.consistency_delta() / std::max(1.0, std::abs(ref)));
      for (std::size_t k = 0; k < gs.size(); ++k) {
        const double extracted = extract_tensor(g_entropy_spec(gs[k]), x, t1, t2, cfg.h).tensor();
        corr[k].record(n, i, detail::rel_err(extracted, pullback_eval(f_from_g(gs[k]), x, t1, t2)));
      }
      const ProbVector p = random_chamber_point(n, rng);
      const Eigen::MatrixXd hess = extract_classical(kl_sum, p.values(), detail::scaled_step(cfg.h, p.values()));
      const Eigen::MatrixXd expect = p.values().cwiseInverse().asDiagonal();
      kl.record(n, i, (hess - expect).cwiseAbs().maxCoeff() / std::max(1.0, expect.maxCoeff()));
    }
  }
  std::vector<Check> checks{vnu};
  checks.insert(checks.end(), corr.begin(), corr.end());
  checks.push_back(kl);
  checks.push_back(consistency);
  return {s, std::move(checks)};
}

/// f_from_g against the closed-form registry members.
inline SuiteResult fg_algebra_suite(const SuiteConfig& cfg) {
  const std::string s = "f_g_algebra";
  std::vector<Check> checks;
  const std::vector<std::pair<std::string, Family>> pairs{
      {"BKM", Family::kBKM}, {"BH", Family::kBH}, {"WY", Family::kWY}};
  Check unit = detail::make_check(cfg, s, "f_at_one", 1e-12);
  for (const auto& [gname, fam] : pairs) {
    const MonotoneFunction derived = f_from_g(builtin_g(gname));
    const MonotoneFunction reference = builtin_f(fam);
    Check c = detail::make_check(cfg, s, "f_from_g_" + gname, 1e-10);
    int i = 0;
    for (double x : log_spaced_grid()) c.record(0, i++, detail::rel_err(derived(x), reference(x)));
    unit.record(0, static_cast<int>(checks.size()), std::abs(derived(1.0) - 1.0));
    checks.push_back(std::move(c));
  }
  checks.push_back(std::move(unit));
  return {s, std::move(checks)};
}

/// Randomized CPTP contraction of metrics and divergences.
inline SuiteResult monotonicity_suite(const SuiteConfig& cfg) {
  const std::string s = "monotonicity";
  Rng rng = detail::suite_rng(cfg, 7);
  std::vector<Check> checks;
  for (const auto& f : registry_f()) {
    Check c = detail::make_check(cfg, s, "metric_" + f.name(), 1e-8);
    Check u = detail::make_check(cfg, s, "unitary_metric_" + f.name(), 1e-10);
    for (int n : cfg.dims) {
      const SweepSummary sw = metric_sweep(f, n, cfg.monotonicity_trials, rng);
      for (std::size_t i = 0; i < sw.margins.size(); ++i) c.record(n, static_cast<int>(i), -sw.margins[i]);
      u.record(n, 0, unitary_metric_margin(f, n, 20, rng));
    }
    checks.push_back(std::move(c));
    checks.push_back(std::move(u));
  }
  for (const auto& spec : registry_divergences()) {
    if (!spec.monotone) continue;
    std::string label = spec.name;
    if (spec.parameters.count("alpha")) label += "_" + io::format_double(spec.parameters.at("alpha"));
    Check c = detail::make_check(cfg, s, "divergence_" + label, 1e-9);
    Check u = detail::make_check(cfg, s, "unitary_divergence_" + label, 1e-10);
    for (int n : cfg.dims) {
      const SweepSummary sw = divergence_sweep(spec, n, cfg.monotonicity_trials, rng);
      for (std::size_t i = 0; i < sw.margins.size(); ++i) c.record(n, static_cast<int>(i), -sw.margins[i]);
      u.record(n, 0, unitary_divergence_margin(spec, n, 20, rng));
    }
    checks.push_back(std::move(c));
    checks.push_back(std::move(u));
  }
  return {s, std::move(checks)};
}

/// Universal geodesics under every registered f, the bent-curve control,
/// normalization along the curve and the qubit closed form.
inline SuiteResult geodesic_suite(const SuiteConfig& cfg) {
  const std::string s = "geodesics";
  Rng rng = detail::suite_rng(cfg, 8);
  constexpr double kThreshold = 1e-4;
  std::vector<Check> residual;
  for (const auto& f : registry_f()) residual.push_back(detail::make_check(cfg, s, "residual_" + f.name(), kThreshold));
  Check bent = detail::make_check(cfg, s, "bent_over_threshold", 10.0, true);
  Check norm = detail::make_check(cfg, s, "normalization", 1e-13);
  Check qubit = detail::make_check(cfg, s, "qubit_closed_form", 1e-12);
  const auto fs = registry_f();
  for (int n : cfg.dims) {
    for (int i = 0; i < cfg.geodesic_trials; ++i) {
      const UnfoldedPoint x = random_unfolded_point(n, rng);
      const RVector a = 0.3 * random_zero_sum(n, rng);
      const FRGeodesic geo(x.probabilities(), a);
      const double span = std::min(1.0, 0.5 * geo.t_max());
      const RVector bend = random_zero_sum(n, rng);
      const double amplitude = 0.1 * x.p().minCoeff();
      ResidualOptions opt;
      opt.seed = rng();
      for (std::size_t k = 0; k < fs.size(); ++k) {
        residual[k].record(n, i, geodesic_residual(fs[k], x, a, span, opt).relative());
        const double b = bent_curve_residual(fs[k], x, a, span, amplitude, bend, opt).relative();
        bent.record(n, i, b / kThreshold);
      }
      double worst = 0.0;
      for (int j = 0; j <= 100; ++j) worst = std::max(worst, std::abs(geo.raw(span * j / 100.0).sum() - 1.0));
      norm.record(n, i, worst);
    }
  }
  const RVector half = RVector::Constant(2, 0.5);
  const FRGeodesic q(ProbVector(half), (RVector(2) << 0.5, -0.5).finished());
  for (int j = 0; j <= 100; ++j) {
    const double t = -1.5 + 3.0 * j / 100.0;
    const RVector p = q.raw(t);
    const double e = std::max(std::abs(p(0) - (0.5 + 0.5 * std::sin(t))), std::abs(p(1) - (0.5 - 0.5 * std::sin(t))));
    qubit.record(2, j, e);
  }
  std::vector<Check> checks = residual;
  checks.push_back(bent);
  checks.push_back(norm);
  checks.push_back(qubit);
  return {s, std::move(checks)};
}

/// First-order conditions of every registered divergence, plus the broken
/// two-point function Tr(ρσ) which must be flagged.
inline SuiteResult potential_suite(const SuiteConfig& cfg) {
  const std::string s = "potential";
  Rng rng = detail::suite_rng(cfg, 9);
  std::vector<Check> checks;
  const auto specs = registry_divergences();
  for (const auto& spec : specs) {
    std::string label = spec.name;
    if (spec.parameters.count("alpha")) label += "_" + io::format_double(spec.parameters.at("alpha"));
    checks.push_back(detail::make_check(cfg, s, label, 1e-8));
  }
  Check broken = detail::make_check(cfg, s, "broken_flagged", 1e-6, true);
  const DivergenceSpec bad = trace_product_spec();
  const int trials = std::max(1, cfg.trials / 10);
  for (int n : cfg.dims) {
    for (int i = 0; i < trials; ++i) {
      const UnfoldedPoint x = random_unfolded_point(n, rng);
      const UnfoldedTangent t = random_unfolded_tangent(n, rng);
      const double h = detail::scaled_step(cfg.h, x.p());
      for (std::size_t k = 0; k < specs.size(); ++k) {
        const auto r = check_potential(specs[k], x, t, h);
        checks[k].record(n, i, std::max(r.first, r.second));
      }
      // Along this direction d/ds Tr(ρ(s)ρ) = Σ a_j p_j = 0.5‖p − mean(p)‖ > 0.
      const RVector centred = (x.p().array() - x.p().mean()).matrix();
      const RVector a = 0.5 * centred / centred.norm();
      const auto r = check_potential(bad, x, UnfoldedTangent(t.generator(), a), h);
      broken.record(n, i, std::max(r.first, r.second));
    }
  }
  checks.push_back(std::move(broken));
  return {s, std::move(checks)};
}

struct NamedSuite {
  std::string name;
  std::function<SuiteResult(const SuiteConfig&)> run;
};

inline std::vector<NamedSuite> all_suites() {
  return {{"closed_form", closed_form_suite},
          {"commuting_reduction", commuting_suite},
          {"unitary_invariance", unitary_invariance_suite},
          {"unfolded_split", unfolded_split_suite},
          {"extraction", extraction_suite},
          {"f_g_algebra", fg_algebra_suite},
          {"monotonicity", monotonicity_suite},
          {"geodesics", geodesic_suite},
          {"potential", potential_suite}};
}

// ---------------------------------------------------------------------------
// Reporting

inline Json to_json(const Check& c) {
  return {{"name", c.name},
          {"passed", c.passed()},
          {"worst", c.worst()},
          {"tolerance", c.tolerance},
          {"bound", c.at_least ? "min" : "max"},
          {"samples", c.samples.size()}};
}

inline Json to_json(const SuiteResult& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"name", r.name}, {"passed", r.passed()}, {"checks", checks}};
}

inline std::string suite_csv(const SuiteResult& r) {
  std::ostringstream out;
  out << "check,n,trial,value,tolerance,bound\n";
  for (const auto& c : r.checks) {
    for (const auto& smp : c.samples) {
      out << c.name << ',' << smp.n << ',' << smp.trial << ',' << io::format_double(smp.value) << ','
          << io::format_double(c.tolerance) << ',' << (c.at_least ? "min" : "max") << '\n';
    }
  }
  return out.str();
}

struct Report {
  SuiteConfig config;
  std::vector<SuiteResult> suites;

  [[nodiscard]] bool passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
  }

  [[nodiscard]] Json json() const {
    Json arr = Json::array();
    for (const auto& s : suites) arr.push_back(to_json(s));
    return {{"config", to_json(config)}, {"passed", passed()}, {"suites", arr}};
  }
};

inline Report run_all(const SuiteConfig& cfg) {
  cfg.validate();
  Report rep{cfg, {}};
  for (const auto& s : all_suites()) rep.suites.push_back(s.run(cfg));
  return rep;
}

/// report.json plus <suite>.csv in cfg.output_dir.
inline void write_report(const Report& rep, const std::string& dir) {
  std::filesystem::create_directories(dir);
  io::write_text_file((std::filesystem::path(dir) / "report.json").string(), rep.json().dump(2) + "\n");
  for (const auto& s : rep.suites) {
    io::write_text_file((std::filesystem::path(dir) / (s.name + ".csv")).string(), suite_csv(s));
  }
}

}  // namespace qig::verify
