// qig: command-line driver for metric and divergence evaluation, tensor
// extraction, geodesic sampling, monotonicity sweeps and verification.
//
// Exit codes: 0 success, 1 verification failure or monotonicity violation,
// 2 usage error, malformed input or violated invariant.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qig/qig.hpp"

namespace {

using qig::io::Json;

constexpr int kExitFailure = 1;
constexpr int kExitError = 2;

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    qig::io::write_text_file(path, text);
  }
}

qig::DivergenceSpec divergence_arg(const std::string& name, double alpha, double z) {
  if (name == "trace_product") return qig::trace_product_spec();
  return qig::divergence_by_name(name, alpha, z);
}

struct MetricArgs {
  std::string f = "BH";
  std::string state, v, w, point;
};

int run_metric(const MetricArgs& a) {
  const qig::MonotoneFunction f = qig::builtin_f(a.f);
  if (!a.point.empty()) {
    const auto x = qig::io::point_from_json(qig::io::read_json_file(a.point));
    std::cout << Json{{"metric", a.f}, {"pullback", qig::io::to_json(qig::pullback_metric(f, x))}}.dump(2)
              << "\n";
    return 0;
  }
  if (a.state.empty() || a.v.empty()) throw qig::DomainError("metric: --state and --v are required");
  const auto rho = qig::io::state_from_json(qig::io::read_json_file(a.state));
  const auto v = qig::io::tangent_from_json(qig::io::read_json_file(a.v));
  const auto w = a.w.empty() ? v : qig::io::tangent_from_json(qig::io::read_json_file(a.w));
  std::cout << Json{{"metric", a.f}, {"value", qig::petz_metric(f, rho, v, w)}}.dump(2) << "\n";
  return 0;
}

struct DivergenceArgs {
  std::string name = "vnu";
  std::string rho, sigma;
  double alpha = 0.5;
  double z = 1.0;
};

int run_divergence(const DivergenceArgs& a) {
  const qig::DivergenceSpec spec = divergence_arg(a.name, a.alpha, a.z);
  const auto rho = qig::io::state_from_json(qig::io::read_json_file(a.rho));
  const auto sigma = qig::io::state_from_json(qig::io::read_json_file(a.sigma));
  Json out{{"divergence", spec.name}, {"value", spec(rho, sigma)}};
  if (!spec.parameters.empty()) out["parameters"] = spec.parameters;
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct ExtractArgs {
  std::string divergence = "vnu";
  std::string point, t1, t2;
  double h = qig::kDefaultStep;
  bool no_richardson = false;
  double alpha = 0.5;
  double z = 1.0;
};

int run_extract(const ExtractArgs& a) {
  const qig::DivergenceSpec spec = divergence_arg(a.divergence, a.alpha, a.z);
  const auto x = qig::io::point_from_json(qig::io::read_json_file(a.point));
  const auto t1 = qig::io::unfolded_tangent_from_json(qig::io::read_json_file(a.t1));
  const auto t2 = a.t2.empty() ? t1 : qig::io::unfolded_tangent_from_json(qig::io::read_json_file(a.t2));
  const auto report = qig::extract_tensor(spec, x, t1, t2, a.h, !a.no_richardson);
  Json out = qig::io::to_json(report);
  out["divergence"] = spec.name;
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct GeodesicArgs {
  std::string point;
  std::vector<double> a;
  double t_start = 0.0;
  double t_end = 1.0;
  int samples = 11;
  std::string out;
};

int run_geodesic(const GeodesicArgs& g) {
  const auto x = qig::io::point_from_json(qig::io::read_json_file(g.point));
  const qig::RVector a = Eigen::Map<const qig::RVector>(g.a.data(), static_cast<Eigen::Index>(g.a.size()));
  if (a.size() != x.dim()) throw qig::DimensionMismatch("geodesic: --a length differs from dim");
  if (g.samples < 2) throw qig::DomainError("geodesic: --samples must be >= 2");
  const qig::FRGeodesic geo(x.probabilities(), a);
  std::ostringstream csv;
  csv << "t";
  for (Eigen::Index j = 0; j < a.size(); ++j) csv << ",p_" << j + 1;
  csv << ",speed2\n";
  for (int i = 0; i < g.samples; ++i) {
    const double t = g.t_start + (g.t_end - g.t_start) * i / (g.samples - 1);
    const qig::ProbVector p = geo(t);
    const qig::RVector v = geo.velocity(t);
    csv << qig::io::format_double(t);
    for (Eigen::Index j = 0; j < p.size(); ++j) csv << ',' << qig::io::format_double(p(j));
    csv << ',' << qig::io::format_double((v.array().square() / p.values().array()).sum()) << '\n';
  }
  emit(csv.str(), g.out);
  return 0;
}

struct MonotonicityArgs {
  std::string f;
  std::string divergence;
  int dim = 2;
  int trials = 500;
  std::uint64_t seed = 1;
  double alpha = 0.5;
  double z = 1.0;
  std::string csv;
};

int run_monotonicity(const MonotonicityArgs& m) {
  if (m.f.empty() == m.divergence.empty()) {
    throw qig::DomainError("monotonicity: give exactly one of --f or --divergence");
  }
  if (m.dim < 2 || m.trials < 1) throw qig::DomainError("monotonicity: need --dim >= 2 and --trials >= 1");
  qig::Rng rng(m.seed);
  qig::SweepSummary s;
  double tolerance = 0.0;
  Json out;
  if (!m.f.empty()) {
    s = qig::metric_sweep(qig::builtin_f(m.f), m.dim, m.trials, rng);
    tolerance = 1e-8;
    out["f"] = m.f;
  } else {
    const qig::DivergenceSpec spec = divergence_arg(m.divergence, m.alpha, m.z);
    s = qig::divergence_sweep(spec, m.dim, m.trials, rng);
    tolerance = 1e-9;
    out["divergence"] = spec.name;
    if (!spec.parameters.empty()) out["parameters"] = spec.parameters;
  }
  std::ostringstream csv;
  csv << "trial,margin\n";
  for (std::size_t i = 0; i < s.margins.size(); ++i) csv << i << ',' << qig::io::format_double(s.margins[i]) << '\n';
  if (!m.csv.empty()) qig::io::write_text_file(m.csv, csv.str());
  out["dim"] = m.dim;
  out["seed"] = m.seed;
  out["summary"] = qig::io::summary_json(s, tolerance);
  std::cout << out.dump(2) << "\n";
  return s.violations(tolerance) == 0 ? 0 : kExitFailure;
}

struct VerifyArgs {
  std::string config;
  std::string out;
};

int run_verify(const VerifyArgs& v) {
  qig::verify::SuiteConfig cfg;
  if (!v.config.empty()) cfg = qig::verify::config_from_json(qig::io::read_json_file(v.config));
  if (const char* env = std::getenv("QIG_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw qig::io::FormatError(std::string("QIG_SEED must be an unsigned integer, got '") + env + "'");
    }
  }
  if (!v.out.empty()) cfg.output_dir = v.out;
  const qig::verify::Report rep = qig::verify::run_all(cfg);
  qig::verify::write_report(rep, cfg.output_dir);
  for (const auto& s : rep.suites) std::cout << (s.passed() ? "PASS " : "FAIL ") << s.name << "\n";
  std::cout << (rep.passed() ? "all suites passed" : "verification failed") << "\n";
  return rep.passed() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum information geometry: monotone metrics, divergences, extraction and geodesics"};
  app.require_subcommand(1);

  MetricArgs metric;
  auto* c_metric = app.add_subcommand("metric", "Evaluate a Petz monotone metric G_f(rho; v, w)");
  c_metric->add_option("--f", metric.f, "Metric family: BH, WY or BKM")->capture_default_str();
  c_metric->add_option("--state", metric.state, "Density matrix JSON");
  c_metric->add_option("--v", metric.v, "Tangent JSON");
  c_metric->add_option("--w", metric.w, "Second tangent JSON (defaults to v)");
  c_metric->add_option("--point", metric.point, "Unfolded point JSON; prints the pullback metric blocks");

  DivergenceArgs div;
  auto* c_div = app.add_subcommand("divergence", "Evaluate a divergence S(rho, sigma)");
  c_div->add_option("--name", div.name,
                    "vnu, bures, g_BKM, g_BH, g_WY, petz_renyi, sandwiched_renyi or alpha_z")
      ->capture_default_str();
  c_div->add_option("--rho", div.rho, "First state JSON")->required();
  c_div->add_option("--sigma", div.sigma, "Second state JSON")->required();
  c_div->add_option("--alpha", div.alpha, "Renyi order")->capture_default_str();
  c_div->add_option("--z", div.z, "alpha-z parameter z")->capture_default_str();

  ExtractArgs ext;
  auto* c_ext = app.add_subcommand("extract", "Extract the 2-tensor of a divergence at an unfolded point");
  c_ext->add_option("--divergence", ext.divergence, "Divergence name")->capture_default_str();
  c_ext->add_option("--point", ext.point, "Unfolded point JSON {U, p}")->required();
  c_ext->add_option("--t1", ext.t1, "Unfolded tangent JSON {H, a}")->required();
  c_ext->add_option("--t2", ext.t2, "Second unfolded tangent JSON (defaults to t1)");
  c_ext->add_option("--step", ext.h, "Finite-difference step")->capture_default_str();
  c_ext->add_flag("--no-richardson", ext.no_richardson, "Disable Richardson extrapolation");
  c_ext->add_option("--alpha", ext.alpha, "Renyi order")->capture_default_str();
  c_ext->add_option("--z", ext.z, "alpha-z parameter z")->capture_default_str();

  GeodesicArgs geo;
  auto* c_geo = app.add_subcommand("geodesic", "Sample a universal geodesic as CSV: t, p_1..p_n, speed2");
  c_geo->add_option("--point", geo.point, "Unfolded point JSON {U, p}")->required();
  c_geo->add_option("--a", geo.a, "Zero-sum velocity, comma separated")->required()->delimiter(',');
  c_geo->add_option("--t-start", geo.t_start, "First sample time")->capture_default_str();
  c_geo->add_option("--t-end", geo.t_end, "Last sample time")->capture_default_str();
  c_geo->add_option("--samples", geo.samples, "Number of samples")->capture_default_str();
  c_geo->add_option("--out", geo.out, "Write CSV here instead of stdout");

  MonotonicityArgs mono;
  auto* c_mono = app.add_subcommand("monotonicity", "Randomized CPTP monotonicity sweep");
  auto* opt_f = c_mono->add_option("--f", mono.f, "Metric family");
  auto* opt_d = c_mono->add_option("--divergence", mono.divergence, "Divergence name");
  opt_f->excludes(opt_d);
  c_mono->add_option("--dim", mono.dim, "Input dimension")->capture_default_str();
  c_mono->add_option("--trials", mono.trials, "Number of trials")->capture_default_str();
  c_mono->add_option("--seed", mono.seed, "RNG seed")->capture_default_str();
  c_mono->add_option("--alpha", mono.alpha, "Renyi order")->capture_default_str();
  c_mono->add_option("--z", mono.z, "alpha-z parameter z")->capture_default_str();
  c_mono->add_option("--csv", mono.csv, "Write per-trial margins CSV here");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Run every invariant suite and write report.json + CSVs");
  c_ver->add_option("--config", ver.config, "SuiteConfig JSON");
  c_ver->add_option("--out", ver.out, "Output directory (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (c_metric->parsed()) return run_metric(metric);
    if (c_div->parsed()) return run_divergence(div);
    if (c_ext->parsed()) return run_extract(ext);
    if (c_geo->parsed()) return run_geodesic(geo);
    if (c_mono->parsed()) return run_monotonicity(mono);
    if (c_ver->parsed()) return run_verify(ver);
  } catch (const qig::InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
