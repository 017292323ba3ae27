#pragma once

// JSON encodings of matrices, states, tangents and unfolded data, plus
// 17-significant-digit number formatting for CSV output.

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "qig/channels.hpp"
#include "qig/extraction.hpp"
#include "qig/metrics.hpp"
#include "qig/states.hpp"

namespace qig::io {

using Json = nlohmann::json;

/// Parse or schema failure in an input document.
class FormatError : public Error {
 public:
  using Error::Error;
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError("malformed JSON in '" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double number(const Json& j) {
  if (!j.is_number()) throw FormatError("expected a number");
  return j.get<double>();
}

}  // namespace detail

/// {"dim": n, "re": [[..],..], "im": [[..],..]}, rows in order; "im" optional.
inline Json to_json(const CMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array();
    Json ii = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"dim", m.rows()}, {"re", re}, {"im", im}};
}

inline CMatrix matrix_from_json(const Json& j) {
  const Json& dim_j = detail::field(j, "dim");
  if (!dim_j.is_number_integer() || dim_j.get<long>() < 1) throw FormatError("'dim' must be a positive integer");
  const auto n = static_cast<Eigen::Index>(dim_j.get<long>());
  CMatrix m = CMatrix::Zero(n, n);
  auto fill = [&](const Json& rows, bool imaginary) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
      throw FormatError("matrix part must have 'dim' rows");
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        throw FormatError("matrix rows must have 'dim' entries");
      }
      for (Eigen::Index c = 0; c < n; ++c) {
        const double v = detail::number(row[static_cast<std::size_t>(c)]);
        if (imaginary) {
          m(r, c) += Complex(0.0, v);
        } else {
          m(r, c) += v;
        }
      }
    }
  };
  fill(detail::field(j, "re"), false);
  if (j.contains("im")) fill(j.at("im"), true);
  return m;
}

inline Json to_json(const RVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline RVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("expected a non-empty array of numbers");
  RVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = detail::number(j[i]);
  return v;
}

inline Json to_json(const DensityMatrix& rho) {
  Json j = to_json(rho.matrix());
  j["kind"] = "density";
  return j;
}

inline DensityMatrix state_from_json(const Json& j) {
  if (j.contains("kind") && j.at("kind") != "density") throw FormatError("state 'kind' must be \"density\"");
  return DensityMatrix(matrix_from_json(j));
}

inline TangentVector tangent_from_json(const Json& j) { return TangentVector(matrix_from_json(j)); }

inline Hermitian hermitian_from_json(const Json& j) { return Hermitian(matrix_from_json(j)); }

inline Json to_json(const UnfoldedPoint& x) { return {{"U", to_json(x.unitary())}, {"p", to_json(x.p())}}; }

inline UnfoldedPoint point_from_json(const Json& j) {
  return {matrix_from_json(detail::field(j, "U")), ProbVector(vector_from_json(detail::field(j, "p")))};
}

inline Json to_json(const UnfoldedTangent& t) { return {{"H", to_json(t.h())}, {"a", to_json(t.a())}}; }

inline UnfoldedTangent unfolded_tangent_from_json(const Json& j) {
  return {Hermitian(matrix_from_json(detail::field(j, "H"))), vector_from_json(detail::field(j, "a"))};
}

inline Json to_json(const PullbackMetricMatrix& m) {
  Json pairs = Json::array();
  for (const auto& [j, k] : m.pairs) pairs.push_back({j, k});
  Json theta3 = Json::array();
  for (Eigen::Index r = 0; r < m.theta3.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.theta3.cols(); ++c) row.push_back(m.theta3(r, c));
    theta3.push_back(row);
  }
  Json fisher = Json::array();
  for (Eigen::Index r = 0; r < m.fisher.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.fisher.cols(); ++c) row.push_back(m.fisher(r, c));
    fisher.push_back(row);
  }
  return {{"dim", m.dim},          {"pairs", pairs},   {"theta1_theta1", m.theta1},
          {"theta2_theta2", m.theta2}, {"theta3_theta3", theta3}, {"fisher", fisher}};
}

inline Json to_json(const ExtractionReport& r) {
  return {{"value_ll", r.value_ll},
          {"value_rr", r.value_rr},
          {"value_lr", r.value_lr},
          {"value_rl", r.value_rl},
          {"tensor", r.tensor()},
          {"first_order_residuals", {r.first_order_residuals.first, r.first_order_residuals.second}},
          {"consistency_delta", r.consistency_delta()},
          {"step", r.step},
          {"richardson_used", r.richardson_used}};
}

inline Json summary_json(const SweepSummary& s, double tolerance) {
  return {{"trials", s.trials},
          {"min", s.min_margin},
          {"mean", s.mean_margin},
          {"violations", s.violations(tolerance)},
          {"tolerance", tolerance},
          {"floored", s.floored}};
}

}  // namespace qig::io
