#ifndef JENSEN_TOOLS_CLI_IO_HPP
#define JENSEN_TOOLS_CLI_IO_HPP

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jensen/jensen.hpp"

namespace jensen::cli {

using json = nlohmann::ordered_json;

/// Finite numbers as JSON numbers, everything else as null (the caller adds
/// an explicit flag where an infinity is meaningful).
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

inline std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  return format_number(v);
}

inline json meta_json(const MetaList& meta) {
  json out = json::object();
  for (const auto& [k, v] : meta) out[k] = v;
  return out;
}

inline json report_json(const BoundReport& r) {
  json out;
  out["method"] = to_string(r.method);
  out["k"] = r.k.value();
  out["max_moment"] = r.k.max_moment();
  out["lower"] = number(r.lower);
  out["upper"] = number(r.upper);
  out["lower_infinite"] = std::isinf(r.lower);
  out["upper_infinite"] = std::isinf(r.upper);
  out["lower_exists"] = r.lower_exists;
  out["upper_exists"] = r.upper_exists;
  out["exact"] = number(r.exact);
  out["width"] = number(r.width());
  out["meta"] = meta_json(r.meta);
  return out;
}

inline json diagnostics_json(const NormalityDiagnostics& d, bool with_points) {
  json out;
  out["skewness"] = number(d.skewness);
  out["kurtosis"] = number(d.excess_kurtosis);
  out["qq_correlation"] = number(d.qq_correlation);
  out["degenerate"] = d.degenerate;
  if (with_points) {
    json pts = json::array();
    for (const auto& [q, z] : d.qq_points) pts.push_back(json::array({number(q), number(z)}));
    out["qq_points"] = std::move(pts);
  }
  return out;
}

inline json estimate_json(const McBoundEstimate& e, bool with_points) {
  json out;
  out["lower"] = number(e.lower);
  out["upper"] = number(e.upper);
  out["lower_se"] = number(e.lower_se);
  out["upper_se"] = number(e.upper_se);
  out["n"] = e.n_used;
  out["m"] = e.m;
  out["k"] = e.k;
  out["seed"] = e.seed;
  out["diagnostics"] = diagnostics_json(e.diagnostics, with_points);
  out["lower_se_replicate"] = number(e.lower_se_replicate);
  out["upper_se_replicate"] = number(e.upper_se_replicate);
  out["plug_in_mean"] = number(e.plug_in_mean);
  out["elbo"] = number(e.mean_log);
  out["elbo_se"] = number(e.mean_log_se);
  out["struski_gap_upper"] = number(e.struski_gap_upper);
  if (e.search) {
    json s;
    s["achieved"] = e.search->achieved;
    s["measured_std"] = number(e.search->measured_std);
    json trace = json::array();
    for (const auto& [n, sd] : e.search->trace) trace.push_back({{"n", n}, {"std", number(sd)}});
    s["trace"] = std::move(trace);
    out["grid_search"] = std::move(s);
  } else {
    out["grid_search"] = nullptr;
  }
  return out;
}

namespace detail {

inline json row_major(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  return out;
}

inline json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline Eigen::MatrixXd read_matrix(const json& j, Eigen::Index rows, Eigen::Index cols,
                                   const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows * cols) {
    throw ModelError(std::string("model file: ") + name + " must hold " +
                     std::to_string(rows * cols) + " row-major values");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j.at(r * cols + c).get<double>();
  return m;
}

inline Eigen::VectorXd read_vector(const json& j, Eigen::Index size, const char* name) {
  return read_matrix(j, size, 1, name).col(0);
}

}  // namespace detail

struct ModelRecord {
  LatentGaussianModel model;
  std::vector<Eigen::VectorXd> points;
  double variance_multiplier = 1.0;
};

inline json model_json(const LatentGaussianModel& m, const std::vector<Eigen::VectorXd>& points,
                       std::optional<double> multiplier = {}) {
  json out;
  out["latent_dim"] = m.latent_dim();
  out["data_dim"] = m.data_dim();
  out["decoder_weight"] = detail::row_major(m.decoder_weight);
  out["decoder_bias"] = detail::vector_json(m.decoder_bias);
  out["decoder_noise_var"] = m.decoder_noise_var;
  out["encoder_weight"] = detail::row_major(m.encoder_weight);
  out["encoder_bias"] = detail::vector_json(m.encoder_bias);
  out["encoder_var"] = detail::vector_json(m.encoder_var);
  out["seed"] = m.seed;
  if (multiplier) out["variance_multiplier"] = *multiplier;
  json pts = json::array();
  for (const auto& p : points) pts.push_back(detail::vector_json(p));
  out["points"] = std::move(pts);
  return out;
}

inline ModelRecord model_from_json(const json& j) {
  try {
    ModelRecord rec;
    const Eigen::Index d = j.at("latent_dim").get<int>();
    const Eigen::Index D = j.at("data_dim").get<int>();
    if (d < 1 || D < 1) throw ModelError("model file: dims must be >= 1");
    auto& m = rec.model;
    m.decoder_weight = detail::read_matrix(j.at("decoder_weight"), D, d, "decoder_weight");
    m.decoder_bias = detail::read_vector(j.at("decoder_bias"), D, "decoder_bias");
    m.decoder_noise_var = j.at("decoder_noise_var").get<double>();
    m.encoder_weight = detail::read_matrix(j.at("encoder_weight"), d, D, "encoder_weight");
    m.encoder_bias = detail::read_vector(j.at("encoder_bias"), d, "encoder_bias");
    m.encoder_var = detail::read_vector(j.at("encoder_var"), d, "encoder_var");
    m.seed = j.value("seed", std::uint64_t{0});
    rec.variance_multiplier = j.value("variance_multiplier", 1.0);
    if (j.contains("points")) {
      for (const auto& p : j.at("points")) rec.points.push_back(detail::read_vector(p, D, "point"));
    }
    m.validate();
    return rec;
  } catch (const json::exception& e) {
    throw ModelError(std::string("model file: ") + e.what());
  }
}

/// A file holds either one model object or {"models": [...]}.
inline std::vector<ModelRecord> load_models(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open model file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ModelError("model file " + path + ": " + e.what());
  }
  std::vector<ModelRecord> out;
  if (j.contains("models")) {
    for (const auto& m : j.at("models")) out.push_back(model_from_json(m));
  } else {
    out.push_back(model_from_json(j));
  }
  if (out.empty()) throw ModelError("model file " + path + ": no models");
  return out;
}

inline void write_modelavg_csv(std::ostream& os, const MixtureSweep& sweep) {
  os << "rho,ce";
  for (int k : sweep.ks) os << ",bound_k" << k;
  os << '\n';
  for (const auto& p : sweep.points) {
    os << format_number(p.rho) << ',' << format_number(p.ce);
    for (double b : p.bounds) os << ',' << format_number(b);
    os << '\n';
  }
}

}  // namespace jensen::cli

#endif  // JENSEN_TOOLS_CLI_IO_HPP
