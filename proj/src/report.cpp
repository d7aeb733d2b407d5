// Copyright 2026 The gtdlab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gtdlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "gtdlab/error.hpp"
#include "gtdlab/stats.hpp"

namespace gtdlab {

namespace {

namespace fs = std::filesystem;

double finite_median(std::vector<double> v) {
  std::vector<double> kept;
  for (double x : v) {
    if (std::isfinite(x)) kept.push_back(x);
  }
  return kept.empty() ? std::nan("") : median(kept);
}

// Standard error of the median by the normal approximation sd * sqrt(pi/2n).
double median_se(const std::vector<double>& v) {
  std::vector<double> kept;
  for (double x : v) {
    if (std::isfinite(x)) kept.push_back(x);
  }
  if (kept.size() < 2) return std::nan("");
  return std::sqrt(sample_variance(kept) * M_PI / (2.0 * static_cast<double>(kept.size())));
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json theta_set_json(const ThetaOptSet& s) {
  Json j;
  j["point"] = to_json(s.point);
  j["value"] = s.value;
  j["multiplier"] = s.multiplier;
  j["radius"] = std::isfinite(s.radius) ? Json(s.radius) : Json("inf");
  j["on_boundary"] = s.on_boundary;
  j["slice_dimension"] = s.null_basis.cols();
  return j;
}

Json record_json(const RunRecord& r, const std::string& csv) {
  Json j;
  j["seed"] = r.seed;
  j["csv"] = csv;
  j["diverged"] = r.diverged;
  j["diverged_at"] = r.diverged_at;
  j["wall_seconds"] = r.wall_seconds;
  j["max_trace_norm"] = r.max_trace_norm;
  j["max_theta_norm"] = r.max_theta_norm;
  j["max_x_norm"] = r.max_x_norm;
  if (!r.rows.empty()) {
    const CheckpointRow& last = r.rows.back();
    j["final"] = {{"n", last.n},
                  {"theta", to_json(last.theta)},
                  {"x", to_json(last.x)},
                  {"metrics", to_json(last.metrics)}};
  }
  if (r.averaged_count > 0) {
    j["averaged"] = {{"theta", to_json(r.averaged_theta)},
                     {"count", r.averaged_count},
                     {"metrics", to_json(r.averaged_metrics)}};
  }
  return j;
}

std::vector<double> final_values(const std::vector<RunRecord>& records,
                                 double MetricValues::*field) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (!r.rows.empty()) out.push_back(r.rows.back().metrics.*field);
  }
  return out;
}

}  // namespace

Json to_json(const Vec& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Json to_json(const Mat& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

Json to_json(const MetricValues& m) {
  // NaN (not requested or unavailable) serializes as null.
  return {{"dist_theta_opt", m.dist_theta_opt},
          {"J_gap", m.J_gap},
          {"x_tracking", m.x_tracking},
          {"dist_saddle", m.dist_saddle}};
}

Json to_json(const CheckReport& report) {
  Json results = Json::array();
  for (const auto& r : report.results) {
    results.push_back({{"name", r.name},
                       {"passed", r.passed},
                       {"margin", r.margin},
                       {"threshold", r.threshold},
                       {"informational", r.informational},
                       {"detail", r.detail}});
  }
  return {{"ok", report.ok()}, {"failures", report.failures()}, {"results", results}};
}

Json to_json(const ValidationReport& report) {
  Json conds = Json::array();
  for (const auto& c : report.conditions) {
    conds.push_back({{"name", c.name}, {"passed", c.passed}, {"diagnostic", c.diagnostic}});
  }
  return {{"ok", report.ok()}, {"spectral_radius", report.spectral_radius},
          {"conditions", conds}};
}

Json validate_document(const Json& document, const std::string& base_dir) {
  Json out;
  out["ok"] = false;
  try {
    const ModelDocument md = load_model_section(document, base_dir);
    out["model"] = to_json(validate_model(md.mdp));
  } catch (const Error& e) {
    out["error"] = e.what();
    return out;
  }
  try {
    const LoadedConfig loaded = load_config(document, base_dir);
    const ExperimentConfig& c = loaded.experiment;
    out["n_states"] = c.mdp.n_states();
    out["feature_dim"] = c.features.dim();
    out["variant"] = variant_name(c.algorithm.variant);
    out["lambda_cells"] = c.scheme.n_cells();
    out["history_dependent"] = c.scheme.has_history_rule();
    out["r_x"] = std::isfinite(c.algorithm.r_x) ? Json(c.algorithm.r_x) : Json("inf");
    out["sweep_axes"] = loaded.sweep.size();
    out["ok"] = out["model"]["ok"].get<bool>();
  } catch (const Error& e) {
    out["error"] = e.what();
  }
  return out;
}

Json oracle_document(const ExperimentConfig& config, const OracleReference& oracle) {
  const ProjectedProblem& p = oracle.problem;
  Json j;
  j["exact"] = oracle.exact;
  j["A"] = to_json(p.A);
  j["b"] = to_json(p.b);
  j["C"] = to_json(p.C);
  if (!oracle.exact) {
    j["A_se"] = to_json(oracle.A_se);
    j["b_se"] = to_json(oracle.b_se);
  }
  j["xi"] = to_json(oracle.xi);
  j["v_pi"] = to_json(oracle.v_pi);
  if (config.scheme.is_state_dependent()) {
    const AffineBellman tb = bellman_for_scheme(config.mdp, config.scheme);
    j["P_lambda"] = to_json(tb.P_lambda);
    j["r_lambda"] = to_json(tb.r_lambda);
  }
  j["r_theta"] = std::isfinite(p.r_theta) ? Json(p.r_theta) : Json("inf");
  j["r_x"] = std::isfinite(p.r_x) ? Json(p.r_x) : Json("inf");
  j["regularizer_weight"] = p.regularizer.weight_or_zero();
  j["sufficient_r_x"] = oracle.sufficient_r_x;
  if (oracle.theta_opt) {
    j["theta_opt"] = theta_set_json(*oracle.theta_opt);
    j["J_star"] = oracle.theta_opt->value;
  }
  if (oracle.saddle) {
    const SaddlePoint& s = *oracle.saddle;
    j["saddle"] = {{"theta", to_json(s.theta)},
                   {"x_bar", to_json(s.x_bar)},
                   {"value", s.value},
                   {"x_interior", s.x_interior},
                   {"kkt_residual", s.kkt_residual},
                   {"iterations", s.iterations}};
  }
  j["mdtd"] = {{"negative_definite", oracle.mdtd.negative_definite},
               {"max_symmetric_eigenvalue", oracle.mdtd.max_symmetric_eigenvalue}};
  if (oracle.mdtd.negative_definite) j["mdtd"]["theta_td"] = to_json(oracle.mdtd.theta_td);
  j["notes"] = oracle.notes;
  return j;
}

MetricValues median_final_metrics(const std::vector<RunRecord>& records) {
  MetricValues m;
  m.dist_theta_opt = finite_median(final_values(records, &MetricValues::dist_theta_opt));
  m.J_gap = finite_median(final_values(records, &MetricValues::J_gap));
  m.x_tracking = finite_median(final_values(records, &MetricValues::x_tracking));
  m.dist_saddle = finite_median(final_values(records, &MetricValues::dist_saddle));
  return m;
}

Json run_command(const ExperimentConfig& config, const std::string& out_dir, int workers) {
  ensure_dir(out_dir);
  const OracleReference oracle = compute_oracle(config);
  const std::vector<RunRecord> records = run_seeds(config, oracle, workers);
  Json seeds = Json::array();
  int diverged = 0;
  for (const auto& r : records) {
    const std::string name = "run_seed" + std::to_string(r.seed) + ".csv";
    write_text_file((fs::path(out_dir) / name).string(), run_csv(r));
    seeds.push_back(record_json(r, name));
    if (r.diverged) ++diverged;
  }
  Json summary;
  summary["variant"] = variant_name(config.algorithm.variant);
  summary["horizon"] = config.horizon;
  summary["n_seeds"] = records.size();
  summary["diverged"] = diverged;
  summary["median_final"] = to_json(median_final_metrics(records));
  summary["median_final_se"] = {
      {"dist_theta_opt", median_se(final_values(records, &MetricValues::dist_theta_opt))}};
  summary["runs"] = seeds;
  summary["oracle"] = oracle_document(config, oracle);
  write_text_file((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");
  return summary;
}

Json sweep_command(const LoadedConfig& loaded, const std::vector<std::uint64_t>* seeds,
                   const std::string& out_dir, int workers) {
  ensure_dir(out_dir);
  const auto& axes = loaded.sweep;
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();

  Json rows = Json::array();
  std::ostringstream csv;
  csv << "cell";
  for (const auto& a : axes) csv << ',' << a.path;
  csv << ",status,n_seeds,diverged,median_dist_theta_opt,se_dist_theta_opt,median_J_gap,"
         "median_x_tracking,median_dist_saddle,max_trace_norm,reason\n";

  for (std::size_t cell = 0; cell < total; ++cell) {
    Json doc = loaded.document;
    doc.erase("sweep");
    Json params = Json::object();
    std::size_t rem = cell;
    // Last axis varies fastest.
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      idx[k] = rem % axes[k].values.size();
      rem /= axes[k].values.size();
    }
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const Json& v = axes[k].values[idx[k]];
      set_json_path(&doc, axes[k].path, v);
      params[axes[k].path] = v;
    }
    Json row;
    row["cell"] = cell;
    row["parameters"] = params;
    std::string status = "ok", reason;
    std::vector<RunRecord> records;
    try {
      LoadedConfig lc = load_config(doc, loaded.base_dir);
      if (seeds) lc.experiment.seeds = *seeds;
      const OracleReference oracle = compute_oracle(lc.experiment);
      records = run_seeds(lc.experiment, oracle, workers);
      char name[32];
      std::snprintf(name, sizeof(name), "cell_%03zu", cell);
      const std::string dir = (fs::path(out_dir) / name).string();
      ensure_dir(dir);
      for (const auto& r : records) {
        write_text_file((fs::path(dir) / ("run_seed" + std::to_string(r.seed) + ".csv")).string(),
                        run_csv(r));
      }
      row["dir"] = name;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kConfig || e.kind() == ErrorKind::kValidation ||
          e.kind() == ErrorKind::kDimension) {
        status = "skipped";
      } else {
        status = "failed";
      }
      reason = e.what();
    }
    int diverged = 0;
    double max_trace = 0.0;
    for (const auto& r : records) {
      if (r.diverged) ++diverged;
      max_trace = std::max(max_trace, r.max_trace_norm);
    }
    const MetricValues med = median_final_metrics(records);
    const double se = median_se(final_values(records, &MetricValues::dist_theta_opt));
    row["status"] = status;
    row["reason"] = reason;
    row["n_seeds"] = records.size();
    row["diverged"] = diverged;
    row["median_final"] = to_json(med);
    row["se_dist_theta_opt"] = se;
    row["max_trace_norm"] = max_trace;
    rows.push_back(row);

    csv << cell;
    for (std::size_t k = 0; k < axes.size(); ++k) csv << ',' << axes[k].values[idx[k]].dump();
    std::string clean = reason;
    for (char& ch : clean) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    }
    csv << ',' << status << ',' << records.size() << ',' << diverged << ','
        << fmt17(med.dist_theta_opt) << ',' << fmt17(se) << ',' << fmt17(med.J_gap) << ','
        << fmt17(med.x_tracking) << ',' << fmt17(med.dist_saddle) << ',' << fmt17(max_trace)
        << ',' << clean << '\n';
  }
  Json summary = {{"cells", rows}, {"n_cells", total}};
  write_text_file((fs::path(out_dir) / "sweep_summary.csv").string(), csv.str());
  write_text_file((fs::path(out_dir) / "sweep_summary.json").string(), summary.dump(2) + "\n");
  return summary;
}

Json check_command(const LoadedConfig& loaded) {
  const ExperimentConfig& c = loaded.experiment;
  const CheckPlan& plan = loaded.check;
  CheckReport report;
  if (plan.stationary) {
    report.append(check_stationary_expectations(c.mdp, c.features, c.scheme,
                                                plan.stationary_options));
  }
  if (plan.gradients || plan.mean_ode) {
    const OracleReference oracle = compute_oracle(c);
    if (plan.gradients) {
      report.append(check_gradients(oracle.problem, plan.gradient_points, plan.gradient_seed));
    }
    if (plan.mean_ode) report.append(check_mean_ode_fixed_points(oracle.problem, c.algorithm));
  }
  if (plan.reductions) {
    report.append(check_reduction_identities(c.mdp, c.features, c.scheme,
                                             plan.reduction_options));
  }
  if (plan.trace_conditions) {
    report.append(check_trace_conditions(c.mdp, c.features, plan.trace_options));
  }
  return to_json(report);
}

}  // namespace gtdlab
