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

#include "gtdlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gtdlab/error.hpp"

namespace gtdlab {

namespace {

namespace fs = std::filesystem;

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

std::string type_name(const Json& j) { return j.type_name(); }

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError((path.empty() ? std::string("config") : path) + ": " + message);
}

void check_keys(const Json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object, got " + type_name(obj));
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) known = true;
    }
    if (!known) fail(join_path(path, it.key()), "unknown key");
  }
}

double get_number(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfinity;
  }
  fail(path, "expected a number, got " + type_name(j));
}

double get_finite(const Json& j, const std::string& path) {
  const double v = get_number(j, path);
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

long get_count(const Json& j, const std::string& path) {
  const double v = get_finite(j, path);
  if (v < 0.0 || v != std::floor(v)) fail(path, "expected a nonnegative integer");
  return static_cast<long>(v);
}

std::uint64_t get_seed(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) {
    return static_cast<std::uint64_t>(j.get<long long>());
  }
  fail(path, "expected a nonnegative integer seed");
}

bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false, got " + type_name(j));
  return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string, got " + type_name(j));
  return j.get<std::string>();
}

Vec get_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array, got " + type_name(j));
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = get_finite(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

Mat get_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array()) fail(rp, "expected a row array, got " + type_name(j[r]));
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) {
      fail(rp, "row has " + std::to_string(j[r].size()) + " entries, expected " +
                   std::to_string(cols));
    }
  }
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = get_finite(
          j[r][c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

// Scalar broadcast or a full n x n matrix.
Mat get_transition_table(const Json& j, const std::string& path, int n) {
  if (j.is_number()) return Mat::Constant(n, n, j.get<double>());
  Mat m = get_matrix(j, path);
  if (m.rows() != n || m.cols() != n) {
    fail(path, "expected a " + std::to_string(n) + "x" + std::to_string(n) +
                   " matrix, got " + std::to_string(m.rows()) + "x" +
                   std::to_string(m.cols()));
  }
  return m;
}

std::string resolve(const std::string& base_dir, const std::string& p) {
  fs::path path(p);
  if (path.is_relative() && !base_dir.empty()) path = fs::path(base_dir) / path;
  return path.string();
}

// Loads a section given inline or as a path to a JSON file.
Json section_or_file(const Json& j, const std::string& base_dir, std::string* origin_dir) {
  if (j.is_string()) {
    const std::string path = resolve(base_dir, j.get<std::string>());
    *origin_dir = fs::path(path).parent_path().string();
    return read_json_file(path);
  }
  *origin_dir = base_dir;
  return j;
}

LambdaRule parse_rule(const Json& j, const std::string& path, int n) {
  const std::string kind = j.contains("kind") ? get_string(j["kind"], path + ".kind") : "";
  if (kind == "state") {
    check_keys(j, path, {"kind", "values"});
    if (!j.contains("values")) fail(path, "missing key 'values'");
    const Json& v = j["values"];
    if (v.is_number()) return LambdaRule::state(Vec::Constant(n, v.get<double>()));
    return LambdaRule::state(get_vector(v, path + ".values"));
  }
  if (kind == "history") {
    check_keys(j, path, {"kind", "bound"});
    if (!j.contains("bound")) fail(path, "missing key 'bound'");
    return LambdaRule::history(get_finite(j["bound"], path + ".bound"));
  }
  fail(path + ".kind", "expected 'state' or 'history', got '" + kind + "'");
}

LambdaScheme parse_scheme(const Json& j, int n) {
  const std::string path = "lambda";
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = j.contains("kind") ? get_string(j["kind"], path + ".kind") : "";
  LambdaScheme scheme;
  if (kind == "composite") {
    check_keys(j, path, {"kind", "partition", "cells"});
    if (!j.contains("partition") || !j.contains("cells")) {
      fail(path, "composite scheme needs 'partition' and 'cells'");
    }
    std::vector<int> partition;
    const Json& p = j["partition"];
    if (!p.is_array()) fail(path + ".partition", "expected an array");
    for (std::size_t i = 0; i < p.size(); ++i) {
      partition.push_back(static_cast<int>(
          get_count(p[i], path + ".partition[" + std::to_string(i) + "]")));
    }
    const Json& c = j["cells"];
    if (!c.is_array()) fail(path + ".cells", "expected an array");
    std::vector<LambdaRule> cells;
    for (std::size_t i = 0; i < c.size(); ++i) {
      cells.push_back(parse_rule(c[i], path + ".cells[" + std::to_string(i) + "]", n));
    }
    scheme = LambdaScheme::make_composite(std::move(partition), std::move(cells));
  } else {
    scheme = LambdaScheme::plain(parse_rule(j, path, n));
  }
  try {
    check_scheme(scheme, n);
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
  return scheme;
}

StepsizeSchedule parse_schedule(const Json& j, const std::string& path) {
  if (j.is_number()) return StepsizeSchedule::constant(j.get<double>());
  check_keys(j, path, {"kind", "a", "c"});
  const std::string kind = j.contains("kind") ? get_string(j["kind"], path + ".kind") : "power";
  const double a = j.contains("a") ? get_finite(j["a"], path + ".a") : 1.0;
  if (a < 0.0) fail(path + ".a", "must be nonnegative");
  if (kind == "constant") return StepsizeSchedule::constant(a);
  if (kind == "one_over_n") return StepsizeSchedule::one_over_n(a);
  if (kind == "power") {
    if (!j.contains("c")) fail(path, "power schedule needs 'c'");
    const double c = get_finite(j["c"], path + ".c");
    if (c < 0.0 || c > 1.0) fail(path + ".c", "exponent must lie in [0,1]");
    return StepsizeSchedule::power(a, c);
  }
  fail(path + ".kind", "expected constant, power or one_over_n, got '" + kind + "'");
}

struct AlgorithmDraft {
  AlgorithmSpec spec;
  bool sufficient_r_x = false;
  double r_x_factor = 1.0;
};

AlgorithmDraft parse_algorithm(const Json& j, int d) {
  const std::string path = "algorithm";
  check_keys(j, path,
             {"variant", "r_theta", "r_x", "r_x_factor", "K", "q", "level", "eta",
              "x_tilde_form", "stepsize", "regularizer", "divergence_guard"});
  AlgorithmDraft out;
  AlgorithmSpec& s = out.spec;
  if (!j.contains("variant")) fail(path, "missing key 'variant'");
  try {
    s.variant = parse_variant(get_string(j["variant"], path + ".variant"));
  } catch (const ConfigError& e) {
    fail(path + ".variant", e.what());
  }
  if (j.contains("r_theta")) s.r_theta = get_number(j["r_theta"], path + ".r_theta");
  if (j.contains("r_x")) {
    const Json& rx = j["r_x"];
    if (rx.is_string() && rx.get<std::string>() == "sufficient") {
      out.sufficient_r_x = true;
    } else {
      s.r_x = get_number(rx, path + ".r_x");
    }
  }
  if (j.contains("r_x_factor")) {
    out.r_x_factor = get_finite(j["r_x_factor"], path + ".r_x_factor");
    if (!(out.r_x_factor > 0.0)) fail(path + ".r_x_factor", "must be positive");
  }
  if (j.contains("K")) s.K = get_number(j["K"], path + ".K");
  if (j.contains("q")) s.q = get_finite(j["q"], path + ".q");
  if (j.contains("level")) s.level = get_finite(j["level"], path + ".level");
  if (j.contains("eta")) s.eta = get_finite(j["eta"], path + ".eta");
  if (j.contains("x_tilde_form")) s.x_tilde_form = get_bool(j["x_tilde_form"], path + ".x_tilde_form");
  if (j.contains("divergence_guard")) {
    s.divergence_guard = get_number(j["divergence_guard"], path + ".divergence_guard");
  }
  if (!j.contains("stepsize")) fail(path, "missing key 'stepsize'");
  const Json& st = j["stepsize"];
  check_keys(st, path + ".stepsize", {"alpha", "beta"});
  if (!st.contains("alpha")) fail(path + ".stepsize", "missing key 'alpha'");
  s.alpha = parse_schedule(st["alpha"], path + ".stepsize.alpha");
  s.beta = st.contains("beta") ? parse_schedule(st["beta"], path + ".stepsize.beta") : s.alpha;
  if (j.contains("regularizer")) {
    const Json& r = j["regularizer"];
    const std::string rp = path + ".regularizer";
    check_keys(r, rp, {"kind", "weight", "center"});
    const std::string kind = r.contains("kind") ? get_string(r["kind"], rp + ".kind") : "none";
    if (kind == "quadratic") {
      const double w = r.contains("weight") ? get_finite(r["weight"], rp + ".weight") : 0.0;
      if (w < 0.0) fail(rp + ".weight", "must be nonnegative");
      Vec center;
      if (r.contains("center")) {
        center = get_vector(r["center"], rp + ".center");
        if (center.size() != d) {
          fail(rp + ".center", "expected " + std::to_string(d) + " entries");
        }
      }
      s.regularizer = Regularizer::quadratic(w, center);
    } else if (kind != "none") {
      fail(rp + ".kind", "expected 'none' or 'quadratic', got '" + kind + "'");
    }
  }
  if (s.q == 2.0 && !j.contains("level") && s.mirror()) {
    // Default level set: the ball of radius r_theta.
    if (std::isfinite(s.r_theta)) s.level = s.r_theta * s.r_theta / 2.0;
  }
  return out;
}

CheckPlan parse_check(const Json& j, const LambdaScheme& scheme, int n) {
  CheckPlan plan;
  plan.stationary = scheme.is_state_dependent();
  plan.stationary_options.horizon = 100000;
  if (!scheme.composite && scheme.cells[0].kind == LambdaRule::Kind::kState) {
    plan.trace_options.coupling_lambda = scheme.cells[0].values;
  }
  if (j.is_null()) return plan;
  const std::string path = "check";
  check_keys(j, path, {"stationary", "gradients", "mean_ode", "reductions", "trace_conditions"});
  auto enabled = [&](const char* key, bool* flag) -> const Json* {
    if (!j.contains(key)) return nullptr;
    const Json& v = j[key];
    if (v.is_boolean()) {
      *flag = v.get<bool>();
      return nullptr;
    }
    *flag = true;
    return &v;
  };
  if (const Json* s = enabled("stationary", &plan.stationary)) {
    const std::string p = path + ".stationary";
    check_keys(*s, p, {"horizon", "burn_in", "blocks", "z", "seeds", "probe_seed",
                       "reference_horizon"});
    auto& o = plan.stationary_options;
    if (s->contains("horizon")) o.horizon = get_count((*s)["horizon"], p + ".horizon");
    if (s->contains("burn_in")) o.burn_in = get_count((*s)["burn_in"], p + ".burn_in");
    if (s->contains("blocks")) o.blocks = static_cast<int>(get_count((*s)["blocks"], p + ".blocks"));
    if (s->contains("z")) o.z = get_finite((*s)["z"], p + ".z");
    if (s->contains("probe_seed")) o.probe_seed = get_seed((*s)["probe_seed"], p + ".probe_seed");
    if (s->contains("reference_horizon")) {
      o.reference_horizon = get_count((*s)["reference_horizon"], p + ".reference_horizon");
    }
    if (s->contains("seeds")) {
      o.seeds.clear();
      const Json& arr = (*s)["seeds"];
      if (!arr.is_array() || arr.empty()) fail(p + ".seeds", "expected a nonempty array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        o.seeds.push_back(get_seed(arr[i], p + ".seeds[" + std::to_string(i) + "]"));
      }
    }
  }
  if (const Json* g = enabled("gradients", &plan.gradients)) {
    const std::string p = path + ".gradients";
    check_keys(*g, p, {"points", "seed"});
    if (g->contains("points")) plan.gradient_points = static_cast<int>(get_count((*g)["points"], p + ".points"));
    if (g->contains("seed")) plan.gradient_seed = get_seed((*g)["seed"], p + ".seed");
  }
  if (j.contains("mean_ode")) plan.mean_ode = get_bool(j["mean_ode"], path + ".mean_ode");
  if (const Json* r = enabled("reductions", &plan.reductions)) {
    const std::string p = path + ".reductions";
    check_keys(*r, p, {"horizon", "seed", "eta", "history_bound", "r_theta", "r_x"});
    auto& o = plan.reduction_options;
    if (r->contains("horizon")) o.horizon = get_count((*r)["horizon"], p + ".horizon");
    if (r->contains("seed")) o.seed = get_seed((*r)["seed"], p + ".seed");
    if (r->contains("eta")) o.eta = get_finite((*r)["eta"], p + ".eta");
    if (r->contains("history_bound")) o.history_bound = get_finite((*r)["history_bound"], p + ".history_bound");
    if (r->contains("r_theta")) o.r_theta = get_number((*r)["r_theta"], p + ".r_theta");
    if (r->contains("r_x")) o.r_x = get_number((*r)["r_x"], p + ".r_x");
  }
  if (const Json* t = enabled("trace_conditions", &plan.trace_conditions)) {
    const std::string p = path + ".trace_conditions";
    check_keys(*t, p, {"bound", "samples", "steps", "seed", "coupling_lambda",
                       "coupling_seeds", "coupling_horizon", "coupling_z"});
    auto& o = plan.trace_options;
    if (t->contains("bound")) o.bound = get_finite((*t)["bound"], p + ".bound");
    if (t->contains("samples")) o.n_samples = static_cast<int>(get_count((*t)["samples"], p + ".samples"));
    if (t->contains("steps")) o.steps = get_count((*t)["steps"], p + ".steps");
    if (t->contains("seed")) o.seed = get_seed((*t)["seed"], p + ".seed");
    if (t->contains("coupling_lambda")) {
      const Json& v = (*t)["coupling_lambda"];
      o.coupling_lambda = v.is_null() ? Vec() : get_vector(v, p + ".coupling_lambda");
      if (o.coupling_lambda.size() != 0 && o.coupling_lambda.size() != n) {
        fail(p + ".coupling_lambda", "expected " + std::to_string(n) + " entries");
      }
    }
    if (t->contains("coupling_seeds")) o.coupling_seeds = static_cast<int>(get_count((*t)["coupling_seeds"], p + ".coupling_seeds"));
    if (t->contains("coupling_horizon")) o.coupling_horizon = static_cast<int>(get_count((*t)["coupling_horizon"], p + ".coupling_horizon"));
    if (t->contains("coupling_z")) o.coupling_z = get_finite((*t)["coupling_z"], p + ".coupling_z");
  }
  return plan;
}

std::vector<SweepAxis> parse_sweep(const Json& j) {
  std::vector<SweepAxis> axes;
  if (j.is_null()) return axes;
  check_keys(j, "sweep", {"axes"});
  if (!j.contains("axes") || !j["axes"].is_array()) fail("sweep.axes", "expected an array");
  const Json& arr = j["axes"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = "sweep.axes[" + std::to_string(i) + "]";
    check_keys(arr[i], p, {"path", "values"});
    SweepAxis axis;
    if (!arr[i].contains("path")) fail(p, "missing key 'path'");
    axis.path = get_string(arr[i]["path"], p + ".path");
    if (axis.path.rfind("sweep", 0) == 0) fail(p + ".path", "cannot sweep the sweep section");
    if (!arr[i].contains("values") || !arr[i]["values"].is_array() || arr[i]["values"].empty()) {
      fail(p + ".values", "expected a nonempty array");
    }
    for (const Json& v : arr[i]["values"]) axis.values.push_back(v);
    axes.push_back(std::move(axis));
  }
  return axes;
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Byte offset to line and column.
    std::size_t line = 1, col = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto pos = msg.find("parse error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": " + msg);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

ModelDocument parse_model(const Json& doc, const std::string& path) {
  check_keys(doc, path, {"n_states", "target_P", "behavior_P", "discount", "reward_mean",
                         "reward_noise_scale", "features"});
  for (const char* key : {"target_P", "behavior_P", "discount", "reward_mean"}) {
    if (!doc.contains(key)) fail(path, std::string("missing key '") + key + "'");
  }
  ModelDocument out;
  Mat P = get_matrix(doc["target_P"], path + ".target_P");
  const int n = static_cast<int>(P.rows());
  if (doc.contains("n_states") && get_count(doc["n_states"], path + ".n_states") != n) {
    fail(path + ".n_states", "declares " + doc["n_states"].dump() + " states but target_P has " +
                                 std::to_string(n) + " rows");
  }
  if (P.cols() != n) fail(path + ".target_P", "matrix must be square");
  out.mdp.target_P = P;
  out.mdp.behavior_P = get_transition_table(doc["behavior_P"], path + ".behavior_P", n);
  const Json& g = doc["discount"];
  if (g.is_number()) {
    out.mdp.discount = Vec::Constant(n, g.get<double>());
  } else {
    out.mdp.discount = get_vector(g, path + ".discount");
    if (out.mdp.discount.size() != n) {
      fail(path + ".discount", "expected " + std::to_string(n) + " entries");
    }
  }
  out.mdp.reward_mean = get_transition_table(doc["reward_mean"], path + ".reward_mean", n);
  out.mdp.reward_noise_scale =
      doc.contains("reward_noise_scale")
          ? get_transition_table(doc["reward_noise_scale"], path + ".reward_noise_scale", n)
          : Mat::Zero(n, n);
  if (doc.contains("features")) {
    out.features = get_matrix(doc["features"], path + ".features");
    if (out.features.rows() != n) {
      fail(path + ".features", "expected one row per state (" + std::to_string(n) + ")");
    }
  }
  return out;
}

ModelDocument load_model_section(const Json& document, const std::string& base_dir) {
  if (!document.is_object()) fail("", "expected a JSON object at the top level");
  if (!document.contains("model")) fail("", "missing key 'model'");
  std::string model_dir;
  const Json model = section_or_file(document["model"], base_dir, &model_dir);
  ModelDocument md = parse_model(model, "model");
  if (document.contains("features")) {
    std::string fdir;
    const Json f = section_or_file(document["features"], base_dir, &fdir);
    md.features = get_matrix(f, "features");
    if (md.features.rows() != md.mdp.n_states()) {
      fail("features", "expected one row per state (" + std::to_string(md.mdp.n_states()) + ")");
    }
  }
  if (md.features.size() == 0) fail("", "no features: give 'features' in the model or at top level");
  return md;
}

void set_json_path(Json* doc, const std::string& path, const Json& value) {
  Json* cur = doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("sweep path '" + path + "' has an empty component");
    if (!cur->is_object()) {
      throw ConfigError("sweep path '" + path + "' crosses a non-object at '" + key + "'");
    }
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    cur = &(*cur)[key];
    if (cur->is_null()) *cur = Json::object();
    start = dot + 1;
  }
}

LoadedConfig load_config(const Json& document, const std::string& base_dir) {
  LoadedConfig out;
  out.document = document;
  out.base_dir = base_dir;
  check_keys(document, "",
             {"model", "features", "lambda", "algorithm", "horizon", "seeds",
              "checkpoint_every", "metrics", "averaging", "initial", "oracle", "sweep",
              "check", "description"});
  ModelDocument md = load_model_section(document, base_dir);
  ExperimentConfig& c = out.experiment;
  c.mdp = make_mdp(md.mdp.target_P, md.mdp.behavior_P, md.mdp.discount, md.mdp.reward_mean,
                   md.mdp.reward_noise_scale);
  c.features.phi = md.features;
  check_features(c.mdp, c.features);
  const int n = c.mdp.n_states();
  const int d = c.features.dim();

  if (!document.contains("lambda")) fail("", "missing key 'lambda'");
  c.scheme = parse_scheme(document["lambda"], n);

  if (!document.contains("algorithm")) fail("", "missing key 'algorithm'");
  AlgorithmDraft draft = parse_algorithm(document["algorithm"], d);
  c.algorithm = draft.spec;

  if (document.contains("horizon")) c.horizon = get_count(document["horizon"], "horizon");
  if (document.contains("checkpoint_every")) {
    c.checkpoint_every = get_count(document["checkpoint_every"], "checkpoint_every");
  }
  if (document.contains("seeds")) {
    const Json& s = document["seeds"];
    if (!s.is_array() || s.empty()) fail("seeds", "expected a nonempty array");
    c.seeds.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      c.seeds.push_back(get_seed(s[i], "seeds[" + std::to_string(i) + "]"));
    }
  }
  if (document.contains("metrics")) {
    const Json& m = document["metrics"];
    if (!m.is_array()) fail("metrics", "expected an array of metric names");
    c.metrics = MetricSet{false, false, false, false, false};
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string name = get_string(m[i], "metrics[" + std::to_string(i) + "]");
      if (name == "dist_theta_opt") c.metrics.dist_theta_opt = true;
      else if (name == "J_gap") c.metrics.J_gap = true;
      else if (name == "x_tracking") c.metrics.x_tracking = true;
      else if (name == "dist_saddle") c.metrics.dist_saddle = true;
      else if (name == "iterate_norms") c.metrics.iterate_norms = true;
      else fail("metrics[" + std::to_string(i) + "]", "unknown metric '" + name + "'");
    }
  }
  if (document.contains("averaging")) {
    const Json& a = document["averaging"];
    check_keys(a, "averaging", {"enabled", "burn_in"});
    c.averaging = a.contains("enabled") ? get_bool(a["enabled"], "averaging.enabled") : true;
    if (a.contains("burn_in")) c.burn_in = get_count(a["burn_in"], "averaging.burn_in");
  }
  if (document.contains("initial")) {
    const Json& i = document["initial"];
    check_keys(i, "initial", {"theta", "x", "s0"});
    if (i.contains("theta")) c.theta0 = get_vector(i["theta"], "initial.theta");
    if (i.contains("x")) c.x0 = get_vector(i["x"], "initial.x");
    if (i.contains("s0")) {
      const Json& s0 = i["s0"];
      if (s0.is_string() && s0.get<std::string>() == "stationary") {
        c.s0 = -1;
      } else {
        c.s0 = static_cast<int>(get_count(s0, "initial.s0"));
      }
    }
  }
  if (document.contains("oracle")) {
    const Json& o = document["oracle"];
    check_keys(o, "oracle", {"horizon", "seed"});
    if (o.contains("horizon")) c.oracle_horizon = get_count(o["horizon"], "oracle.horizon");
    if (o.contains("seed")) c.oracle_seed = get_seed(o["seed"], "oracle.seed");
  }

  if (draft.sufficient_r_x) {
    ProjectedProblem prob =
        c.scheme.is_state_dependent()
            ? exact_problem(c.mdp, c.features, c.scheme)
            : estimate_projected_problem_empirical(c.mdp, c.features, c.scheme,
                                                   c.oracle_horizon, c.oracle_seed)
                  .problem;
    prob.r_theta = c.algorithm.r_theta;
    c.algorithm.r_x = draft.r_x_factor * sufficient_x_radius(prob);
  }

  const std::string reason = stepsize_incompatibility(c.algorithm);
  if (!reason.empty()) fail("algorithm.stepsize", "stepsize compatibility: " + reason);
  check_experiment(c);

  out.sweep = parse_sweep(document.contains("sweep") ? document["sweep"] : Json());
  out.check = parse_check(document.contains("check") ? document["check"] : Json(), c.scheme, n);
  return out;
}

LoadedConfig load_config_file(const std::string& path) {
  const Json doc = read_json_file(path);
  return load_config(doc, fs::path(path).parent_path().string());
}

}  // namespace gtdlab
