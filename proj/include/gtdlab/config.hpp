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

#ifndef GTDLAB_CONFIG_HPP_
#define GTDLAB_CONFIG_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "gtdlab/mdp_model.hpp"
#include "gtdlab/sim_harness.hpp"
#include "gtdlab/verification.hpp"

namespace gtdlab {

using Json = nlohmann::json;

// Parses text as JSON; syntax errors become ConfigError with line and column.
Json parse_json_text(const std::string& text, const std::string& origin);
Json read_json_file(const std::string& path);

// Model document: n_states, target_P, behavior_P, discount, reward_mean,
// reward_noise_scale and optional features. Scalars broadcast.
struct ModelDocument {
  FiniteMdp mdp;   // as written, not yet normalized or validated
  Mat features;    // empty when the document has none
};

ModelDocument parse_model(const Json& doc, const std::string& path);

struct SweepAxis {
  std::string path;  // dotted key path into the config document
  std::vector<Json> values;
};

struct CheckPlan {
  bool stationary = false;
  StationaryOptions stationary_options;
  bool gradients = true;
  int gradient_points = 20;
  std::uint64_t gradient_seed = 1;
  bool mean_ode = true;
  bool reductions = true;
  ReductionOptions reduction_options;
  bool trace_conditions = true;
  TraceConditionOptions trace_options;
};

struct LoadedConfig {
  Json document;
  std::string base_dir;
  ExperimentConfig experiment;
  std::vector<SweepAxis> sweep;
  CheckPlan check;
};

// Full load: schema, model validation (make_mdp), scheme and algorithm checks,
// stepsize compatibility. Relative model/feature paths resolve against
// base_dir.
LoadedConfig load_config(const Json& document, const std::string& base_dir);
LoadedConfig load_config_file(const std::string& path);

// Model alone, for reporting every standing condition before a full load.
ModelDocument load_model_section(const Json& document, const std::string& base_dir);

// Sets the value at a dotted path, creating intermediate objects.
void set_json_path(Json* doc, const std::string& path, const Json& value);

}  // namespace gtdlab

#endif  // GTDLAB_CONFIG_HPP_
