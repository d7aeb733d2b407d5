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

#ifndef GTDLAB_SIM_HARNESS_HPP_
#define GTDLAB_SIM_HARNESS_HPP_

#include <cstdint>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gtdlab/bellman_oracle.hpp"
#include "gtdlab/mdp_model.hpp"
#include "gtdlab/sampler.hpp"
#include "gtdlab/td_algorithms.hpp"
#include "gtdlab/trace_engine.hpp"

namespace gtdlab {

struct MetricSet {
  bool dist_theta_opt = true;
  bool J_gap = true;
  bool x_tracking = true;
  bool dist_saddle = true;
  bool iterate_norms = true;
};

struct ExperimentConfig {
  FiniteMdp mdp;
  FeatureMap features;
  LambdaScheme scheme;
  AlgorithmSpec algorithm;
  long horizon = 1000;
  std::vector<std::uint64_t> seeds{0};
  long checkpoint_every = 100;
  MetricSet metrics;
  bool averaging = false;
  long burn_in = 0;
  Vec theta0;  // empty means zero
  Vec x0;      // empty means zero
  int s0 = -1;  // -1: draw from the stationary distribution
  long oracle_horizon = 1000000;
  std::uint64_t oracle_seed = 20240101;
};

// Throws ConfigError / ValidationError describing the first problem found.
void check_experiment(const ExperimentConfig& config);

// Reference quantities the metrics are measured against.
struct OracleReference {
  ProjectedProblem problem;  // radii and regularizer taken from the algorithm
  bool exact = true;         // false: A, b estimated by simulation
  Mat A_se;
  Vec b_se;
  Vec xi;
  Vec v_pi;
  double sufficient_r_x = 0.0;
  std::optional<ThetaOptSet> theta_opt;    // over the variant's theta domain
  std::optional<SaddlePoint> saddle;       // original x coordinates
  MdtdFixedPoint mdtd;
  std::vector<std::string> notes;          // solver failures, warnings
};

OracleReference compute_oracle(const ExperimentConfig& config);

struct MetricValues {
  double dist_theta_opt = std::nan("");
  double J_gap = std::nan("");
  double x_tracking = std::nan("");
  double dist_saddle = std::nan("");
};

// Metrics for the iterate (theta, x) with x in original coordinates.
MetricValues evaluate_metrics(const ExperimentConfig& config,
                              const OracleReference& oracle, const Vec& theta,
                              const Vec& x);

struct CheckpointRow {
  long n = 0;
  Vec theta;
  Vec x;
  MetricValues metrics;
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<CheckpointRow> rows;
  Vec averaged_theta;  // running mean of theta_i for burn_in <= i < horizon
  long averaged_count = 0;
  MetricValues averaged_metrics;
  bool diverged = false;
  long diverged_at = -1;
  double max_trace_norm = 0.0;
  double max_theta_norm = 0.0;
  double max_x_norm = 0.0;
  double wall_seconds = 0.0;
  IterateState final_state;
};

RunRecord run_experiment(const ExperimentConfig& config, const OracleReference& oracle,
                         std::uint64_t seed);

// Runs every seed of the config, up to `workers` at a time; results are in
// seed order regardless of scheduling.
std::vector<RunRecord> run_seeds(const ExperimentConfig& config,
                                 const OracleReference& oracle, int workers);

// Mean of the theta snapshots with burn_in <= n < last n, for records taken
// with checkpoint_every = 1.
Vec direct_average(const RunRecord& record, long burn_in);

// CSV: n,theta_*,x_*,dist_theta_opt,J_gap,x_tracking,dist_saddle with 17
// significant digits and LF line endings.
std::string run_csv(const RunRecord& record);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gtdlab

#endif  // GTDLAB_SIM_HARNESS_HPP_
