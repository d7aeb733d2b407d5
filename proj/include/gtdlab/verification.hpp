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

#ifndef GTDLAB_VERIFICATION_HPP_
#define GTDLAB_VERIFICATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "gtdlab/bellman_oracle.hpp"
#include "gtdlab/sim_harness.hpp"
#include "gtdlab/td_algorithms.hpp"
#include "gtdlab/trace_engine.hpp"

namespace gtdlab {

struct CheckResult {
  std::string name;
  bool passed = false;
  double margin = 0.0;     // measured quantity compared against threshold
  double threshold = 0.0;
  std::string detail;
  bool informational = false;  // reported, never fails the report
};

struct CheckReport {
  std::vector<CheckResult> results;

  bool ok() const;
  void add(CheckResult r) { results.push_back(std::move(r)); }
  void append(const CheckReport& other);
  int failures() const;
};

// Long-run averages of phi phi', e dbar(v) for five probes, e rho (phi -
// gamma' phi')' and e rho (1 - lambda') gamma' phi'' against C,
// Phi'Xi(Tv - v), -A and A + C. Each entry must lie within `z` batch-means
// standard errors (plus a rounding floor). One result per identity per seed.
struct StationaryOptions {
  long horizon = 1000000;
  long burn_in = 1000;
  int blocks = 20;
  double z = 3.0;
  std::vector<std::uint64_t> seeds{1};
  std::uint64_t probe_seed = 7;
  long reference_horizon = 2000000;  // history-dependent schemes only
};

CheckReport check_stationary_expectations(const FiniteMdp& mdp, const FeatureMap& features,
                                          const LambdaScheme& scheme,
                                          const StationaryOptions& options);

// Expression (a) vs (b) vs central differences of J at random points.
CheckReport check_gradients(const ProjectedProblem& prob, int n_points,
                            std::uint64_t seed, double h = 1e-5);

// Deterministic mean iteration for the variant (expectations substituted for
// samples) and its agreement with the oracle's prediction, plus the KKT
// systems of theta_opt and the saddle point.
CheckReport check_mean_ode_fixed_points(const ProjectedProblem& prob,
                                        const AlgorithmSpec& spec);

struct MeanIterationResult {
  Vec theta;
  Vec x;
  long iterations = 0;
  double step_residual = 0.0;  // ||z_{k+1} - z_k|| / stepsize at exit
};

MeanIterationResult run_mean_iteration(const ProjectedProblem& prob,
                                       const AlgorithmSpec& spec,
                                       long max_iterations = 2000000,
                                       double tolerance = 1e-11);

// Paired trajectories on one shared stream: MDGTDa(q=2) vs GTDa2TS, eta = 1
// vs GTDa1TS, x~ form vs x form, Biased(K above the trace bound) vs
// unbiased, Composite(one cell) vs plain.
struct ReductionOptions {
  long horizon = 20000;
  std::uint64_t seed = 11;
  double eta = 2.5;
  double history_bound = 2.0;
  double r_theta = 50.0;
  double r_x = 50.0;
};

CheckReport check_reduction_identities(const FiniteMdp& mdp, const FeatureMap& features,
                                       const LambdaScheme& scheme,
                                       const ReductionOptions& options);

struct TraceConditionOptions {
  double bound = 2.0;
  int n_samples = 10000;
  long steps = 1000000;
  std::uint64_t seed = 5;
  // Coupling decay
  Vec coupling_lambda;  // state-dependent lambda; empty skips the check
  int coupling_seeds = 50;
  int coupling_horizon = 50;
  double coupling_z = 2.0;
};

CheckReport check_trace_conditions(const FiniteMdp& mdp, const FeatureMap& features,
                                   const TraceConditionOptions& options);

}  // namespace gtdlab

#endif  // GTDLAB_VERIFICATION_HPP_
