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

#ifndef GTDLAB_MDP_MODEL_HPP_
#define GTDLAB_MDP_MODEL_HPP_

#include <string>
#include <vector>

#include "gtdlab/linalg.hpp"

namespace gtdlab {

// Finite Markov chain under a target and a behavior policy, with
// state-dependent discounting and transition rewards. Plain data; use
// make_mdp() to get a normalized and validated instance.
struct FiniteMdp {
  Mat target_P;            // P, row-stochastic
  Mat behavior_P;          // P^o, row-stochastic
  Vec discount;            // gamma(s)
  Mat reward_mean;         // r(s, s')
  Mat reward_noise_scale;  // per-transition Gaussian standard deviation

  int n_states() const { return static_cast<int>(discount.size()); }
};

// Linear features; row s of phi is phi(s)'. Columns may be linearly dependent.
struct FeatureMap {
  Mat phi;

  int dim() const { return static_cast<int>(phi.cols()); }
  int n_states() const { return static_cast<int>(phi.rows()); }
  Vec at(int s) const { return phi.row(s).transpose(); }
};

inline constexpr double kRowSumTolerance = 1e-12;

struct ConditionResult {
  std::string name;
  bool passed = false;
  std::string diagnostic;
};

struct ValidationReport {
  std::vector<ConditionResult> conditions;
  double spectral_radius = 0.0;  // of P * Gamma

  bool ok() const;
  const ConditionResult* find(const std::string& name) const;
};

// Condition names used in ValidationReport.
inline constexpr const char* kCondTargetRows = "target_rows_stochastic";
inline constexpr const char* kCondBehaviorRows = "behavior_rows_stochastic";
inline constexpr const char* kCondDiscountRange = "discount_in_unit_interval";
inline constexpr const char* kCondNoiseNonnegative = "noise_scale_nonnegative";
inline constexpr const char* kCondAbsoluteContinuity = "absolute_continuity";
inline constexpr const char* kCondSpectralRadius = "spectral_radius_below_one";
inline constexpr const char* kCondIrreducible = "behavior_irreducible";

// Checks every standing condition. Failures are reported, not thrown; only
// inconsistent dimensions raise DimensionError.
ValidationReport validate_model(const FiniteMdp& mdp);

// Builds a model from raw matrices: checks shapes, renormalizes rows whose
// sums are within kRowSumTolerance of one, and throws ValidationError naming
// the first failed condition otherwise.
FiniteMdp make_mdp(Mat target_P, Mat behavior_P, Vec discount, Mat reward_mean,
                   Mat reward_noise_scale);

// Throws DimensionError if features do not match the model, ValidationError
// if every feature vector is zero.
void check_features(const FiniteMdp& mdp, const FeatureMap& features);

// Spectral radius of a nonnegative square matrix by shifted power iteration
// (tolerance 1e-12, at most 10'000 iterations).
double nonnegative_spectral_radius(const Mat& m);

// Strongly connected components of the positive-entry graph of m, in
// discovery order.
std::vector<std::vector<int>> strongly_connected_components(const Mat& m);

// Invariant distribution of P^o. Throws ValidationError naming a closed class
// when the chain is reducible.
Vec stationary_distribution(const FiniteMdp& mdp);

// rho(s, s') = P[s,s'] / P^o[s,s'], 0 when both vanish. Throws
// ValidationError when P^o[s,s'] = 0 < P[s,s'].
double importance_ratio(const FiniteMdp& mdp, int s, int s_next);

// Full |S| x |S| table of importance ratios.
Mat importance_ratio_table(const FiniteMdp& mdp);

// r_pi(s) = sum_{s'} P[s,s'] r(s,s').
Vec expected_reward(const FiniteMdp& mdp);

// Solution of v = r_pi + P Gamma v.
Vec true_value_function(const FiniteMdp& mdp);

}  // namespace gtdlab

#endif  // GTDLAB_MDP_MODEL_HPP_
