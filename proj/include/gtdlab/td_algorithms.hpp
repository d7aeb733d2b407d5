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

#ifndef GTDLAB_TD_ALGORITHMS_HPP_
#define GTDLAB_TD_ALGORITHMS_HPP_

#include <string>

#include "gtdlab/bellman_oracle.hpp"
#include "gtdlab/linalg.hpp"
#include "gtdlab/trace_engine.hpp"

namespace gtdlab {

enum class Variant {
  kGtda2ts,
  kGtdb2ts,
  kGtda1ts,
  kGtda1tsEta,
  kGtdaUnconstrained,
  kBiasedGtda2ts,
  kBiasedGtdb2ts,
  kBiasedGtda1ts,
  kMdGtda,
  kMdGtdb,
  kMdtd,
};

const char* variant_name(Variant v);
// Accepts the names returned by variant_name; throws ConfigError otherwise.
Variant parse_variant(const std::string& name);

struct StepsizeSchedule {
  enum class Kind { kConstant, kPower, kOneOverN };
  Kind kind = Kind::kConstant;
  double a = 0.0;
  double c = 0.0;

  static StepsizeSchedule constant(double a);
  static StepsizeSchedule power(double a, double c);
  static StepsizeSchedule one_over_n(double a);

  // Stepsize used at iteration n (n = 0, 1, ...).
  double at(long n) const;
  // Polynomial decay rate: 0 for constant, c for power, 1 for one_over_n.
  double decay_exponent() const;
  bool square_summable() const;
};

struct AlgorithmSpec {
  Variant variant = Variant::kGtda2ts;
  double r_theta = kInfinity;
  double r_x = kInfinity;
  double K = kInfinity;  // biased variants
  double q = 2.0;        // mirror exponent
  double level = 0.0;    // psi* level of D_theta*
  double eta = 1.0;
  bool x_tilde_form = false;  // eta variant: iterate x~ = x / sqrt(eta)
  StepsizeSchedule alpha;
  StepsizeSchedule beta;
  Regularizer regularizer;
  double divergence_guard = 1e6;

  bool two_time_scale() const;
  bool mirror() const;
  bool biased() const;
  bool gtdb_direction() const;
  bool has_x() const { return variant != Variant::kMdtd; }
  bool constrained() const { return variant != Variant::kGtdaUnconstrained; }
  // Radius of the level set {psi* <= level}: (q level)^(1/q).
  double mirror_radius() const;
  // Radius of D_theta, the image of the level set under grad psi*.
  double theta_domain_radius() const;
};

// Throws ConfigError on out-of-range parameters or a stepsize pair that
// violates alpha_n / beta_n -> 0 for two-time-scale variants.
void check_algorithm(const AlgorithmSpec& spec, const LambdaScheme& scheme);

// Empty string when compatible, else a reason.
std::string stepsize_incompatibility(const AlgorithmSpec& spec);

// grad psi*(u) = ||u||^(q-2) u and its inverse.
Vec mirror_grad(const Vec& u, double q);
Vec mirror_grad_inverse(const Vec& theta, double q);
// Projection onto {psi*(u) <= ell}, the ball of radius (q ell)^(1/q).
Vec level_project(const Vec& u, double ell, double q);

// h_K(e): the Euclidean ball projection of radius K, as a scale factor.
double truncation_scale(double norm, double K);

struct IterateState {
  Vec theta;
  Vec x;           // x~ when the eta variant runs in x~ form
  Vec theta_star;  // mirror variants
  long n = 0;
  bool diverged = false;
};

struct StepInput {
  int s = 0;
  int s_next = 0;
  double reward = 0.0;
  const TraceState* trace = nullptr;
  const Vec* lambda_next = nullptr;  // lambda_{n+1} per cell
};

class TdStepper {
 public:
  TdStepper(const AlgorithmSpec& spec, const FiniteMdp& mdp, const FeatureMap& features);

  IterateState initial(const Vec& theta0, const Vec& x0) const;

  // One synchronous update from (theta_n, x_n). Returns false when the
  // divergence guard trips (unconstrained variant); throws NumericalError on
  // non-finite iterates otherwise.
  bool step(IterateState* state, const StepInput& in);

  // x in the original coordinates (undoes the x~ scaling).
  Vec x_original(const IterateState& state) const;

  const AlgorithmSpec& spec() const { return spec_; }

 private:
  const AlgorithmSpec& spec_;
  const FiniteMdp& mdp_;
  const FeatureMap& features_;
  Mat rho_;
  double sqrt_eta_;
  Vec dir_theta_;
  Vec dir_x_;
  Vec grad_p_;
  Vec next_;
};

void project_ball_in_place(Vec* v, double radius);

}  // namespace gtdlab

#endif  // GTDLAB_TD_ALGORITHMS_HPP_
