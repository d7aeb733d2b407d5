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

#ifndef GTDLAB_BELLMAN_ORACLE_HPP_
#define GTDLAB_BELLMAN_ORACLE_HPP_

#include <cstdint>
#include <limits>

#include "gtdlab/linalg.hpp"
#include "gtdlab/mdp_model.hpp"
#include "gtdlab/trace_engine.hpp"

namespace gtdlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// T^(lambda) v = r_lambda + P_lambda v.
struct AffineBellman {
  Mat P_lambda;
  Vec r_lambda;
};

// p(theta) = (weight/2) ||theta - center||^2, or p = 0.
struct Regularizer {
  enum class Kind { kNone, kQuadratic };
  Kind kind = Kind::kNone;
  double weight = 0.0;
  Vec center;  // empty means the origin

  static Regularizer none() { return {}; }
  static Regularizer quadratic(double weight, Vec center = Vec());

  double weight_or_zero() const { return kind == Kind::kQuadratic ? weight : 0.0; }
  double value(const Vec& theta) const;
  Vec gradient(const Vec& theta) const;
  // gradient(theta) into out without allocating when out is sized.
  void gradient_into(const Vec& theta, Vec* out) const;
  // Recession function p_inf(theta) = (weight/2) ||theta||^2.
  double recession(const Vec& theta) const;
  Vec center_or_zero(Eigen::Index d) const;
};

struct ProjectedProblem {
  Mat A;  // Phi' Xi (P_lambda - I) Phi
  Vec b;  // Phi' Xi r_lambda
  Mat C;  // Phi' Xi Phi
  Regularizer regularizer;
  double r_theta = kInfinity;
  double r_x = kInfinity;

  Eigen::Index dim() const { return b.size(); }
};

AffineBellman bellman_state_dependent(const FiniteMdp& mdp, const Vec& lambda);

// Composite of state-dependent cells: row s comes from the operator of the
// cell containing s. Plain state-dependent schemes pass through unchanged.
// Throws ConfigError when any rule is history-dependent.
AffineBellman bellman_for_scheme(const FiniteMdp& mdp, const LambdaScheme& scheme);

ProjectedProblem assemble_problem(const FiniteMdp& mdp, const FeatureMap& features,
                                  const AffineBellman& bellman);

// Exact problem for state-dependent (possibly composite) schemes.
ProjectedProblem exact_problem(const FiniteMdp& mdp, const FeatureMap& features,
                               const LambdaScheme& scheme);

struct EmpiricalProblem {
  ProjectedProblem problem;
  Mat A_se;  // batch-means standard errors
  Vec b_se;
  long horizon = 0;
  bool short_horizon = false;  // horizon below 1e4
};

// Long-run averages of e rho (gamma' phi' - phi)' and e rho r(s,s'); C exact.
EmpiricalProblem estimate_projected_problem_empirical(
    const FiniteMdp& mdp, const FeatureMap& features, const LambdaScheme& scheme,
    long horizon, std::uint64_t seed, int blocks = 20, long burn_in = 1000);

// x in range(C) with C x = A theta + b.
Vec solve_x_theta(const ProjectedProblem& prob, const Vec& theta);

double objective_J(const ProjectedProblem& prob, const Vec& theta);
double objective_Jp(const ProjectedProblem& prob, const Vec& theta);

Vec grad_J_expression_a(const ProjectedProblem& prob, const Vec& theta);
Vec grad_J_expression_b(const ProjectedProblem& prob, const Vec& theta);

// argmin of J_p over ||theta|| <= radius. When the Hessian is singular and
// the multiplier vanishes, the optimal set is the ball slice
// {point + N z}, and distance() measures to that whole set.
struct ThetaOptSet {
  Vec point;
  double value = 0.0;
  double multiplier = 0.0;
  double radius = kInfinity;
  Mat null_basis;  // empty unless the set is a nontrivial slice
  bool on_boundary = false;

  bool is_singleton() const { return null_basis.cols() == 0; }
  double distance(const Vec& theta) const;
  Vec project(const Vec& theta) const;
};

ThetaOptSet theta_opt_ball(const ProjectedProblem& prob);
// Same, with the ball radius overridden (mirror variants use D_theta).
ThetaOptSet theta_opt_ball(const ProjectedProblem& prob, double radius);

// x maximizing x'(A theta + b) - x'Cx/2 over B_x, taken in range(C).
Vec inner_x(const ProjectedProblem& prob, const Vec& theta);
// sup over B_x of psi^o(theta, .)
double saddle_objective(const ProjectedProblem& prob, const Vec& theta);
Vec saddle_gradient(const ProjectedProblem& prob, const Vec& theta);
double psi_o(const ProjectedProblem& prob, const Vec& theta, const Vec& x);

struct SaddlePoint {
  Vec theta;
  Vec x_bar;
  double value = 0.0;
  bool x_interior = false;
  double kkt_residual = 0.0;
  int iterations = 0;
  // When x_bar is interior, D_theta = Theta_opt and this describes it.
  ThetaOptSet theta_set;

  // Distance of theta to D_theta (the single computed point when x_bar is on
  // the boundary of B_x).
  double theta_distance(const Vec& theta) const;
  double distance(const Vec& theta, const Vec& x) const;
};

SaddlePoint saddle_point(const ProjectedProblem& prob, double kkt_tol = 1e-8,
                         int max_iterations = 100000);

struct MdtdFixedPoint {
  bool negative_definite = false;
  double max_symmetric_eigenvalue = 0.0;
  Vec theta_td;  // empty when not negative definite
};

MdtdFixedPoint mdtd_fixed_point(const ProjectedProblem& prob);

// a = sqrt(eta): A -> aA, b -> ab, C -> a^2 C, r_x -> r_x / a.
ProjectedProblem eta_scaled_problem(const ProjectedProblem& prob, double eta);

// sup_{theta in B_theta} ||A theta + b|| / c with c the smallest positive
// eigenvalue of C; any B_x of at least this radius contains every x_theta.
double sufficient_x_radius(const ProjectedProblem& prob);

// Stationarity residual of the unconstrained saddle system:
// ||(A'x + grad p(theta), A theta + b - C x)||.
double unconstrained_kkt_residual(const ProjectedProblem& prob, const Vec& theta,
                                  const Vec& x);

}  // namespace gtdlab

#endif  // GTDLAB_BELLMAN_ORACLE_HPP_
