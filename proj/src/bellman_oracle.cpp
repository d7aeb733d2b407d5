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

#include "gtdlab/bellman_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtdlab/error.hpp"
#include "gtdlab/sampler.hpp"
#include "gtdlab/stats.hpp"

namespace gtdlab {

Regularizer Regularizer::quadratic(double weight, Vec center) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw ConfigError("regularizer weight must be a nonnegative number");
  }
  Regularizer r;
  r.kind = Kind::kQuadratic;
  r.weight = weight;
  r.center = std::move(center);
  return r;
}

Vec Regularizer::center_or_zero(Eigen::Index d) const {
  if (center.size() == 0) return Vec::Zero(d);
  if (center.size() != d) {
    throw DimensionError("regularizer center has dimension " +
                         std::to_string(center.size()) + ", expected " +
                         std::to_string(d));
  }
  return center;
}

double Regularizer::value(const Vec& theta) const {
  if (kind == Kind::kNone) return 0.0;
  return 0.5 * weight * (theta - center_or_zero(theta.size())).squaredNorm();
}

Vec Regularizer::gradient(const Vec& theta) const {
  Vec g(theta.size());
  gradient_into(theta, &g);
  return g;
}

void Regularizer::gradient_into(const Vec& theta, Vec* out) const {
  if (out->size() != theta.size()) out->resize(theta.size());
  if (kind == Kind::kNone) {
    out->setZero();
  } else if (center.size() == 0) {
    out->noalias() = weight * theta;
  } else {
    out->noalias() = weight * (theta - center);
  }
}

double Regularizer::recession(const Vec& theta) const {
  return kind == Kind::kNone ? 0.0 : 0.5 * weight * theta.squaredNorm();
}

AffineBellman bellman_state_dependent(const FiniteMdp& mdp, const Vec& lambda) {
  const int n = mdp.n_states();
  if (lambda.size() != n) {
    throw DimensionError("lambda has " + std::to_string(lambda.size()) +
                         " entries, model has " + std::to_string(n) + " states");
  }
  if ((lambda.array() < 0.0).any() || (lambda.array() > 1.0).any()) {
    throw ConfigError("state-dependent lambda must lie in [0,1]");
  }
  const Mat p_gamma_lambda =
      mdp.target_P * mdp.discount.cwiseProduct(lambda).asDiagonal();
  const Mat system = Mat::Identity(n, n) - p_gamma_lambda;
  Eigen::FullPivLU<Mat> lu(system);
  if (!lu.isInvertible()) throw NumericalError("I - P Gamma Lambda is singular");
  const Vec one_minus = Vec::Ones(n) - lambda;
  const Mat tail =
      mdp.target_P * mdp.discount.cwiseProduct(one_minus).asDiagonal();
  AffineBellman out;
  out.r_lambda = lu.solve(expected_reward(mdp));
  out.P_lambda = lu.solve(tail);
  return out;
}

AffineBellman bellman_for_scheme(const FiniteMdp& mdp, const LambdaScheme& scheme) {
  check_scheme(scheme, mdp.n_states());
  if (scheme.has_history_rule()) {
    throw ConfigError(
        "history-dependent lambda has no closed-form Bellman operator");
  }
  if (!scheme.composite) return bellman_state_dependent(mdp, scheme.cells[0].values);
  const int n = mdp.n_states();
  AffineBellman out{Mat::Zero(n, n), Vec::Zero(n)};
  for (int i = 0; i < scheme.n_cells(); ++i) {
    const AffineBellman cell =
        bellman_state_dependent(mdp, scheme.cells[static_cast<std::size_t>(i)].values);
    for (int s = 0; s < n; ++s) {
      if (scheme.cell_of(s) != i) continue;
      out.P_lambda.row(s) = cell.P_lambda.row(s);
      out.r_lambda(s) = cell.r_lambda(s);
    }
  }
  return out;
}

ProjectedProblem assemble_problem(const FiniteMdp& mdp, const FeatureMap& features,
                                  const AffineBellman& bellman) {
  check_features(mdp, features);
  const Vec xi = stationary_distribution(mdp);
  const Mat& phi = features.phi;
  const Mat weighted = phi.transpose() * xi.asDiagonal();
  const int n = mdp.n_states();
  ProjectedProblem prob;
  prob.A = weighted * (bellman.P_lambda - Mat::Identity(n, n)) * phi;
  prob.b = weighted * bellman.r_lambda;
  const Mat c = weighted * phi;
  prob.C = 0.5 * (c + c.transpose());
  return prob;
}

ProjectedProblem exact_problem(const FiniteMdp& mdp, const FeatureMap& features,
                               const LambdaScheme& scheme) {
  return assemble_problem(mdp, features, bellman_for_scheme(mdp, scheme));
}

EmpiricalProblem estimate_projected_problem_empirical(
    const FiniteMdp& mdp, const FeatureMap& features, const LambdaScheme& scheme,
    long horizon, std::uint64_t seed, int blocks, long burn_in) {
  if (horizon < blocks) {
    throw ConfigError("empirical horizon must cover at least one step per block");
  }
  TraceEngine engine(mdp, features, scheme);
  const Vec xi = stationary_distribution(mdp);
  ChainSampler init_rng(mdp, stream_seed(seed, kStreamInit));
  ChainSampler chain(mdp, stream_seed(seed, kStreamChain));
  int s = init_rng.draw_state(xi);
  TraceState trace = engine.init(s);

  const int d = features.dim();
  const long block_length = horizon / blocks;
  BatchMeans stats(d * d + d, blocks, block_length);
  Vec sample(d * d + d);
  Vec lambdas(scheme.n_cells());
  Vec direction(d);
  const Mat& rho = engine.rho();
  for (long n = 0; n < burn_in + horizon; ++n) {
    const Transition tr = chain.next(s);
    const int s_next = tr.s_next;
    if (n >= burn_in) {
      const double r = rho(s, s_next);
      direction = mdp.discount(s_next) * features.phi.row(s_next).transpose() -
                  features.phi.row(s).transpose();
      Eigen::Map<Mat> a_part(sample.data(), d, d);
      a_part.noalias() = (r * trace.e) * direction.transpose();
      sample.tail(d) = (r * mdp.reward_mean(s, s_next)) * trace.e;
      stats.add(sample);
    }
    engine.next_lambdas(trace, s_next, &lambdas);
    engine.advance(&trace, s_next, lambdas);
    s = s_next;
  }
  const Vec mean = stats.mean();
  const Vec se = stats.standard_error();
  if (!mean.allFinite()) throw NumericalError("empirical averages are not finite");

  EmpiricalProblem out;
  out.problem.A = Eigen::Map<const Mat>(mean.data(), d, d);
  out.problem.b = mean.tail(d);
  const Mat c = features.phi.transpose() * xi.asDiagonal() * features.phi;
  out.problem.C = 0.5 * (c + c.transpose());
  out.A_se = Eigen::Map<const Mat>(se.data(), d, d);
  out.b_se = se.tail(d);
  out.horizon = horizon;
  out.short_horizon = horizon < 10000;
  return out;
}

Vec solve_x_theta(const ProjectedProblem& prob, const Vec& theta) {
  const Vec rhs = prob.A * theta + prob.b;
  const Vec x = symmetric_pinv(prob.C).pinv * rhs;
  const double residual = (prob.C * x - rhs).norm();
  if (residual > 1e-8 * (1.0 + rhs.norm())) {
    std::ostringstream os;
    os << "C x = A theta + b has no solution (residual " << residual
       << "); A theta + b lies outside the range of C";
    throw NumericalError(os.str());
  }
  return x;
}

double objective_J(const ProjectedProblem& prob, const Vec& theta) {
  const Vec x = solve_x_theta(prob, theta);
  return 0.5 * x.dot(prob.C * x);
}

double objective_Jp(const ProjectedProblem& prob, const Vec& theta) {
  return objective_J(prob, theta) + prob.regularizer.value(theta);
}

Vec grad_J_expression_a(const ProjectedProblem& prob, const Vec& theta) {
  return prob.A.transpose() * solve_x_theta(prob, theta);
}

Vec grad_J_expression_b(const ProjectedProblem& prob, const Vec& theta) {
  const Vec x = solve_x_theta(prob, theta);
  return -(prob.A * theta + prob.b) + (prob.A + prob.C).transpose() * x;
}

double ThetaOptSet::distance(const Vec& theta) const {
  return (theta - project(theta)).norm();
}

Vec ThetaOptSet::project(const Vec& theta) const {
  if (is_singleton()) return point;
  Vec z = null_basis.transpose() * theta;
  if (!std::isinf(radius)) {
    const double room = std::sqrt(std::max(0.0, radius * radius - point.squaredNorm()));
    z = project_ball(z, room);
  }
  return point + null_basis * z;
}

ThetaOptSet theta_opt_ball(const ProjectedProblem& prob) {
  return theta_opt_ball(prob, prob.r_theta);
}

ThetaOptSet theta_opt_ball(const ProjectedProblem& prob, double radius) {
  const Eigen::Index d = prob.dim();
  const Mat c_pinv = symmetric_pinv(prob.C).pinv;
  const double w = prob.regularizer.weight_or_zero();
  Mat h = prob.A.transpose() * c_pinv * prob.A;
  h = 0.5 * (h + h.transpose());
  h.diagonal().array() += w;
  const Vec g = prob.A.transpose() * c_pinv * prob.b -
                w * prob.regularizer.center_or_zero(d);
  const BallQuadraticSolution sol = minimize_quadratic_on_ball(h, g, radius);
  ThetaOptSet out;
  out.point = sol.point;
  out.multiplier = sol.multiplier;
  out.radius = radius;
  out.on_boundary = sol.on_boundary;
  if (sol.multiplier == 0.0 && sol.null_basis.cols() > 0) {
    out.null_basis = sol.null_basis;
  }
  out.value = objective_Jp(prob, out.point);
  return out;
}

Vec inner_x(const ProjectedProblem& prob, const Vec& theta) {
  const Vec rhs = prob.A * theta + prob.b;
  return minimize_quadratic_on_ball(prob.C, -rhs, prob.r_x).point;
}

double psi_o(const ProjectedProblem& prob, const Vec& theta, const Vec& x) {
  return x.dot(prob.A * theta + prob.b) - 0.5 * x.dot(prob.C * x) +
         prob.regularizer.value(theta);
}

double saddle_objective(const ProjectedProblem& prob, const Vec& theta) {
  return psi_o(prob, theta, inner_x(prob, theta));
}

Vec saddle_gradient(const ProjectedProblem& prob, const Vec& theta) {
  return prob.A.transpose() * inner_x(prob, theta) + prob.regularizer.gradient(theta);
}

double SaddlePoint::theta_distance(const Vec& t) const {
  if (x_interior) return theta_set.distance(t);
  return (t - theta).norm();
}

double SaddlePoint::distance(const Vec& t, const Vec& x) const {
  const double dt = theta_distance(t);
  return std::sqrt(dt * dt + (x - x_bar).squaredNorm());
}

SaddlePoint saddle_point(const ProjectedProblem& prob, double kkt_tol,
                         int max_iterations) {
  if (!(prob.r_x > 0.0) || !(prob.r_theta > 0.0)) {
    throw ConfigError("saddle point needs positive r_theta and r_x");
  }
  const ThetaOptSet start = theta_opt_ball(prob);
  const Mat c_pinv = symmetric_pinv(prob.C).pinv;
  const double lipschitz =
      (prob.A.transpose() * c_pinv * prob.A).norm() + prob.regularizer.weight_or_zero();
  double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  Vec theta = start.point;
  double f = saddle_objective(prob, theta);
  Vec grad = saddle_gradient(prob, theta);
  double residual = kInfinity;
  int it = 0;
  for (; it < max_iterations; ++it) {
    residual = (theta - project_ball(theta - step * grad, prob.r_theta)).norm() / step;
    if (residual <= kkt_tol) break;
    // Backtracking on the projected-gradient sufficient-decrease condition.
    for (int bt = 0; bt < 60; ++bt) {
      const Vec next = project_ball(theta - step * grad, prob.r_theta);
      const Vec diff = next - theta;
      const double f_next = saddle_objective(prob, next);
      if (f_next <= f + grad.dot(diff) + 0.5 / step * diff.squaredNorm() + 1e-15 * std::abs(f)) {
        theta = next;
        f = f_next;
        break;
      }
      step *= 0.5;
    }
    grad = saddle_gradient(prob, theta);
  }
  if (residual > kkt_tol) {
    std::ostringstream os;
    os << "saddle point solver did not converge in " << max_iterations
       << " iterations (KKT residual " << residual << ")";
    throw NumericalError(os.str());
  }
  SaddlePoint out;
  out.theta = theta;
  out.x_bar = inner_x(prob, theta);
  out.value = psi_o(prob, theta, out.x_bar);
  out.x_interior = out.x_bar.norm() < prob.r_x - 1e-8;
  out.kkt_residual = residual;
  out.iterations = it;
  if (out.x_interior) out.theta_set = start;
  return out;
}

MdtdFixedPoint mdtd_fixed_point(const ProjectedProblem& prob) {
  const Mat sym = 0.5 * (prob.A + prob.A.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym);
  MdtdFixedPoint out;
  out.max_symmetric_eigenvalue = eig.eigenvalues().maxCoeff();
  out.negative_definite = out.max_symmetric_eigenvalue < 0.0;
  if (out.negative_definite) {
    out.theta_td = prob.A.fullPivLu().solve(-prob.b);
  }
  return out;
}

ProjectedProblem eta_scaled_problem(const ProjectedProblem& prob, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ConfigError("eta must be a positive number");
  }
  if (eta == 1.0) return prob;
  const double a = std::sqrt(eta);
  ProjectedProblem out = prob;
  out.A = a * prob.A;
  out.b = a * prob.b;
  out.C = (a * a) * prob.C;
  out.r_x = prob.r_x / a;
  return out;
}

double sufficient_x_radius(const ProjectedProblem& prob) {
  if (std::isinf(prob.r_theta)) return kInfinity;
  const SymmetricPinv c = symmetric_pinv(prob.C);
  if (c.rank == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(prob.A);
  const double a_norm = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  return (a_norm * prob.r_theta + prob.b.norm()) / c.min_positive_eigenvalue;
}

double unconstrained_kkt_residual(const ProjectedProblem& prob, const Vec& theta,
                                  const Vec& x) {
  const Vec g_theta = prob.A.transpose() * x + prob.regularizer.gradient(theta);
  const Vec g_x = prob.A * theta + prob.b - prob.C * x;
  return std::sqrt(g_theta.squaredNorm() + g_x.squaredNorm());
}

}  // namespace gtdlab
