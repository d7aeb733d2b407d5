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

// Reference computations that share no code path with the library: series
// sums, fixed-point iteration, state-space objectives, finite differences and
// grid search. Used to freeze expected values in the tests.
#ifndef GTDLAB_TESTS_ORACLES_HPP_
#define GTDLAB_TESTS_ORACLES_HPP_

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "gtdlab/mdp_model.hpp"

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// P_lambda and r_lambda by summing sum_k (P Gamma Lambda)^k term by term.
struct Series {
  Mat P_lambda;
  Vec r_lambda;
};

inline Series bellman_series(const gtdlab::FiniteMdp& mdp, const Vec& lambda) {
  const int n = mdp.n_states();
  Mat step(n, n), tail(n, n);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      step(s, t) = mdp.target_P(s, t) * mdp.discount(t) * lambda(t);
      tail(s, t) = mdp.target_P(s, t) * mdp.discount(t) * (1.0 - lambda(t));
    }
  }
  Vec r_pi = Vec::Zero(n);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) r_pi(s) += mdp.target_P(s, t) * mdp.reward_mean(s, t);
  }
  Series out{Mat::Zero(n, n), Vec::Zero(n)};
  Mat power = Mat::Identity(n, n);
  for (int k = 0; k < 200000; ++k) {
    out.P_lambda += power * tail;
    out.r_lambda += power * r_pi;
    power = power * step;
    if (power.cwiseAbs().maxCoeff() < 1e-300 || power.cwiseAbs().sum() < 1e-19) break;
  }
  return out;
}

// v_pi by iterating v <- r_pi + P Gamma v.
inline Vec value_iteration(const gtdlab::FiniteMdp& mdp) {
  const int n = mdp.n_states();
  Vec r_pi = Vec::Zero(n);
  Mat pg(n, n);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      r_pi(s) += mdp.target_P(s, t) * mdp.reward_mean(s, t);
      pg(s, t) = mdp.target_P(s, t) * mdp.discount(t);
    }
  }
  Vec v = Vec::Zero(n);
  for (int k = 0; k < 1000000; ++k) {
    const Vec next = r_pi + pg * v;
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = next;
    if (change < 1e-15 * (1.0 + v.cwiseAbs().maxCoeff())) break;
  }
  return v;
}

// Invariant distribution by power iteration on the row vector.
inline Vec stationary_power(const Mat& P) {
  const int n = static_cast<int>(P.rows());
  Eigen::RowVectorXd mu = Eigen::RowVectorXd::Constant(n, 1.0 / n);
  // Lazy chain avoids oscillation on periodic inputs.
  const Mat lazy = 0.5 * (Mat::Identity(n, n) + P);
  for (int k = 0; k < 10000000; ++k) {
    const Eigen::RowVectorXd next = mu * lazy;
    const double change = (next - mu).cwiseAbs().sum();
    mu = next;
    if (change < 1e-16) break;
  }
  return mu.transpose() / mu.sum();
}

// J(theta) = 1/2 || Pi_xi (T v - v) ||_xi^2 computed in state space with the
// xi-weighted projection onto span(Phi).
inline double J_state_space(const Mat& P_lambda, const Vec& r_lambda, const Vec& xi,
                            const Mat& phi, const Vec& theta) {
  const Vec v = phi * theta;
  const Vec residual = r_lambda + P_lambda * v - v;
  const Mat W = xi.asDiagonal();
  const Mat gram = phi.transpose() * W * phi;
  const Mat gram_pinv = gram.completeOrthogonalDecomposition().pseudoInverse();
  const Vec projected = phi * (gram_pinv * (phi.transpose() * W * residual));
  return 0.5 * projected.dot(W * projected);
}

inline Vec central_difference(const std::function<double(const Vec&)>& f, const Vec& x,
                              double h) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec up = x, down = x;
    up(i) += h;
    down(i) -= h;
    g(i) = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

// argmin of f over [lo, hi] on a uniform grid.
inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi,
                          double step) {
  double best = lo, best_value = f(lo);
  const long count = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long i = 1; i <= count; ++i) {
    const double t = lo + step * static_cast<double>(i);
    const double v = f(t);
    if (v < best_value) {
      best_value = v;
      best = t;
    }
  }
  return best;
}

// Random model with strictly positive behavior rows (so every target
// transition is covered) and gamma < 1.
inline gtdlab::FiniteMdp random_mdp(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::bernoulli_distribution sparse(0.3);
  gtdlab::FiniteMdp m;
  m.target_P.resize(n, n);
  m.behavior_P.resize(n, n);
  m.discount.resize(n);
  m.reward_mean.resize(n, n);
  m.reward_noise_scale = Mat::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      m.target_P(s, t) = sparse(rng) ? 0.0 : u(rng);
      m.behavior_P(s, t) = u(rng);
      m.reward_mean(s, t) = 4.0 * u(rng) - 2.0;
    }
    if (m.target_P.row(s).sum() == 0.0) m.target_P(s, s) = 1.0;
    m.target_P.row(s) /= m.target_P.row(s).sum();
    m.behavior_P.row(s) /= m.behavior_P.row(s).sum();
    m.discount(s) = 0.5 + 0.45 * u(rng);
  }
  return m;
}

inline Mat random_features(std::mt19937_64& rng, int n, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat phi(n, d);
  for (int s = 0; s < n; ++s) {
    for (int j = 0; j < d; ++j) phi(s, j) = g(rng);
  }
  return phi;
}

inline Vec random_lambda(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec l(n);
  for (int s = 0; s < n; ++s) l(s) = u(rng);
  return l;
}

}  // namespace oracle

#endif  // GTDLAB_TESTS_ORACLES_HPP_
