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

// Acceptance criteria. One PASS/FAIL line per criterion; exit status is the
// number of failed criteria (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gtdlab/bellman_oracle.hpp"
#include "gtdlab/sim_harness.hpp"
#include "gtdlab/stats.hpp"
#include "gtdlab/verification.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace gtdlab;
using fixture::vec;

namespace {

struct Outcome {
  bool passed = false;
  std::string measured;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

std::vector<std::uint64_t> seeds_1_to(int n) {
  std::vector<std::uint64_t> s;
  for (int i = 1; i <= n; ++i) s.push_back(static_cast<std::uint64_t>(i));
  return s;
}

// Median over seeds of a metric at checkpoint index k.
double median_at(const std::vector<RunRecord>& rs, std::size_t k,
                 const std::function<double(const CheckpointRow&)>& f) {
  std::vector<double> v;
  for (const auto& r : rs) v.push_back(f(r.rows[k]));
  return median(v);
}

int workers() { return 8; }

ExperimentConfig mdp_b_config(Variant v, const Vec& lambda) {
  ExperimentConfig c;
  c.mdp = fixture::mdp_b();
  c.features = fixture::features_b();
  c.scheme = LambdaScheme::plain(LambdaRule::state(lambda));
  c.algorithm.variant = v;
  c.algorithm.r_theta = 20.0;
  ProjectedProblem p = exact_problem(c.mdp, c.features, c.scheme);
  p.r_theta = c.algorithm.r_theta;
  c.algorithm.r_x = sufficient_x_radius(p);
  c.algorithm.alpha = StepsizeSchedule::power(1.0, 0.8);
  c.algorithm.beta = StepsizeSchedule::power(1.0, 0.6);
  c.horizon = 200000;
  c.seeds = seeds_1_to(20);
  return c;
}

// 1. Gradient expressions (a), (b) and finite differences.
Outcome gradient_suite() {
  std::mt19937_64 rng(2024);
  double worst_ab = 0.0, worst_fd = 0.0;
  bool ok = true;
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 7;
    const int d = 1 + k % 4;
    const FiniteMdp raw = oracle::random_mdp(rng, n);
    const FiniteMdp m = make_mdp(raw.target_P, raw.behavior_P, raw.discount, raw.reward_mean,
                                 raw.reward_noise_scale);
    const FeatureMap f{oracle::random_features(rng, n, d)};
    const ProjectedProblem p = exact_problem(
        m, f, LambdaScheme::plain(LambdaRule::state(oracle::random_lambda(rng, n))));
    const CheckReport r = check_gradients(p, 10, static_cast<std::uint64_t>(k));
    ok = ok && r.ok();
    for (const auto& x : r.results) {
      if (x.name == "gradient/a_vs_b") worst_ab = std::max(worst_ab, x.margin);
      if (x.name == "gradient/finite_difference") worst_fd = std::max(worst_fd, x.margin);
    }
  }
  return {ok && worst_ab <= 1e-10 && worst_fd <= 1e-6,
          fmt("max |a-b| %.2e (tol 1e-10), max FD rel %.2e (tol 1e-6)", worst_ab, worst_fd)};
}

// 2. Operator endpoints and the fixed point of every T^(lambda).
Outcome bellman_endpoints() {
  std::mt19937_64 rng(77);
  double worst_end = 0.0, worst_fix = 0.0;
  for (int k = 0; k < 20; ++k) {
    const FiniteMdp m = oracle::random_mdp(rng, 2 + k % 7);
    const int n = m.n_states();
    const Mat pg = m.target_P * m.discount.asDiagonal();
    const AffineBellman z = bellman_state_dependent(m, Vec::Zero(n));
    const AffineBellman o = bellman_state_dependent(m, Vec::Ones(n));
    const Vec v = true_value_function(m);
    worst_end = std::max({worst_end, (z.P_lambda - pg).cwiseAbs().maxCoeff(),
                          (z.r_lambda - expected_reward(m)).cwiseAbs().maxCoeff(),
                          o.P_lambda.cwiseAbs().maxCoeff(),
                          (o.r_lambda - v).cwiseAbs().maxCoeff()});
    const AffineBellman t = bellman_state_dependent(m, oracle::random_lambda(rng, n));
    worst_fix = std::max(worst_fix, (v - t.r_lambda - t.P_lambda * v).cwiseAbs().maxCoeff());
  }
  return {worst_end <= 1e-12 && worst_fix <= 1e-8,
          fmt("endpoint error %.2e (tol 1e-12), fixed-point residual %.2e (tol 1e-8)",
              worst_end, worst_fix)};
}

// 3. Stationary expectations on MDP-A and MDP-B at horizon 1e6.
Outcome stationary_expectations() {
  StationaryOptions o;
  o.horizon = 1000000;
  o.seeds = {1};
  CheckReport r = check_stationary_expectations(
      fixture::mdp_a(), fixture::features_a(),
      LambdaScheme::plain(LambdaRule::state(vec({0.5, 0.5}))), o);
  r.append(check_stationary_expectations(
      fixture::mdp_b(), fixture::features_b(),
      LambdaScheme::plain(LambdaRule::state(vec({0.3, 0.7}))), o));
  double worst = 0.0;
  for (const auto& x : r.results) worst = std::max(worst, x.margin);
  return {r.ok() && r.results.size() == 16,
          fmt("%.0f identities, worst %.2f standard errors (tol 3)",
              static_cast<double>(r.results.size()), worst)};
}

// 4. Two-time-scale convergence on MDP-B.
Outcome two_time_scale_convergence() {
  bool ok = true;
  std::string measured;
  for (Variant v : {Variant::kGtda2ts, Variant::kGtdb2ts}) {
    ExperimentConfig c = mdp_b_config(v, vec({0.5, 0.5}));
    c.checkpoint_every = 40000;
    const OracleReference o = compute_oracle(c);
    const auto rs = run_seeds(c, o, workers());
    auto dist = [](const CheckpointRow& r) { return r.metrics.dist_theta_opt; };
    const std::size_t last = rs[0].rows.size() - 1;
    const double init = median_at(rs, 0, dist);
    const double fin = median_at(rs, last, dist);
    bool monotone = true;
    std::string tail;
    for (std::size_t k = last - 4; k <= last; ++k) {
      tail += fmt(k == last ? "%.5f" : "%.5f,", median_at(rs, k, dist));
      if (k > last - 4) monotone = monotone && median_at(rs, k, dist) <= median_at(rs, k - 1, dist);
    }
    ok = ok && fin < 0.1 * init && monotone;
    measured += std::string(variant_name(v)) +
                fmt(" final/initial %.4f (tol 0.1) monotone=%.0f", fin / init, monotone) +
                " [" + tail + "]; ";
  }
  return {ok, measured};
}

// 5. Single time scale: interior saddle, then B_x shrunk below ||x_opt||.
Outcome single_time_scale() {
  auto run = [](double r_theta, double r_x, double* ratio, double* x_bar) {
    ExperimentConfig c = mdp_b_config(Variant::kGtda1ts, vec({0.5, 0.5}));
    c.algorithm.r_theta = r_theta;
    if (r_x > 0.0) c.algorithm.r_x = r_x;
    c.algorithm.alpha = StepsizeSchedule::power(1.0, 0.7);
    c.algorithm.beta = c.algorithm.alpha;
    c.checkpoint_every = 50000;
    const OracleReference o = compute_oracle(c);
    const auto rs = run_seeds(c, o, workers());
    auto dist = [](const CheckpointRow& r) { return r.metrics.dist_saddle; };
    *ratio = median_at(rs, rs[0].rows.size() - 1, dist) / median_at(rs, 0, dist);
    *x_bar = o.saddle->x_bar(0);
    return o;
  };
  double ratio_a = 0.0, ratio_b = 0.0, xa = 0.0, xb = 0.0;
  run(20.0, -1.0, &ratio_a, &xa);
  // With r_theta = 2 the optimum sits on the boundary and x_opt is nonzero.
  ExperimentConfig probe = mdp_b_config(Variant::kGtda1ts, vec({0.5, 0.5}));
  ProjectedProblem p = exact_problem(probe.mdp, probe.features, probe.scheme);
  p.r_theta = 2.0;
  const double x_opt = solve_x_theta(p, theta_opt_ball(p).point).norm();
  const double r_small = 0.4 * x_opt;
  run(2.0, r_small, &ratio_b, &xb);
  const bool moved = std::abs(xb) <= r_small + 1e-9 && std::abs(xb - x_opt) > 0.1;
  return {ratio_a < 0.1 && ratio_b < 0.1 && moved,
          fmt("interior %.4f, constrained %.4f (tol 0.1); x_bar %.3f vs x_opt %.3f",
              ratio_a, ratio_b, xb, x_opt)};
}

// 6. Reduction identities on shared streams.
Outcome reductions() {
  ReductionOptions o;
  o.horizon = 20000;
  const CheckReport r = check_reduction_identities(
      fixture::mdp_b(), fixture::features_b(),
      LambdaScheme::plain(LambdaRule::state(vec({0.3, 0.7}))), o);
  double worst = 0.0;
  for (const auto& x : r.results) worst = std::max(worst, x.margin);
  return {r.ok(), fmt("%.0f identities, worst gap %.2e (exact; x~ form tol 1e-12)",
                      static_cast<double>(r.results.size()), worst)};
}

// 7. Trace conditions.
Outcome trace_conditions() {
  TraceConditionOptions o;
  o.n_samples = 10000;
  o.steps = 1000000;
  o.coupling_seeds = 50;
  o.coupling_lambda = vec({0.3, 0.7});
  const CheckReport r = check_trace_conditions(fixture::mdp_b(), fixture::features_b(), o);
  std::string m;
  for (const auto& x : r.results) {
    if (!x.informational) m += x.name + fmt(" %.3g/%.3g ", x.margin, x.threshold);
  }
  return {r.ok(), m};
}

// 8. Unconstrained regularized GTDa under history-dependent lambda.
Outcome unconstrained() {
  bool ok = true;
  std::string measured;
  for (int which = 0; which < 2; ++which) {
    ExperimentConfig c;
    c.mdp = which == 0 ? fixture::mdp_a() : fixture::mdp_b();
    c.features = which == 0 ? fixture::features_a() : fixture::features_b();
    c.scheme = LambdaScheme::plain(LambdaRule::history(2.0));
    c.algorithm.variant = Variant::kGtdaUnconstrained;
    c.algorithm.regularizer = Regularizer::quadratic(0.1);
    c.algorithm.alpha = StepsizeSchedule::power(1.0, 0.7);
    c.horizon = 200000;
    c.checkpoint_every = 200000;
    c.seeds = seeds_1_to(20);
    c.oracle_horizon = 2000000;
    const OracleReference o = compute_oracle(c);
    const auto rs = run_seeds(c, o, workers());
    int trips = 0;
    std::vector<double> kkt;
    for (const auto& r : rs) {
      if (r.diverged) ++trips;
      kkt.push_back(unconstrained_kkt_residual(o.problem, r.final_state.theta, r.final_state.x));
    }
    const double med = median(kkt);
    ok = ok && trips == 0 && med < 0.05;
    measured += std::string(which == 0 ? "MDP-A" : "MDP-B") +
                fmt(" trips %.0f, median KKT %.4f (tol 0.05); ", trips, med);
  }
  return {ok, measured};
}

// 9. Biased variant: bias shrinks as K grows under heavy-tailed traces.
Outcome biased_monotonicity() {
  Mat P(2, 2);
  P << 0.95, 0.05, 0.05, 0.95;
  Mat r(2, 2);
  r << 1.0, 0.0, 0.0, -1.0;
  ExperimentConfig c;
  c.mdp = make_mdp(P, Mat::Constant(2, 2, 0.5), Vec::Constant(2, 0.95), r, Mat::Zero(2, 2));
  Mat phi(2, 1);
  phi << 1.0, 0.5;
  c.features = FeatureMap{phi};
  c.scheme = LambdaScheme::plain(LambdaRule::state(vec({0.9, 0.9})));
  c.algorithm.variant = Variant::kBiasedGtda2ts;
  c.algorithm.r_theta = 50.0;
  ProjectedProblem p = exact_problem(c.mdp, c.features, c.scheme);
  p.r_theta = c.algorithm.r_theta;
  c.algorithm.r_x = sufficient_x_radius(p);
  c.algorithm.alpha = StepsizeSchedule::power(0.5, 0.8);
  c.algorithm.beta = StepsizeSchedule::power(0.5, 0.6);
  c.horizon = 200000;
  c.checkpoint_every = 200000;
  c.seeds = seeds_1_to(20);
  std::vector<double> med, se;
  double max_trace = 0.0;
  for (double K : {1.0, 4.0, 16.0}) {
    c.algorithm.K = K;
    const OracleReference o = compute_oracle(c);
    const auto rs = run_seeds(c, o, workers());
    std::vector<double> d;
    for (const auto& x : rs) {
      d.push_back(x.rows.back().metrics.dist_theta_opt);
      max_trace = std::max(max_trace, x.max_trace_norm);
    }
    med.push_back(median(d));
    se.push_back(std::sqrt(sample_variance(d) * M_PI / (2.0 * static_cast<double>(d.size()))));
  }
  bool ok = max_trace > 16.0;
  for (int k = 1; k < 3; ++k) ok = ok && med[k] <= med[k - 1] + 2.0 * std::hypot(se[k], se[k - 1]);
  return {ok, fmt("median dist K=1 %.4f, K=4 %.4f, K=16 %.4f; max trace %.1f (need > 16)",
                  med[0], med[1], med[2], max_trace)};
}

// 10. Averaged iterates under constant stepsizes.
Outcome averaging() {
  ExperimentConfig c = mdp_b_config(Variant::kGtda1ts, vec({0.5, 0.5}));
  c.algorithm.alpha = StepsizeSchedule::constant(0.01);
  c.algorithm.beta = c.algorithm.alpha;
  c.horizon = 50000;
  c.checkpoint_every = 50000;
  c.averaging = true;
  c.burn_in = 5000;
  const OracleReference o = compute_oracle(c);
  const auto rs = run_seeds(c, o, workers());
  std::vector<double> raw, avg;
  for (const auto& r : rs) {
    raw.push_back(r.rows.back().theta(0));
    avg.push_back(r.averaged_theta(0));
  }
  const double vr = sample_variance(raw), va = sample_variance(avg);
  return {va <= vr, fmt("variance averaged %.3e <= raw %.3e", va, vr)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {"gradient suite", gradient_suite},
      {"Bellman operator endpoints", bellman_endpoints},
      {"stationary expectations", stationary_expectations},
      {"two-time-scale convergence", two_time_scale_convergence},
      {"single-time-scale saddle convergence", single_time_scale},
      {"reduction identities", reductions},
      {"trace conditions", trace_conditions},
      {"unconstrained regularized GTDa", unconstrained},
      {"biased variant monotonicity in K", biased_monotonicity},
      {"averaged iterates", averaging},
  };
  int failed = 0;
  int index = 1;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s [%.1fs]\n", out.passed ? "PASS" : "FAIL", index,
                c.name, out.measured.c_str(), secs);
    std::fflush(stdout);
    if (!out.passed) ++failed;
    ++index;
  }
  std::printf("%d/%d criteria passed\n", 10 - failed, 10);
  return failed == 0 ? 0 : 1;
}
