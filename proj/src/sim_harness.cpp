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

#include "gtdlab/sim_harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "gtdlab/error.hpp"

namespace gtdlab {
namespace {

Vec or_zero(const Vec& v, int d) { return v.size() == 0 ? Vec::Zero(d) : v; }

template <typename F>
double guarded(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return std::nan("");
  }
}

}  // namespace

void check_experiment(const ExperimentConfig& config) {
  const ValidationReport report = validate_model(config.mdp);
  for (const auto& c : report.conditions) {
    if (!c.passed) throw ValidationError(c.name + ": " + c.diagnostic);
  }
  check_features(config.mdp, config.features);
  check_scheme(config.scheme, config.mdp.n_states());
  check_algorithm(config.algorithm, config.scheme);
  const int d = config.features.dim();
  if (config.horizon < 0) throw ConfigError("horizon must be nonnegative");
  if (config.checkpoint_every < 1) throw ConfigError("checkpoint_every must be at least 1");
  if (config.seeds.empty()) throw ConfigError("at least one seed is required");
  if (config.averaging && config.burn_in >= config.horizon) {
    throw ConfigError("averaging burn_in must be smaller than the horizon");
  }
  if (config.burn_in < 0) throw ConfigError("burn_in must be nonnegative");
  if (config.theta0.size() != 0 && config.theta0.size() != d) {
    throw DimensionError("initial theta must have dimension " + std::to_string(d));
  }
  if (config.x0.size() != 0 && config.x0.size() != d) {
    throw DimensionError("initial x must have dimension " + std::to_string(d));
  }
  if (config.s0 < -1 || config.s0 >= config.mdp.n_states()) {
    throw ConfigError("initial state out of range");
  }
  if (config.oracle_horizon < 1000) {
    throw ConfigError("oracle horizon must be at least 1000");
  }
}

OracleReference compute_oracle(const ExperimentConfig& config) {
  check_experiment(config);
  const AlgorithmSpec& alg = config.algorithm;
  OracleReference ref;
  ref.xi = stationary_distribution(config.mdp);
  ref.v_pi = true_value_function(config.mdp);
  if (config.scheme.is_state_dependent()) {
    ref.problem = exact_problem(config.mdp, config.features, config.scheme);
    ref.exact = true;
  } else {
    EmpiricalProblem est = estimate_projected_problem_empirical(
        config.mdp, config.features, config.scheme, config.oracle_horizon,
        config.oracle_seed);
    ref.problem = est.problem;
    ref.A_se = est.A_se;
    ref.b_se = est.b_se;
    ref.exact = false;
    ref.notes.push_back("A and b estimated by simulation over " +
                        std::to_string(config.oracle_horizon) + " steps");
  }
  ref.problem.regularizer = alg.regularizer;
  ref.problem.r_theta = alg.constrained() ? alg.theta_domain_radius() : kInfinity;
  ref.problem.r_x = alg.constrained() && alg.has_x() ? alg.r_x : kInfinity;
  ref.sufficient_r_x = sufficient_x_radius(ref.problem);
  ref.mdtd = mdtd_fixed_point(ref.problem);

  try {
    ref.theta_opt = theta_opt_ball(ref.problem);
  } catch (const Error& e) {
    ref.notes.push_back(std::string("theta_opt unavailable: ") + e.what());
  }
  if (alg.has_x()) {
    try {
      const double eta = alg.variant == Variant::kGtda1tsEta ? alg.eta : 1.0;
      SaddlePoint sp = saddle_point(eta_scaled_problem(ref.problem, eta));
      sp.x_bar *= std::sqrt(eta);
      ref.saddle = sp;
    } catch (const Error& e) {
      ref.notes.push_back(std::string("saddle point unavailable: ") + e.what());
    }
  }
  return ref;
}

MetricValues evaluate_metrics(const ExperimentConfig& config,
                              const OracleReference& oracle, const Vec& theta,
                              const Vec& x) {
  const AlgorithmSpec& alg = config.algorithm;
  const MetricSet& want = config.metrics;
  MetricValues m;
  if (want.dist_theta_opt) {
    if (alg.variant == Variant::kMdtd) {
      if (oracle.mdtd.negative_definite) m.dist_theta_opt = (theta - oracle.mdtd.theta_td).norm();
    } else if (oracle.theta_opt) {
      m.dist_theta_opt = oracle.theta_opt->distance(theta);
    }
  }
  if (want.J_gap && oracle.theta_opt) {
    m.J_gap = guarded([&] {
      return objective_Jp(oracle.problem, theta) - oracle.theta_opt->value;
    });
  }
  if (want.x_tracking && alg.has_x()) {
    m.x_tracking = guarded([&] { return (x - inner_x(oracle.problem, theta)).norm(); });
  }
  if (want.dist_saddle && oracle.saddle) {
    m.dist_saddle = oracle.saddle->distance(theta, x);
  }
  return m;
}

RunRecord run_experiment(const ExperimentConfig& config, const OracleReference& oracle,
                         std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const int d = config.features.dim();
  TraceEngine engine(config.mdp, config.features, config.scheme);
  TdStepper stepper(config.algorithm, config.mdp, config.features);

  int s = config.s0;
  if (s < 0) {
    ChainSampler init_rng(config.mdp, stream_seed(seed, kStreamInit));
    s = init_rng.draw_state(oracle.xi);
  }
  ChainSampler chain(config.mdp, stream_seed(seed, kStreamChain));
  TraceState trace = engine.init(s);
  IterateState state = stepper.initial(or_zero(config.theta0, d), or_zero(config.x0, d));

  RunRecord rec;
  rec.seed = seed;
  auto record_row = [&](long n) {
    CheckpointRow row;
    row.n = n;
    row.theta = state.theta;
    row.x = stepper.x_original(state);
    row.metrics = evaluate_metrics(config, oracle, row.theta, row.x);
    rec.rows.push_back(std::move(row));
  };
  record_row(0);

  Vec mean = Vec::Zero(d);
  long count = 0;
  Vec lambdas(config.scheme.n_cells());
  rec.max_trace_norm = trace.e.norm();
  for (long n = 0; n < config.horizon; ++n) {
    if (config.averaging && n >= config.burn_in) {
      ++count;
      mean += (state.theta - mean) / static_cast<double>(count);
    }
    const Transition tr = chain.next(s);
    engine.next_lambdas(trace, tr.s_next, &lambdas);
    StepInput in;
    in.s = s;
    in.s_next = tr.s_next;
    in.reward = tr.reward;
    in.trace = &trace;
    in.lambda_next = &lambdas;
    const bool ok = stepper.step(&state, in);
    engine.advance(&trace, tr.s_next, lambdas);
    s = tr.s_next;
    if (config.metrics.iterate_norms) {
      rec.max_trace_norm = std::max(rec.max_trace_norm, trace.e.norm());
      rec.max_theta_norm = std::max(rec.max_theta_norm, state.theta.norm());
      rec.max_x_norm = std::max(rec.max_x_norm, state.x.norm());
    }
    if (!ok) {
      rec.diverged = true;
      rec.diverged_at = n + 1;
      record_row(n + 1);
      break;
    }
    if ((n + 1) % config.checkpoint_every == 0 || n + 1 == config.horizon) {
      record_row(n + 1);
    }
  }
  if (config.averaging && count > 0) {
    rec.averaged_theta = mean;
    rec.averaged_count = count;
    rec.averaged_metrics = evaluate_metrics(config, oracle, mean, stepper.x_original(state));
  }
  rec.final_state = state;
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<RunRecord> run_seeds(const ExperimentConfig& config,
                                 const OracleReference& oracle, int workers) {
  const std::size_t n = config.seeds.size();
  std::vector<RunRecord> out(n);
  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = run_experiment(config, oracle, config.seeds[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          out[i] = run_experiment(config, oracle, config.seeds[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Vec direct_average(const RunRecord& record, long burn_in) {
  if (record.rows.empty()) return Vec();
  const long last = record.rows.back().n;
  Vec sum = Vec::Zero(record.rows.front().theta.size());
  long count = 0;
  for (const auto& row : record.rows) {
    if (row.n >= burn_in && row.n < last) {
      sum += row.theta;
      ++count;
    }
  }
  return count > 0 ? Vec(sum / static_cast<double>(count)) : sum;
}

std::string run_csv(const RunRecord& record) {
  std::ostringstream os;
  const Eigen::Index d = record.rows.empty() ? 0 : record.rows.front().theta.size();
  os << "n";
  for (Eigen::Index i = 0; i < d; ++i) os << ",theta_" << i;
  for (Eigen::Index i = 0; i < d; ++i) os << ",x_" << i;
  os << ",dist_theta_opt,J_gap,x_tracking,dist_saddle\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << ',' << buf;
  };
  for (const auto& row : record.rows) {
    os << row.n;
    for (Eigen::Index i = 0; i < d; ++i) put(row.theta(i));
    for (Eigen::Index i = 0; i < d; ++i) put(row.x(i));
    put(row.metrics.dist_theta_opt);
    put(row.metrics.J_gap);
    put(row.metrics.x_tracking);
    put(row.metrics.dist_saddle);
    os << '\n';
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace gtdlab
