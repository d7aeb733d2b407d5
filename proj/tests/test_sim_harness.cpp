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

#include <doctest.h>

#include "fixtures.hpp"
#include "gtdlab/sim_harness.hpp"

using namespace gtdlab;
using fixture::vec;

namespace {

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.mdp = fixture::mdp_b();
  c.features = fixture::features_b();
  c.scheme = LambdaScheme::plain(LambdaRule::state(vec({0.3, 0.7})));
  c.algorithm.variant = Variant::kGtdb2ts;
  c.algorithm.r_theta = 20.0;
  c.algorithm.r_x = 20.0;
  c.algorithm.alpha = StepsizeSchedule::power(1.0, 0.8);
  c.algorithm.beta = StepsizeSchedule::power(1.0, 0.6);
  c.horizon = 2000;
  c.checkpoint_every = 500;
  c.seeds = {1, 2, 3, 4};
  return c;
}

bool same_record(const RunRecord& a, const RunRecord& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].n != b.rows[i].n || a.rows[i].theta != b.rows[i].theta ||
        a.rows[i].x != b.rows[i].x) {
      return false;
    }
  }
  return a.averaged_theta == b.averaged_theta;
}

}  // namespace

TEST_SUITE("sim_harness") {

TEST_CASE("horizon zero records only the initial checkpoint") {
  ExperimentConfig c = base_config();
  c.horizon = 0;
  const OracleReference o = compute_oracle(c);
  const RunRecord r = run_experiment(c, o, 1);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].n == 0);
  CHECK(r.rows[0].theta.norm() == 0.0);
}

TEST_CASE("zero stepsizes leave every metric constant") {
  ExperimentConfig c = base_config();
  c.algorithm.variant = Variant::kGtda1ts;
  c.algorithm.alpha = StepsizeSchedule::constant(0.0);
  c.algorithm.beta = StepsizeSchedule::constant(0.0);
  const OracleReference o = compute_oracle(c);
  const RunRecord r = run_experiment(c, o, 1);
  for (const auto& row : r.rows) {
    CHECK(row.metrics.dist_theta_opt == r.rows[0].metrics.dist_theta_opt);
    CHECK(row.metrics.J_gap == r.rows[0].metrics.J_gap);
  }
}

TEST_CASE("rows increase and checkpoints land on the stride") {
  ExperimentConfig c = base_config();
  c.horizon = 1234;
  const OracleReference o = compute_oracle(c);
  const RunRecord r = run_experiment(c, o, 2);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[1].n == 500);
  CHECK(r.rows[3].n == 1234);
}

TEST_CASE("bit-identical across repeats and worker counts") {
  const ExperimentConfig c = base_config();
  const OracleReference o = compute_oracle(c);
  const auto one = run_seeds(c, o, 1);
  const auto four = run_seeds(c, o, 4);
  const auto again = run_seeds(c, o, 3);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].seed == c.seeds[i]);
    CHECK(same_record(one[i], four[i]));
    CHECK(same_record(one[i], again[i]));
  }
  CHECK_FALSE(same_record(one[0], one[1]));
}

TEST_CASE("running mean equals the dense direct mean") {
  ExperimentConfig c = base_config();
  c.horizon = 1000;
  c.checkpoint_every = 1;
  c.averaging = true;
  c.burn_in = 100;
  const OracleReference o = compute_oracle(c);
  const RunRecord r = run_experiment(c, o, 5);
  const Vec direct = direct_average(r, 100);
  CHECK((r.averaged_theta - direct).norm() <= 1e-12);
  CHECK(r.averaged_count == 900);

  c.burn_in = 999;
  const RunRecord last = run_experiment(c, o, 5);
  CHECK(last.averaged_theta == last.rows[999].theta);
}

TEST_CASE("metric sanity") {
  ExperimentConfig c = base_config();
  c.horizon = 5000;
  c.checkpoint_every = 100;
  const OracleReference o = compute_oracle(c);
  for (std::uint64_t seed : c.seeds) {
    const RunRecord r = run_experiment(c, o, seed);
    for (const auto& row : r.rows) {
      CHECK(row.metrics.dist_theta_opt <= 2.0 * c.algorithm.r_theta);
      CHECK(row.metrics.J_gap >= -1e-8);
      CHECK(std::isfinite(row.metrics.x_tracking));
    }
  }
}

TEST_CASE("divergence is recorded, not silent") {
  ExperimentConfig c = base_config();
  c.scheme = LambdaScheme::plain(LambdaRule::history(2.0));
  c.algorithm = AlgorithmSpec();
  c.algorithm.variant = Variant::kGtdaUnconstrained;
  c.algorithm.alpha = StepsizeSchedule::constant(50.0);
  c.algorithm.divergence_guard = 1e3;
  c.oracle_horizon = 20000;
  const OracleReference o = compute_oracle(c);
  CHECK_FALSE(o.exact);
  const RunRecord r = run_experiment(c, o, 1);
  CHECK(r.diverged);
  CHECK(r.rows.back().n == r.diverged_at);
}

TEST_CASE("csv layout") {
  ExperimentConfig c = base_config();
  c.horizon = 10;
  c.checkpoint_every = 5;
  const OracleReference o = compute_oracle(c);
  const std::string csv = run_csv(run_experiment(c, o, 1));
  CHECK(csv.rfind("n,theta_0,x_0,dist_theta_opt,J_gap,x_tracking,dist_saddle\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

}
