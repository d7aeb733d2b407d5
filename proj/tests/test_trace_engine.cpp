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

#include <random>

#include "fixtures.hpp"
#include "gtdlab/error.hpp"
#include "gtdlab/sampler.hpp"
#include "gtdlab/trace_engine.hpp"

using namespace gtdlab;
using fixture::vec;

TEST_SUITE("trace_engine") {

TEST_CASE("lambda zero resets the trace to the new feature") {
  const FiniteMdp m = fixture::mdp_b();
  const FeatureMap f = fixture::features_b();
  const LambdaScheme scheme = LambdaScheme::plain(LambdaRule::state(Vec::Zero(2)));
  TraceEngine engine(m, f, scheme);
  TraceState t = engine.init(0);
  CHECK(t.e(0) == 1.0);
  engine.step(&t, 1);
  CHECK(t.e(0) == 2.0);
  CHECK(t.s_prev == 0);
  CHECK(t.s_cur == 1);
}

TEST_CASE("state-dependent recursion by hand") {
  const FiniteMdp m = fixture::mdp_b();
  const FeatureMap f = fixture::features_b();
  const LambdaScheme scheme = LambdaScheme::plain(LambdaRule::state(vec({0.3, 0.7})));
  TraceEngine engine(m, f, scheme);
  TraceState t = engine.init(0);
  // 0 -> 1: lambda(1) gamma rho(0,1) e + phi(1) = 0.7*0.8*0.2*1 + 2
  const Vec lam = engine.step(&t, 1);
  CHECK(lam(0) == 0.7);
  CHECK(t.e(0) == doctest::Approx(0.7 * 0.8 * 0.2 + 2.0).epsilon(1e-15));
  // 1 -> 1: 0.7*0.8*1.8*e + 2
  const double prev = t.e(0);
  engine.step(&t, 1);
  CHECK(t.e(0) == doctest::Approx(0.7 * 0.8 * 1.8 * prev + 2.0).epsilon(1e-15));
}

TEST_CASE("history rule keeps the scaled trace inside its ball") {
  const FiniteMdp m = fixture::mdp_b();
  const FeatureMap f = fixture::features_b();
  const double bound = 2.0;
  const LambdaScheme scheme = LambdaScheme::plain(LambdaRule::history(bound));
  TraceEngine engine(m, f, scheme);
  ChainSampler chain(m, 3);
  TraceState t = engine.init(0);
  int s = 0;
  for (int i = 0; i < 100000; ++i) {
    const int sn = chain.next(s).s_next;
    const double scaled = m.discount(sn) * engine.rho()(s, sn) * t.e.norm();
    Vec lam;
    engine.next_lambdas(t, sn, &lam);
    CHECK(lam(0) * scaled <= bound * (1.0 + 1e-15));
    engine.advance(&t, sn, lam);
    CHECK(t.e.norm() <= bound + 2.0 + 1e-12);
    s = sn;
  }
}

TEST_CASE("history rule is a ball projection, hence nonexpansive") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 3.0);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < 10000; ++i) {
    const double scale = u(rng);  // gamma * rho for the memory y
    Vec e(3), ep(3);
    for (int j = 0; j < 3; ++j) {
      e(j) = g(rng);
      ep(j) = g(rng);
    }
    const double la = history_lambda(2.0, 1.0, scale, e.norm());
    const double lb = history_lambda(2.0, 1.0, scale, ep.norm());
    const Vec a = la * scale * e, b = lb * scale * ep;
    CHECK((a - b).norm() <= scale * (e - ep).norm() + 1e-12);
  }
  CHECK(history_lambda(2.0, 0.9, 1.0, 0.0) == 1.0);
}

TEST_CASE("composite scheme sums its sub-traces") {
  const FiniteMdp m = fixture::mdp_b();
  const FeatureMap f = fixture::features_b();
  const LambdaScheme scheme = LambdaScheme::make_composite(
      {0, 1}, {LambdaRule::state(vec({0.2, 0.2})), LambdaRule::history(1.0)});
  TraceEngine engine(m, f, scheme);
  ChainSampler chain(m, 8);
  TraceState t = engine.init(1);
  CHECK(t.sub[1](0) == 2.0);
  CHECK(t.sub[0](0) == 0.0);
  int s = 1;
  for (int i = 0; i < 500; ++i) {
    s = chain.next(s).s_next;
    engine.step(&t, s);
    CHECK(std::abs(t.e(0) - (t.sub[0](0) + t.sub[1](0))) < 1e-12);
  }
}

TEST_CASE("scheme validation") {
  CHECK_THROWS_AS(check_scheme(LambdaScheme::plain(LambdaRule::state(vec({0.5, 1.2}))), 2),
                  ConfigError);
  CHECK_THROWS_AS(check_scheme(LambdaScheme::plain(LambdaRule::history(0.0)), 2), ConfigError);
  CHECK_THROWS_AS(check_scheme(LambdaScheme::make_composite({0, 2}, {LambdaRule::history(1.0),
                                                                     LambdaRule::history(1.0)}),
                               2),
                  ConfigError);
  CHECK_THROWS_AS(check_scheme(LambdaScheme::make_composite({0, 0}, {LambdaRule::history(1.0),
                                                                     LambdaRule::history(1.0)}),
                               2),
                  ConfigError);
}

TEST_CASE("coupled traces contract under the analytic envelope on average") {
  const FiniteMdp m = fixture::mdp_b();
  const FeatureMap f = fixture::features_b();
  const LambdaScheme scheme = LambdaScheme::plain(LambdaRule::state(vec({0.3, 0.7})));
  const int H = 40, seeds = 200;
  std::vector<double> mean(H + 1, 0.0);
  std::vector<double> bound;
  for (int k = 0; k < seeds; ++k) {
    const CoupledDecay d = coupled_trace_decay(m, f, scheme, vec({3.0}), vec({-1.0}), H,
                                               static_cast<unsigned long long>(k));
    for (int n = 0; n <= H; ++n) mean[n] += d.gap[n] / seeds;
    bound = d.bound;
  }
  CHECK(mean[0] == doctest::Approx(4.0));
  for (int n = 0; n <= H; ++n) CHECK(mean[n] <= bound[n] * 1.05 + 1e-12);
  CHECK(mean[H] < 0.05 * mean[0]);
}

}
