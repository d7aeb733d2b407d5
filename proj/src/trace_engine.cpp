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

#include "gtdlab/trace_engine.hpp"

#include <cmath>
#include <string>

#include "gtdlab/error.hpp"
#include "gtdlab/sampler.hpp"

namespace gtdlab {

LambdaRule LambdaRule::state(Vec values) {
  LambdaRule r;
  r.kind = Kind::kState;
  r.values = std::move(values);
  return r;
}

LambdaRule LambdaRule::history(double bound) {
  LambdaRule r;
  r.kind = Kind::kHistory;
  r.bound = bound;
  return r;
}

LambdaScheme LambdaScheme::plain(LambdaRule rule) {
  LambdaScheme s;
  s.cells.push_back(std::move(rule));
  return s;
}

LambdaScheme LambdaScheme::make_composite(std::vector<int> partition,
                                          std::vector<LambdaRule> cells) {
  LambdaScheme s;
  s.composite = true;
  s.partition = std::move(partition);
  s.cells = std::move(cells);
  return s;
}

bool LambdaScheme::has_history_rule() const {
  for (const auto& c : cells) {
    if (c.kind == LambdaRule::Kind::kHistory) return true;
  }
  return false;
}

void check_scheme(const LambdaScheme& scheme, int n_states) {
  if (scheme.cells.empty()) throw ConfigError("lambda scheme has no rule");
  if (!scheme.composite && scheme.cells.size() != 1) {
    throw ConfigError("a plain lambda scheme takes exactly one rule");
  }
  for (std::size_t i = 0; i < scheme.cells.size(); ++i) {
    const auto& rule = scheme.cells[i];
    const std::string where = "lambda rule " + std::to_string(i);
    if (rule.kind == LambdaRule::Kind::kState) {
      if (rule.values.size() != n_states) {
        throw ConfigError(where + ": expected " + std::to_string(n_states) +
                          " values, got " + std::to_string(rule.values.size()));
      }
      if (!rule.values.allFinite() || (rule.values.array() < 0.0).any() ||
          (rule.values.array() > 1.0).any()) {
        throw ConfigError(where + ": values must lie in [0,1]");
      }
    } else if (!(rule.bound > 0.0) || !std::isfinite(rule.bound)) {
      throw ConfigError(where + ": history bound must be positive");
    }
  }
  if (scheme.composite) {
    if (static_cast<int>(scheme.partition.size()) != n_states) {
      throw ConfigError("composite partition must list a cell for each of the " +
                        std::to_string(n_states) + " states");
    }
    std::vector<char> used(scheme.cells.size(), 0);
    for (int c : scheme.partition) {
      if (c < 0 || c >= scheme.n_cells()) {
        throw ConfigError("composite partition names cell " + std::to_string(c) +
                          " but only " + std::to_string(scheme.n_cells()) +
                          " cells are defined");
      }
      used[static_cast<std::size_t>(c)] = 1;
    }
    for (std::size_t i = 0; i < used.size(); ++i) {
      if (!used[i]) {
        throw ConfigError("composite cell " + std::to_string(i) + " is empty");
      }
    }
  }
}

double history_lambda(double bound, double gamma, double rho, double norm) {
  const double scaled = gamma * rho * norm;
  if (scaled <= bound) return 1.0;
  return bound / scaled;
}

TraceEngine::TraceEngine(const FiniteMdp& mdp, const FeatureMap& features,
                         const LambdaScheme& scheme)
    : mdp_(mdp), features_(features), scheme_(scheme),
      rho_(importance_ratio_table(mdp)) {
  check_features(mdp, features);
  check_scheme(scheme, mdp.n_states());
}

TraceState TraceEngine::init(int s0) const {
  return init_with(features_.at(s0), s0);
}

TraceState TraceEngine::init_with(const Vec& e0, int s0) const {
  if (e0.size() != features_.dim()) {
    throw DimensionError("initial trace has dimension " + std::to_string(e0.size()) +
                         ", features have " + std::to_string(features_.dim()));
  }
  TraceState t;
  const int cells = scheme_.n_cells();
  t.sub.assign(static_cast<std::size_t>(cells), Vec::Zero(features_.dim()));
  t.sub[static_cast<std::size_t>(scheme_.cell_of(s0))] = e0;
  t.e = e0;
  t.s_prev = s0;
  t.s_cur = s0;
  return t;
}

void TraceEngine::next_lambdas(const TraceState& trace, int s_next, Vec* out) const {
  const int s = trace.s_cur;
  const double gamma = mdp_.discount(s_next);
  const double rho = rho_(s, s_next);
  if (mdp_.behavior_P(s, s_next) <= 0.0) {
    throw ValidationError("infeasible transition " + std::to_string(s) + " -> " +
                          std::to_string(s_next));
  }
  const int cells = scheme_.n_cells();
  if (out->size() != cells) out->resize(cells);
  for (int i = 0; i < cells; ++i) {
    const auto& rule = scheme_.cells[static_cast<std::size_t>(i)];
    if (rule.kind == LambdaRule::Kind::kState) {
      (*out)(i) = rule.values(s_next);
    } else {
      (*out)(i) = history_lambda(rule.bound, gamma, rho,
                                 trace.sub[static_cast<std::size_t>(i)].norm());
    }
  }
}

void TraceEngine::advance(TraceState* trace, int s_next, const Vec& lambdas) const {
  const double gr = mdp_.discount(s_next) * rho_(trace->s_cur, s_next);
  const int cells = scheme_.n_cells();
  const int target = scheme_.cell_of(s_next);
  for (int i = 0; i < cells; ++i) {
    Vec& sub = trace->sub[static_cast<std::size_t>(i)];
    sub *= lambdas(i) * gr;
    if (i == target) sub += features_.phi.row(s_next).transpose();
  }
  if (cells == 1) {
    trace->e = trace->sub[0];
  } else {
    trace->e.setZero();
    for (const Vec& sub : trace->sub) trace->e += sub;
  }
  trace->s_prev = trace->s_cur;
  trace->s_cur = s_next;
}

Vec TraceEngine::step(TraceState* trace, int s_next) const {
  Vec lambdas(scheme_.n_cells());
  next_lambdas(*trace, s_next, &lambdas);
  advance(trace, s_next, lambdas);
  return lambdas;
}

CoupledDecay coupled_trace_decay(const FiniteMdp& mdp, const FeatureMap& features,
                                 const LambdaScheme& scheme, const Vec& e0_a,
                                 const Vec& e0_b, int horizon,
                                 unsigned long long seed) {
  TraceEngine engine(mdp, features, scheme);
  ChainSampler init_rng(mdp, stream_seed(seed, kStreamInit));
  const int s0 = init_rng.draw_state(stationary_distribution(mdp));
  ChainSampler chain(mdp, stream_seed(seed, kStreamChain));
  TraceState a = engine.init_with(e0_a, s0);
  TraceState b = engine.init_with(e0_b, s0);

  CoupledDecay out;
  const double gap0 = (e0_a - e0_b).norm();
  const Mat p_gamma = mdp.target_P * mdp.discount.asDiagonal();
  Vec mass = Vec::Ones(mdp.n_states());
  out.gap.push_back((a.e - b.e).norm());
  out.bound.push_back(gap0 * mass.sum());
  int s = s0;
  for (int n = 1; n <= horizon; ++n) {
    const int s_next = chain.next(s).s_next;
    engine.step(&a, s_next);
    engine.step(&b, s_next);
    mass = p_gamma * mass;
    out.gap.push_back((a.e - b.e).norm());
    out.bound.push_back(gap0 * mass.sum());
    s = s_next;
  }
  return out;
}

}  // namespace gtdlab
