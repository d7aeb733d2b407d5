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

#ifndef GTDLAB_TRACE_ENGINE_HPP_
#define GTDLAB_TRACE_ENGINE_HPP_

#include <vector>

#include "gtdlab/linalg.hpp"
#include "gtdlab/mdp_model.hpp"

namespace gtdlab {

// One lambda rule: either a per-state vector or the history-dependent
// ball-truncation rule lambda = min(1, bound / (gamma' rho ||e_prev||)).
struct LambdaRule {
  enum class Kind { kState, kHistory };
  Kind kind = Kind::kState;
  Vec values;          // kState: lambda(s) per state
  double bound = 0.0;  // kHistory: C_y

  static LambdaRule state(Vec values);
  static LambdaRule history(double bound);
};

// Plain scheme: one rule, no partition. Composite scheme: partition[s] names
// the cell of state s and cells[i] is the rule driving sub-trace i.
struct LambdaScheme {
  bool composite = false;
  std::vector<int> partition;
  std::vector<LambdaRule> cells;

  static LambdaScheme plain(LambdaRule rule);
  static LambdaScheme make_composite(std::vector<int> partition,
                                     std::vector<LambdaRule> cells);

  int n_cells() const { return static_cast<int>(cells.size()); }
  int cell_of(int s) const { return composite ? partition[static_cast<std::size_t>(s)] : 0; }
  bool has_history_rule() const;
  // True when every rule is state-dependent, so T^(lambda) has a closed form.
  bool is_state_dependent() const { return !has_history_rule(); }
};

// Throws ConfigError for values outside [0,1], a non-positive bound, or a
// partition that does not cover the states with valid cell indices.
void check_scheme(const LambdaScheme& scheme, int n_states);

struct TraceState {
  Vec e;                  // total trace, sum of sub_traces
  std::vector<Vec> sub;   // one per cell (a single entry for plain schemes)
  int s_prev = 0;         // memory y = (s_prev, s_cur)
  int s_cur = 0;
};

// min(1, bound / (gamma * rho * norm)) with 0/0 read as 1.
double history_lambda(double bound, double gamma, double rho, double norm);

class TraceEngine {
 public:
  TraceEngine(const FiniteMdp& mdp, const FeatureMap& features,
              const LambdaScheme& scheme);

  TraceState init(int s0) const;
  TraceState init_with(const Vec& e0, int s0) const;

  // lambda_{n+1} per cell for the transition (s, s_next), evaluated from the
  // current (pre-update) trace. Does not mutate the trace.
  void next_lambdas(const TraceState& trace, int s_next, Vec* out) const;

  // e <- lambda gamma(s') rho(s,s') e + phi(s') using precomputed lambdas.
  void advance(TraceState* trace, int s_next, const Vec& lambdas) const;

  // next_lambdas followed by advance; returns the lambdas used.
  Vec step(TraceState* trace, int s_next) const;

  const FiniteMdp& mdp() const { return mdp_; }
  const FeatureMap& features() const { return features_; }
  const LambdaScheme& scheme() const { return scheme_; }
  const Mat& rho() const { return rho_; }

 private:
  const FiniteMdp& mdp_;
  const FeatureMap& features_;
  const LambdaScheme& scheme_;
  Mat rho_;
};

// Gap norms ||e_n - e'_n|| for two traces driven by the same state stream,
// along with the bound ||e_0 - e'_0|| * 1'(P Gamma)^n 1.
struct CoupledDecay {
  std::vector<double> gap;
  std::vector<double> bound;
};

CoupledDecay coupled_trace_decay(const FiniteMdp& mdp, const FeatureMap& features,
                                 const LambdaScheme& scheme, const Vec& e0_a,
                                 const Vec& e0_b, int horizon,
                                 unsigned long long seed);

}  // namespace gtdlab

#endif  // GTDLAB_TRACE_ENGINE_HPP_
