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

#include "gtdlab/sampler.hpp"

#include <algorithm>

namespace gtdlab {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_seed(mix_seed(seed) ^ stream);
}

int sample_from_cumulative(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const int last = static_cast<int>(cumulative.size()) - 1;
  return std::min(static_cast<int>(it - cumulative.begin()), last);
}

namespace {

// Running sums with the tail pinned at exactly 1 from the last state of
// positive mass on, so rounding never hands mass to a zero-probability state.
std::vector<double> cumulative_row(const Vec& p) {
  std::vector<double> row(static_cast<std::size_t>(p.size()));
  double acc = 0.0;
  Eigen::Index last_positive = 0;
  for (Eigen::Index t = 0; t < p.size(); ++t) {
    acc += p(t);
    row[static_cast<std::size_t>(t)] = acc;
    if (p(t) > 0.0) last_positive = t;
  }
  for (Eigen::Index t = last_positive; t < p.size(); ++t) {
    row[static_cast<std::size_t>(t)] = 1.0;
  }
  return row;
}

}  // namespace

ChainSampler::ChainSampler(const FiniteMdp& mdp, std::uint64_t seed)
    : mdp_(mdp), rng_(seed) {
  const int n = mdp.n_states();
  cumulative_.resize(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    cumulative_[static_cast<std::size_t>(s)] =
        cumulative_row(mdp.behavior_P.row(s).transpose());
  }
}

Transition ChainSampler::next(int s) {
  const double u = uniform_(rng_);
  const double z = normal_(rng_);
  Transition out;
  out.s_next = sample_from_cumulative(cumulative_[static_cast<std::size_t>(s)], u);
  out.reward = mdp_.reward_mean(s, out.s_next) +
               mdp_.reward_noise_scale(s, out.s_next) * z;
  return out;
}

int ChainSampler::draw_state(const Vec& distribution) {
  return sample_from_cumulative(cumulative_row(distribution), uniform_(rng_));
}

}  // namespace gtdlab
