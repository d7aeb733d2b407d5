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

#ifndef GTDLAB_SAMPLER_HPP_
#define GTDLAB_SAMPLER_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "gtdlab/linalg.hpp"
#include "gtdlab/mdp_model.hpp"

namespace gtdlab {

// splitmix64 finalizer; used to derive independent generator seeds.
std::uint64_t mix_seed(std::uint64_t x);

// Seed of stream `stream` of run `seed`: mix(mix(seed) ^ stream).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

// Named streams so that independent consumers never share draws.
inline constexpr std::uint64_t kStreamChain = 1;
inline constexpr std::uint64_t kStreamInit = 2;
inline constexpr std::uint64_t kStreamProbe = 3;

struct Transition {
  int s_next = 0;
  double reward = 0.0;
};

// Simulates the behavior chain. Each step consumes exactly one uniform and
// one standard normal draw, whatever the noise scale, so streams stay aligned
// across configurations.
class ChainSampler {
 public:
  ChainSampler(const FiniteMdp& mdp, std::uint64_t seed);

  Transition next(int s);
  int draw_state(const Vec& distribution);

 private:
  const FiniteMdp& mdp_;
  std::vector<std::vector<double>> cumulative_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

int sample_from_cumulative(const std::vector<double>& cumulative, double u);

}  // namespace gtdlab

#endif  // GTDLAB_SAMPLER_HPP_
