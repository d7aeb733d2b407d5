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

// Small models shared by the tests.
#ifndef GTDLAB_TESTS_FIXTURES_HPP_
#define GTDLAB_TESTS_FIXTURES_HPP_

#include "gtdlab/mdp_model.hpp"

namespace fixture {

using gtdlab::Mat;
using gtdlab::Vec;

// Two interchangeable states, scalar constant feature: C = 1, b = 1,
// A = -0.1 for lambda = 0.
inline gtdlab::FiniteMdp mdp_a() {
  Mat half = Mat::Constant(2, 2, 0.5);
  return gtdlab::make_mdp(half, half, Vec::Constant(2, 0.9), Mat::Ones(2, 2),
                          Mat::Zero(2, 2));
}

inline gtdlab::FeatureMap features_a() { return {Mat::Ones(2, 1)}; }

// Sticky target chain observed under a uniform behavior policy.
inline gtdlab::FiniteMdp mdp_b() {
  Mat P(2, 2);
  P << 0.9, 0.1, 0.1, 0.9;
  Mat r(2, 2);
  r << 1.0, 2.0, 1.0, 2.0;
  return gtdlab::make_mdp(P, Mat::Constant(2, 2, 0.5), Vec::Constant(2, 0.8), r,
                          Mat::Zero(2, 2));
}

inline gtdlab::FeatureMap features_b() {
  Mat phi(2, 1);
  phi << 1.0, 2.0;
  return {phi};
}

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace fixture

#endif  // GTDLAB_TESTS_FIXTURES_HPP_
