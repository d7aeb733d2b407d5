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

#include "gtdlab/mdp_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtdlab/error.hpp"

namespace gtdlab {
namespace {

void check_shapes(const FiniteMdp& mdp) {
  const Eigen::Index n = mdp.discount.size();
  if (n <= 0) throw DimensionError("model has no states");
  auto square = [n](const Mat& m, const char* name) {
    if (m.rows() != n || m.cols() != n) {
      std::ostringstream os;
      os << name << " is " << m.rows() << "x" << m.cols() << ", expected " << n
         << "x" << n;
      throw DimensionError(os.str());
    }
  };
  square(mdp.target_P, "target_P");
  square(mdp.behavior_P, "behavior_P");
  square(mdp.reward_mean, "reward_mean");
  square(mdp.reward_noise_scale, "reward_noise_scale");
}

// First row whose entries are negative or whose sum misses one; -1 if none.
int bad_stochastic_row(const Mat& m, double* sum_out) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double sum = m.row(i).sum();
    if ((m.row(i).array() < 0.0).any() || !m.row(i).allFinite() ||
        std::abs(sum - 1.0) > kRowSumTolerance) {
      *sum_out = sum;
      return static_cast<int>(i);
    }
  }
  return -1;
}

std::string format_states(const std::vector<int>& states) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i > 0) os << ",";
    os << states[i];
  }
  os << "}";
  return os.str();
}

// A closed communicating class other than the whole state space, if any.
std::vector<int> find_closed_class(const Mat& m) {
  const auto comps = strongly_connected_components(m);
  if (comps.size() <= 1) return {};
  std::vector<int> comp_of(static_cast<std::size_t>(m.rows()), -1);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (int s : comps[c]) comp_of[static_cast<std::size_t>(s)] = static_cast<int>(c);
  }
  for (std::size_t c = 0; c < comps.size(); ++c) {
    bool closed = true;
    for (int s : comps[c]) {
      for (Eigen::Index t = 0; t < m.cols() && closed; ++t) {
        if (m(s, t) > 0.0 && comp_of[static_cast<std::size_t>(t)] != static_cast<int>(c)) {
          closed = false;
        }
      }
    }
    if (closed) return comps[c];
  }
  return comps.front();
}

}  // namespace

bool ValidationReport::ok() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.passed; });
}

const ConditionResult* ValidationReport::find(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

double nonnegative_spectral_radius(const Mat& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return 0.0;
  // The shift by I makes the Perron root strictly dominant even for periodic
  // matrices, so plain power iteration converges to rho(m) + 1.
  const Mat shifted = m + Mat::Identity(n, n);
  Vec x = Vec::Constant(n, 1.0 / static_cast<double>(n));
  double estimate = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Vec y = shifted * x;
    const double growth = y.sum();  // x >= 0 with unit l1 norm
    if (growth <= 0.0) return 0.0;
    y /= growth;
    const double change = std::abs(growth - 1.0 - estimate);
    estimate = growth - 1.0;
    x = y;
    if (it > 0 && change <= 1e-12) break;
  }
  return std::max(estimate, 0.0);
}

std::vector<std::vector<int>> strongly_connected_components(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  // Kosaraju: order by finish time on the graph, then sweep the transpose.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int root = 0; root < n; ++root) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    std::vector<std::pair<int, int>> stack{{root, 0}};
    seen[static_cast<std::size_t>(root)] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < n) {
        const int t = next++;
        if (m(node, t) > 0.0 && !seen[static_cast<std::size_t>(t)]) {
          seen[static_cast<std::size_t>(t)] = 1;
          stack.emplace_back(t, 0);
        }
      } else {
        order.push_back(node);
        stack.pop_back();
      }
    }
  }
  std::vector<std::vector<int>> comps;
  std::vector<char> assigned(static_cast<std::size_t>(n), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (assigned[static_cast<std::size_t>(*it)]) continue;
    std::vector<int> comp;
    std::vector<int> stack{*it};
    assigned[static_cast<std::size_t>(*it)] = 1;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      comp.push_back(node);
      for (int t = 0; t < n; ++t) {
        if (m(t, node) > 0.0 && !assigned[static_cast<std::size_t>(t)]) {
          assigned[static_cast<std::size_t>(t)] = 1;
          stack.push_back(t);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

ValidationReport validate_model(const FiniteMdp& mdp) {
  check_shapes(mdp);
  ValidationReport report;
  const int n = mdp.n_states();

  auto rows_check = [&](const Mat& m, const char* name, const char* label) {
    double sum = 0.0;
    const int row = bad_stochastic_row(m, &sum);
    ConditionResult c{name, row < 0, ""};
    if (row >= 0) {
      std::ostringstream os;
      os << label << " row " << row << " sums to " << sum
         << " or has a negative entry";
      c.diagnostic = os.str();
    }
    report.conditions.push_back(c);
  };
  rows_check(mdp.target_P, kCondTargetRows, "target_P");
  rows_check(mdp.behavior_P, kCondBehaviorRows, "behavior_P");

  {
    ConditionResult c{kCondDiscountRange, true, ""};
    for (int s = 0; s < n; ++s) {
      const double g = mdp.discount(s);
      if (!(g >= 0.0 && g <= 1.0)) {
        c.passed = false;
        c.diagnostic = "discount[" + std::to_string(s) + "] = " + std::to_string(g);
        break;
      }
    }
    report.conditions.push_back(c);
  }
  {
    ConditionResult c{kCondNoiseNonnegative, true, ""};
    if ((mdp.reward_noise_scale.array() < 0.0).any() ||
        !mdp.reward_noise_scale.allFinite() || !mdp.reward_mean.allFinite()) {
      c.passed = false;
      c.diagnostic = "reward_noise_scale has a negative or non-finite entry";
    }
    report.conditions.push_back(c);
  }
  {
    ConditionResult c{kCondAbsoluteContinuity, true, ""};
    for (int s = 0; s < n && c.passed; ++s) {
      for (int t = 0; t < n; ++t) {
        if (mdp.behavior_P(s, t) == 0.0 && mdp.target_P(s, t) > 0.0) {
          c.passed = false;
          c.diagnostic = "behavior_P[" + std::to_string(s) + "," +
                         std::to_string(t) + "] = 0 but target_P > 0";
          break;
        }
      }
    }
    report.conditions.push_back(c);
  }
  {
    const Mat p_gamma = mdp.target_P * mdp.discount.asDiagonal();
    report.spectral_radius = nonnegative_spectral_radius(p_gamma.cwiseAbs());
    ConditionResult c{kCondSpectralRadius,
                      report.spectral_radius < 1.0 - 1e-12, ""};
    std::ostringstream os;
    os << "spectral radius of P*Gamma = " << report.spectral_radius;
    c.diagnostic = os.str();
    report.conditions.push_back(c);
  }
  {
    const auto closed = find_closed_class(mdp.behavior_P);
    ConditionResult c{kCondIrreducible, closed.empty(), ""};
    if (!closed.empty()) {
      c.diagnostic = "behavior chain is reducible; class " +
                     format_states(closed) + " does not communicate with the rest";
    }
    report.conditions.push_back(c);
  }
  return report;
}

FiniteMdp make_mdp(Mat target_P, Mat behavior_P, Vec discount, Mat reward_mean,
                   Mat reward_noise_scale) {
  FiniteMdp mdp{std::move(target_P), std::move(behavior_P), std::move(discount),
                std::move(reward_mean), std::move(reward_noise_scale)};
  check_shapes(mdp);
  for (Mat* m : {&mdp.target_P, &mdp.behavior_P}) {
    for (Eigen::Index i = 0; i < m->rows(); ++i) {
      const double sum = m->row(i).sum();
      if (std::abs(sum - 1.0) <= kRowSumTolerance && sum > 0.0) {
        m->row(i) /= sum;
      }
    }
  }
  const ValidationReport report = validate_model(mdp);
  for (const auto& c : report.conditions) {
    if (!c.passed) {
      throw ValidationError("model rejected: " + c.name + ": " + c.diagnostic);
    }
  }
  return mdp;
}

void check_features(const FiniteMdp& mdp, const FeatureMap& features) {
  if (features.phi.rows() != mdp.n_states()) {
    throw DimensionError("features have " + std::to_string(features.phi.rows()) +
                         " rows, model has " + std::to_string(mdp.n_states()) +
                         " states");
  }
  if (features.phi.cols() <= 0) throw DimensionError("feature dimension is zero");
  if (!features.phi.allFinite()) throw ValidationError("features are not finite");
  if (features.phi.cwiseAbs().maxCoeff() == 0.0) {
    throw ValidationError("every feature vector is zero");
  }
}

Vec stationary_distribution(const FiniteMdp& mdp) {
  const int n = mdp.n_states();
  const auto closed = find_closed_class(mdp.behavior_P);
  if (!closed.empty()) {
    throw ValidationError("behavior chain is reducible; class " +
                          format_states(closed) +
                          " does not communicate with the rest");
  }
  Mat system = mdp.behavior_P.transpose() - Mat::Identity(n, n);
  system.row(n - 1).setOnes();
  Vec rhs = Vec::Zero(n);
  rhs(n - 1) = 1.0;
  Vec xi = system.fullPivLu().solve(rhs);
  if (!xi.allFinite() || (xi.array() <= 0.0).any()) {
    throw NumericalError("stationary distribution solve failed");
  }
  return xi / xi.sum();
}

double importance_ratio(const FiniteMdp& mdp, int s, int s_next) {
  const double p = mdp.target_P(s, s_next);
  const double po = mdp.behavior_P(s, s_next);
  if (po == 0.0) {
    if (p == 0.0) return 0.0;
    throw ValidationError("importance ratio undefined: behavior_P[" +
                          std::to_string(s) + "," + std::to_string(s_next) +
                          "] = 0 < target_P");
  }
  return p / po;
}

Mat importance_ratio_table(const FiniteMdp& mdp) {
  const int n = mdp.n_states();
  Mat rho(n, n);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) rho(s, t) = importance_ratio(mdp, s, t);
  }
  return rho;
}

Vec expected_reward(const FiniteMdp& mdp) {
  return mdp.target_P.cwiseProduct(mdp.reward_mean).rowwise().sum();
}

Vec true_value_function(const FiniteMdp& mdp) {
  const int n = mdp.n_states();
  const Mat system =
      Mat::Identity(n, n) - mdp.target_P * mdp.discount.asDiagonal();
  Eigen::FullPivLU<Mat> lu(system);
  if (!lu.isInvertible()) throw NumericalError("I - P*Gamma is singular");
  return lu.solve(expected_reward(mdp));
}

}  // namespace gtdlab
