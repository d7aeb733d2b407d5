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

#ifndef GTDLAB_STATS_HPP_
#define GTDLAB_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "gtdlab/linalg.hpp"

namespace gtdlab {

// Batch-means estimator for the long-run average of a vector-valued sequence.
// Samples are grouped into `blocks` consecutive blocks of `block_length`;
// samples past the last full block are ignored.
class BatchMeans {
 public:
  BatchMeans(Eigen::Index dim, int blocks, long block_length)
      : blocks_(blocks), block_length_(block_length),
        current_(Vec::Zero(dim)), sum_(Vec::Zero(dim)), sum_sq_(Vec::Zero(dim)) {}

  template <typename Derived>
  void add(const Eigen::MatrixBase<Derived>& sample) {
    if (completed_ >= blocks_) return;
    current_ += sample;
    if (++in_block_ == block_length_) {
      const Vec block_mean = current_ / static_cast<double>(block_length_);
      sum_ += block_mean;
      sum_sq_ += block_mean.cwiseAbs2();
      current_.setZero();
      in_block_ = 0;
      ++completed_;
    }
  }

  int completed_blocks() const { return completed_; }

  Vec mean() const { return sum_ / static_cast<double>(std::max(completed_, 1)); }

  // Standard error of the grand mean from the spread of the block means.
  Vec standard_error() const {
    const double k = static_cast<double>(completed_);
    if (completed_ < 2) return Vec::Constant(sum_.size(), kNaN());
    const Vec m = sum_ / k;
    const Vec var = ((sum_sq_ - k * m.cwiseAbs2()) / (k - 1.0)).cwiseMax(0.0);
    return (var / k).cwiseSqrt();
  }

 private:
  static double kNaN() { return std::nan(""); }

  int blocks_;
  long block_length_;
  long in_block_ = 0;
  int completed_ = 0;
  Vec current_;
  Vec sum_;
  Vec sum_sq_;
};

// Median of a copy; NaN for an empty input.
inline double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Sample variance (n-1 denominator).
inline double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size() - 1);
}

}  // namespace gtdlab

#endif  // GTDLAB_STATS_HPP_
