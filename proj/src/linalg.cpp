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

#include "gtdlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gtdlab/error.hpp"

namespace gtdlab {

SymmetricPinv symmetric_pinv(const Mat& m, double rel_tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError("symmetric_pinv: matrix is not square");
  }
  const Eigen::Index n = m.rows();
  SymmetricPinv out;
  out.pinv = Mat::Zero(n, n);
  out.range_projector = Mat::Zero(n, n);
  if (n == 0) return out;

  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (m + m.transpose()));
  const Vec& w = eig.eigenvalues();
  const Mat& v = eig.eigenvectors();
  out.max_eigenvalue = w.cwiseAbs().maxCoeff();
  const double cutoff = rel_tol * out.max_eigenvalue;

  std::vector<Eigen::Index> null_cols;
  out.min_positive_eigenvalue = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (w(i) > cutoff && out.max_eigenvalue > 0.0) {
      out.pinv += (1.0 / w(i)) * v.col(i) * v.col(i).transpose();
      out.range_projector += v.col(i) * v.col(i).transpose();
      out.min_positive_eigenvalue = std::min(out.min_positive_eigenvalue, w(i));
      ++out.rank;
    } else {
      null_cols.push_back(i);
    }
  }
  if (out.rank == 0) out.min_positive_eigenvalue = 0.0;
  out.null_basis = Mat(n, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t j = 0; j < null_cols.size(); ++j) {
    out.null_basis.col(static_cast<Eigen::Index>(j)) = v.col(null_cols[j]);
  }
  return out;
}

Mat pinv(const Mat& m, double rel_tol) {
  if (m.size() == 0) return Mat::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  const double cutoff = rel_tol * (s.size() > 0 ? s(0) : 0.0);
  Vec inv = Vec::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Vec project_ball(const Vec& v, double radius) {
  if (std::isinf(radius)) return v;
  const double norm = v.norm();
  if (norm <= radius) return v;
  return v * (radius / norm);
}

bool all_finite(const Vec& v) { return v.allFinite(); }
bool all_finite(const Mat& m) { return m.allFinite(); }

BallQuadraticSolution minimize_quadratic_on_ball(const Mat& hessian,
                                                 const Vec& linear,
                                                 double radius,
                                                 double mu_tolerance) {
  if (hessian.rows() != hessian.cols() || hessian.rows() != linear.size()) {
    throw DimensionError("minimize_quadratic_on_ball: shape mismatch");
  }
  if (!(radius > 0.0)) {
    throw ConfigError("minimize_quadratic_on_ball: radius must be positive");
  }
  const Eigen::Index n = linear.size();
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (hessian + hessian.transpose()));
  const Vec w = eig.eigenvalues().cwiseMax(0.0);
  const Mat& v = eig.eigenvectors();
  const Vec coef = v.transpose() * linear;
  const double wmax = n > 0 ? w.maxCoeff() : 0.0;
  const double cutoff = kRankTolerance * wmax;

  BallQuadraticSolution out;
  std::vector<Eigen::Index> null_cols;
  bool linear_in_range = true;
  Vec min_norm = Vec::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (w(i) > cutoff && wmax > 0.0) {
      min_norm -= (coef(i) / w(i)) * v.col(i);
    } else {
      null_cols.push_back(i);
      if (std::abs(coef(i)) > kRankTolerance * (1.0 + linear.norm())) {
        linear_in_range = false;
      }
    }
  }
  out.null_basis = Mat(n, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t j = 0; j < null_cols.size(); ++j) {
    out.null_basis.col(static_cast<Eigen::Index>(j)) = v.col(null_cols[j]);
  }

  if (linear_in_range && min_norm.norm() <= radius) {
    out.point = min_norm;
    return out;
  }
  if (std::isinf(radius)) {
    throw NumericalError(
        "minimize_quadratic_on_ball: quadratic is unbounded below");
  }

  auto point_at = [&](double mu) {
    Vec t = Vec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double wi = (w(i) > cutoff && wmax > 0.0) ? w(i) : 0.0;
      t -= (coef(i) / (wi + mu)) * v.col(i);
    }
    return t;
  };

  double lo = 0.0;
  double hi = linear.norm() / radius;
  while (point_at(hi).norm() > radius) hi *= 2.0;
  for (int it = 0; it < 2000 && hi - lo > mu_tolerance * std::max(1.0, hi);
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (point_at(mid).norm() > radius) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.multiplier = hi;
  out.point = project_ball(point_at(hi), radius);
  out.on_boundary = true;
  return out;
}

}  // namespace gtdlab
