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

#ifndef GTDLAB_LINALG_HPP_
#define GTDLAB_LINALG_HPP_

#include <Eigen/Dense>

namespace gtdlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Relative singular-value cutoff used for every pseudo-inverse in the library.
inline constexpr double kRankTolerance = 1e-10;

// Eigen-decomposition based pseudo-inverse of a symmetric PSD matrix, plus the
// orthogonal projector onto its column space. Eigenvalues at or below
// kRankTolerance * (largest eigenvalue) are treated as zero.
struct SymmetricPinv {
  Mat pinv;
  Mat range_projector;
  Mat null_basis;  // orthonormal columns spanning the null space
  Eigen::Index rank = 0;
  double max_eigenvalue = 0.0;
  double min_positive_eigenvalue = 0.0;
};

SymmetricPinv symmetric_pinv(const Mat& m, double rel_tol = kRankTolerance);

// SVD pseudo-inverse of a general matrix with the same relative cutoff.
Mat pinv(const Mat& m, double rel_tol = kRankTolerance);

// Euclidean projection onto the closed ball of the given radius centered at
// the origin. An infinite radius is the identity. Vectors already inside the
// ball are returned unchanged (bit-for-bit).
Vec project_ball(const Vec& v, double radius);

bool all_finite(const Vec& v);
bool all_finite(const Mat& m);

// Minimizes 0.5 * t' H t + g' t over ||t||_2 <= radius for symmetric PSD H.
// When the unconstrained problem has a minimizer of norm <= radius, the
// minimum-norm minimizer is returned with multiplier 0. Otherwise the
// multiplier mu > 0 with ||(H + mu I)^{-1} g|| = radius is located by bisection.
struct BallQuadraticSolution {
  Vec point;
  double multiplier = 0.0;
  bool on_boundary = false;
  Mat null_basis;  // null space of H (directions of constancy when mu == 0)
};

BallQuadraticSolution minimize_quadratic_on_ball(const Mat& hessian,
                                                 const Vec& linear,
                                                 double radius,
                                                 double mu_tolerance = 1e-12);

}  // namespace gtdlab

#endif  // GTDLAB_LINALG_HPP_
