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

#include "gtdlab/td_algorithms.hpp"

#include <cmath>
#include <sstream>

#include "gtdlab/error.hpp"

namespace gtdlab {
namespace {

struct VariantName {
  Variant variant;
  const char* name;
};

constexpr VariantName kVariantNames[] = {
    {Variant::kGtda2ts, "GTDa2TS"},
    {Variant::kGtdb2ts, "GTDb2TS"},
    {Variant::kGtda1ts, "GTDa1TS"},
    {Variant::kGtda1tsEta, "GTDa1TSEta"},
    {Variant::kGtdaUnconstrained, "GTDaUnconstrained"},
    {Variant::kBiasedGtda2ts, "BiasedGTDa2TS"},
    {Variant::kBiasedGtdb2ts, "BiasedGTDb2TS"},
    {Variant::kBiasedGtda1ts, "BiasedGTDa1TS"},
    {Variant::kMdGtda, "MDGTDa"},
    {Variant::kMdGtdb, "MDGTDb"},
    {Variant::kMdtd, "MDTD"},
};

void check_schedule(const StepsizeSchedule& s, const char* which) {
  if (!(s.a >= 0.0) || !std::isfinite(s.a)) {
    throw ConfigError(std::string(which) + " stepsize scale must be nonnegative");
  }
  if (s.kind == StepsizeSchedule::Kind::kPower &&
      (!(s.c >= 0.0) || !std::isfinite(s.c))) {
    throw ConfigError(std::string(which) + " stepsize exponent must be nonnegative");
  }
}

}  // namespace

const char* variant_name(Variant v) {
  for (const auto& entry : kVariantNames) {
    if (entry.variant == v) return entry.name;
  }
  return "unknown";
}

Variant parse_variant(const std::string& name) {
  for (const auto& entry : kVariantNames) {
    if (name == entry.name) return entry.variant;
  }
  std::string known;
  for (const auto& entry : kVariantNames) {
    if (!known.empty()) known += ", ";
    known += entry.name;
  }
  throw ConfigError("unknown algorithm variant '" + name + "' (known: " + known + ")");
}

StepsizeSchedule StepsizeSchedule::constant(double a) {
  return {Kind::kConstant, a, 0.0};
}

StepsizeSchedule StepsizeSchedule::power(double a, double c) {
  return {Kind::kPower, a, c};
}

StepsizeSchedule StepsizeSchedule::one_over_n(double a) {
  return {Kind::kOneOverN, a, 1.0};
}

double StepsizeSchedule::at(long n) const {
  switch (kind) {
    case Kind::kConstant:
      return a;
    case Kind::kPower:
      return a * std::pow(static_cast<double>(n + 1), -c);
    case Kind::kOneOverN:
      return a / static_cast<double>(n + 1);
  }
  return a;
}

double StepsizeSchedule::decay_exponent() const {
  switch (kind) {
    case Kind::kConstant:
      return 0.0;
    case Kind::kPower:
      return c;
    case Kind::kOneOverN:
      return 1.0;
  }
  return 0.0;
}

bool StepsizeSchedule::square_summable() const {
  const double e = decay_exponent();
  return e > 0.5 && e <= 1.0;
}

bool AlgorithmSpec::two_time_scale() const {
  switch (variant) {
    case Variant::kGtda2ts:
    case Variant::kGtdb2ts:
    case Variant::kBiasedGtda2ts:
    case Variant::kBiasedGtdb2ts:
    case Variant::kMdGtda:
    case Variant::kMdGtdb:
      return true;
    default:
      return false;
  }
}

bool AlgorithmSpec::mirror() const {
  return variant == Variant::kMdGtda || variant == Variant::kMdGtdb ||
         variant == Variant::kMdtd;
}

bool AlgorithmSpec::biased() const {
  return variant == Variant::kBiasedGtda2ts || variant == Variant::kBiasedGtdb2ts ||
         variant == Variant::kBiasedGtda1ts;
}

bool AlgorithmSpec::gtdb_direction() const {
  return variant == Variant::kGtdb2ts || variant == Variant::kBiasedGtdb2ts ||
         variant == Variant::kMdGtdb;
}

double AlgorithmSpec::mirror_radius() const {
  if (q == 2.0) return std::sqrt(2.0 * level);
  return std::pow(q * level, 1.0 / q);
}

double AlgorithmSpec::theta_domain_radius() const {
  if (!mirror()) return r_theta;
  return std::pow(mirror_radius(), q - 1.0);
}

std::string stepsize_incompatibility(const AlgorithmSpec& spec) {
  if (!spec.two_time_scale()) return "";
  using Kind = StepsizeSchedule::Kind;
  std::ostringstream os;
  if (spec.alpha.kind == Kind::kConstant && spec.beta.kind == Kind::kConstant) {
    if (spec.alpha.a < spec.beta.a) return "";
    os << "constant two-time-scale stepsizes need alpha < beta (got " << spec.alpha.a
       << " and " << spec.beta.a << ")";
    return os.str();
  }
  const double ca = spec.alpha.decay_exponent();
  const double cb = spec.beta.decay_exponent();
  if (ca > cb) return "";
  os << "alpha_n / beta_n must vanish: decay exponent of alpha (" << ca
     << ") must exceed that of beta (" << cb << ")";
  return os.str();
}

void check_algorithm(const AlgorithmSpec& spec, const LambdaScheme& scheme) {
  check_schedule(spec.alpha, "alpha");
  if (spec.two_time_scale()) check_schedule(spec.beta, "beta");
  if (spec.constrained() && !spec.mirror() && !(spec.r_theta > 0.0)) {
    throw ConfigError("r_theta must be positive");
  }
  if (spec.has_x() && spec.constrained() && !(spec.r_x > 0.0)) {
    throw ConfigError("r_x must be positive");
  }
  if (spec.biased() && !(spec.K > 0.0)) {
    throw ConfigError("truncation level K must be positive");
  }
  if (spec.mirror()) {
    if (!(spec.q >= 2.0) || !std::isfinite(spec.q)) {
      throw ConfigError("mirror exponent q must be at least 2");
    }
    if (!(spec.level > 0.0) || !std::isfinite(spec.level)) {
      throw ConfigError("mirror level must be positive");
    }
  }
  if (!(spec.eta > 0.0) || !std::isfinite(spec.eta)) {
    throw ConfigError("eta must be positive");
  }
  if (spec.x_tilde_form && spec.variant != Variant::kGtda1tsEta) {
    throw ConfigError("x_tilde_form applies only to GTDa1TSEta");
  }
  if (!(spec.divergence_guard > 0.0)) {
    throw ConfigError("divergence_guard must be positive");
  }
  if (spec.variant == Variant::kGtdaUnconstrained &&
      !(scheme.has_history_rule() && !scheme.composite)) {
    throw ConfigError("GTDaUnconstrained requires a history-dependent lambda scheme");
  }
  const std::string reason = stepsize_incompatibility(spec);
  if (!reason.empty()) throw ConfigError(reason);
}

Vec mirror_grad(const Vec& u, double q) {
  if (q == 2.0) return u;
  const double norm = u.norm();
  if (norm == 0.0) return Vec::Zero(u.size());
  return std::pow(norm, q - 2.0) * u;
}

Vec mirror_grad_inverse(const Vec& theta, double q) {
  if (q == 2.0) return theta;
  const double norm = theta.norm();
  if (norm == 0.0) return Vec::Zero(theta.size());
  return std::pow(norm, 1.0 / (q - 1.0) - 1.0) * theta;
}

Vec level_project(const Vec& u, double ell, double q) {
  AlgorithmSpec s;
  s.q = q;
  s.level = ell;
  Vec out = u;
  project_ball_in_place(&out, s.mirror_radius());
  return out;
}

double truncation_scale(double norm, double K) {
  if (norm <= K) return 1.0;
  return K / norm;
}

void project_ball_in_place(Vec* v, double radius) {
  if (std::isinf(radius)) return;
  const double norm = v->norm();
  if (norm > radius) *v *= radius / norm;
}

TdStepper::TdStepper(const AlgorithmSpec& spec, const FiniteMdp& mdp,
                     const FeatureMap& features)
    : spec_(spec), mdp_(mdp), features_(features),
      rho_(importance_ratio_table(mdp)), sqrt_eta_(std::sqrt(spec.eta)) {
  const int d = features.dim();
  dir_theta_ = Vec::Zero(d);
  dir_x_ = Vec::Zero(d);
  grad_p_ = Vec::Zero(d);
  next_ = Vec::Zero(d);
}

IterateState TdStepper::initial(const Vec& theta0, const Vec& x0) const {
  const int d = features_.dim();
  if (theta0.size() != d || x0.size() != d) {
    throw DimensionError("initial iterates must have dimension " + std::to_string(d));
  }
  IterateState s;
  s.x = spec_.x_tilde_form ? Vec(x0 / sqrt_eta_) : x0;
  if (!spec_.has_x()) s.x.setZero();
  if (spec_.mirror()) {
    s.theta_star = mirror_grad_inverse(theta0, spec_.q);
    project_ball_in_place(&s.theta_star, spec_.mirror_radius());
    s.theta = mirror_grad(s.theta_star, spec_.q);
  } else {
    s.theta = theta0;
    if (spec_.constrained()) project_ball_in_place(&s.theta, spec_.r_theta);
  }
  if (spec_.constrained() && spec_.has_x()) {
    project_ball_in_place(&s.x, spec_.x_tilde_form ? spec_.r_x / sqrt_eta_ : spec_.r_x);
  }
  return s;
}

Vec TdStepper::x_original(const IterateState& state) const {
  if (spec_.x_tilde_form) return sqrt_eta_ * state.x;
  return state.x;
}

bool TdStepper::step(IterateState* state, const StepInput& in) {
  const TraceState& trace = *in.trace;
  const Vec& e = trace.e;
  const auto phi = features_.phi.row(in.s).transpose();
  const auto phi_next = features_.phi.row(in.s_next).transpose();
  const double rho = rho_(in.s, in.s_next);
  const double gamma = mdp_.discount(in.s_next);
  const long n = state->n;
  const double alpha = spec_.alpha.at(n);
  const Variant v = spec_.variant;
  Vec& theta = state->theta;
  Vec& x = state->x;

  const double scale = spec_.biased() ? truncation_scale(e.norm(), spec_.K) : 1.0;
  const double delta = rho * (in.reward + gamma * theta.dot(phi_next) - theta.dot(phi));

  // Directions are formed from the (theta_n, x_n) snapshot before either moves.
  if (v == Variant::kMdtd) {
    dir_theta_.noalias() = delta * e;
  } else if (spec_.gtdb_direction()) {
    double correction = 0.0;
    for (int i = 0; i < static_cast<int>(trace.sub.size()); ++i) {
      correction += (1.0 - (*in.lambda_next)(i)) * trace.sub[static_cast<std::size_t>(i)].dot(x);
    }
    dir_theta_.noalias() = (scale * delta) * e;
    dir_theta_.noalias() -= (rho * gamma * scale * correction) * phi_next;
  } else {
    double ex = scale * e.dot(x);
    if (spec_.x_tilde_form) ex *= sqrt_eta_;
    dir_theta_.noalias() = (rho * ex) * (phi - gamma * phi_next);
  }

  double beta = alpha;
  if (spec_.has_x()) {
    const double phix = phi.dot(x);
    if (spec_.x_tilde_form) {
      dir_x_.noalias() = (scale * delta) * e;
      dir_x_.noalias() -= (sqrt_eta_ * phix) * phi;
      dir_x_ *= sqrt_eta_;
    } else {
      dir_x_.noalias() = (scale * delta) * e;
      dir_x_.noalias() -= phix * phi;
    }
    if (spec_.two_time_scale()) {
      beta = spec_.beta.at(n);
    } else if (v == Variant::kGtda1tsEta && !spec_.x_tilde_form) {
      beta = spec_.eta * alpha;
    }
  }
  spec_.regularizer.gradient_into(theta, &grad_p_);

  if (spec_.mirror()) {
    Vec& ts = state->theta_star;
    if (v == Variant::kMdtd) {
      next_.noalias() = ts + alpha * dir_theta_;
    } else {
      next_.noalias() = ts + alpha * dir_theta_ - alpha * grad_p_;
    }
    project_ball_in_place(&next_, spec_.mirror_radius());
    ts = next_;
    if (spec_.q == 2.0) {
      theta = ts;
    } else {
      theta = mirror_grad(ts, spec_.q);
    }
  } else {
    next_.noalias() = theta + alpha * dir_theta_ - alpha * grad_p_;
    if (spec_.constrained()) project_ball_in_place(&next_, spec_.r_theta);
    theta = next_;
  }

  if (spec_.has_x()) {
    x.noalias() += beta * dir_x_;
    if (spec_.constrained()) {
      project_ball_in_place(&x, spec_.x_tilde_form ? spec_.r_x / sqrt_eta_ : spec_.r_x);
    }
  }
  state->n = n + 1;

  const bool finite = theta.allFinite() && x.allFinite();
  if (!spec_.constrained()) {
    const double norm = std::sqrt(theta.squaredNorm() + x.squaredNorm());
    if (!finite || norm > spec_.divergence_guard) {
      state->diverged = true;
      return false;
    }
    return true;
  }
  if (!finite) {
    throw NumericalError("non-finite iterate at step " + std::to_string(n));
  }
  return true;
}

}  // namespace gtdlab
