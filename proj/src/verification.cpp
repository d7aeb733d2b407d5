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

#include "gtdlab/verification.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "gtdlab/error.hpp"
#include "gtdlab/sampler.hpp"
#include "gtdlab/stats.hpp"

namespace gtdlab {
namespace {

constexpr int kProbes = 5;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Entrywise comparison of a batch-means estimate with a reference value.
CheckResult compare_entries(const std::string& name, const Vec& mean, const Vec& se,
                            const Vec& ref, const Vec& ref_se, double z) {
  CheckResult r;
  r.name = name;
  r.threshold = z;
  r.passed = true;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    const double diff = std::abs(mean(i) - ref(i));
    const double floor = 1e-9 * (1.0 + std::abs(ref(i)));
    const double spread = std::sqrt(se(i) * se(i) + ref_se(i) * ref_se(i));
    const double excess = std::max(0.0, diff - floor);
    double score = 0.0;
    if (excess > 0.0) score = spread > 0.0 ? excess / spread : kInfinity;
    worst = std::max(worst, score);
    if (!(excess <= z * spread)) r.passed = false;
  }
  r.margin = worst;
  r.detail = "max standardized deviation " + fmt(worst) + " over " +
             std::to_string(mean.size()) + " entries";
  return r;
}

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

ExperimentConfig trajectory_config(const FiniteMdp& mdp, const FeatureMap& features,
                                   const LambdaScheme& scheme, const AlgorithmSpec& spec,
                                   long horizon) {
  ExperimentConfig c;
  c.mdp = mdp;
  c.features = features;
  c.scheme = scheme;
  c.algorithm = spec;
  c.horizon = horizon;
  c.checkpoint_every = 1;
  c.metrics = MetricSet{false, false, false, false, false};
  return c;
}

RunRecord trajectory(const ExperimentConfig& config, std::uint64_t seed) {
  OracleReference oracle;
  oracle.xi = stationary_distribution(config.mdp);
  return run_experiment(config, oracle, seed);
}

// Largest coordinate difference between two trajectories; infinity when the
// lengths differ.
double trajectory_gap(const RunRecord& a, const RunRecord& b, bool relative) {
  if (a.rows.size() != b.rows.size()) return kInfinity;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& ra = a.rows[i];
    const auto& rb = b.rows[i];
    const double scale_t = relative ? 1.0 + ra.theta.cwiseAbs().maxCoeff() : 1.0;
    const double scale_x = relative ? 1.0 + ra.x.cwiseAbs().maxCoeff() : 1.0;
    worst = std::max(worst, (ra.theta - rb.theta).cwiseAbs().maxCoeff() / scale_t);
    worst = std::max(worst, (ra.x - rb.x).cwiseAbs().maxCoeff() / scale_x);
  }
  return worst;
}

CheckResult identity_result(const std::string& name, const RunRecord& a,
                            const RunRecord& b) {
  CheckResult r;
  r.name = name;
  r.threshold = 0.0;
  r.margin = trajectory_gap(a, b, false);
  r.passed = r.margin == 0.0;
  r.detail = std::to_string(a.rows.size()) + " iterates compared bit for bit";
  return r;
}

}  // namespace

bool CheckReport::ok() const { return failures() == 0; }

int CheckReport::failures() const {
  int n = 0;
  for (const auto& r : results) {
    if (!r.informational && !r.passed) ++n;
  }
  return n;
}

void CheckReport::append(const CheckReport& other) {
  results.insert(results.end(), other.results.begin(), other.results.end());
}

CheckReport check_stationary_expectations(const FiniteMdp& mdp, const FeatureMap& features,
                                          const LambdaScheme& scheme,
                                          const StationaryOptions& options) {
  TraceEngine engine(mdp, features, scheme);
  const int d = features.dim();
  const int n = mdp.n_states();
  const Mat& phi = features.phi;
  const Vec xi = stationary_distribution(mdp);
  const Mat weighted = phi.transpose() * xi.asDiagonal();
  const Vec v_pi = true_value_function(mdp);

  std::mt19937_64 probe_rng(stream_seed(options.probe_seed, kStreamProbe));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vec> probes;
  std::vector<Vec> probe_theta;
  probes.push_back(Vec::Zero(n));
  probes.push_back(v_pi);
  for (int k = 0; k < 3; ++k) {
    Vec theta(d);
    for (int j = 0; j < d; ++j) theta(j) = normal(probe_rng);
    probe_theta.push_back(theta);
    probes.push_back(phi * theta);
  }

  // References and their own uncertainty (zero when exact).
  Mat ref_C = weighted * phi;
  Mat ref_neg_A;
  Mat ref_A_plus_C;
  std::vector<Vec> ref_probe(kProbes);
  Mat se_A = Mat::Zero(d, d);
  std::vector<Vec> se_probe(kProbes, Vec::Zero(d));
  if (scheme.is_state_dependent()) {
    const AffineBellman bell = bellman_for_scheme(mdp, scheme);
    const ProjectedProblem prob = assemble_problem(mdp, features, bell);
    ref_neg_A = -prob.A;
    ref_A_plus_C = prob.A + prob.C;
    for (int k = 0; k < kProbes; ++k) {
      const Vec& v = probes[static_cast<std::size_t>(k)];
      ref_probe[static_cast<std::size_t>(k)] =
          weighted * (bell.r_lambda + bell.P_lambda * v - v);
    }
  } else {
    const EmpiricalProblem est = estimate_projected_problem_empirical(
        mdp, features, scheme, options.reference_horizon,
        mix_seed(options.probe_seed + 1000));
    ref_neg_A = -est.problem.A;
    ref_A_plus_C = est.problem.A + est.problem.C;
    se_A = est.A_se;
    ref_probe[0] = est.problem.b;
    se_probe[0] = est.b_se;
    ref_probe[1] = Vec::Zero(d);
    for (int k = 0; k < 3; ++k) {
      const Vec& th = probe_theta[static_cast<std::size_t>(k)];
      ref_probe[static_cast<std::size_t>(k + 2)] = est.problem.A * th + est.problem.b;
      se_probe[static_cast<std::size_t>(k + 2)] =
          ((est.A_se.cwiseAbs2() * th.cwiseAbs2()) + est.b_se.cwiseAbs2()).cwiseSqrt();
    }
  }

  const int dd = d * d;
  const int total = dd + kProbes * d + dd + dd;
  CheckReport report;
  for (std::uint64_t seed : options.seeds) {
    ChainSampler init_rng(mdp, stream_seed(seed, kStreamInit));
    ChainSampler chain(mdp, stream_seed(seed, kStreamChain));
    int s = init_rng.draw_state(xi);
    TraceState trace = engine.init(s);
    BatchMeans stats(total, options.blocks, options.horizon / options.blocks);
    Vec sample(total);
    Vec lambdas(scheme.n_cells());
    Vec corr(d);
    for (long t = 0; t < options.burn_in + options.horizon; ++t) {
      const int s_next = chain.next(s).s_next;
      engine.next_lambdas(trace, s_next, &lambdas);
      if (t >= options.burn_in) {
        const double rho = engine.rho()(s, s_next);
        const double g = mdp.discount(s_next);
        const auto f = phi.row(s).transpose();
        const auto f_next = phi.row(s_next).transpose();
        const Vec& e = trace.e;
        Eigen::Map<Mat>(sample.data(), d, d).noalias() = f * f.transpose();
        for (int k = 0; k < kProbes; ++k) {
          const Vec& v = probes[static_cast<std::size_t>(k)];
          const double dbar = rho * (mdp.reward_mean(s, s_next) + g * v(s_next) - v(s));
          sample.segment(dd + k * d, d) = dbar * e;
        }
        Eigen::Map<Mat>(sample.data() + dd + kProbes * d, d, d).noalias() =
            (rho * e) * (f - g * f_next).transpose();
        corr.setZero();
        for (int i = 0; i < scheme.n_cells(); ++i) {
          corr += (1.0 - lambdas(i)) * trace.sub[static_cast<std::size_t>(i)];
        }
        Eigen::Map<Mat>(sample.data() + 2 * dd + kProbes * d, d, d).noalias() =
            (rho * g) * corr * f_next.transpose();
        stats.add(sample);
      }
      engine.advance(&trace, s_next, lambdas);
      s = s_next;
    }
    const Vec mean = stats.mean();
    const Vec se = stats.standard_error();
    const std::string tag = "[seed " + std::to_string(seed) + "]";
    report.add(compare_entries("stationary/phi_phi " + tag, mean.head(dd), se.head(dd),
                               flatten(ref_C), Vec::Zero(dd), options.z));
    static const char* kProbeNames[kProbes] = {"zero", "v_pi", "random_1", "random_2",
                                               "random_3"};
    for (int k = 0; k < kProbes; ++k) {
      report.add(compare_entries(
          std::string("stationary/e_delta[") + kProbeNames[k] + "] " + tag,
          mean.segment(dd + k * d, d), se.segment(dd + k * d, d),
          ref_probe[static_cast<std::size_t>(k)], se_probe[static_cast<std::size_t>(k)],
          options.z));
    }
    report.add(compare_entries("stationary/e_rho_phi_diff " + tag,
                               mean.segment(dd + kProbes * d, dd),
                               se.segment(dd + kProbes * d, dd), flatten(ref_neg_A),
                               flatten(se_A), options.z));
    report.add(compare_entries("stationary/e_rho_one_minus_lambda " + tag,
                               mean.tail(dd), se.tail(dd), flatten(ref_A_plus_C),
                               flatten(se_A), options.z));
  }
  return report;
}

CheckReport check_gradients(const ProjectedProblem& prob, int n_points,
                            std::uint64_t seed, double h) {
  const Eigen::Index d = prob.dim();
  std::mt19937_64 rng(stream_seed(seed, kStreamProbe));
  std::normal_distribution<double> normal(0.0, 3.0);
  double worst_ab = 0.0;
  double worst_fd = 0.0;
  for (int p = 0; p < n_points; ++p) {
    Vec theta(d);
    for (Eigen::Index j = 0; j < d; ++j) theta(j) = normal(rng);
    const Vec ga = grad_J_expression_a(prob, theta);
    const Vec gb = grad_J_expression_b(prob, theta);
    worst_ab = std::max(worst_ab, (ga - gb).norm() / (1.0 + ga.norm()));
    Vec fd(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      Vec plus = theta;
      Vec minus = theta;
      plus(j) += h;
      minus(j) -= h;
      fd(j) = (objective_J(prob, plus) - objective_J(prob, minus)) / (2.0 * h);
    }
    const double j_val = objective_J(prob, theta);
    worst_fd = std::max(worst_fd, (fd - ga).norm() / (ga.norm() + 1e-3 * (1.0 + j_val)));
  }
  CheckReport report;
  report.add({"gradient/a_vs_b", worst_ab <= 1e-10, worst_ab, 1e-10,
              "max ||a - b|| / (1 + ||a||) over " + std::to_string(n_points) + " points"});
  report.add({"gradient/finite_difference", worst_fd <= 1e-6, worst_fd, 1e-6,
              "max ||fd - a|| / (||a|| + 1e-3 (1 + J)), h = " + fmt(h)});
  return report;
}

MeanIterationResult run_mean_iteration(const ProjectedProblem& prob,
                                       const AlgorithmSpec& spec, long max_iterations,
                                       double tolerance) {
  const Eigen::Index d = prob.dim();
  const double w = prob.regularizer.weight_or_zero();
  const double a = 0.5 / (prob.A.norm() + prob.C.norm() + w + 1.0);
  const bool two = spec.two_time_scale();
  const double alpha = two ? 0.1 * a : a;
  double beta = a;
  if (spec.variant == Variant::kGtda1tsEta) beta = spec.eta * alpha;
  const bool constrained = spec.constrained();
  const double r_x = constrained ? spec.r_x : kInfinity;
  const Variant v = spec.variant;

  Vec theta = Vec::Zero(d);
  Vec theta_star = Vec::Zero(d);
  Vec x = Vec::Zero(d);
  MeanIterationResult out;
  long k = 0;
  double residual = kInfinity;
  for (; k < max_iterations; ++k) {
    const Vec rhs = prob.A * theta + prob.b;
    Vec dir;
    if (v == Variant::kMdtd) {
      dir = rhs;
    } else if (spec.gtdb_direction()) {
      dir = rhs - (prob.A + prob.C).transpose() * x;
    } else {
      dir = -(prob.A.transpose() * x);
    }
    if (v != Variant::kMdtd) dir -= prob.regularizer.gradient(theta);
    double moved_theta = 0.0;
    if (spec.mirror()) {
      Vec next = theta_star + alpha * dir;
      project_ball_in_place(&next, spec.mirror_radius());
      moved_theta = (next - theta_star).norm();
      theta_star = next;
      theta = mirror_grad(theta_star, spec.q);
    } else {
      Vec next = theta + alpha * dir;
      if (constrained) project_ball_in_place(&next, spec.r_theta);
      moved_theta = (next - theta).norm();
      theta = next;
    }
    double moved_x = 0.0;
    if (spec.has_x()) {
      Vec next = x + beta * (rhs - prob.C * x);
      project_ball_in_place(&next, r_x);
      moved_x = (next - x).norm();
      x = next;
    }
    residual = std::sqrt(std::pow(moved_theta / alpha, 2) + std::pow(moved_x / beta, 2));
    if (!theta.allFinite() || !x.allFinite()) {
      throw NumericalError("mean iteration diverged");
    }
    if (residual <= tolerance) break;
  }
  out.theta = theta;
  out.x = x;
  out.iterations = k;
  out.step_residual = residual;
  return out;
}

CheckReport check_mean_ode_fixed_points(const ProjectedProblem& prob,
                                        const AlgorithmSpec& spec) {
  CheckReport report;
  const Eigen::Index d = prob.dim();

  // KKT of Theta_opt on B_theta.
  const ThetaOptSet opt = theta_opt_ball(prob);
  {
    const Vec g = grad_J_expression_a(prob, opt.point) + prob.regularizer.gradient(opt.point);
    const double res = (g + opt.multiplier * opt.point).norm();
    const double descent = g.dot(opt.point);
    const bool ok = res <= 1e-8 * (1.0 + g.norm()) && descent <= 1e-10 * (1.0 + g.norm());
    report.add({"mean_ode/theta_opt_kkt", ok, res, 1e-8,
                std::string(opt.multiplier > 0.0 ? "boundary" : "interior") +
                    " optimum, multiplier " + fmt(opt.multiplier) +
                    ", <grad, theta*> = " + fmt(descent)});
  }
  // Fast-scale equilibrium x_theta at the optimum and at random points.
  {
    std::mt19937_64 rng(stream_seed(3, kStreamProbe));
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    const SymmetricPinv cp = symmetric_pinv(prob.C);
    for (int p = 0; p < 4; ++p) {
      Vec theta = opt.point;
      if (p > 0) {
        for (Eigen::Index j = 0; j < d; ++j) theta(j) = normal(rng);
        if (!std::isinf(prob.r_theta)) project_ball_in_place(&theta, prob.r_theta);
      }
      const Vec rhs = prob.A * theta + prob.b;
      const Vec x = solve_x_theta(prob, theta);
      worst = std::max(worst, (cp.range_projector * (rhs - prob.C * x)).norm() /
                                  (1.0 + rhs.norm()));
    }
    report.add({"mean_ode/fast_scale_equilibrium", worst <= 1e-8, worst, 1e-8,
                "k(theta, x_theta) restricted to range(C)"});
  }
  const double eta = spec.variant == Variant::kGtda1tsEta ? spec.eta : 1.0;
  std::optional<SaddlePoint> saddle;
  if (spec.has_x()) {
    saddle = saddle_point(eta_scaled_problem(prob, eta));
    const ProjectedProblem sp = eta_scaled_problem(prob, eta);
    const Vec rhs = sp.A * saddle->theta + sp.b;
    Vec moved = saddle->x_bar + (rhs - sp.C * saddle->x_bar);
    project_ball_in_place(&moved, sp.r_x);
    const double inner = (moved - saddle->x_bar).norm();
    const double res = std::max(inner, saddle->kkt_residual);
    report.add({"mean_ode/saddle_kkt", res <= 1e-8, res, 1e-8,
                std::string("x_bar ") + (saddle->x_interior ? "interior" : "on the boundary") +
                    " of B_x"});
    saddle->x_bar *= std::sqrt(eta);
  }

  const MeanIterationResult it = run_mean_iteration(prob, spec);
  double gap = 0.0;
  std::string target;
  if (spec.variant == Variant::kMdtd) {
    const MdtdFixedPoint fp = mdtd_fixed_point(prob);
    if (!fp.negative_definite) {
      report.add({"mean_ode/mean_iteration", false, kInfinity, 1e-6,
                  "A is not negative definite; no TD fixed point"});
      return report;
    }
    gap = (it.theta - fp.theta_td).norm();
    target = "theta_TD";
  } else if (spec.gtdb_direction()) {
    gap = ThetaOptSet(opt).distance(it.theta);
    target = "Theta_opt";
  } else {
    gap = saddle->theta_distance(it.theta);
    target = "D_theta";
    if (!spec.two_time_scale()) {
      gap = saddle->distance(it.theta, it.x);
      target = "D_theta x {x_bar}";
    }
  }
  const bool ok = it.step_residual <= 1e-8 && gap <= 1e-6;
  report.add({std::string("mean_ode/mean_iteration[") + variant_name(spec.variant) + "]", ok,
              gap, 1e-6,
              "distance to " + target + " after " + std::to_string(it.iterations) +
                  " iterations, step residual " + fmt(it.step_residual)});
  return report;
}

CheckReport check_reduction_identities(const FiniteMdp& mdp, const FeatureMap& features,
                                       const LambdaScheme& scheme,
                                       const ReductionOptions& options) {
  CheckReport report;
  const long horizon = options.horizon;
  const std::uint64_t seed = options.seed;

  AlgorithmSpec base;
  base.r_theta = options.r_theta;
  base.r_x = options.r_x;
  base.alpha = StepsizeSchedule::power(0.5, 0.8);
  base.beta = StepsizeSchedule::power(0.5, 0.6);

  auto run = [&](const LambdaScheme& sch, const AlgorithmSpec& spec) {
    return trajectory(trajectory_config(mdp, features, sch, spec, horizon), seed);
  };

  {
    AlgorithmSpec gtd = base;
    gtd.variant = Variant::kGtda2ts;
    AlgorithmSpec md = gtd;
    md.variant = Variant::kMdGtda;
    md.q = 2.0;
    md.level = 0.5 * options.r_theta * options.r_theta;
    CheckResult r = identity_result("reduction/mirror_q2_vs_gtda", run(scheme, md),
                                    run(scheme, gtd));
    if (md.mirror_radius() != options.r_theta) {
      r.detail += " (level radius differs from r_theta by rounding)";
    }
    report.add(r);
  }
  {
    AlgorithmSpec one = base;
    one.variant = Variant::kGtda1ts;
    AlgorithmSpec eta = one;
    eta.variant = Variant::kGtda1tsEta;
    eta.eta = 1.0;
    report.add(identity_result("reduction/eta_one_vs_gtda1ts", run(scheme, eta),
                               run(scheme, one)));
  }
  {
    AlgorithmSpec xform = base;
    xform.variant = Variant::kGtda1tsEta;
    xform.eta = options.eta;
    AlgorithmSpec tilde = xform;
    tilde.x_tilde_form = true;
    const RunRecord a = run(scheme, xform);
    const RunRecord b = run(scheme, tilde);
    CheckResult r;
    r.name = "reduction/x_tilde_form_vs_x_form";
    r.threshold = 1e-12;
    r.margin = trajectory_gap(a, b, true);
    r.passed = r.margin <= r.threshold;
    r.detail = "eta = " + fmt(options.eta) + ", max relative coordinate gap";
    report.add(r);
  }
  {
    const LambdaScheme hist = LambdaScheme::plain(LambdaRule::history(options.history_bound));
    double max_phi = 0.0;
    for (int s = 0; s < features.n_states(); ++s) {
      max_phi = std::max(max_phi, features.phi.row(s).norm());
    }
    const double K = options.history_bound + max_phi + 1.0;
    const std::pair<Variant, Variant> pairs[] = {
        {Variant::kBiasedGtda2ts, Variant::kGtda2ts},
        {Variant::kBiasedGtdb2ts, Variant::kGtdb2ts},
        {Variant::kBiasedGtda1ts, Variant::kGtda1ts}};
    for (const auto& [biased_v, plain_v] : pairs) {
      AlgorithmSpec plain = base;
      plain.variant = plain_v;
      AlgorithmSpec biased = plain;
      biased.variant = biased_v;
      biased.K = K;
      report.add(identity_result(std::string("reduction/biased_large_K[") +
                                     variant_name(plain_v) + "]",
                                 run(hist, biased), run(hist, plain)));
    }
  }
  {
    const LambdaScheme plain_scheme =
        scheme.composite ? LambdaScheme::plain(scheme.cells[0]) : scheme;
    const LambdaScheme one_cell = LambdaScheme::make_composite(
        std::vector<int>(static_cast<std::size_t>(mdp.n_states()), 0), plain_scheme.cells);
    for (Variant v : {Variant::kGtda2ts, Variant::kGtdb2ts}) {
      AlgorithmSpec spec = base;
      spec.variant = v;
      report.add(identity_result(std::string("reduction/composite_one_cell[") +
                                     variant_name(v) + "]",
                                 run(one_cell, spec), run(plain_scheme, spec)));
    }
  }
  return report;
}

CheckReport check_trace_conditions(const FiniteMdp& mdp, const FeatureMap& features,
                                   const TraceConditionOptions& options) {
  CheckReport report;
  const int n = mdp.n_states();
  const int d = features.dim();
  const Mat rho = importance_ratio_table(mdp);
  const double C = options.bound;

  // Nonexpansiveness of e -> lambda(y, e) e.
  {
    std::mt19937_64 rng(stream_seed(options.seed, kStreamProbe));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
    std::uniform_int_distribution<int> state(0, n - 1);
    double worst = -kInfinity;
    bool ok = true;
    for (int t = 0; t < options.n_samples; ++t) {
      const int s = state(rng);
      int s_next = state(rng);
      for (int tries = 0; mdp.behavior_P(s, s_next) <= 0.0 && tries < 10 * n; ++tries) {
        s_next = state(rng);
      }
      if (mdp.behavior_P(s, s_next) <= 0.0) continue;
      const double g = mdp.discount(s_next);
      const double r = rho(s, s_next);
      Vec e(d);
      Vec e2(d);
      const double sa = std::exp(log_scale(rng));
      const double sb = std::exp(log_scale(rng));
      for (int j = 0; j < d; ++j) {
        e(j) = sa * normal(rng);
        e2(j) = sb * normal(rng);
      }
      const Vec le = history_lambda(C, g, r, e.norm()) * e;
      const Vec le2 = history_lambda(C, g, r, e2.norm()) * e2;
      const double excess = (le - le2).norm() - (e - e2).norm();
      worst = std::max(worst, excess);
      if (excess > 1e-12) ok = false;
    }
    report.add({"trace/nonexpansive", ok, worst, 1e-12,
                std::to_string(options.n_samples) +
                    " random (e, e', y); max of ||l(e)e - l(e')e'|| - ||e - e'||"});
  }
  // Boundedness along a simulated run.
  {
    const LambdaScheme scheme = LambdaScheme::plain(LambdaRule::history(C));
    TraceEngine engine(mdp, features, scheme);
    ChainSampler init_rng(mdp, stream_seed(options.seed, kStreamInit));
    ChainSampler chain(mdp, stream_seed(options.seed, kStreamChain));
    int s = init_rng.draw_state(stationary_distribution(mdp));
    TraceState trace = engine.init(s);
    double max_phi = 0.0;
    for (int i = 0; i < n; ++i) max_phi = std::max(max_phi, features.phi.row(i).norm());
    double worst_scaled = 0.0;
    double worst_norm = 0.0;
    std::vector<double> norms;
    norms.reserve(static_cast<std::size_t>(options.steps));
    Vec lambdas(1);
    for (long t = 0; t < options.steps; ++t) {
      const int s_next = chain.next(s).s_next;
      engine.next_lambdas(trace, s_next, &lambdas);
      const double scaled =
          lambdas(0) * mdp.discount(s_next) * rho(s, s_next) * trace.e.norm();
      worst_scaled = std::max(worst_scaled, scaled);
      engine.advance(&trace, s_next, lambdas);
      const double nrm = trace.e.norm();
      worst_norm = std::max(worst_norm, nrm);
      norms.push_back(nrm);
      s = s_next;
    }
    const double tol = 1e-12 * (1.0 + C);
    report.add({"trace/history_bound", worst_scaled <= C + tol, worst_scaled, C,
                "max gamma' rho lambda ||e_prev|| over " + std::to_string(options.steps) +
                    " steps"});
    report.add({"trace/norm_bound", worst_norm <= C + max_phi + tol, worst_norm,
                C + max_phi, "max ||e_n|| against bound + max ||phi||"});
    if (!norms.empty()) {
      const std::size_t q = static_cast<std::size_t>(0.999 * static_cast<double>(norms.size() - 1));
      std::nth_element(norms.begin(), norms.begin() + static_cast<long>(q), norms.end());
      CheckResult tail{"trace/tail_quantile_0.999", true, norms[q], 0.0,
                       "0.999 quantile of ||e_n|| (reported only)", true};
      report.add(tail);
    }
  }
  // Coupling decay of two traces on one stream.
  if (options.coupling_lambda.size() > 0) {
    const LambdaScheme scheme = LambdaScheme::plain(LambdaRule::state(options.coupling_lambda));
    const Vec e0a = Vec::Ones(d);
    const Vec e0b = -Vec::Ones(d);
    const int H = options.coupling_horizon;
    std::vector<std::vector<double>> gaps(static_cast<std::size_t>(H + 1));
    std::vector<double> bound;
    for (int k = 0; k < options.coupling_seeds; ++k) {
      const CoupledDecay cd = coupled_trace_decay(
          mdp, features, scheme, e0a, e0b, H, mix_seed(options.seed * 1000 + static_cast<std::uint64_t>(k)));
      for (int t = 0; t <= H; ++t) {
        gaps[static_cast<std::size_t>(t)].push_back(cd.gap[static_cast<std::size_t>(t)]);
      }
      bound = cd.bound;
    }
    double worst = -kInfinity;
    for (int t = 0; t <= H; ++t) {
      const auto& g = gaps[static_cast<std::size_t>(t)];
      double mean = 0.0;
      for (double v : g) mean += v;
      mean /= static_cast<double>(g.size());
      const double se = std::sqrt(sample_variance(g) / static_cast<double>(g.size()));
      worst = std::max(worst, mean - bound[static_cast<std::size_t>(t)] - options.coupling_z * se);
    }
    report.add({"trace/coupling_decay", worst <= 1e-12, worst, 0.0,
                "max over n of mean gap - bound - " + fmt(options.coupling_z) + " SE, " +
                    std::to_string(options.coupling_seeds) + " seeds"});
  }
  return report;
}

}  // namespace gtdlab
