#include "fw/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fw {

namespace {

constexpr double kNullSegment = 1e-15;

double open_loop2(long k) { return 2.0 / static_cast<double>(k + 2); }

double smooth_eta(const Vector& grad, const Vector& x, const Vector& v, double lip) {
  const double seg_sq = (v - x).squaredNorm();
  if (std::sqrt(seg_sq) <= kNullSegment) return 0.0;
  const double eta = grad.dot(x - v) / (lip * seg_sq);
  return std::clamp(eta, 0.0, 1.0);
}

void check_numeric(const MomentumState& s) {
  if (!s.x.allFinite() || !s.g.allFinite() || !std::isfinite(s.f_x) ||
      !std::isfinite(s.gap_gen) || !std::isfinite(s.C)) {
    throw std::runtime_error("hfw: non-finite value at iteration " + std::to_string(s.k));
  }
}

TraceRecord make_record(const MomentumState& s, const FeasibleRegion& region,
                        long long elapsed_ns) {
  TraceRecord r;
  r.k = s.k;
  r.f = s.f_x;
  r.gap_gen = s.gap_gen;
  r.gap_vanilla = s.gap_vanilla;
  r.delta = s.delta;
  r.eta = s.eta;
  r.elapsed_ns = elapsed_ns;
  r.structure = region.structure_stat(s.x);
  return r;
}

}  // namespace

StepRule parse_step_rule(const std::string& name) {
  if (name == "open-loop-2") return StepRule::OpenLoop2;
  if (name == "uniform") return StepRule::Uniform;
  if (name == "constant-delta") return StepRule::ConstantDelta;
  if (name == "smooth") return StepRule::Smooth;
  if (name == "directional-smooth") return StepRule::DirectionalSmooth;
  if (name == "line-search") return StepRule::LineSearch;
  if (name == "joint-descent") return StepRule::JointDescent;
  throw std::invalid_argument("unknown step policy: " + name);
}

std::string step_rule_name(StepRule rule) {
  switch (rule) {
    case StepRule::OpenLoop2: return "open-loop-2";
    case StepRule::Uniform: return "uniform";
    case StepRule::ConstantDelta: return "constant-delta";
    case StepRule::Smooth: return "smooth";
    case StepRule::DirectionalSmooth: return "directional-smooth";
    case StepRule::LineSearch: return "line-search";
    case StepRule::JointDescent: return "joint-descent";
  }
  return "?";
}

double gap_offset_update(double C_k, double delta_k, double f_xk,
                         const Vector& grad_xk, const Vector& x_k) {
  return (1.0 - delta_k) * C_k + delta_k * (f_xk - grad_xk.dot(x_k));
}

double vanilla_gap(const Objective& problem, const Vector& x,
                   const FeasibleRegion& region) {
  const Vector grad = problem.gradient(x);
  const Vector v = region.lmo(grad);
  return grad.dot(x - v);
}

double momentum_error(const MomentumState& state, const Vector& grad_now) {
  return (state.g - grad_now).norm();
}

MomentumState hfw_init(const Objective& problem, const FeasibleRegion& region,
                       const Vector& x0) {
  if (!region.contains(x0, 1e-9)) {
    throw std::invalid_argument("hfw_init: x0 is not feasible");
  }
  MomentumState s;
  s.x = x0;
  s.f_x = problem.value(x0);
  s.g = problem.gradient(x0);
  s.C = s.f_x - s.g.dot(x0);
  s.v = region.lmo(s.g);
  s.k = 0;
  s.gap_gen = s.f_x - (s.C + s.g.dot(s.v));  // equals the FW gap at x0
  check_numeric(s);
  return s;
}

MomentumState hfw_step(const MomentumState& state, const Objective& problem,
                       const FeasibleRegion& region, const StepPolicy& policy) {
  if (policy.rule == StepRule::JointDescent) {
    return joint_descent_step(state, problem, region, policy.grid_size);
  }

  const long k = state.k;
  double delta;
  switch (policy.rule) {
    case StepRule::Uniform:
      delta = 1.0 / static_cast<double>(k + 1);
      break;
    case StepRule::ConstantDelta:
      delta = policy.delta;
      break;
    default:
      delta = open_loop2(k);
      break;
  }

  const Vector grad = problem.gradient(state.x);
  MomentumState next;
  next.g = (1.0 - delta) * state.g + delta * grad;
  next.v = region.lmo(next.g);

  double eta;
  switch (policy.rule) {
    case StepRule::OpenLoop2:
    case StepRule::Uniform:
      eta = delta;
      break;
    case StepRule::ConstantDelta:
      eta = policy.c / (static_cast<double>(k) + policy.k0 + 1.0);
      break;
    case StepRule::Smooth:
      eta = smooth_eta(grad, state.x, next.v, problem.global_lipschitz());
      break;
    case StepRule::DirectionalSmooth: {
      // fall back to global L on a null segment (Def. of L(x,y) needs x != y)
      const double seg = (next.v - state.x).norm();
      const double lip = seg <= kNullSegment
                             ? problem.global_lipschitz()
                             : problem.directional_lipschitz(state.x, next.v);
      eta = smooth_eta(grad, state.x, next.v, lip);
      break;
    }
    case StepRule::LineSearch:
      eta = problem.line_search(state.x, next.v, policy.line_search_tol);
      break;
    default:
      throw std::logic_error("hfw_step: unhandled rule");
  }

  next.x = (1.0 - eta) * state.x + eta * next.v;
  next.C = gap_offset_update(state.C, delta, state.f_x, grad, state.x);
  next.k = k + 1;
  next.f_x = problem.value(next.x);
  next.gap_gen = next.f_x - (next.C + next.g.dot(next.v));
  next.delta = delta;
  next.eta = eta;
  next.momentum_error = (next.g - grad).norm();
  check_numeric(next);
  return next;
}

MomentumState joint_descent_step(const MomentumState& state, const Objective& problem,
                                 const FeasibleRegion& region, int grid_size) {
  if (grid_size < 2) throw std::invalid_argument("joint_descent_step: grid_size must be >= 2");

  const Vector grad = problem.gradient(state.x);
  const double lip = problem.global_lipschitz();

  std::vector<double> candidates;
  candidates.reserve(grid_size + 1);
  for (int i = 0; i < grid_size; ++i) {
    candidates.push_back(static_cast<double>(i) / (grid_size - 1));
  }
  candidates.push_back(open_loop2(state.k));
  std::sort(candidates.begin(), candidates.end());

  double best_delta = 0.0, best_score = 0.0;
  Vector best_g, best_v;
  bool have_best = false;
  for (double delta : candidates) {
    const Vector g = (1.0 - delta) * state.g + delta * grad;
    const Vector v = region.lmo(g);
    const double score = (1.0 - delta) * state.gap_gen +
                         0.5 * delta * delta * lip * (v - state.x).squaredNorm();
    if (!have_best || score < best_score) {  // strict: ties go to the smaller delta
      have_best = true;
      best_score = score;
      best_delta = delta;
      best_g = g;
      best_v = v;
    }
  }

  MomentumState next;
  next.g = std::move(best_g);
  next.v = std::move(best_v);
  const double eta = best_delta;
  next.x = (1.0 - eta) * state.x + eta * next.v;
  next.C = gap_offset_update(state.C, best_delta, state.f_x, grad, state.x);
  next.k = state.k + 1;
  next.f_x = problem.value(next.x);
  next.gap_gen = next.f_x - (next.C + next.g.dot(next.v));
  next.delta = best_delta;
  next.eta = eta;
  next.momentum_error = (next.g - grad).norm();
  check_numeric(next);
  return next;
}

RunResult run_hfw(const Objective& problem, const FeasibleRegion& region,
                  const StepPolicy& policy, long max_iter, double epsilon,
                  const Vector& x0, const RunOptions& opts) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto now_ns = [&]() -> long long {
    if (!opts.record_timings) return 0;
    return std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - t0).count();
  };

  RunResult out;
  MomentumState state = hfw_init(problem, region, x0);
  if (opts.emit_vanilla_gap) state.gap_vanilla = vanilla_gap(problem, state.x, region);
  if (opts.observer) opts.observer(state);
  out.trace.push_back(make_record(state, region, now_ns()));

  while (state.k < max_iter && state.gap_gen > epsilon) {
    state = hfw_step(state, problem, region, policy);
    if (opts.emit_vanilla_gap) state.gap_vanilla = vanilla_gap(problem, state.x, region);
    if (opts.observer) opts.observer(state);
    out.trace.push_back(make_record(state, region, now_ns()));
  }
  out.iterations = state.k;
  out.final_state = std::move(state);
  return out;
}

RunResult run_fw(const Objective& problem, const FeasibleRegion& region,
                 FwStepRule rule, long max_iter, double epsilon,
                 const Vector& x0, const RunOptions& opts) {
  if (!region.contains(x0, 1e-9)) {
    throw std::invalid_argument("run_fw: x0 is not feasible");
  }
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto now_ns = [&]() -> long long {
    if (!opts.record_timings) return 0;
    return std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - t0).count();
  };

  RunResult out;
  MomentumState state;  // reused as the plain-FW state carrier
  state.x = x0;
  state.f_x = problem.value(x0);
  state.k = 0;

  while (true) {
    const Vector grad = problem.gradient(state.x);
    const Vector v = region.lmo(grad);
    const double gap = grad.dot(state.x - v);
    state.g = grad;
    state.v = v;
    state.gap_gen = gap;
    state.gap_vanilla = gap;
    state.C = state.f_x - gap - grad.dot(v);  // so Phi(v) = f - gap as for k=1
    if (!std::isfinite(gap) || !std::isfinite(state.f_x)) {
      throw std::runtime_error("run_fw: non-finite value at iteration " + std::to_string(state.k));
    }
    out.trace.push_back(make_record(state, region, now_ns()));
    if (gap <= epsilon || state.k >= max_iter) break;

    double eta;
    if (rule == FwStepRule::Smooth) {
      const double seg_sq = (v - state.x).squaredNorm();
      eta = seg_sq <= kNullSegment * kNullSegment
                ? 0.0
                : std::min(gap / (problem.global_lipschitz() * seg_sq), 1.0);
    } else {
      eta = open_loop2(state.k);
    }
    state.x = (1.0 - eta) * state.x + eta * v;
    state.f_x = problem.value(state.x);
    state.k += 1;
    state.delta = 0.0;
    state.eta = eta;
  }
  out.iterations = state.k;
  out.final_state = std::move(state);
  return out;
}

}  // namespace fw
