#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fw/geometry.hpp"
#include "fw/objectives.hpp"

namespace fw {

enum class StepRule {
  OpenLoop2,          // delta = eta = 2/(k+2)
  Uniform,            // delta = eta = 1/(k+1)
  ConstantDelta,      // delta fixed, eta = c/(k+k0+1)
  Smooth,             // eta from the global-L smooth formula, trimmed to [0,1]
  DirectionalSmooth,  // as Smooth with the segment constant L(x_k, v_{k+1})
  LineSearch,         // eta = argmin over [0,1] of the restricted objective
  JointDescent,       // joint grid search over delta with eta = delta
};

StepRule parse_step_rule(const std::string& name);
std::string step_rule_name(StepRule rule);

struct StepPolicy {
  StepRule rule = StepRule::OpenLoop2;
  // ConstantDelta parameters
  double delta = 0.8;
  double c = 2.0;
  double k0 = 2.0;
  // JointDescent grid resolution
  int grid_size = 65;
  double line_search_tol = 1e-10;
};

/// Vanilla FW (no momentum) supports the open-loop and smooth rules only.
enum class FwStepRule { OpenLoop2, Smooth };

/// Running state of the momentum iteration. The pair (C, g) represents the
/// affine lower bound Phi_k(y) = C + <g, y>; gap_gen = f(x) - Phi_k(v).
struct MomentumState {
  Vector x;
  Vector g;
  double C = 0.0;
  Vector v;
  long k = 0;
  double f_x = 0.0;
  double gap_gen = 0.0;
  std::optional<double> gap_vanilla;
  double delta = 0.0;  // step parameters used to reach this state
  double eta = 0.0;
  double momentum_error = 0.0;  // ||g_{k+1} - grad f(x_k)||
};

struct TraceRecord {
  long k = 0;
  double f = 0.0;
  double gap_gen = 0.0;
  std::optional<double> gap_vanilla;
  double delta = 0.0;
  double eta = 0.0;
  long long elapsed_ns = 0;
  double structure = 0.0;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  MomentumState final_state;
  long iterations = 0;  // steps actually taken
};

struct RunOptions {
  bool emit_vanilla_gap = false;
  bool record_timings = false;
  // invoked on the initial state and after every step
  std::function<void(const MomentumState&)> observer;
};

/// C_{k+1} = (1 - delta) C_k + delta [f(x_k) - <grad f(x_k), x_k>]
double gap_offset_update(double C_k, double delta_k, double f_xk,
                         const Vector& grad_xk, const Vector& x_k);

/// One extra LMO at grad f(x); <grad f(x), x - v>.
double vanilla_gap(const Objective& problem, const Vector& x,
                   const FeasibleRegion& region);

double momentum_error(const MomentumState& state, const Vector& grad_now);

MomentumState hfw_init(const Objective& problem, const FeasibleRegion& region,
                       const Vector& x0);

MomentumState hfw_step(const MomentumState& state, const Objective& problem,
                       const FeasibleRegion& region, const StepPolicy& policy);

MomentumState joint_descent_step(const MomentumState& state, const Objective& problem,
                                 const FeasibleRegion& region, int grid_size);

RunResult run_hfw(const Objective& problem, const FeasibleRegion& region,
                  const StepPolicy& policy, long max_iter, double epsilon,
                  const Vector& x0, const RunOptions& opts = {});

RunResult run_fw(const Objective& problem, const FeasibleRegion& region,
                 FwStepRule rule, long max_iter, double epsilon,
                 const Vector& x0, const RunOptions& opts = {});

}  // namespace fw
