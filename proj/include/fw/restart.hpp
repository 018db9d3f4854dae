#pragma once

#include <string>
#include <vector>

#include "fw/solver.hpp"

namespace fw {

enum class RestartEta { DeltaMatched, Smooth, LineSearch, DirectionalSmooth };

RestartEta parse_restart_eta(const std::string& name);
std::string restart_eta_name(RestartEta mode);

struct StageLog {
  int s = 0;
  long K_s = 0;        // iterations completed in this stage
  double C_s = 0.0;    // offset the stage ran with
  double final_gap_gen = 0.0;
  double final_gap_vanilla = 0.0;
};

struct RestartResult {
  std::vector<TraceRecord> trace;
  // stage index and within-stage iteration for each trace row
  std::vector<int> row_stage;
  std::vector<long> row_stage_k;
  std::vector<StageLog> stages;  // completed stages plus the final running one
  Vector x;
  double gap_gen = 0.0;
  double gap_vanilla = 0.0;
  long total_iterations = 0;
};

/// The (C offset, averaged gradient) pair that makes Phi_0^s the
/// linearization of f at the stage start.
std::pair<double, Vector> stage_phi_init(const Vector& x0_s, const Objective& problem);

RestartResult run_restart(const Objective& problem, const FeasibleRegion& region,
                          RestartEta eta_mode, long max_total_iter, double epsilon,
                          const Vector& x0, const RunOptions& opts = {});

}  // namespace fw
