#include "fw/restart.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fw {

namespace {

constexpr double kNullSegment = 1e-15;

double trimmed_smooth_eta(const Vector& grad, const Vector& x, const Vector& v, double lip) {
  const double seg_sq = (v - x).squaredNorm();
  if (std::sqrt(seg_sq) <= kNullSegment) return 0.0;
  return std::clamp(grad.dot(x - v) / (lip * seg_sq), 0.0, 1.0);
}

}  // namespace

RestartEta parse_restart_eta(const std::string& name) {
  if (name == "delta" || name == "delta-matched") return RestartEta::DeltaMatched;
  if (name == "smooth") return RestartEta::Smooth;
  if (name == "line-search") return RestartEta::LineSearch;
  if (name == "directional-smooth") return RestartEta::DirectionalSmooth;
  throw std::invalid_argument("unknown restart eta mode: " + name);
}

std::string restart_eta_name(RestartEta mode) {
  switch (mode) {
    case RestartEta::DeltaMatched: return "delta-matched";
    case RestartEta::Smooth: return "smooth";
    case RestartEta::LineSearch: return "line-search";
    case RestartEta::DirectionalSmooth: return "directional-smooth";
  }
  return "?";
}

std::pair<double, Vector> stage_phi_init(const Vector& x0_s, const Objective& problem) {
  Vector g = problem.gradient(x0_s);
  const double C = problem.value(x0_s) - g.dot(x0_s);
  return {C, std::move(g)};
}

RestartResult run_restart(const Objective& problem, const FeasibleRegion& region,
                          RestartEta eta_mode, long max_total_iter, double epsilon,
                          const Vector& x0, const RunOptions& opts) {
  if (!region.contains(x0, 1e-9)) {
    throw std::invalid_argument("run_restart: x0 is not feasible");
  }
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto now_ns = [&]() -> long long {
    if (!opts.record_timings) return 0;
    return std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - t0).count();
  };

  const double lip = problem.global_lipschitz();
  const double diam = region.diameter();

  RestartResult out;
  auto record = [&](long global_k, int s, long stage_k, double f, double gap_gen,
                    double gap_van, double delta, double eta, const Vector& x) {
    TraceRecord r;
    r.k = global_k;
    r.f = f;
    r.gap_gen = gap_gen;
    r.gap_vanilla = gap_van;
    r.delta = delta;
    r.eta = eta;
    r.elapsed_ns = now_ns();
    r.structure = region.structure_stat(x);
    out.trace.push_back(std::move(r));
    out.row_stage.push_back(s);
    out.row_stage_k.push_back(stage_k);
  };

  Vector x = x0;
  double C_offset = 0.0;  // C^s of Alg. 3 (0 for the first stage)
  long global_k = 0;
  int s = 0;
  bool done = false;

  while (!done) {
    auto [C, g] = stage_phi_init(x, problem);
    Vector grad = g;  // gradient at the current inner iterate
    double f_x = problem.value(x);
    Vector v = region.lmo(g);
    double gap_gen = f_x - (C + g.dot(v));
    double gap_van = gap_gen;  // Phi_0^s is the linearization at x_0^s
    long k = 0;

    if (s == 0) record(0, 0, 0, f_x, gap_gen, gap_van, 0.0, 0.0, x);
    if (std::min(gap_gen, gap_van) <= epsilon || global_k >= max_total_iter) {
      out.stages.push_back({s, k, C_offset, gap_gen, gap_van});
      break;
    }

    while (true) {
      const double delta = 2.0 / (static_cast<double>(k) + 2.0 + C_offset);
      g = (1.0 - delta) * g + delta * grad;
      v = region.lmo(g);

      double eta;
      switch (eta_mode) {
        case RestartEta::DeltaMatched:
          eta = delta;
          break;
        case RestartEta::Smooth:
          eta = trimmed_smooth_eta(grad, x, v, lip);
          break;
        case RestartEta::DirectionalSmooth: {
          const double seg = (v - x).norm();
          eta = trimmed_smooth_eta(grad, x, v,
                                   seg <= kNullSegment ? lip
                                                       : problem.directional_lipschitz(x, v));
          break;
        }
        case RestartEta::LineSearch:
          eta = problem.line_search(x, v, 1e-10);
          break;
        default:
          throw std::logic_error("run_restart: unhandled eta mode");
      }

      C = (1.0 - delta) * C + delta * (f_x - grad.dot(x));
      x = (1.0 - eta) * x + eta * v;
      f_x = problem.value(x);
      grad = problem.gradient(x);
      const Vector v_bar = region.lmo(grad);
      gap_gen = f_x - (C + g.dot(v));
      gap_van = grad.dot(x - v_bar);
      if (!std::isfinite(gap_gen) || !std::isfinite(gap_van)) {
        throw std::runtime_error("run_restart: non-finite gap at iteration " +
                                 std::to_string(global_k + 1));
      }

      ++global_k;
      ++k;
      record(global_k, s, k, f_x, gap_gen, gap_van, delta, eta, x);

      if (std::min(gap_gen, gap_van) <= epsilon || global_k >= max_total_iter) {
        out.stages.push_back({s, k, C_offset, gap_gen, gap_van});
        done = true;
        break;
      }
      if (gap_gen > gap_van) {  // restart trigger (k >= 1 here by construction)
        out.stages.push_back({s, k, C_offset, gap_gen, gap_van});
        C_offset = 2.0 * lip * diam * diam / gap_gen;
        ++s;
        break;
      }
    }
  }

  out.x = x;
  out.gap_gen = out.stages.back().final_gap_gen;
  out.gap_vanilla = out.stages.back().final_gap_vanilla;
  out.total_iterations = global_k;
  return out;
}

}  // namespace fw
