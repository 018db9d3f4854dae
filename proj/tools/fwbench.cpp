#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "fw/geometry.hpp"
#include "fw/io.hpp"
#include "fw/objectives.hpp"
#include "fw/restart.hpp"
#include "fw/solver.hpp"
#include "fw/synthetic.hpp"

namespace {

using namespace fw;

struct Instance {
  std::unique_ptr<Objective> problem;
  FeasibleRegion region = FeasibleRegion::l2_ball(1, 1.0);
  Vector x0;
  double lip = 0.0;
  double diam = 0.0;
};

Instance build_instance(const RunConfig& cfg) {
  Instance inst;
  if (cfg.problem == "quadratic") {
    inst.problem = make_quadratic(cfg.dim, cfg.target_norm, cfg.seed);
  } else if (cfg.problem == "logistic") {
    if (!cfg.dataset.empty()) {
      SparseDataset data = parse_libsvm(cfg.dataset);
      inst.problem = std::make_unique<LogisticObjective>(std::move(data.rows),
                                                         std::move(data.labels), data.dim);
    } else {
      inst.problem = make_logistic(cfg.num_samples, cfg.dim, cfg.density, cfg.seed);
    }
  } else if (cfg.problem == "matcomp") {
    if (!cfg.dataset.empty()) {
      inst.problem = load_ratings(cfg.dataset);
    } else {
      inst.problem = make_matcomp(cfg.mat_rows, cfg.mat_cols, cfg.mat_rank,
                                  cfg.observed_fraction, cfg.seed);
    }
  } else {
    throw std::invalid_argument("unknown problem: " + cfg.problem);
  }

  const int d = inst.problem->dim();
  if (cfg.problem == "matcomp") {
    if (cfg.constraint != "nuclear") {
      throw std::invalid_argument("matcomp requires constraint=nuclear");
    }
    auto* mc = dynamic_cast<MatrixCompletionObjective*>(inst.problem.get());
    inst.region = FeasibleRegion::nuclear_ball(mc->rows(), mc->cols(), cfg.radius, cfg.seed);
    // rank-1 start at half the nuclear radius
    std::mt19937_64 rng(cfg.seed + 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector p(mc->rows()), q(mc->cols());
    for (int i = 0; i < p.size(); ++i) p[i] = gauss(rng);
    for (int i = 0; i < q.size(); ++i) q[i] = gauss(rng);
    p.normalize();
    q.normalize();
    Matrix x0m = 0.5 * cfg.radius * (p * q.transpose());
    inst.x0 = Eigen::Map<Vector>(x0m.data(), x0m.size());
  } else {
    if (cfg.constraint == "l2") inst.region = FeasibleRegion::l2_ball(d, cfg.radius);
    else if (cfg.constraint == "l1") inst.region = FeasibleRegion::l1_ball(d, cfg.radius);
    else if (cfg.constraint == "nsupport")
      inst.region = FeasibleRegion::nsupport_ball(d, cfg.radius, cfg.nsupport);
    else throw std::invalid_argument("constraint " + cfg.constraint + " needs a vector problem");
    inst.x0 = Vector::Zero(d);
  }
  inst.lip = inst.problem->global_lipschitz();
  inst.diam = inst.region.diameter();
  return inst;
}

StepPolicy policy_from_config(const RunConfig& cfg) {
  StepPolicy p;
  p.rule = parse_step_rule(cfg.policy);
  p.delta = cfg.delta;
  p.c = cfg.c;
  p.k0 = cfg.k0;
  p.grid_size = cfg.grid_size;
  return p;
}

struct BoundChecker {
  StepRule rule;
  double lip, diam;
  StepPolicy policy;
  double prev_gap = std::numeric_limits<double>::infinity();
  long bad_row = -1;
  std::string message;

  bool row(const MomentumState& s) {
    const double ld2 = lip * diam * diam;
    if (s.gap_gen < -1e-9) return fail(s.k, "negative generalized gap");
    switch (rule) {
      case StepRule::OpenLoop2:
      case StepRule::Smooth:
      case StepRule::DirectionalSmooth:
      case StepRule::LineSearch:
        if (s.k >= 1 && s.gap_gen > 2.0 * ld2 / (s.k + 1) + 1e-9)
          return fail(s.k, "gap exceeds 2LD^2/(k+1)");
        break;
      case StepRule::Uniform:
        if (s.k >= 1 &&
            s.gap_gen > lip * diam * diam * std::log(static_cast<double>(s.k) + 1.0) /
                                (2.0 * s.k) + 1e-9)
          return fail(s.k, "gap exceeds LD^2 ln(k+1)/(2k)");
        break;
      case StepRule::JointDescent:
        if (s.gap_gen > prev_gap + 1e-9) return fail(s.k, "gap not monotone");
        break;
      case StepRule::ConstantDelta:
        // the explicit constant is certified for the (0.8, 2, 2) instantiation
        if (policy.delta == 0.8 && policy.c == 2.0 && policy.k0 == 2.0 && s.k >= 1) {
          const double bound = 3.05 * lip * diam / (static_cast<double>(s.k) - 1.0 + policy.k0);
          if (s.momentum_error > bound + 1e-9)
            return fail(s.k, "momentum error exceeds Lemma-2 bound");
        }
        break;
    }
    prev_gap = s.gap_gen;
    return true;
  }

  bool fail(long k, const std::string& what) {
    bad_row = k;
    message = what;
    return false;
  }
};

int check_restart_bounds(const RestartResult& res, double lip, double diam) {
  const double ld2 = lip * diam * diam;
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    const int s = res.row_stage[i];
    const long k = res.row_stage_k[i];
    const double gap = res.trace[i].gap_gen;
    if (gap < -1e-9) {
      std::cerr << "bound violation at row " << i << ": negative gap\n";
      return 3;
    }
    if (k < 1) continue;
    const double cs = res.stages[s].C_s;
    const double bound = s == 0 ? 2.0 * ld2 / (k + 1) : 2.0 * ld2 / (k + cs);
    if (gap > bound + 1e-9) {
      std::cerr << "bound violation at row " << i << " (stage " << s << ", k " << k << ")\n";
      return 3;
    }
  }
  long completed = 0;
  for (std::size_t s = 1; s < res.stages.size(); ++s) {
    completed += res.stages[s - 1].K_s;
    if (res.stages[s].C_s < 1.0 + static_cast<double>(completed) - 1e-6) {
      std::cerr << "bound violation: stage offset C^" << s << " too small\n";
      return 3;
    }
  }
  return 0;
}

void print_summary(const std::string& algo, const std::vector<TraceRecord>& trace,
                   long iterations) {
  const auto& last = trace.back();
  std::printf("algorithm:   %s\n", algo.c_str());
  std::printf("iterations:  %ld\n", iterations);
  std::printf("final f:     %.12g\n", last.f);
  std::printf("final gap:   %.12g\n", last.gap_gen);
  if (last.gap_vanilla) std::printf("vanilla gap: %.12g\n", *last.gap_vanilla);
}

int cmd_run(const RunConfig& cfg, bool check_bounds, bool timings) {
  cfg.validate();
  Instance inst = build_instance(cfg);
  RunOptions opts;
  opts.emit_vanilla_gap = cfg.emit_vanilla_gap;
  opts.record_timings = timings;

  std::vector<TraceRecord> trace;
  long iterations = 0;
  int rc = 0;

  if (cfg.algorithm == "fw") {
    FwStepRule rule;
    if (cfg.policy == "open-loop-2") rule = FwStepRule::OpenLoop2;
    else if (cfg.policy == "smooth") rule = FwStepRule::Smooth;
    else throw std::invalid_argument("fw supports policies open-loop-2 | smooth");
    RunResult res = run_fw(*inst.problem, inst.region, rule, cfg.max_iter, cfg.epsilon,
                           inst.x0, opts);
    if (check_bounds) {
      for (const auto& r : res.trace) {
        if (r.gap_gen < -1e-9) {
          std::cerr << "bound violation at row " << r.k << ": negative FW gap\n";
          return 3;
        }
      }
    }
    trace = std::move(res.trace);
    iterations = res.iterations;
  } else if (cfg.algorithm == "hfw") {
    StepPolicy policy = policy_from_config(cfg);
    BoundChecker checker{policy.rule, inst.lip, inst.diam, policy};
    if (check_bounds) {
      opts.observer = [&](const MomentumState& s) {
        if (!checker.row(s)) {
          throw std::runtime_error("bound violation at row " + std::to_string(checker.bad_row) +
                                   ": " + checker.message);
        }
      };
    }
    RunResult res = run_hfw(*inst.problem, inst.region, policy, cfg.max_iter, cfg.epsilon,
                            inst.x0, opts);
    trace = std::move(res.trace);
    iterations = res.iterations;
  } else {  // restart
    RestartEta mode = cfg.policy == "open-loop-2" ? RestartEta::DeltaMatched
                                                  : parse_restart_eta(cfg.policy);
    RestartResult res = run_restart(*inst.problem, inst.region, mode, cfg.max_iter,
                                    cfg.epsilon, inst.x0, opts);
    if (check_bounds) {
      rc = check_restart_bounds(res, inst.lip, inst.diam);
      if (rc != 0) return rc;
    }
    trace = std::move(res.trace);
    iterations = res.total_iterations;
    print_summary(cfg.algorithm, trace, iterations);
    std::printf("stages:\n");
    for (const auto& st : res.stages) {
      std::printf("  s=%d K=%ld C=%.12g gap=%.12g vanilla=%.12g\n", st.s, st.K_s, st.C_s,
                  st.final_gap_gen, st.final_gap_vanilla);
    }
    if (!cfg.trace_path.empty()) write_trace(cfg.trace_path, trace);
    return 0;
  }

  print_summary(cfg.algorithm, trace, iterations);
  if (!cfg.trace_path.empty()) write_trace(cfg.trace_path, trace);
  return rc;
}

int cmd_compare(const std::vector<std::string>& config_paths,
                const std::vector<std::string>& overrides, const std::string& out_path,
                bool timings) {
  std::vector<RunConfig> cfgs;
  for (const auto& p : config_paths) {
    RunConfig cfg = RunConfig::from_file(p);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value");
      cfg.apply_override(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    cfgs.push_back(std::move(cfg));
  }
  if (cfgs.empty()) throw std::invalid_argument("compare: at least one config required");
  for (std::size_t i = 1; i < cfgs.size(); ++i) {
    const auto& a = cfgs[0];
    const auto& b = cfgs[i];
    if (a.problem != b.problem || a.constraint != b.constraint || a.radius != b.radius ||
        a.nsupport != b.nsupport || a.dataset != b.dataset || a.seed != b.seed ||
        a.dim != b.dim || a.num_samples != b.num_samples) {
      throw std::invalid_argument("compare: configs must share problem and region");
    }
  }

  struct Leg {
    std::string name;
    std::vector<TraceRecord> trace;
  };
  std::vector<Leg> legs;
  for (const auto& cfg : cfgs) {
    Instance inst = build_instance(cfg);
    RunOptions opts;
    opts.emit_vanilla_gap = cfg.emit_vanilla_gap;
    opts.record_timings = timings;
    Leg leg;
    leg.name = cfg.algorithm + "-" + cfg.policy;
    if (cfg.algorithm == "fw") {
      FwStepRule rule = cfg.policy == "smooth" ? FwStepRule::Smooth : FwStepRule::OpenLoop2;
      leg.trace = run_fw(*inst.problem, inst.region, rule, cfg.max_iter, cfg.epsilon,
                         inst.x0, opts).trace;
    } else if (cfg.algorithm == "hfw") {
      leg.trace = run_hfw(*inst.problem, inst.region, policy_from_config(cfg), cfg.max_iter,
                          cfg.epsilon, inst.x0, opts).trace;
    } else {
      RestartEta mode = cfg.policy == "open-loop-2" ? RestartEta::DeltaMatched
                                                    : parse_restart_eta(cfg.policy);
      leg.trace = run_restart(*inst.problem, inst.region, mode, cfg.max_iter, cfg.epsilon,
                              inst.x0, opts).trace;
    }
    legs.push_back(std::move(leg));
  }

  // certified lower bound on f(x*): best Phi_k(v_k) = f_k - gap_k seen anywhere
  double lower_bound = -std::numeric_limits<double>::infinity();
  for (const auto& leg : legs) {
    for (const auto& r : leg.trace) lower_bound = std::max(lower_bound, r.f - r.gap_gen);
  }

  std::size_t max_rows = 0;
  for (const auto& leg : legs) max_rows = std::max(max_rows, leg.trace.size());

  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot write " + out_path);
  out << "k";
  for (const auto& leg : legs) {
    out << ',' << leg.name << "_f," << leg.name << "_gap_gen," << leg.name << "_primal_err";
  }
  out << '\n';
  char buf[64];
  auto f17 = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  for (std::size_t row = 0; row < max_rows; ++row) {
    out << row;
    for (const auto& leg : legs) {
      if (row < leg.trace.size()) {
        const auto& r = leg.trace[row];
        out << ',' << f17(r.f) << ',' << f17(r.gap_gen) << ',' << f17(r.f - lower_bound);
      } else {
        out << ",,,";
      }
    }
    out << '\n';
  }

  std::printf("certified lower bound on f*: %.12g\n", lower_bound);
  std::string best;
  double best_err = std::numeric_limits<double>::infinity();
  for (const auto& leg : legs) {
    const double err = leg.trace.back().f - lower_bound;
    std::printf("%-28s final f %.12g  primal error %.12g\n", leg.name.c_str(),
                leg.trace.back().f, err);
    if (err < best_err) {
      best_err = err;
      best = leg.name;
    }
  }
  std::printf("lowest certified primal error: %s\n", best.c_str());
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

int cmd_selfcheck(bool inject_fault) {
  bool all_ok = true;
  auto report = [&](const std::string& name, bool ok) {
    std::printf("%-24s %s\n", name.c_str(), ok ? "PASS" : "FAIL");
    all_ok = all_ok && ok;
  };

  // LMO closed forms vs exhaustive enumeration
  {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto l1 = FeasibleRegion::l1_ball(8, 1.5);
    const auto ns = FeasibleRegion::nsupport_ball(8, 2.0, 2);
    bool ok = true;
    for (int t = 0; t < 200 && ok; ++t) {
      Vector g(8);
      for (int i = 0; i < 8; ++i) g[i] = gauss(rng);
      for (const auto* region : {&l1, &ns}) {
        Vector fast = region->lmo(g);
        if (inject_fault) fast[0] += 1e-6;
        const Vector brute = lmo_bruteforce(g, *region);
        if ((fast - brute).lpNorm<Eigen::Infinity>() > 1e-12) ok = false;
      }
    }
    report("lmo-equivalence", ok);
  }

  // analytic gradients vs central differences
  {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto quad = make_quadratic(10, 0.5, 3);
    auto logi = make_logistic(20, 10, 0.4, 4);
    auto mc = make_matcomp(8, 6, 2, 0.4, 5);
    bool ok = true;
    for (int t = 0; t < 5; ++t) {
      Vector xq(10), xl(10), xm(48);
      for (int i = 0; i < 10; ++i) xq[i] = gauss(rng);
      for (int i = 0; i < 10; ++i) xl[i] = gauss(rng);
      for (int i = 0; i < 48; ++i) xm[i] = gauss(rng);
      if (finite_difference_check(*quad, xq) > 1e-7) ok = false;
      if (finite_difference_check(*logi, xl) > 1e-5) ok = false;
      if (finite_difference_check(*mc, xm) > 1e-7) ok = false;
    }
    report("gradient-check", ok);
  }

  // recursive gap offset vs explicit weighted-hyperplane sum
  {
    auto quad = make_quadratic(5, 0.5, 9);
    const auto region = FeasibleRegion::l2_ball(5, 1.0);
    Vector x0 = Vector::Zero(5);
    x0[0] = 1.0;
    MomentumState state = hfw_init(*quad, region, x0);
    StepPolicy policy;
    std::vector<double> deltas;
    std::vector<Vector> xs{state.x}, grads{quad->gradient(state.x)};
    std::vector<double> fs{state.f_x};
    bool ok = true;
    for (int k = 0; k < 30; ++k) {
      state = hfw_step(state, *quad, region, policy);
      deltas.push_back(state.delta);
      const double recursive = state.C + state.g.dot(state.v);
      // Phi_{k+1}(v) from the stored history
      double explicit_phi = 0.0;
      for (std::size_t tau = 0; tau < xs.size(); ++tau) {
        double w = tau == 0 ? 1.0 : deltas[tau];
        for (std::size_t j = tau + 1; j < deltas.size(); ++j) w *= 1.0 - deltas[j];
        explicit_phi += w * (fs[tau] + grads[tau].dot(state.v - xs[tau]));
      }
      const double scale = std::max(1.0, std::abs(explicit_phi));
      if (std::abs(recursive - explicit_phi) / scale > 1e-8) ok = false;
      xs.push_back(state.x);
      grads.push_back(quad->gradient(state.x));
      fs.push_back(state.f_x);
    }
    report("phi-recursion", ok);
  }

  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frank-Wolfe solvers with heavy-ball momentum: benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::vector<std::string> overrides;
  bool check_bounds = false, timings = false;
  long long seed_override = -1;

  auto* run = app.add_subcommand("run", "run one configured experiment");
  run->add_option("--config", config_path, "flat key=value config file");
  run->add_option("--set", overrides, "override config entries (key=value)");
  run->add_option("--seed", seed_override, "override the RNG seed");
  run->add_option("--out", out_path, "override the trace output path");
  run->add_flag("--check-bounds", check_bounds, "assert the applicable certificate bound per row");
  run->add_flag("--timings", timings, "record wall-clock timings in the trace");

  std::vector<std::string> compare_configs;
  std::string compare_out = "compare.csv";
  auto* compare = app.add_subcommand("compare", "run several configs on one instance");
  compare->add_option("configs", compare_configs, "config files")->required();
  compare->add_option("--set", overrides, "override entries applied to every config");
  compare->add_option("--out", compare_out, "merged wide CSV output path");
  compare->add_flag("--timings", timings, "record wall-clock timings");

  bool inject_fault = false;
  auto* selfcheck = app.add_subcommand("selfcheck", "run built-in consistency checks");
  selfcheck->add_flag("--inject-lmo-fault", inject_fault,
                      "perturb the LMO under test (verifies the check can fail)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::from_file(config_path);
      for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value");
        cfg.apply_override(kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
      if (!out_path.empty()) cfg.trace_path = out_path;
      return cmd_run(cfg, check_bounds, timings);
    }
    if (compare->parsed()) return cmd_compare(compare_configs, overrides, compare_out, timings);
    if (selfcheck->parsed()) return cmd_selfcheck(inject_fault);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
