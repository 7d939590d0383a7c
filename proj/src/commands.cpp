// Copyright 2026 The nskl Authors
//
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

#include "nskl/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "nskl/csv.hpp"
#include "nskl/diagnostics.hpp"
#include "nskl/kernel_lab.hpp"
#include "nskl/multipliers.hpp"
#include "nskl/snapshot_io.hpp"

namespace fs = std::filesystem;

namespace nskl {

namespace {

const char* status_name(int status) {
  switch (status) {
    case kExitPass: return "pass";
    case kExitFail: return "fail";
    case kExitInconclusive: return "inconclusive";
    default: return "io-failure";
  }
}

// Accumulates the human-readable summary; the first line is the status.
class Summary {
 public:
  Summary(std::string name, std::ostream& log) : name_(std::move(name)), log_(log) {}

  template <typename... Args>
  void line(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    body_ += buf;
    body_ += '\n';
    log_ << buf << '\n';
  }

  void check(const std::string& what, double value, double tolerance, bool passed) {
    line("  [%s] %s: %.6g (tolerance %.3g)", passed ? "PASS" : "FAIL", what.c_str(), value, tolerance);
    if (!passed) failed_ = true;
  }

  bool failed() const { return failed_; }

  int finish(const fs::path& dir, int status) {
    std::ofstream out(dir / (name_ + "_summary.txt"), std::ios::trunc);
    out << "status: " << status_name(status) << '\n' << body_;
    if (!out) throw IoError("cannot write summary for " + name_);
    log_ << name_ << ": " << status_name(status) << '\n';
    return status;
  }

 private:
  std::string name_;
  std::ostream& log_;
  std::string body_;
  bool failed_ = false;
};

std::string amplitude_tag(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "A%g", a);
  return buf;
}

SolverConfig window_solver(const RunConfig& cfg, double t_max) {
  SolverConfig s = cfg.solver;
  s.T = t_max;
  s.dt = t_max / cfg.diagnostics.window_steps;
  s.snapshot_stride = 1;
  return s;
}

Trajectory run_model(const RunConfig& cfg, const VectorField& f, const SolverConfig& solver) {
  if (cfg.model.system == SystemKind::navier_stokes) return simulate_nse(f, solver);
  return simulate_illustrative(f, cfg.quadratic_form(), solver);
}

int simulate_cmd(const RunConfig& cfg, std::ostream& log) {
  Summary sum("simulate", log);
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir / "snapshots");
  const VectorField f = initial_datum(cfg);
  const Trajectory traj = run_model(cfg, f, cfg.solver);

  CsvWriter times(dir / "times.csv", {"index", "t", "file"});
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%06zu.klns", k);
    write_snapshot(dir / "snapshots" / name, traj.snapshots[k]);
    times.row({static_cast<long long>(k), traj.times[k], std::string("snapshots/") + name});
  }
  sum.line("system: %s", cfg.model.system == SystemKind::navier_stokes ? "nse" : "illustrative");
  sum.line("grid: dim %d, points %d, box %.17g", cfg.grid.dim, cfg.grid.points, cfg.grid.box_length);
  sum.line("steps: %ld, dt %.17g, snapshots %zu", traj.config.steps(), traj.config.dt, traj.snapshots.size());
  sum.line("|f|_inf: %.17g", traj.initial_max_norm);

  const WindowParams window = WindowParams::make(cfg.window.c_win, traj.initial_max_norm);
  const DiagnosticsReport report = analyze_trajectory(traj, window, cfg.diagnostics.j_max, cfg.window.doubling_factor);
  for (int j = 0; j <= cfg.diagnostics.j_max; ++j) {
    write_phi_csv(dir / ("phi_j" + std::to_string(j) + ".csv"), report.phi[static_cast<std::size_t>(j)]);
  }
  write_v_csv(dir / "v_series.csv", report.v);
  sum.line("fitted C (V-inequality): %.17g", report.v.C);
  if (!report.inconclusive) {
    write_kj_csv(dir / "kj_table.csv", report.K, window.t_max);
    for (std::size_t j = 0; j < report.K.size(); ++j) sum.line("K_%zu: %.17g", j, report.K[j]);
  } else if (!traj.blew_up()) {
    sum.line("window t_max = %.6g not covered by T = %.6g; no K_j table", window.t_max, cfg.solver.T);
  }
  if (traj.blew_up()) {
    sum.line("blow-up declared at t = %.17g", *traj.blowup_time);
    return sum.finish(dir, kExitInconclusive);
  }
  return sum.finish(dir, kExitPass);
}

int verify_kernels_cmd(const RunConfig& cfg, std::ostream& log) {
  Summary sum("verify-kernels", log);
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  const auto& kc = cfg.kernels;
  const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);

  CsvWriter csv(dir / "kernels.csv", {"n", "alpha", "t", "l1_norm", "scaled_norm", "maximal_norm"});
  for (int n : kc.dims) {
    for (int order = 0; order <= kc.max_order; ++order) {
      for (const auto& alpha : multi_indices_of_order(n, order)) {
        const auto scaling = kernel_scaling_check(n, alpha, kc.t_values);
        double min_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < kc.t_values.size(); ++k) {
          const auto maximal = maximal_function_norm(KernelQuery::make(alpha, kc.t_values[k]));
          min_ratio = std::min(min_ratio, maximal.ratio);
          csv.row({static_cast<long long>(n), to_string(alpha), kc.t_values[k], scaling.l1_norms[k],
                   scaling.scaled_norms[k], maximal.maximal_norm});
        }
        const std::string tag = "n=" + std::to_string(n) + " alpha=" + to_string(alpha);
        sum.check(tag + " scaled-norm spread", scaling.spread, 1e-6, scaling.spread <= 1e-6);
        sum.check(tag + " min maximal/L1 ratio", min_ratio, 1.0, min_ratio >= 1.0 - 1e-9);
        if (n == 1 && order == 1) {
          double err = 0.0;
          for (double v : scaling.scaled_norms) err = std::max(err, std::abs(v - inv_sqrt_pi));
          sum.check("n=1 alpha=(1) scaled norm vs 1/sqrt(pi)", err, 1e-8, err <= 1e-8);
        }
      }
    }
  }

  if (kc.composite && !kc.composite_t_values.empty()) {
    CsvWriter comp(dir / "composite_kernels.csv", {"i", "l", "alpha", "t", "box_length", "l1_norm", "scaled_norm"});
    for (int order = 0; order <= kc.composite_max_order; ++order) {
      for (const auto& alpha : multi_indices_of_order(3, order)) {
        for (int i = 0; i < 3; ++i) {
          for (int l = i; l < 3; ++l) {
            std::vector<double> scaled;
            for (double t : kc.composite_t_values) {
              const double box = 48.0 * std::sqrt(t);
              const GridSpec grid(3, kc.composite_points, box);
              const auto norm = composite_kernel_l1_norm(i, l, alpha, t, grid);
              scaled.push_back(std::pow(t, 0.5 * order) * norm.l1);
              comp.row({static_cast<long long>(i + 1), static_cast<long long>(l + 1), to_string(alpha), t, box,
                        norm.l1, scaled.back()});
            }
            const double spread = relative_spread(scaled);
            char tag[96];
            std::snprintf(tag, sizeof tag, "composite k_%d%d alpha=%s spread", i + 1, l + 1, to_string(alpha).c_str());
            sum.check(tag, spread, 0.01, spread <= 0.01);
          }
        }
      }
    }
  }
  return sum.finish(dir, sum.failed() ? kExitFail : kExitPass);
}

int verify_theorem_cmd(const RunConfig& cfg, std::ostream& log) {
  Summary sum("verify-theorem", log);
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  const int j_max = cfg.diagnostics.j_max;
  const bool nse = cfg.model.system == SystemKind::navier_stokes;

  RunConfig unit = cfg;
  unit.init.amplitude = 1.0;
  const VectorField shape = initial_datum(unit);

  std::vector<std::vector<double>> K;  // K[a][j]
  bool inconclusive = false;
  double fitted_C = 0.0;
  sum.line("system: %s, c_win %.6g, window steps %d", nse ? "nse" : "illustrative", cfg.window.c_win,
           cfg.diagnostics.window_steps);
  for (double a : cfg.diagnostics.amplitudes) {
    const VectorField f = scaled(shape, a);
    const double f_inf = max_norm(f);
    if (!(f_inf > 0.0)) throw PreconditionError("verify-theorem: initial datum is zero");
    const WindowParams window = WindowParams::make(cfg.window.c_win, f_inf);
    const Trajectory traj = run_model(cfg, f, window_solver(cfg, window.t_max));
    const std::string tag = amplitude_tag(a);
    if (traj.blew_up()) {
      sum.line("%s: blow-up at t = %.6g inside the window", tag.c_str(), *traj.blowup_time);
      inconclusive = true;
      continue;
    }
    const DiagnosticsReport report = analyze_trajectory(traj, window, j_max, cfg.window.doubling_factor);
    write_kj_csv(dir / ("kj_table_" + tag + ".csv"), report.K, window.t_max);
    for (int j = 0; j <= j_max; ++j) {
      write_phi_csv(dir / ("phi_" + tag + "_j" + std::to_string(j) + ".csv"), report.phi[static_cast<std::size_t>(j)]);
    }
    write_v_csv(dir / ("v_series_" + tag + ".csv"), report.v);
    fitted_C = std::max(fitted_C, report.v.C);

    CsvWriter wb(dir / ("window_bound_" + tag + ".csv"), {"j", "K_j", "C_j", "bound", "measured_max", "margin"});
    for (int j = 0; j <= j_max; ++j) {
      const auto b = smoothing_window_check(traj, window, j);
      wb.row({static_cast<long long>(j), b.K_j, b.C_j, b.bound, b.measured_max, b.margin});
    }

    std::string ks;
    for (double k : report.K) ks += " " + format_real(k);
    sum.line("%s: |f| %.6g, t_max %.6g, K_j:%s", tag.c_str(), f_inf, window.t_max, ks.c_str());
    sum.check(tag + " doubling (factor " + format_real(cfg.window.doubling_factor) + ")",
              static_cast<double>(report.doubling), 1.0, report.doubling);
    if (!report.doubling) {
      const double c = empirical_window(traj, cfg.window.doubling_factor, cfg.window.c_win);
      sum.line("%s: empirical window c = %.6g", tag.c_str(), c);
    }
    for (const auto& c : report.checks) {
      if (c.name.rfind("phi_continuity", 0) == 0) sum.check(tag + " " + c.name, c.value, c.tolerance, c.passed);
    }
    K.push_back(report.K);
  }

  if (K.size() == cfg.diagnostics.amplitudes.size()) {
    CsvWriter col(dir / "collapse.csv", {"j", "spread", "tolerance", "passed"});
    for (int j = 0; j <= j_max; ++j) {
      std::vector<double> kj;
      for (const auto& row : K) kj.push_back(row[static_cast<std::size_t>(j)]);
      const double spread = relative_spread(kj);
      const bool ok = spread <= 0.05;
      col.row({static_cast<long long>(j), spread, 0.05, std::string(ok ? "true" : "false")});
      sum.check("K_" + std::to_string(j) + " amplitude collapse spread", spread, 0.05, ok);
    }
  }

  // Window constants implied by the proofs, from measured constants.
  const auto smoothing = semigroup_smoothing_profile(shape, 1, std::vector<double>{1e-3, 1e-2, 1e-1, 1.0});
  sum.line("measured smoothing constant (j=1): %.6g", smoothing.bound);
  sum.line("fitted V-inequality constant C: %.6g", fitted_C);
  if (nse) {
    if (fitted_C > 0.0) sum.line("c0 = 1/(16 C^4) with fitted C: %.6g", c0_navier_stokes(fitted_C));
  } else {
    const double cg = cfg.quadratic_form().constant();
    sum.line("C_g: %.6g; c0 = 1/(16 C^2 C_g^2) with smoothing C: %.6g", cg, c0_illustrative(smoothing.bound, cg));
  }
  if (inconclusive) return sum.finish(dir, kExitInconclusive);
  return sum.finish(dir, sum.failed() ? kExitFail : kExitPass);
}

int verify_scaling_cmd(const RunConfig& cfg, std::ostream& log) {
  Summary sum("verify-scaling", log);
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  const VectorField f = initial_datum(cfg);
  const ScalingMode mode = cfg.diagnostics.torus_scaling ? ScalingMode::integer_on_torus : ScalingMode::rescaled_box;

  ScalingReport all;
  for (double lambda : cfg.diagnostics.lambdas) {
    const auto r = scaling_equivariance_check(f, lambda, cfg.solver, mode, 2);
    all.rows.insert(all.rows.end(), r.rows.begin(), r.rows.end());
    all.max_rel_error = std::max(all.max_rel_error, r.max_rel_error);
    for (const auto& row : r.rows) {
      char tag[64];
      std::snprintf(tag, sizeof tag, "lambda=%g j=%d relative error", lambda, row.j);
      sum.check(tag, row.rel_error, 1e-6, row.rel_error <= 1e-6);
    }
  }
  write_scaling_csv(dir / "scaling_report.csv", all);

  const double f_inf = max_norm(f);
  if (f_inf > 0.0) {
    const WindowParams window = WindowParams::make(cfg.window.c_win, f_inf);
    const Trajectory traj = simulate_nse(f, window_solver(cfg, window.t_max));
    if (traj.blew_up()) {
      sum.line("blow-up inside the window at t = %.6g", *traj.blowup_time);
      return sum.finish(dir, kExitInconclusive);
    }
    CsvWriter wb(dir / "window_bound.csv", {"j", "K_j", "C_j", "bound", "measured_max", "margin"});
    for (int j = 0; j <= 2; ++j) {
      const auto b = smoothing_window_check(traj, window, j);
      wb.row({static_cast<long long>(j), b.K_j, b.C_j, b.bound, b.measured_max, b.margin});
      sum.check("window bound j=" + std::to_string(j) + " margin", b.margin, 1.0, b.holds);
    }
  }
  return sum.finish(dir, sum.failed() ? kExitFail : kExitPass);
}

int picard_compare_cmd(const RunConfig& cfg, std::ostream& log) {
  Summary sum("picard-compare", log);
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  const VectorField f = initial_datum(cfg);
  const double T = cfg.picard.T;

  SolverConfig ref_cfg = cfg.solver;
  ref_cfg.T = T;
  ref_cfg.dt = T / cfg.picard.reference_steps;
  ref_cfg.snapshot_stride = cfg.picard.reference_steps;
  const Trajectory ref = simulate_nse(f, ref_cfg);
  if (ref.blew_up()) {
    sum.line("reference run blew up at t = %.6g", *ref.blowup_time);
    return sum.finish(dir, kExitInconclusive);
  }
  const VectorField& u_ref = ref.snapshots.back();
  sum.line("T %.6g, reference dt %.6g, |f| %.6g", T, ref_cfg.dt, ref.initial_max_norm);

  PicardOptions opts;
  opts.c_win = cfg.window.c_win;
  opts.dealias = cfg.solver.dealias;
  CsvWriter table(dir / "picard.csv", {"nodes", "iterations", "final_residual", "max_ratio", "discrepancy"});
  CsvWriter hist(dir / "picard_residuals.csv", {"nodes", "iteration", "residual"});
  std::vector<int> nodes = cfg.picard.nodes;
  std::sort(nodes.begin(), nodes.end());
  double finest = 0.0;
  bool ratios_ok = true;
  for (int m : nodes) {
    const PicardResult pr = picard_iterate(f, T, m, cfg.picard.k_max, opts);
    // Ratios below the round-off floor carry no contraction information.
    const double floor = 1e-11 * std::max(1.0, ref.initial_max_norm);
    double max_ratio = 0.0;
    for (std::size_t k = 1; k < pr.residuals.size(); ++k) {
      if (pr.residuals[k - 1] > floor && pr.residuals[k] > floor) {
        max_ratio = std::max(max_ratio, pr.residuals[k] / pr.residuals[k - 1]);
      }
    }
    for (std::size_t k = 0; k < pr.residuals.size(); ++k) {
      hist.row({static_cast<long long>(m), static_cast<long long>(k + 1), pr.residuals[k]});
    }
    VectorField diff = pr.solution;
    for (int c = 0; c < diff.size(); ++c) {
      for (std::size_t p = 0; p < diff[c].size(); ++p) diff[c][p] -= u_ref[c][p];
    }
    finest = max_norm(diff);
    const double last = pr.residuals.empty() ? 0.0 : pr.residuals.back();
    table.row({static_cast<long long>(m), static_cast<long long>(pr.residuals.size()), last, max_ratio, finest});
    sum.line("nodes %d: %zu iterations, residual %.3g, max ratio %.3g, |picard - etd| %.3g%s", m, pr.residuals.size(),
             last, max_ratio, finest, pr.converged ? "" : " (not converged)");
    if (!pr.contracting) sum.line("nodes %d: residual increased (non-contraction)", m);
    ratios_ok = ratios_ok && pr.converged && max_ratio <= 0.8;
  }
  sum.check("residual contraction (max ratio, all node counts)", ratios_ok ? 0.0 : 1.0, 0.8, ratios_ok);
  sum.check("finest Picard vs ETD max-norm discrepancy", finest, 1e-6, finest <= 1e-6);
  return sum.finish(dir, sum.failed() ? kExitFail : kExitPass);
}

int report_cmd(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir = cfg.output_dir;
  std::ostringstream text;
  int worst = kExitPass;
  int found = 0;
  for (const auto& name : subcommand_names()) {
    if (name == "report") continue;
    std::ifstream in(dir / (name + "_summary.txt"));
    if (!in) continue;
    ++found;
    std::string first;
    std::getline(in, first);
    text << "== " << name << " (" << first << ")\n";
    std::string rest;
    while (std::getline(in, rest)) text << rest << '\n';
    text << '\n';
    if (first == "status: fail") worst = kExitFail;
    else if (first == "status: inconclusive" && worst == kExitPass) worst = kExitInconclusive;
    else if (first != "status: pass" && worst == kExitPass) worst = kExitInconclusive;
  }
  if (found == 0) {
    log << "report: no summaries under " << dir.string() << '\n';
    return kExitIoFailure;
  }
  std::ofstream out(dir / "report.txt", std::ios::trunc);
  out << text.str();
  if (!out) throw IoError("cannot write report.txt");
  log << text.str() << "report: " << status_name(worst) << '\n';
  return worst;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"simulate",      "verify-kernels", "verify-theorem",
                                                 "verify-scaling", "picard-compare", "report"};
  return names;
}

VectorField initial_datum(const RunConfig& cfg) {
  const GridSpec grid = cfg.grid_spec();
  const bool nse = cfg.model.system == SystemKind::navier_stokes;
  const double a = cfg.init.amplitude;
  VectorField f = [&] {
    switch (cfg.init.kind) {
      case InitKind::taylor_green: return taylor_green(grid, a);
      case InitKind::shear: return shear_mode(grid, a);
      case InitKind::random:
        return nse ? random_divergence_free(grid, cfg.init.seed, cfg.init.band, a)
                   : random_band_limited(grid, cfg.init.seed, cfg.init.band, a);
      case InitKind::file: break;
    }
    VectorField u = read_snapshot(cfg.init.file);
    if (!(u.grid() == grid)) throw ConfigError("config: init.file: grid does not match grid.*");
    if (u.size() != grid.dim()) throw ConfigError("config: init.file: component count must equal grid.dim");
    return u;
  }();
  if (nse && !certify_divergence_free(f)) {
    throw ConfigError("config: init: datum is not divergence free (required by model.system = nse)");
  }
  return f;
}

int run_subcommand(const std::string& name, const RunConfig& cfg, std::ostream& log) {
  static const std::map<std::string, int (*)(const RunConfig&, std::ostream&)> table = {
      {"simulate", simulate_cmd},           {"verify-kernels", verify_kernels_cmd},
      {"verify-theorem", verify_theorem_cmd}, {"verify-scaling", verify_scaling_cmd},
      {"picard-compare", picard_compare_cmd}, {"report", report_cmd},
  };
  const auto it = table.find(name);
  if (it == table.end()) {
    log << "nskl: unknown subcommand '" << name << "'\n";
    return kExitIoFailure;
  }
  try {
    return it->second(cfg, log);
  } catch (const IoError& e) {
    log << "nskl: " << name << ": " << e.what() << '\n';
  } catch (const ConfigError& e) {
    log << "nskl: " << name << ": " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    log << "nskl: " << name << ": invalid configuration: " << e.what() << '\n';
  } catch (const fs::filesystem_error& e) {
    log << "nskl: " << name << ": " << e.what() << '\n';
  }
  return kExitIoFailure;
}

}  // namespace nskl
