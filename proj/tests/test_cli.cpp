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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "nskl/commands.hpp"
#include "nskl/snapshot_io.hpp"

using namespace nskl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

RunConfig small(const fs::path& out) {
  RunConfig cfg = parse_config_text(
      "grid.points = 16\n"
      "solver.dt = 0.01\n"
      "solver.T = 0.1\n"
      "diagnostics.j_max = 1\n");
  cfg.output_dir = out;
  return cfg;
}

int run(const std::string& name, const RunConfig& cfg) {
  std::ostringstream log;
  return run_subcommand(name, cfg, log);
}

int cli(const std::string& args) {
  const std::string cmd = std::string(NSKL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("simulate on zero data writes zero snapshots") {
  TempDir tmp("nskl_cli_zero");
  RunConfig cfg = small(tmp.path);
  cfg.init.amplitude = 0.0;
  CHECK(run("simulate", cfg) == kExitPass);
  int count = 0;
  for (const auto& e : fs::directory_iterator(tmp.path / "snapshots")) {
    const auto u = read_snapshot(e.path());
    CHECK(max_norm(u) == 0.0);
    ++count;
  }
  CHECK(count == 11);
  CHECK(first_line(tmp.path / "phi_j0.csv") == "t,phi");
  CHECK(first_line(tmp.path / "v_series.csv") == "t,V,fitted_C");
  CHECK(first_line(tmp.path / "simulate_summary.txt") == "status: pass");
}

TEST_CASE("simulate output is byte-identical across runs") {
  TempDir a("nskl_cli_det_a");
  TempDir b("nskl_cli_det_b");
  RunConfig cfg = small(a.path);
  cfg.init.kind = InitKind::random;
  cfg.init.seed = 17;
  cfg.solver.T = cfg.window.c_win;  // covers the window, so kj_table is written
  REQUIRE(run("simulate", cfg) == kExitPass);
  cfg.output_dir = b.path;
  REQUIRE(run("simulate", cfg) == kExitPass);
  for (const char* f : {"phi_j0.csv", "phi_j1.csv", "v_series.csv", "kj_table.csv", "times.csv",
                        "simulate_summary.txt", "snapshots/snap_000005.klns"}) {
    CAPTURE(f);
    CHECK(slurp(a.path / f) == slurp(b.path / f));
    CHECK(!slurp(a.path / f).empty());
  }
  CHECK(first_line(a.path / "kj_table.csv") == "j,K_j,window");

  TempDir c("nskl_cli_det_c");
  cfg.output_dir = c.path;
  cfg.init.seed = 18;
  REQUIRE(run("simulate", cfg) == kExitPass);
  CHECK(slurp(a.path / "v_series.csv") != slurp(c.path / "v_series.csv"));
}

TEST_CASE("verification subcommands on small configurations") {
  TempDir tmp("nskl_cli_verify");
  RunConfig cfg = small(tmp.path);
  cfg.kernels.dims = {1};
  cfg.kernels.max_order = 2;
  cfg.kernels.composite_points = 16;
  cfg.kernels.composite_max_order = 0;
  CHECK(run("verify-kernels", cfg) == kExitPass);
  CHECK(first_line(tmp.path / "kernels.csv") == "n,alpha,t,l1_norm,scaled_norm,maximal_norm");

  CHECK(run("verify-scaling", cfg) == kExitPass);
  CHECK(first_line(tmp.path / "scaling_report.csv") == "j,lambda,rel_error");

  cfg.diagnostics.amplitudes = {1.0, 2.0};
  cfg.diagnostics.j_max = 0;
  CHECK(run("verify-theorem", cfg) == kExitPass);
  CHECK(first_line(tmp.path / "kj_table_A2.csv") == "j,K_j,window");

  cfg.picard.nodes = {16};
  cfg.picard.reference_steps = 200;
  CHECK(run("picard-compare", cfg) == kExitPass);
  CHECK(first_line(tmp.path / "picard.csv") == "nodes,iterations,final_residual,max_ratio,discrepancy");

  CHECK(run("report", cfg) == kExitPass);
  const std::string report = slurp(tmp.path / "report.txt");
  CHECK(report.find("== verify-kernels (status: pass)") != std::string::npos);
  CHECK(report.find("== picard-compare (status: pass)") != std::string::npos);
}

TEST_CASE("report folds statuses") {
  TempDir tmp("nskl_cli_report");
  RunConfig cfg = small(tmp.path);
  CHECK(run("report", cfg) == kExitIoFailure);
  std::ofstream(tmp.path / "simulate_summary.txt") << "status: pass\n";
  CHECK(run("report", cfg) == kExitPass);
  std::ofstream(tmp.path / "verify-theorem_summary.txt") << "status: inconclusive\n";
  CHECK(run("report", cfg) == kExitInconclusive);
  std::ofstream(tmp.path / "verify-scaling_summary.txt") << "status: fail\n";
  CHECK(run("report", cfg) == kExitFail);
}

TEST_CASE("failures map to exit status 3") {
  TempDir tmp("nskl_cli_fail");
  RunConfig cfg = small(tmp.path / "blocked");
  std::ofstream(tmp.path / "blocked") << "a file, not a directory";
  CHECK(run("simulate", cfg) == kExitIoFailure);
  CHECK(run("no-such-command", cfg) == kExitIoFailure);

  // Picard outside its contraction window is a configuration error.
  cfg.output_dir = tmp.path / "out";
  cfg.picard.T = 1.0;
  CHECK(run("picard-compare", cfg) == kExitIoFailure);
}

TEST_CASE("command-line driver") {
  TempDir tmp("nskl_cli_binary");
  const fs::path conf = tmp.path / "run.conf";
  std::ofstream(conf) << "grid.points = 16\nsolver.dt = 0.01\nsolver.T = 0.05\ndiagnostics.j_max = 0\n"
                      << "init.kind = random\n";
  const std::string out = (tmp.path / "out").string();
  CHECK(cli("simulate --config " + conf.string() + " --out " + out) == 0);
  CHECK(fs::exists(tmp.path / "out" / "phi_j0.csv"));
  const std::string seed1 = slurp(tmp.path / "out" / "v_series.csv");
  CHECK(cli("simulate --config " + conf.string() + " --out " + out + " --seed 99") == 0);
  CHECK(slurp(tmp.path / "out" / "v_series.csv") != seed1);

  CHECK(cli("simulate --config " + (tmp.path / "missing.conf").string()) == 3);
  CHECK(cli("simulate") == 3);
  CHECK(cli("frobnicate --config " + conf.string()) == 3);
  CHECK(cli("--help") == 0);

  const std::string env_cmd = "NSKL_THREADS=zero " + std::string(NSKL_CLI_PATH) + " simulate --config " +
                              conf.string() + " --out " + out + " > /dev/null 2>&1";
  const int rc = std::system(env_cmd.c_str());
  CHECK(WEXITSTATUS(rc) == 3);

  std::ofstream(conf) << "viscocity = 1\n";
  CHECK(cli("simulate --config " + conf.string()) == 3);
}
