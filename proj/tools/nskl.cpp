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
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nskl/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nskl: sup-norm smoothing diagnostics for pseudo-spectral Navier-Stokes"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  for (const auto& name : nskl::subcommand_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "random seed (overrides init.seed)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nskl::kExitIoFailure;
  }

  if (const char* env = std::getenv("NSKL_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n < 1) throw std::invalid_argument("threads");
      nskl::set_worker_threads(n);
    } catch (const std::exception&) {
      std::cerr << "nskl: NSKL_THREADS must be a positive integer\n";
      return nskl::kExitIoFailure;
    }
  }

  const std::string name = app.get_subcommands().front()->get_name();
  nskl::RunConfig cfg;
  try {
    cfg = nskl::parse_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (app.get_subcommands().front()->count("--seed") > 0) cfg.init.seed = seed;
    cfg.validate();
  } catch (const nskl::ConfigError& e) {
    std::cerr << "nskl: " << e.what() << '\n';
    return nskl::kExitIoFailure;
  }
  return nskl::run_subcommand(name, cfg, std::cout);
}
