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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nskl/config.hpp"

namespace nskl {

enum ExitStatus : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitInconclusive = 2,
  kExitIoFailure = 3,
};

const std::vector<std::string>& subcommand_names();

/// The configured initial datum at init.amplitude (file data as stored).
/// Navier-Stokes data are certified divergence free.
VectorField initial_datum(const RunConfig& cfg);

/// Runs one workflow, writing CSV, snapshots and `<name>_summary.txt`
/// under cfg.output_dir. Progress goes to `log`. Never throws: I/O and
/// configuration failures map to kExitIoFailure.
int run_subcommand(const std::string& name, const RunConfig& cfg, std::ostream& log);

}  // namespace nskl
