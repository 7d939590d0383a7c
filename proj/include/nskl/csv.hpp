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

// CSV emission with '.' decimals and 17 significant digits, so re-runs
// compare byte for byte.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

#include "nskl/diagnostics.hpp"

namespace nskl {

using CsvCell = std::variant<double, long long, std::string>;

std::string format_real(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  void row(std::initializer_list<CsvCell> cells);
  void row(const std::vector<CsvCell>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::filesystem::path path_;
};

void write_phi_csv(const std::filesystem::path& path, const Series& phi);
void write_v_csv(const std::filesystem::path& path, const VSeries& v);
void write_kj_csv(const std::filesystem::path& path, std::span<const double> K, double t_max);
void write_scaling_csv(const std::filesystem::path& path, const ScalingReport& report);

}  // namespace nskl
