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

#include "nskl/csv.hpp"

#include <cmath>
#include <cstdio>

#include "nskl/snapshot_io.hpp"

namespace nskl {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::trunc), columns_(header.size()), path_(path) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<CsvCell> cells) { row(std::vector<CsvCell>(cells)); }

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != columns_) throw std::logic_error("CSV row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, double>) {
            out_ << format_real(c);
          } else if constexpr (std::is_same_v<T, std::string>) {
            if (c.find_first_of(",\"\n") == std::string::npos) {
              out_ << c;
            } else {
              out_ << '"';
              for (char ch : c) out_ << (ch == '"' ? "\"\"" : std::string(1, ch));
              out_ << '"';
            }
          } else {
            out_ << c;
          }
        },
        cells[i]);
  }
  out_ << '\n';
  if (!out_) throw IoError("write failed on " + path_.string());
}

void write_phi_csv(const std::filesystem::path& path, const Series& phi) {
  CsvWriter w(path, {"t", "phi"});
  for (std::size_t k = 0; k < phi.t.size(); ++k) w.row({phi.t[k], phi.value[k]});
}

void write_v_csv(const std::filesystem::path& path, const VSeries& v) {
  CsvWriter w(path, {"t", "V", "fitted_C"});
  for (std::size_t k = 0; k < v.t.size(); ++k) w.row({v.t[k], v.V[k], v.fitted_C[k]});
}

void write_kj_csv(const std::filesystem::path& path, std::span<const double> K, double t_max) {
  CsvWriter w(path, {"j", "K_j", "window"});
  for (std::size_t j = 0; j < K.size(); ++j) w.row({static_cast<long long>(j), K[j], t_max});
}

void write_scaling_csv(const std::filesystem::path& path, const ScalingReport& report) {
  CsvWriter w(path, {"j", "lambda", "rel_error"});
  for (const auto& r : report.rows) w.row({static_cast<long long>(r.j), r.lambda, r.rel_error});
}

}  // namespace nskl
