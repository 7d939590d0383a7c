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

#include "nskl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nskl {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Cursor {
  int line;
  std::string key;
  std::string value;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("config line " + std::to_string(line) + ": " + key + ": " + what);
  }

  double real() const {
    double v = 0.0;
    const auto* end = value.data() + value.size();
    auto [p, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v)) fail("expected a number, got '" + value + "'");
    return v;
  }

  long long integer() const {
    long long v = 0;
    const auto* end = value.data() + value.size();
    auto [p, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || p != end) fail("expected an integer, got '" + value + "'");
    return v;
  }

  int int32() const {
    const long long v = integer();
    if (v < -(1LL << 31) || v >= (1LL << 31)) fail("integer out of range");
    return static_cast<int>(v);
  }

  bool flag() const {
    if (value == "true" || value == "on" || value == "1") return true;
    if (value == "false" || value == "off" || value == "0") return false;
    fail("expected true/false, got '" + value + "'");
  }

  std::vector<std::string> items() const {
    std::string v = value;
    if (!v.empty() && v.front() == '[') {
      if (v.back() != ']') fail("unterminated list");
      v = v.substr(1, v.size() - 2);
    }
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail("empty list item");
      out.push_back(item);
    }
    return out;
  }

  std::vector<double> reals() const {
    std::vector<double> out;
    for (const auto& s : items()) out.push_back(Cursor{line, key, s}.real());
    return out;
  }

  std::vector<int> ints() const {
    std::vector<int> out;
    for (const auto& s : items()) out.push_back(Cursor{line, key, s}.int32());
    return out;
  }
};

using Setter = std::function<void(RunConfig&, const Cursor&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.dim", [](RunConfig& c, const Cursor& v) { c.grid.dim = v.int32(); }},
      {"grid.points", [](RunConfig& c, const Cursor& v) { c.grid.points = v.int32(); }},
      {"grid.box_length", [](RunConfig& c, const Cursor& v) { c.grid.box_length = v.real(); }},
      {"init.kind",
       [](RunConfig& c, const Cursor& v) {
         if (v.value == "taylor-green") c.init.kind = InitKind::taylor_green;
         else if (v.value == "random") c.init.kind = InitKind::random;
         else if (v.value == "shear") c.init.kind = InitKind::shear;
         else if (v.value == "file") c.init.kind = InitKind::file;
         else v.fail("expected taylor-green, random, shear or file");
       }},
      {"init.amplitude", [](RunConfig& c, const Cursor& v) { c.init.amplitude = v.real(); }},
      {"init.seed",
       [](RunConfig& c, const Cursor& v) {
         const long long s = v.integer();
         if (s < 0) v.fail("seed must be >= 0");
         c.init.seed = static_cast<std::uint64_t>(s);
       }},
      {"init.band", [](RunConfig& c, const Cursor& v) { c.init.band = v.int32(); }},
      {"init.file", [](RunConfig& c, const Cursor& v) { c.init.file = v.value; }},
      {"model.system",
       [](RunConfig& c, const Cursor& v) {
         if (v.value == "nse") c.model.system = SystemKind::navier_stokes;
         else if (v.value == "illustrative") c.model.system = SystemKind::illustrative;
         else v.fail("expected nse or illustrative");
       }},
      {"model.direction", [](RunConfig& c, const Cursor& v) { c.model.direction = v.int32(); }},
      {"model.g_coeffs", [](RunConfig& c, const Cursor& v) { c.model.g_coeffs = v.reals(); }},
      {"solver.dt", [](RunConfig& c, const Cursor& v) { c.solver.dt = v.real(); }},
      {"solver.T", [](RunConfig& c, const Cursor& v) { c.solver.T = v.real(); }},
      {"solver.scheme",
       [](RunConfig& c, const Cursor& v) {
         if (v.value != "etd-rk2") v.fail("only etd-rk2 is available");
         c.solver.scheme = Scheme::etd_rk2;
       }},
      {"solver.dealias", [](RunConfig& c, const Cursor& v) { c.solver.dealias = v.flag(); }},
      {"solver.snapshot_stride", [](RunConfig& c, const Cursor& v) { c.solver.snapshot_stride = v.int32(); }},
      {"window.c_win", [](RunConfig& c, const Cursor& v) { c.window.c_win = v.real(); }},
      {"window.doubling_factor", [](RunConfig& c, const Cursor& v) { c.window.doubling_factor = v.real(); }},
      {"diagnostics.j_max", [](RunConfig& c, const Cursor& v) { c.diagnostics.j_max = v.int32(); }},
      {"diagnostics.lambdas", [](RunConfig& c, const Cursor& v) { c.diagnostics.lambdas = v.reals(); }},
      {"diagnostics.amplitudes", [](RunConfig& c, const Cursor& v) { c.diagnostics.amplitudes = v.reals(); }},
      {"diagnostics.window_steps", [](RunConfig& c, const Cursor& v) { c.diagnostics.window_steps = v.int32(); }},
      {"diagnostics.scaling_mode",
       [](RunConfig& c, const Cursor& v) {
         if (v.value == "rescaled-box") c.diagnostics.torus_scaling = false;
         else if (v.value == "torus") c.diagnostics.torus_scaling = true;
         else v.fail("expected rescaled-box or torus");
       }},
      {"picard.T", [](RunConfig& c, const Cursor& v) { c.picard.T = v.real(); }},
      {"picard.nodes", [](RunConfig& c, const Cursor& v) { c.picard.nodes = v.ints(); }},
      {"picard.k_max", [](RunConfig& c, const Cursor& v) { c.picard.k_max = v.int32(); }},
      {"picard.reference_steps", [](RunConfig& c, const Cursor& v) { c.picard.reference_steps = v.int32(); }},
      {"kernels.dims", [](RunConfig& c, const Cursor& v) { c.kernels.dims = v.ints(); }},
      {"kernels.max_order", [](RunConfig& c, const Cursor& v) { c.kernels.max_order = v.int32(); }},
      {"kernels.t_values", [](RunConfig& c, const Cursor& v) { c.kernels.t_values = v.reals(); }},
      {"kernels.composite", [](RunConfig& c, const Cursor& v) { c.kernels.composite = v.flag(); }},
      {"kernels.composite_points", [](RunConfig& c, const Cursor& v) { c.kernels.composite_points = v.int32(); }},
      {"kernels.composite_max_order",
       [](RunConfig& c, const Cursor& v) { c.kernels.composite_max_order = v.int32(); }},
      {"kernels.composite_t_values",
       [](RunConfig& c, const Cursor& v) { c.kernels.composite_t_values = v.reals(); }},
      {"output.dir", [](RunConfig& c, const Cursor& v) { c.output_dir = v.value; }},
  };
  return table;
}

[[noreturn]] void invalid(const std::string& key, const std::string& what) {
  throw ConfigError("config: " + key + ": " + what);
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridSpec RunConfig::grid_spec() const { return GridSpec(grid.dim, grid.points, grid.box_length); }

QuadraticForm RunConfig::quadratic_form() const {
  if (model.g_coeffs.empty()) return QuadraticForm::squares(grid.dim, model.direction - 1);
  return QuadraticForm(grid.dim, model.g_coeffs, model.direction - 1);
}

void RunConfig::validate() const {
  if (grid.dim != 2 && grid.dim != 3) invalid("grid.dim", "must be 2 or 3");
  if (grid.points < 8 || !power_of_two(grid.points)) invalid("grid.points", "must be a power of two >= 8");
  if (!(grid.box_length > 0.0)) invalid("grid.box_length", "must be > 0");
  if (!(init.amplitude >= 0.0)) invalid("init.amplitude", "must be >= 0");
  if (init.kind == InitKind::random && (init.band < 1 || 2 * init.band >= grid.points)) {
    invalid("init.band", "must satisfy 1 <= band < points / 2");
  }
  if (init.kind == InitKind::taylor_green && (grid.dim != 3 || std::abs(grid.box_length - kTwoPi) > 1e-12)) {
    invalid("init.kind", "taylor-green needs grid.dim = 3 and box_length = 2 pi");
  }
  if (init.kind == InitKind::file) {
    if (init.file.empty()) invalid("init.file", "required when init.kind = file");
    if (!std::filesystem::exists(init.file)) invalid("init.file", "no such file: " + init.file.string());
  }
  if (model.direction < 1 || model.direction > grid.dim) invalid("model.direction", "must be in 1..grid.dim");
  if (!model.g_coeffs.empty()) {
    const auto n = static_cast<std::size_t>(grid.dim);
    if (model.g_coeffs.size() != n * n * n) invalid("model.g_coeffs", "needs grid.dim^3 entries");
  }
  if (!(solver.dt > 0.0)) invalid("solver.dt", "must be > 0");
  if (!(solver.T > 0.0)) invalid("solver.T", "must be > 0");
  if (solver.dt > solver.T) invalid("solver.dt", "must not exceed solver.T");
  if (solver.snapshot_stride < 1) invalid("solver.snapshot_stride", "must be >= 1");
  if (!(window.c_win > 0.0)) invalid("window.c_win", "must be > 0");
  if (!(window.doubling_factor >= 1.0)) invalid("window.doubling_factor", "must be >= 1");
  if (diagnostics.j_max < 0 || diagnostics.j_max > 4) invalid("diagnostics.j_max", "must be in 0..4");
  if (diagnostics.lambdas.empty()) invalid("diagnostics.lambdas", "must not be empty");
  for (double l : diagnostics.lambdas) {
    if (!(l > 0.0)) invalid("diagnostics.lambdas", "entries must be > 0");
    if (diagnostics.torus_scaling && (std::abs(l - std::round(l)) > 1e-12 || l < 1.0)) {
      invalid("diagnostics.lambdas", "torus scaling needs positive integers");
    }
  }
  if (diagnostics.amplitudes.empty()) invalid("diagnostics.amplitudes", "must not be empty");
  for (double a : diagnostics.amplitudes) {
    if (!(a > 0.0)) invalid("diagnostics.amplitudes", "entries must be > 0");
  }
  if (diagnostics.window_steps < 2) invalid("diagnostics.window_steps", "must be >= 2");
  if (!(picard.T > 0.0)) invalid("picard.T", "must be > 0");
  if (picard.nodes.empty()) invalid("picard.nodes", "must not be empty");
  for (int m : picard.nodes) {
    if (m < 8) invalid("picard.nodes", "entries must be >= 8");
  }
  if (picard.k_max < 1) invalid("picard.k_max", "must be >= 1");
  if (picard.reference_steps < 1) invalid("picard.reference_steps", "must be >= 1");
  for (int n : kernels.dims) {
    if (n < 1 || n > 3) invalid("kernels.dims", "entries must be in 1..3");
  }
  if (kernels.max_order < 0 || kernels.max_order > 4) invalid("kernels.max_order", "must be in 0..4");
  if (kernels.t_values.empty()) invalid("kernels.t_values", "must not be empty");
  for (double t : kernels.t_values) {
    if (!(t > 0.0)) invalid("kernels.t_values", "entries must be > 0");
  }
  if (kernels.composite_points < 8 || !power_of_two(kernels.composite_points)) {
    invalid("kernels.composite_points", "must be a power of two >= 8");
  }
  if (kernels.composite_max_order < 0 || kernels.composite_max_order > 4) {
    invalid("kernels.composite_max_order", "must be in 0..4");
  }
  for (double t : kernels.composite_t_values) {
    if (!(t > 0.0)) invalid("kernels.composite_t_values", "entries must be > 0");
  }
  if (output_dir.empty()) invalid("output.dir", "must not be empty");
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string content = trim(raw);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line) + ": expected 'key = value'");
    }
    Cursor cur{line, trim(std::string_view(content).substr(0, eq)), trim(std::string_view(content).substr(eq + 1))};
    if (cur.key.empty()) throw ConfigError("config line " + std::to_string(line) + ": missing key");
    const auto it = setters().find(cur.key);
    if (it == setters().end()) {
      throw ConfigError("config line " + std::to_string(line) + ": unknown key '" + cur.key + "'");
    }
    if (const auto prev = seen.find(cur.key); prev != seen.end()) {
      cur.fail("duplicate key (first set on line " + std::to_string(prev->second) + ")");
    }
    seen[cur.key] = line;
    if (cur.value.empty()) cur.fail("missing value");
    it->second(cfg, cur);
  }
  if (!cfg.init.file.empty() && cfg.init.file.is_relative() && !base_dir.empty()) {
    cfg.init.file = base_dir / cfg.init.file;
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path());
}

}  // namespace nskl
