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

#include "nskl/snapshot_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace nskl {

namespace {

constexpr char kMagic[4] = {'K', 'L', 'N', 'S'};

template <typename T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw IoError("KLNS: truncated file");
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const VectorField& u) {
  const GridSpec& g = u.grid();
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  for (int a = 0; a < g.dim(); ++a) put<std::uint32_t>(out, static_cast<std::uint32_t>(g.points(a)));
  for (int a = 0; a < g.dim(); ++a) put<double>(out, g.box_length(a));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(u.size()));
  for (const auto& c : u.components()) {
    for (double v : c.values()) put<double>(out, v);
  }
  if (!out) throw IoError("KLNS: write failed");
}

void write_snapshot(const std::filesystem::path& path, const VectorField& u) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("KLNS: cannot open " + path.string() + " for writing");
  write_snapshot(out, u);
}

VectorField read_snapshot(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw IoError("KLNS: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kSnapshotVersion) throw IoError("KLNS: unsupported version " + std::to_string(version));
  const auto dim = get<std::uint32_t>(in);
  if (dim != 2 && dim != 3) throw IoError("KLNS: unsupported dimension " + std::to_string(dim));
  std::vector<int> points(dim);
  std::vector<double> lengths(dim);
  for (auto& p : points) {
    const auto v = get<std::uint32_t>(in);
    if (v > (1u << 16)) throw IoError("KLNS: implausible point count " + std::to_string(v));
    p = static_cast<int>(v);
  }
  for (auto& l : lengths) l = get<double>(in);
  GridSpec grid = [&] {
    try {
      return GridSpec(points, lengths);
    } catch (const PreconditionError& e) {
      throw IoError(std::string("KLNS: invalid grid: ") + e.what());
    }
  }();
  const auto count = get<std::uint32_t>(in);
  if (count == 0 || count > 3) throw IoError("KLNS: unsupported component count " + std::to_string(count));
  std::vector<Field> comps;
  for (std::uint32_t c = 0; c < count; ++c) {
    std::vector<double> values(grid.size());
    for (double& v : values) v = get<double>(in);
    try {
      comps.emplace_back(grid, std::move(values));
    } catch (const PreconditionError& e) {
      throw IoError(std::string("KLNS: ") + e.what());
    }
  }
  return VectorField(std::move(comps));
}

VectorField read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("KLNS: cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace nskl
