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

// KLNS binary snapshots: "KLNS", u32 version, u32 dim, dim x u32 points,
// dim x f64 box length, u32 component count, then each component as a
// row-major little-endian f64 array.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "nskl/grid.hpp"

namespace nskl {

inline constexpr std::uint32_t kSnapshotVersion = 1;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_snapshot(std::ostream& out, const VectorField& u);
void write_snapshot(const std::filesystem::path& path, const VectorField& u);

VectorField read_snapshot(std::istream& in);
VectorField read_snapshot(const std::filesystem::path& path);

}  // namespace nskl
