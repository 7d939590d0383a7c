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

#include <span>

#include "nskl/grid.hpp"

namespace nskl::detail {

/// In-place n-d complex FFT for one grid shape. Unnormalized in both
/// directions; forward uses exp(-i k.x).
class FftPlan {
 public:
  static const FftPlan& for_grid(const GridSpec& grid);

  void forward(std::span<Complex> data) const;
  void backward(std::span<Complex> data) const;

  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

 private:
  explicit FftPlan(const GridSpec& grid);

  void* forward_ = nullptr;
  void* backward_ = nullptr;
  std::size_t size_ = 0;
};

void set_fft_threads(int threads);

}  // namespace nskl::detail
