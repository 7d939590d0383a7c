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

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace nskl::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::vector<int>, std::unique_ptr<FftPlan>>& plan_cache() {
  static std::map<std::vector<int>, std::unique_ptr<FftPlan>> cache;
  return cache;
}

int g_threads = 1;
bool g_threads_initialized = false;

}  // namespace

FftPlan::FftPlan(const GridSpec& grid) : size_(grid.size()) {
  std::vector<Complex> scratch(size_);
  auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_ = fftw_plan_dft(grid.dim(), grid.shape().data(), data, data, FFTW_FORWARD, flags);
  backward_ = fftw_plan_dft(grid.dim(), grid.shape().data(), data, data, FFTW_BACKWARD, flags);
}

FftPlan::~FftPlan() {
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

const FftPlan& FftPlan::for_grid(const GridSpec& grid) {
  std::lock_guard lock(planner_mutex());
  auto& cache = plan_cache();
  auto it = cache.find(grid.shape());
  if (it == cache.end()) {
    it = cache.emplace(grid.shape(), std::unique_ptr<FftPlan>(new FftPlan(grid))).first;
  }
  return *it->second;
}

void FftPlan::forward(std::span<Complex> data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_), p, p);
}

void FftPlan::backward(std::span<Complex> data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_), p, p);
}

void set_fft_threads(int threads) {
  std::lock_guard lock(planner_mutex());
  if (threads < 1) threads = 1;
  if (!g_threads_initialized) {
    fftw_init_threads();
    g_threads_initialized = true;
  }
  if (threads != g_threads) {
    g_threads = threads;
    fftw_plan_with_nthreads(threads);
    plan_cache().clear();
  }
}

}  // namespace nskl::detail
