// Copyright 2026 The vbreath Authors
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

#include "vbreath/spectrum.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>

namespace vbreath {
namespace {

// FFTW planning is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

struct BufferDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

std::vector<std::complex<double>> real_dft(std::span<const double> signal) {
  const auto n = signal.size();
  if (n == 0) return {};
  const auto bins = n / 2 + 1;
  std::unique_ptr<double, BufferDeleter> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  std::unique_ptr<fftw_complex, BufferDeleter> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  std::copy(signal.begin(), signal.end(), in.get());
  fftw_execute(plan.get());

  std::vector<std::complex<double>> result(bins);
  for (std::size_t k = 0; k < bins; ++k) result[k] = {out.get()[k][0], out.get()[k][1]};
  return result;
}

double spectral_energy(std::span<const std::complex<double>> half_spectrum, std::size_t n) {
  if (n == 0) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < half_spectrum.size(); ++k) {
    // Bins strictly between DC and Nyquist stand for their mirrored twin too.
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    total += (unpaired ? 1.0 : 2.0) * std::norm(half_spectrum[k]);
  }
  return total / static_cast<double>(n);
}

}  // namespace vbreath
