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

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace vbreath {

/// Non-negative-frequency half of the DFT: bins 0 .. N/2 of sum_n x[n] e^{-2 pi i k n / N}.
std::vector<std::complex<double>> real_dft(std::span<const double> signal);

/// Sum over all N bins of |X_k|^2 / N, reconstructed from the one-sided spectrum.
double spectral_energy(std::span<const std::complex<double>> half_spectrum, std::size_t n);

}  // namespace vbreath
