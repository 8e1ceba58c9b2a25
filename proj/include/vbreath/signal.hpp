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

#include <array>
#include <span>
#include <vector>

#include "vbreath/datamodel.hpp"

namespace vbreath {

struct SignalConfig {
  double target_hz = 50.0;
  int sma_window = 5;
  double window_start_s = 6.0;
  double window_end_s = 14.0;
};

/// One axis of one sensor on a uniform grid.
struct AxisSignal {
  Device device;
  SensorKind sensor;
  Axis axis;
  double rate_hz;
  std::vector<double> values;
};

/// Samples with start_s <= t < end_s. Throws WindowEmpty when fewer than two remain.
SensorStream extract_window(const SensorStream& stream, double start_s = 6.0, double end_s = 14.0);

/// Centered moving average; near the edges the window is truncated to the samples
/// that exist. `window` must be odd (EvenWindow) and the signal non-empty (EmptySignal).
std::vector<double> sma_filter(std::span<const double> signal, int window);

/// Linear interpolation onto start_ns + round(k * 1e9 / target_hz),
/// k = 0 .. round(target_hz * (end_s - start_s)) - 1. Grid points outside the
/// recorded span hold the nearest sample.
std::array<AxisSignal, 3> resample(const SensorStream& stream, double target_hz, double start_s,
                                   double end_s);

/// window -> resample -> SMA, per axis.
std::array<AxisSignal, 3> condition_stream(const SensorStream& stream, const SignalConfig& config);

std::int64_t seconds_to_ns(double seconds);

}  // namespace vbreath
