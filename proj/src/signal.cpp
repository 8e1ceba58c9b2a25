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

#include "vbreath/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vbreath/error.hpp"

namespace vbreath {

std::int64_t seconds_to_ns(double seconds) { return std::llround(seconds * 1e9); }

SensorStream extract_window(const SensorStream& stream, double start_s, double end_s) {
  if (!(end_s > start_s)) fail(ErrorCode::InvalidArgument, "window end must exceed start");
  const auto start_ns = seconds_to_ns(start_s);
  const auto end_ns = seconds_to_ns(end_s);
  const auto samples = stream.samples();
  const auto first = std::lower_bound(samples.begin(), samples.end(), start_ns,
                                      [](const Sample& s, std::int64_t t) { return s.t_ns < t; });
  const auto last = std::lower_bound(first, samples.end(), end_ns,
                                     [](const Sample& s, std::int64_t t) { return s.t_ns < t; });
  if (last - first < 2)
    fail(ErrorCode::WindowEmpty, std::string(to_string(stream.device())) + "/" +
                                     std::string(to_string(stream.sensor())) +
                                     ": fewer than 2 samples in window");
  return SensorStream(stream.device(), stream.sensor(), std::vector<Sample>(first, last));
}

std::vector<double> sma_filter(std::span<const double> signal, int window) {
  if (window < 1) fail(ErrorCode::InvalidArgument, "SMA window must be positive");
  if (window % 2 == 0) fail(ErrorCode::EvenWindow, "SMA window must be odd, got " + std::to_string(window));
  if (signal.empty()) fail(ErrorCode::EmptySignal, "SMA of an empty signal");
  const auto n = static_cast<std::ptrdiff_t>(signal.size());
  const std::ptrdiff_t half = window / 2;
  std::vector<double> out(signal.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, i - half);
    const auto hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    // Deviations from the center sample keep constant runs exact.
    const double center = signal[i];
    double dev = 0.0;
    double mn = center;
    double mx = center;
    for (auto j = lo; j <= hi; ++j) {
      dev += signal[j] - center;
      mn = std::min(mn, signal[j]);
      mx = std::max(mx, signal[j]);
    }
    out[i] = std::clamp(center + dev / static_cast<double>(hi - lo + 1), mn, mx);
  }
  return out;
}

std::array<AxisSignal, 3> resample(const SensorStream& stream, double target_hz, double start_s,
                                   double end_s) {
  if (!(target_hz > 0.0) || !std::isfinite(target_hz))
    fail(ErrorCode::InvalidArgument, "target rate must be positive");
  // Validates coverage; interpolation still uses neighbours just outside the window.
  (void)extract_window(stream, start_s, end_s);

  const auto count = static_cast<std::size_t>(std::llround(target_hz * (end_s - start_s)));
  const auto start_ns = seconds_to_ns(start_s);
  const auto samples = stream.samples();

  std::array<AxisSignal, 3> out;
  for (std::size_t a = 0; a < 3; ++a) {
    out[a] = AxisSignal{stream.device(), stream.sensor(), kAllAxes[a], target_hz, {}};
    out[a].values.resize(count);
  }

  std::size_t j = 0;  // samples[j].t_ns <= grid time < samples[j+1].t_ns
  for (std::size_t k = 0; k < count; ++k) {
    const auto t = start_ns + std::llround(static_cast<double>(k) * 1e9 / target_hz);
    while (j + 1 < samples.size() && samples[j + 1].t_ns <= t) ++j;
    for (std::size_t a = 0; a < 3; ++a) {
      double v;
      if (t <= samples.front().t_ns) {
        v = samples.front().axis(kAllAxes[a]);
      } else if (j + 1 >= samples.size()) {
        v = samples.back().axis(kAllAxes[a]);
      } else {
        const auto& s0 = samples[j];
        const auto& s1 = samples[j + 1];
        const double frac = static_cast<double>(t - s0.t_ns) / static_cast<double>(s1.t_ns - s0.t_ns);
        const double v0 = s0.axis(kAllAxes[a]);
        v = frac == 0.0 ? v0 : v0 + frac * (s1.axis(kAllAxes[a]) - v0);
      }
      if (!std::isfinite(v)) fail(ErrorCode::NonFiniteInput, "non-finite value while resampling");
      out[a].values[k] = v;
    }
  }
  return out;
}

std::array<AxisSignal, 3> condition_stream(const SensorStream& stream, const SignalConfig& config) {
  auto axes = resample(stream, config.target_hz, config.window_start_s, config.window_end_s);
  for (auto& axis : axes) axis.values = sma_filter(axis.values, config.sma_window);
  return axes;
}

}  // namespace vbreath
