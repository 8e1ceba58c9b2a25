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

// Hand-rolled random generators for property tests.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vbreath/datamodel.hpp"

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal(double mu = 0.0, double sd = 1.0) { return std::normal_distribution<double>(mu, sd)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// A mix of shapes: white noise, tones with offsets, steps, and integers with repeats.
inline std::vector<double> signal(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  const int shape = rng.integer(0, 3);
  const double offset = rng.uniform(-15.0, 15.0);
  const double scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    switch (shape) {
      case 0: v[i] = offset + scale * rng.normal(); break;
      case 1: v[i] = offset + scale * std::sin(0.37 * t + 0.2) + 0.1 * scale * rng.normal(); break;
      case 2: v[i] = (i < n / 2 ? offset : -offset) + 0.01 * scale * rng.normal(); break;
      default: v[i] = static_cast<double>(rng.integer(-25, 25)); break;
    }
  }
  return v;
}

inline std::vector<vbreath::Sample> samples(Rng& rng, std::size_t n, double rate_hz) {
  std::vector<vbreath::Sample> out;
  std::int64_t t = rng.integer(0, 1000);
  const double step = 1e9 / rate_hz;
  for (std::size_t i = 0; i < n; ++i) {
    t += std::max<std::int64_t>(1, static_cast<std::int64_t>(step * rng.uniform(0.5, 1.5)));
    out.push_back({t, rng.normal(0, 5), rng.uniform(-1e3, 1e3), std::ldexp(rng.normal(), rng.integer(-40, 40))});
  }
  return out;
}

// Random but valid recording: any non-empty device subset, each device with a
// random non-empty subset of its published sensors.
inline vbreath::GaitRecording recording(Rng& rng, const std::string& subject) {
  using namespace vbreath;
  DeviceMask mask;
  std::vector<SensorStream> streams;
  for (Device d : kAllDevices) {
    if (!rng.coin(0.6)) continue;
    bool any = false;
    for (SensorKind s : device_spec(d).sensors) {
      if (!rng.coin(0.7)) continue;
      streams.emplace_back(d, s, samples(rng, static_cast<std::size_t>(rng.integer(2, 40)), device_spec(d).max_rate_hz));
      any = true;
    }
    if (!any) streams.emplace_back(d, device_spec(d).sensors.front(), samples(rng, 3, 50.0));
    mask = mask.with(d);
  }
  if (mask.empty()) {
    streams.emplace_back(Device::Band, SensorKind::Gyroscope, samples(rng, 5, 62.0));
    mask = mask.with(Device::Band);
  }
  return GaitRecording(subject, rng.coin() ? Session::Before : Session::After, mask, std::move(streams));
}

}  // namespace gen
