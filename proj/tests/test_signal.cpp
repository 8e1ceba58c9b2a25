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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "test_util.hpp"
#include "vbreath/signal.hpp"

using namespace vbreath;

namespace {

SensorStream uniform_stream(double rate_hz, double seconds, double (*f)(double)) {
  std::vector<Sample> s;
  for (std::int64_t k = 0;; ++k) {
    const auto t_ns = std::llround(static_cast<double>(k) * 1e9 / rate_hz);
    if (t_ns >= std::llround(seconds * 1e9)) break;
    const double t = static_cast<double>(t_ns) * 1e-9;
    s.push_back({t_ns, f(t), -f(t), 2.0 * f(t)});
  }
  return SensorStream(Device::Watch, SensorKind::Accelerometer, std::move(s));
}

// Truncated centred mean, one output at a time.
std::vector<double> sma_oracle(const std::vector<double>& v, int w) {
  const int h = w / 2;
  const int n = static_cast<int>(v.size());
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    long double s = 0;
    int c = 0;
    for (int j = std::max(0, i - h); j <= std::min(n - 1, i + h); ++j, ++c) s += v[j];
    out.push_back(static_cast<double>(s / c));
  }
  return out;
}

}  // namespace

TEST_CASE("extract_window") {
  const auto s = uniform_stream(100, 16, [](double t) { return t; });
  CHECK(s.size() == 1600);
  const auto w = extract_window(s, 6, 14);
  CHECK(w.size() == 800);
  CHECK(w.samples().front().t_ns == 6'000'000'000);
  CHECK(w.samples().back().t_ns == 13'990'000'000);

  const auto short_stream = uniform_stream(100, 5, [](double t) { return t; });
  CHECK_ERROR(extract_window(short_stream, 6, 14), ErrorCode::WindowEmpty);

  const auto full = extract_window(s, 0, 16);
  REQUIRE(full.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(full.samples()[i].x == s.samples()[i].x);
}

TEST_CASE("sma_filter examples") {
  const std::vector<double> v{3.0, 1.0, 4.0, 1.0, 5.0};
  CHECK(sma_filter(v, 1) == v);
  const std::vector<double> c(17, 9.80665);
  CHECK(sma_filter(c, 5) == c);
  const auto r = sma_filter(std::vector<double>{0, 3, 0}, 3);
  CHECK(r == std::vector<double>{1.5, 1.0, 1.5});
  CHECK_ERROR(sma_filter(v, 4), ErrorCode::EvenWindow);
  CHECK_ERROR(sma_filter(std::vector<double>{}, 3), ErrorCode::EmptySignal);
}

TEST_CASE("property: sma_filter matches the direct mean, keeps length and bounds") {
  gen::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto v = gen::signal(rng, static_cast<std::size_t>(rng.integer(1, 120)));
    const int w = 2 * rng.integer(0, 7) + 1;
    const auto out = sma_filter(v, w);
    const auto ref = sma_oracle(v, w);
    REQUIRE(out.size() == v.size());
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    for (std::size_t k = 0; k < v.size(); ++k) {
      CHECK(std::abs(out[k] - ref[k]) <= 1e-12 * std::max(1.0, std::abs(ref[k])));
      CHECK(out[k] >= *lo);
      CHECK(out[k] <= *hi);
    }
  }
}

TEST_CASE("resample: constant and ramp") {
  const auto c = uniform_stream(62, 16, [](double) { return 9.8; });
  const auto axes = resample(c, 50, 6, 14);
  for (const auto& a : axes) CHECK(a.values.size() == 400);
  for (double v : axes[0].values) CHECK(v == 9.8);
  CHECK(axes[0].axis == Axis::X);
  CHECK(axes[2].axis == Axis::Z);
  CHECK(axes[0].rate_hz == 50.0);

  const auto ramp = uniform_stream(62, 16, [](double t) { return t; });
  const auto ra = resample(ramp, 50, 6, 14);
  for (std::size_t k = 0; k < 400; ++k) CHECK(ra[0].values[k] == doctest::Approx(6.0 + k / 50.0).epsilon(1e-12));
}

TEST_CASE("resample: 2 Hz sinusoid from 62 Hz stays within 1% of amplitude") {
  const auto s = uniform_stream(62, 16, [](double t) { return std::sin(2 * std::numbers::pi * 2 * t); });
  const auto axes = resample(s, 50, 6, 14);
  double worst = 0;
  for (std::size_t k = 0; k < 400; ++k) {
    const double t = 6.0 + k / 50.0;
    worst = std::max(worst, std::abs(axes[0].values[k] - std::sin(2 * std::numbers::pi * 2 * t)));
  }
  CHECK(worst < 0.01);
}

TEST_CASE("resample is idempotent on a uniform grid") {
  gen::Rng rng(2);
  std::vector<Sample> s;
  std::vector<double> xs;
  for (int k = 0; k < 400; ++k) {
    const double x = rng.normal(0, 3);
    xs.push_back(x);
    s.push_back({6'000'000'000 + k * 20'000'000LL, x, 1.0, -x});
  }
  const SensorStream stream(Device::Band, SensorKind::Gyroscope, s);
  const auto axes = resample(stream, 50, 6, 14);
  for (std::size_t k = 0; k < 400; ++k)
    CHECK(std::abs(axes[0].values[k] - xs[k]) <= 1e-12 * std::max(1.0, std::abs(xs[k])));
}

TEST_CASE("resample errors and determinism") {
  const auto s = uniform_stream(100, 5, [](double t) { return t; });
  CHECK_ERROR(resample(s, 50, 6, 14), ErrorCode::WindowEmpty);

  const auto full = uniform_stream(180, 16, [](double t) { return std::cos(7 * t) + t * t; });
  const SignalConfig config;
  const auto a = condition_stream(full, config);
  const auto b = condition_stream(full, config);
  for (int i = 0; i < 3; ++i) {
    CHECK(a[i].values.size() == 400);
    CHECK(a[i].values == b[i].values);
  }
}
