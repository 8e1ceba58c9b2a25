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

#include <cmath>
#include <numbers>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "test_util.hpp"
#include "vbreath/synth.hpp"

using namespace vbreath;

namespace {

SubjectProfile profile(double brac, double cadence = 1.9, std::uint64_t seed = 1234) {
  SubjectProfile p;
  p.subject_id = "s01";
  p.cadence_hz = cadence;
  p.brac = brac;
  p.seed = seed;
  return p;
}

// Peak of the vertical axis of the phone's linear acceleration, by direct DFT over
// bins up to 8 Hz (every gait harmonic the generator emits lies below that).
double vertical_peak_hz(const GaitRecording& rec) {
  const auto* s = rec.find(Device::Phone, SensorKind::LinearAcceleration);
  REQUIRE(s != nullptr);
  std::vector<double> z;
  for (const auto& sample : s->samples()) z.push_back(sample.z);
  const double m = oracle::mean(z);
  const double rate = device_spec(Device::Phone).max_rate_hz;
  const auto n = z.size();
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t k = 1; static_cast<double>(k) * rate / static_cast<double>(n) <= 8.0; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k * i % n) / static_cast<double>(n);
      re += (z[i] - m) * std::cos(a);
      im -= (z[i] - m) * std::sin(a);
    }
    const double mag = std::hypot(re, im);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  return static_cast<double>(best) * rate / static_cast<double>(n);
}

std::string serialized(const GaitRecording& rec) {
  std::ostringstream os;
  write_recording(os, rec);
  return os.str();
}

}  // namespace

TEST_CASE("stream counts") {
  const auto pair = generate_pair(profile(100));
  CHECK(pair.before.streams().size() == 17);
  CHECK(pair.after.streams().size() == 17);
  auto p = profile(100);
  p.has_phone = false;
  const auto no_phone = generate_pair(p);
  CHECK(no_phone.before.streams().size() == 12);
  CHECK_FALSE(no_phone.before.has_phone());
  for (const auto& s : pair.before.streams()) {
    const double rate = device_spec(s.device()).max_rate_hz;
    CHECK(s.size() == static_cast<std::size_t>(std::llround(16.0 * rate)));
  }
}

TEST_CASE("generation is deterministic") {
  const auto a = generate_pair(profile(300));
  const auto b = generate_pair(profile(300));
  CHECK(serialized(a.before) == serialized(b.before));
  CHECK(serialized(a.after) == serialized(b.after));
  const auto c = generate_pair(profile(300, 1.9, 99));
  CHECK(serialized(a.before) != serialized(c.before));
}

TEST_CASE("zero brac keeps the cadence") {
  for (double cadence : {1.6, 1.9, 2.2}) {
    const auto pair = generate_pair(profile(0, cadence));
    CHECK(std::abs(vertical_peak_hz(pair.before) - vertical_peak_hz(pair.after)) <= 0.0625 + 1e-12);
  }
}

TEST_CASE("maximum brac slows cadence by a quarter") {
  for (double cadence : {1.6, 1.9, 2.2}) {
    CAPTURE(cadence);
    const auto pair = generate_pair(profile(kMaxBrac, cadence));
    const double before = vertical_peak_hz(pair.before);
    CHECK(std::abs(before - cadence) <= 0.0625);
    CHECK(std::abs(vertical_peak_hz(pair.after) - 0.75 * before) <= 0.1);
  }
}

TEST_CASE("property: before-session peak equals cadence within one bin") {
  gen::Rng rng(201);
  for (int trial = 0; trial < 15; ++trial) {
    auto p = profile(rng.uniform(0, 430), rng.uniform(1.6, 2.2), rng.engine()());
    p.step_amplitude = rng.uniform(1.5, 3.0);
    p.harmonic_2 = rng.uniform(0.0, 0.55);
    p.harmonic_3 = rng.uniform(0.0, 0.55);
    CAPTURE(p.cadence_hz);
    CHECK(std::abs(vertical_peak_hz(generate_pair(p).before) - p.cadence_hz) <= 0.0625);
  }
}

TEST_CASE("property: after-session peak is non-increasing in brac") {
  gen::Rng rng(202);
  for (int trial = 0; trial < 10; ++trial) {
    const double cadence = rng.uniform(1.6, 2.2);
    const auto seed = rng.engine()();
    double previous = 1e9;
    for (double brac : {0.0, 200.0, 430.0}) {
      const double peak = vertical_peak_hz(generate_pair(profile(brac, cadence, seed)).after);
      CHECK(peak <= previous);
      previous = peak;
    }
  }
}

TEST_CASE("property: sober accelerometer magnitude averages to gravity") {
  gen::Rng rng(203);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = profile(rng.uniform(0, 100), rng.uniform(1.6, 2.2), rng.engine()());
    p.step_amplitude = rng.uniform(1.5, 3.0);
    const auto pair = generate_pair(p);
    for (const auto& s : pair.before.streams()) {
      if (s.sensor() != SensorKind::Accelerometer) continue;
      double sum = 0.0;
      for (const auto& v : s.samples()) sum += std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
      const double m = sum / static_cast<double>(s.size());
      CHECK(std::abs(m - 9.8) <= 0.05 * 9.8);
    }
  }
}

TEST_CASE("invalid profiles") {
  auto p = profile(100);
  p.cadence_hz = 0;
  CHECK_ERROR(generate_pair(p), ErrorCode::InvalidProfile);
  p = profile(100);
  p.step_amplitude = -1;
  CHECK_ERROR(generate_pair(p), ErrorCode::InvalidProfile);
  CHECK_ERROR(generate_pair(profile(431)), ErrorCode::InvalidProfile);
  CHECK_ERROR(generate_pair(profile(-1)), ErrorCode::InvalidProfile);
  p = profile(100);
  p.subject_id.clear();
  CHECK_ERROR(generate_pair(p), ErrorCode::InvalidProfile);
  EffectModel e;
  e.cadence_slowdown = 1.0;
  CHECK_ERROR(generate_pair(profile(100), e), ErrorCode::InvalidProfile);
}

TEST_CASE("default dataset draw") {
  const auto profiles = draw_profiles(30, {}, 42);
  REQUIRE(profiles.size() == 30);
  int drunk = 0;
  for (const auto& p : profiles) {
    drunk += p.brac >= 240;
    CHECK(p.brac >= 0);
    CHECK(p.brac <= kMaxBrac);
    CHECK(p.cadence_hz >= 1.6);
    CHECK(p.cadence_hz <= 2.2);
  }
  CHECK(drunk >= 8);
  CHECK(drunk <= 11);
  CHECK(profiles.front().subject_id == "s01");
  CHECK(profiles.back().subject_id == "s30");
}

TEST_CASE("property: drunk share across seeds") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto profiles = draw_profiles(30, {}, seed);
    int drunk = 0, sober = 0;
    for (const auto& p : profiles) {
      drunk += p.brac >= 240;
      sober += p.brac < 220;
    }
    CHECK(drunk >= 8);
    CHECK(drunk <= 11);
    CHECK(sober == 21);
  }
}

TEST_CASE("datasets are bit-identical per seed") {
  const auto a = generate_dataset(4, {}, 7);
  const auto b = generate_dataset(4, {}, 7);
  const auto c = generate_dataset(4, {}, 8);
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].brac == b[i].brac);
    CHECK(serialized(a[i].before) == serialized(b[i].before));
    CHECK(serialized(a[i].after) == serialized(b[i].after));
  }
  CHECK(serialized(a[0].after) != serialized(c[0].after));
}

TEST_CASE("dataset errors") {
  CHECK_ERROR(draw_profiles(2, {}, 1), ErrorCode::TooFewSubjects);
  BracDistribution bad;
  bad.sober_fraction = 1.5;
  CHECK_ERROR(draw_profiles(10, bad, 1), ErrorCode::BadDistribution);
  bad = {};
  bad.drunk_min = 500;
  CHECK_ERROR(draw_profiles(10, bad, 1), ErrorCode::BadDistribution);
  bad = {};
  bad.no_phone_fraction = -0.1;
  CHECK_ERROR(draw_profiles(10, bad, 1), ErrorCode::BadDistribution);
}

TEST_CASE("no-phone fraction") {
  BracDistribution d;
  d.no_phone_fraction = 0.25;
  const auto profiles = draw_profiles(12, d, 3);
  int without = 0;
  for (const auto& p : profiles) without += !p.has_phone;
  CHECK(without == 3);
}
