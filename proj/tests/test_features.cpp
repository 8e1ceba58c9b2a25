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
#include <numeric>
#include <set>

#include "generators.hpp"
#include "oracles.hpp"
#include "test_util.hpp"
#include "vbreath/features.hpp"
#include "vbreath/synth.hpp"

using namespace vbreath;

namespace {

AxisSignal axis_signal(SensorKind sensor, Axis axis, std::vector<double> values, double rate = 50.0) {
  return AxisSignal{Device::Band, sensor, axis, rate, std::move(values)};
}

std::array<AxisSignal, 3> triple(SensorKind sensor, std::vector<double> x, std::vector<double> y,
                                 std::vector<double> z) {
  return {axis_signal(sensor, Axis::X, std::move(x)), axis_signal(sensor, Axis::Y, std::move(y)),
          axis_signal(sensor, Axis::Z, std::move(z))};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

SubjectPair pair_for(const std::string& id, double brac, bool phone = true) {
  SubjectProfile p;
  p.subject_id = id;
  p.brac = brac;
  p.seed = std::hash<std::string>{}(id);
  p.has_phone = phone;
  return generate_pair(p);
}

// Feature-count arithmetic for one device block.
std::size_t block_length(Device d) {
  std::size_t n = 0;
  for (SensorKind s : device_spec(d).sensors)
    n += 3 * (kStatNames.size() + kFftNames.size() + histogram_support(s).size()) + 3;
  return n + kGaitNames.size();
}

}  // namespace

TEST_CASE("stat_features examples") {
  const auto c = stat_features(std::vector<double>{2, 2, 2, 2});
  CHECK(c.mean == 2);
  CHECK(c.variance == 0);
  CHECK(c.skewness == 0);
  CHECK(c.range == 0);
  CHECK(c.rms == 2);
  CHECK(c.zero_crossing_rate == 0);
  CHECK(c.mean_crossing_rate == 0);

  const auto alt = stat_features(std::vector<double>{1, -1, 1, -1});
  CHECK(alt.mean == 0);
  CHECK(alt.zero_crossing_rate == 1.0);
  CHECK(alt.rms == 1);
  CHECK(alt.range == 2);

  const auto ramp = stat_features(std::vector<double>{0, 1, 2, 3});
  CHECK(ramp.mean == 1.5);
  CHECK(ramp.variance == 1.25);
  CHECK(ramp.median == 1.5);
  CHECK(ramp.mean_crossing_rate == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  CHECK_ERROR(stat_features(std::vector<double>{1}), ErrorCode::TooShort);
}

TEST_CASE("fft_features examples") {
  const auto c = fft_features(std::vector<double>(8, 3.0), 50);
  CHECK(c.energy == doctest::Approx(72).epsilon(1e-14));

  std::vector<double> tone(50);
  for (int i = 0; i < 50; ++i) tone[i] = std::sin(2 * std::numbers::pi * 5 * i / 50.0);
  const auto t = fft_features(tone, 50);
  CHECK(t.dominant_bin == 5);
  CHECK(t.top_frequencies_hz[0] == 5.0);

  CHECK_ERROR(fft_features(std::vector<double>(7, 1.0), 50), ErrorCode::TooShort);
}

TEST_CASE("flat spectrum ties resolve toward the lower bin") {
  const auto f = fft_features(std::vector<double>(16, 4.0), 16);
  CHECK(f.dominant_bin == 1);
  CHECK(f.top_frequencies_hz == std::array<double, 4>{1, 2, 3, 4});
}

TEST_CASE("histogram_features examples") {
  CHECK(histogram_features(std::vector<double>{1.2, 1.6, 2.0}, {0, 3}) ==
        std::vector<double>{0, 1.0 / 3, 2.0 / 3, 0});
  const auto same = histogram_features(std::vector<double>(9, -4.0), {-20, 20});
  CHECK(same[16] == 1.0);
  CHECK(std::accumulate(same.begin(), same.end(), 0.0) == 1.0);
  const auto clamp = histogram_features(std::vector<double>{25.0}, histogram_support(SensorKind::Accelerometer));
  CHECK(clamp.size() == 41);
  CHECK(clamp.back() == 1.0);
  const auto half = histogram_features(std::vector<double>{-0.5, 0.5, 2.5}, {-3, 3});
  CHECK(half == std::vector<double>{0, 0, 1.0 / 3, 0, 1.0 / 3, 0, 1.0 / 3});
  CHECK_ERROR(histogram_features(std::vector<double>{}, {0, 3}), ErrorCode::EmptySignal);
  CHECK(histogram_support(SensorKind::Gyroscope).size() == 21);
  CHECK(histogram_support(SensorKind::Compass).size() == 201);
}

TEST_CASE("oracle: stat, FFT and histogram features on 200 random signals") {
  gen::Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const auto v = gen::signal(rng, static_cast<std::size_t>(rng.integer(8, 400)));
    const double rate = rng.uniform(20, 200);
    const auto s = stat_features(v);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const std::array<double, 11> expected{oracle::mean(v),
                                          oracle::variance(v),
                                          std::sqrt(oracle::variance(v)),
                                          oracle::skewness(v),
                                          *lo,
                                          *hi,
                                          oracle::median(v),
                                          *hi - *lo,
                                          oracle::rms(v),
                                          oracle::crossing_rate(v, 0.0),
                                          oracle::crossing_rate(v, s.mean)};
    const auto got = s.values();
    for (std::size_t k = 0; k < expected.size(); ++k)
      CHECK_MESSAGE(oracle::rel_close(expected[k], got[k], 1e-9), kStatNames[k] << " case " << i);

    const auto f = fft_features(v, rate);
    CHECK(oracle::rel_close(oracle::spectral_energy(v), f.energy, 1e-9));
    CHECK(oracle::rel_close(oracle::sum_of_squares(v), f.energy, 1e-9));
    const auto bins = oracle::ranked_bins(v);
    CHECK(f.dominant_bin == static_cast<double>(bins[0]));
    for (std::size_t k = 0; k < 4; ++k)
      CHECK(oracle::rel_close(static_cast<double>(bins[k]) * rate / v.size(), f.top_frequencies_hz[k], 1e-9));

    const auto sup = histogram_support(kAllSensors[static_cast<std::size_t>(i) % 5]);
    const auto h = histogram_features(v, sup);
    const auto hr = oracle::histogram(v, sup.lo, sup.hi);
    REQUIRE(h.size() == hr.size());
    for (std::size_t k = 0; k < h.size(); ++k) CHECK(oracle::rel_close(hr[k], h[k], 1e-9));
  }
}

TEST_CASE("property: histograms sum to one and are non-negative") {
  gen::Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto v = gen::signal(rng, static_cast<std::size_t>(rng.integer(1, 300)));
    for (SensorKind s : kAllSensors) {
      const auto h = histogram_features(v, histogram_support(s));
      CHECK(std::abs(std::accumulate(h.begin(), h.end(), 0.0) - 1.0) <= 1e-12);
      CHECK(*std::min_element(h.begin(), h.end()) >= 0.0);
    }
  }
}

TEST_CASE("property: skewness of a symmetric signal is zero") {
  gen::Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const double c = rng.uniform(-10, 10);
    std::vector<double> v;
    for (int k = rng.integer(1, 100); k > 0; --k) {
      const double d = rng.uniform(0, 5);
      v.push_back(c + d);
      v.push_back(c - d);
    }
    CHECK(std::abs(stat_features(v).skewness) <= 1e-9);
  }
}

TEST_CASE("covariances") {
  const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, z{4, 3, 2, 1};
  const auto c = axis_covariances(x, y, z);
  CHECK(c[0] == doctest::Approx(oracle::covariance(x, y)));
  CHECK(c[1] == doctest::Approx(oracle::covariance(x, z)));
  CHECK(c[2] == doctest::Approx(oracle::covariance(y, z)));
  CHECK_ERROR(axis_covariances(x, y, std::vector<double>{1}), ErrorCode::LengthMismatch);
}

TEST_CASE("gait: stationary device") {
  const auto acc = triple(SensorKind::Accelerometer, std::vector<double>(400, 0.0), std::vector<double>(400, 0.0),
                          std::vector<double>(400, 9.8));
  const auto gyro = triple(SensorKind::Gyroscope, std::vector<double>(400, 0.0), std::vector<double>(400, 0.0),
                           std::vector<double>(400, 0.0));
  const auto g = gait_features(acc, &gyro);
  CHECK(g.movement_intensity == doctest::Approx(9.8).epsilon(1e-14));
  CHECK(g.eigenvalues == std::array<double, 3>{0, 0, 0});
  CHECK(g.velocity_heading == 0);
  CHECK(g.velocity_gravity == 0);
  CHECK(g.rotation_energy == 0);
  CHECK_ERROR(gait_features(acc, nullptr), ErrorCode::MissingSensor);
}

TEST_CASE("gait: 2 Hz vertical oscillation") {
  std::vector<double> z(400);
  for (int i = 0; i < 400; ++i) z[i] = 9.8 + 2.0 * std::sin(2 * std::numbers::pi * 2 * i / 50.0);
  const auto acc = triple(SensorKind::Accelerometer, std::vector<double>(400, 0.1), std::vector<double>(400, 0.0), z);
  const auto gyro = triple(SensorKind::Gyroscope, std::vector<double>(400, 0.0), std::vector<double>(400, 0.0),
                           std::vector<double>(400, 0.5));
  const auto g = gait_features(acc, &gyro);
  CHECK(g.dominant_frequency_hz == 2.0);
  CHECK(g.rotation_energy == doctest::Approx(0.25));
  CHECK(g.eigenvalues[0] == doctest::Approx(2.0));  // variance of 2 sin
  CHECK(g.eigenvalues[1] >= -1e-12);
  CHECK(g.eigenvalues[2] >= -1e-12);
}

TEST_CASE("gait: synthetic walk acceleration energy equals direct mean of squared magnitude") {
  const auto pair = pair_for("s01", 120);
  const SignalConfig config;
  for (Device d : kAllDevices) {
    const auto acc = condition_stream(*pair.after.find(d, SensorKind::Accelerometer), config);
    const auto gyro = condition_stream(*pair.after.find(d, SensorKind::Gyroscope), config);
    const auto g = gait_features(acc, &gyro);
    long double s = 0, mi = 0;
    for (std::size_t i = 0; i < acc[0].values.size(); ++i) {
      const long double m2 = static_cast<long double>(acc[0].values[i]) * acc[0].values[i] +
                             static_cast<long double>(acc[1].values[i]) * acc[1].values[i] +
                             static_cast<long double>(acc[2].values[i]) * acc[2].values[i];
      s += m2;
      mi += std::sqrt(m2);
    }
    const double n = static_cast<double>(acc[0].values.size());
    CHECK(oracle::rel_close(static_cast<double>(s / n), g.acceleration_energy, 1e-9));
    CHECK(oracle::rel_close(static_cast<double>(mi / n), g.movement_intensity, 1e-9));
    for (double e : g.eigenvalues) CHECK(e >= -1e-12);
    CHECK(g.eigenvalues[0] >= g.eigenvalues[1]);
    CHECK(g.eigenvalues[1] >= g.eigenvalues[2]);
  }
}

TEST_CASE("catalog lengths follow the feature-count arithmetic") {
  // Band: 2 sensors x 3 axes x (11 stat + 6 FFT + bins) + 2 x 3 covariances + 13 gait.
  const auto band = device_block_names(Device::Band, device_spec(Device::Band).sensors);
  CHECK(band.size() == block_length(Device::Band));
  CHECK(band.size() == 307);

  const auto pair = pair_for("s02", 0);
  const auto full = assemble_feature_vector(pair.before, DeviceMask::all());
  CHECK(full.catalog->size() ==
        block_length(Device::Glass) + block_length(Device::Watch) + block_length(Device::Band) +
            block_length(Device::Phone));
  CHECK(full.catalog->size() == 4261);
  CHECK(full.values.size() == full.catalog->size());
  for (double v : full.values) CHECK(std::isfinite(v));
}

TEST_CASE("catalog order and naming") {
  const auto names = device_block_names(Device::Band, device_spec(Device::Band).sensors);
  CHECK(names.front() == "Band.Accelerometer.X.stat.mean");
  CHECK(names[11] == "Band.Accelerometer.X.fft.energy");
  CHECK(names[17] == "Band.Accelerometer.X.hist.-20");
  CHECK(names[3 * 58] == "Band.Accelerometer.XY.stat.cov");
  CHECK(names.back() == "Band.All.XYZ.gait.rotation_energy");
  std::set<std::string> unique(names.begin(), names.end());
  CHECK(unique.size() == names.size());
  for (const auto& n : names) CHECK(device_of(n) == Device::Band);
  CHECK(family_of("Band.Gyroscope.Z.fft.top_freq_2") == FeatureFamily::Frequency);
  CHECK(family_of("Band.All.XYZ.gait.normalized_sma") == FeatureFamily::KnownGait);
  CHECK(family_of("Band.Gyroscope.XZ.stat.cov") == FeatureFamily::Statistics);
  CHECK(family_of("Band.Gyroscope.X.hist.3") == FeatureFamily::Histogram);
}

TEST_CASE("fingerprint is FNV-1a over newline-joined names") {
  const auto names = device_block_names(Device::Band, device_spec(Device::Band).sensors);
  std::string joined;
  for (std::size_t i = 0; i < names.size(); ++i) joined += (i ? "\n" : "") + names[i];
  CHECK(Catalog(names).fingerprint() == fnv1a(joined));
  CHECK(Catalog(names).fingerprint() != Catalog({names.begin(), names.end() - 1}).fingerprint());
}

TEST_CASE("assemble_feature_vector") {
  const auto a = pair_for("s03", 50);
  const auto b = pair_for("s04", 300);
  const auto va = assemble_feature_vector(a.before, DeviceMask::all());
  const auto vb = assemble_feature_vector(b.after, DeviceMask::all());
  CHECK(*va.catalog == *vb.catalog);

  const auto no_phone = pair_for("s05", 10, false);
  CHECK_ERROR(assemble_feature_vector(no_phone.before, DeviceMask::all()), ErrorCode::MissingDevice);
  const auto glass = assemble_feature_vector(no_phone.before, DeviceMask::of(Device::Glass));
  CHECK(glass.catalog->size() == block_length(Device::Glass));

  const auto masked = assemble_feature_vector(a.before, DeviceMask::parse("Phone+Watch"));
  CHECK(masked.catalog->size() == block_length(Device::Watch) + block_length(Device::Phone));
  CHECK((*masked.catalog)[0].rfind("Watch.", 0) == 0);
}

TEST_CASE("feature_difference") {
  auto cat = std::make_shared<const Catalog>(std::vector<std::string>{"a", "b"});
  const FeatureVector before{cat, {1, 2}}, after{cat, {3, 1}};
  CHECK(feature_difference(before, after).values == std::vector<double>{2, -1});
  CHECK(feature_difference(before, before).values == std::vector<double>{0, 0});
  auto other = std::make_shared<const Catalog>(std::vector<std::string>{"a", "c"});
  CHECK_ERROR(feature_difference(before, FeatureVector{other, {3, 1}}), ErrorCode::CatalogMismatch);

  gen::Rng rng(4);
  std::vector<std::string> names;
  for (int i = 0; i < 64; ++i) names.push_back("f" + std::to_string(i));
  auto big = std::make_shared<const Catalog>(names);
  for (int rep = 0; rep < 20; ++rep) {
    FeatureVector x{big, gen::signal(rng, 64)}, y{big, gen::signal(rng, 64)};
    const auto d = feature_difference(x, y);
    const auto r = feature_difference(y, x);
    for (std::size_t i = 0; i < 64; ++i) {
      CHECK(d.values[i] == y.values[i] - x.values[i]);
      CHECK(d.values[i] == -r.values[i]);
    }
  }
}

TEST_CASE("make_instance labels the after-minus-before vector") {
  const auto p = pair_for("s06", 333);
  const auto inst = make_instance(p, DeviceMask::of(Device::Band));
  CHECK(inst.subject_id == "s06");
  CHECK(inst.brac == 333);
  const auto before = assemble_feature_vector(p.before, DeviceMask::of(Device::Band));
  const auto after = assemble_feature_vector(p.after, DeviceMask::of(Device::Band));
  for (std::size_t i = 0; i < before.values.size(); ++i)
    CHECK(inst.diff.values[i] == after.values[i] - before.values[i]);
}
