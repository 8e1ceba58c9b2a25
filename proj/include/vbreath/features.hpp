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
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vbreath/datamodel.hpp"
#include "vbreath/signal.hpp"

namespace vbreath {

enum class FeatureFamily : std::uint8_t { Statistics, Frequency, Histogram, KnownGait };

inline constexpr std::array<FeatureFamily, 4> kAllFamilies{
    FeatureFamily::Histogram, FeatureFamily::KnownGait, FeatureFamily::Frequency,
    FeatureFamily::Statistics};

std::string_view to_string(FeatureFamily family) noexcept;
/// Token used inside catalog names: stat, fft, hist, gait.
std::string_view family_token(FeatureFamily family) noexcept;

// ---------------------------------------------------------------------------
// Per-axis statistics

inline constexpr std::array<std::string_view, 11> kStatNames{
    "mean", "variance", "std", "skewness", "min", "max",
    "median", "range", "rms", "zcr", "mcr"};

struct StatFeatures {
  double mean;
  double variance;  // population
  double stddev;
  double skewness;  // 0 when stddev == 0
  double min;
  double max;
  double median;
  double range;
  double rms;
  double zero_crossing_rate;
  double mean_crossing_rate;

  std::array<double, 11> values() const;
};

/// Throws TooShort below two samples.
StatFeatures stat_features(std::span<const double> signal);

/// Population cov(x,y), cov(x,z), cov(y,z). Throws LengthMismatch/TooShort.
std::array<double, 3> axis_covariances(std::span<const double> x, std::span<const double> y,
                                       std::span<const double> z);

// ---------------------------------------------------------------------------
// Spectrum

inline constexpr std::array<std::string_view, 6> kFftNames{
    "energy", "top_freq_1", "top_freq_2", "top_freq_3", "top_freq_4", "dominant_bin"};

struct FftFeatures {
  double energy;                              // sum |X_k|^2 / N of the raw signal
  std::array<double, 4> top_frequencies_hz;  // non-DC, descending magnitude
  double dominant_bin;                        // index of the largest non-DC bin

  std::array<double, 6> values() const;
};

/// Throws TooShort below eight samples.
FftFeatures fft_features(std::span<const double> signal, double rate_hz);

/// Frequency in Hz of the largest-magnitude non-DC bin of the mean-removed signal.
double dominant_frequency_hz(std::span<const double> signal, double rate_hz);

// ---------------------------------------------------------------------------
// Histogram

struct HistogramSupport {
  int lo;
  int hi;  // inclusive
  std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
};

/// Fixed integer support per sensor kind (m/s^2, rad/s, uT).
HistogramSupport histogram_support(SensorKind sensor);

/// Round half away from zero, clamp into the support, count, divide by N.
std::vector<double> histogram_features(std::span<const double> signal, HistogramSupport support);

// ---------------------------------------------------------------------------
// Gait

inline constexpr std::array<std::string_view, 13> kGaitNames{
    "movement_intensity",   "normalized_sma",         "eigenvalue_1",
    "eigenvalue_2",         "eigenvalue_3",           "gravity_heading_correlation",
    "velocity_heading",     "velocity_gravity",       "rotation_angle_gravity",
    "dominant_frequency",   "magnitude_energy",       "acceleration_energy",
    "rotation_energy"};

struct GaitFeatures {
  double movement_intensity;
  double normalized_sma;
  std::array<double, 3> eigenvalues;  // descending
  double gravity_heading_correlation;
  double velocity_heading;
  double velocity_gravity;
  double rotation_angle_gravity;
  double dominant_frequency_hz;
  double magnitude_energy;
  double acceleration_energy;
  double rotation_energy;

  std::array<double, 13> values() const;
};

/// `accel` and `gyro` are X/Y/Z axis signals on the same grid. A null `gyro`
/// throws MissingSensor.
GaitFeatures gait_features(const std::array<AxisSignal, 3>& accel,
                           const std::array<AxisSignal, 3>* gyro);

// ---------------------------------------------------------------------------
// Catalog and vectors

/// Canonical ordered list of feature names `device.sensor.axis.family.id`.
class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<std::string> names) : names_(std::move(names)) {}

  std::span<const std::string> names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  const std::string& operator[](std::size_t i) const { return names_[i]; }

  /// FNV-1a 64 over the names joined with '\n'.
  std::uint64_t fingerprint() const;

  bool operator==(const Catalog& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
};

FeatureFamily family_of(std::string_view feature_name);
Device device_of(std::string_view feature_name);

/// Names of one device's block for the given sensor set (canonical order).
std::vector<std::string> device_block_names(Device device, std::span<const SensorKind> sensors);

struct FeatureVector {
  std::shared_ptr<const Catalog> catalog;
  std::vector<double> values;
};

/// Features for a single device of a recording, catalog order.
std::vector<double> device_block_values(const GaitRecording& recording, Device device,
                                        const SignalConfig& config);

/// Concatenates device blocks over `mask` in canonical order. Throws MissingDevice.
FeatureVector assemble_feature_vector(const GaitRecording& recording, DeviceMask mask,
                                      const SignalConfig& config = {});

/// after - before. Throws CatalogMismatch.
FeatureVector feature_difference(const FeatureVector& before, const FeatureVector& after);

struct LabeledInstance {
  std::string subject_id;
  FeatureVector diff;
  double brac;
};

LabeledInstance make_instance(const SubjectPair& pair, DeviceMask mask, const SignalConfig& config = {});

}  // namespace vbreath
