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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vbreath {

// Enumerator order is the canonical feature-catalog order.
enum class Device : std::uint8_t { Glass, Watch, Band, Phone };
enum class SensorKind : std::uint8_t { Accelerometer, LinearAcceleration, Gyroscope, Gravity, Compass };
enum class BodyLocation : std::uint8_t { Head, LeftHand, RightHand, Rump };
enum class Session : std::uint8_t { Before, After };
enum class Axis : std::uint8_t { X, Y, Z };

inline constexpr std::array<Device, 4> kAllDevices{Device::Glass, Device::Watch, Device::Band,
                                                   Device::Phone};
inline constexpr std::array<SensorKind, 5> kAllSensors{
    SensorKind::Accelerometer, SensorKind::LinearAcceleration, SensorKind::Gyroscope,
    SensorKind::Gravity, SensorKind::Compass};
inline constexpr std::array<Axis, 3> kAllAxes{Axis::X, Axis::Y, Axis::Z};

struct DeviceSpec {
  Device id;
  BodyLocation body_location;
  std::vector<SensorKind> sensors;  // canonical order
  double max_rate_hz;
};

/// Published catalog: Band carries accelerometer and gyroscope only.
const DeviceSpec& device_spec(Device device);

std::string_view to_string(Device device) noexcept;
std::string_view to_string(SensorKind sensor) noexcept;
std::string_view to_string(Session session) noexcept;
std::string_view to_string(Axis axis) noexcept;

/// Throws UnknownDevice.
Device parse_device(std::string_view name);
/// Throws UnknownSensor.
SensorKind parse_sensor(std::string_view name);
/// Accepts "before"/"after" in any case; throws MalformedFile.
Session parse_session(std::string_view name);

class DeviceMask {
 public:
  constexpr DeviceMask() = default;
  constexpr explicit DeviceMask(std::uint8_t bits) : bits_(bits & 0x0F) {}

  static constexpr DeviceMask all() { return DeviceMask(0x0F); }
  static constexpr DeviceMask of(Device d) {
    return DeviceMask(static_cast<std::uint8_t>(1u << static_cast<unsigned>(d)));
  }

  constexpr bool contains(Device d) const { return (bits_ >> static_cast<unsigned>(d)) & 1u; }
  constexpr bool contains(DeviceMask other) const { return (bits_ & other.bits_) == other.bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr DeviceMask with(Device d) const { return DeviceMask(bits_ | of(d).bits_); }
  constexpr DeviceMask operator|(DeviceMask o) const { return DeviceMask(bits_ | o.bits_); }
  constexpr bool operator==(const DeviceMask&) const = default;

  std::vector<Device> devices() const;

  /// "all" or devices joined by '+', e.g. "Phone+Watch".
  std::string to_string() const;
  /// Parses "all", "Phone+Watch", "phone,glass" (either separator). Throws InvalidArgument.
  static DeviceMask parse(std::string_view text);

 private:
  std::uint8_t bits_ = 0;
};

/// The six combinations compared in the device ablation.
const std::vector<DeviceMask>& ablation_device_masks();

struct Sample {
  std::int64_t t_ns;
  double x;
  double y;
  double z;

  double axis(Axis a) const { return a == Axis::X ? x : (a == Axis::Y ? y : z); }
};

/// One sensor's time series. Timestamps strictly increase, at least two samples,
/// every value finite; violations throw on construction.
class SensorStream {
 public:
  SensorStream(Device device, SensorKind sensor, std::vector<Sample> samples);

  Device device() const { return device_; }
  SensorKind sensor() const { return sensor_; }
  std::span<const Sample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }

 private:
  Device device_;
  SensorKind sensor_;
  std::vector<Sample> samples_;
};

class GaitRecording {
 public:
  GaitRecording(std::string subject_id, Session session, DeviceMask devices,
                std::vector<SensorStream> streams);

  const std::string& subject_id() const { return subject_id_; }
  Session session() const { return session_; }
  DeviceMask devices() const { return devices_; }
  bool has_phone() const { return devices_.contains(Device::Phone); }
  std::span<const SensorStream> streams() const { return streams_; }

  /// nullptr when the pair is absent.
  const SensorStream* find(Device device, SensorKind sensor) const;
  /// Sensors recorded for `device`, canonical order.
  std::vector<SensorKind> sensors_of(Device device) const;

 private:
  std::string subject_id_;
  Session session_;
  DeviceMask devices_;
  std::vector<SensorStream> streams_;  // sorted canonically
};

struct SubjectPair {
  SubjectPair(GaitRecording before, GaitRecording after, double brac);

  const std::string& subject_id() const { return before.subject_id(); }

  GaitRecording before;
  GaitRecording after;
  double brac;
};

/// Legal per-country limits in µg alcohol per litre of breath.
class BracThreshold {
 public:
  static constexpr std::array<int, 4> kAllowed{220, 240, 250, 350};

  /// Throws InvalidArgument unless `value` is one of kAllowed.
  explicit BracThreshold(int value);
  int value() const { return value_; }

 private:
  int value_;
};

enum class BracClass : std::uint8_t { Sober = 0, Drunk = 1 };

/// Equality with the threshold counts as Drunk.
BracClass label_class(double brac, BracThreshold threshold);

// Recording CSV:
//   subject_id,session,device,sensor
//   <subject>,<Before|After>,<devices joined by ';'>,<stream count>
//   #stream,<device>,<sensor>
//   <t_ns>,<x>,<y>,<z>
//   ...
GaitRecording read_recording(std::istream& in, std::string_view source = "<stream>");
GaitRecording parse_recording(const std::filesystem::path& path);
void write_recording(std::ostream& out, const GaitRecording& recording);
void save_recording(const std::filesystem::path& path, const GaitRecording& recording);

// Labels CSV: header `subject_id,brac`, one row per subject.
std::map<std::string, double> read_labels(std::istream& in, std::string_view source = "<stream>");
std::map<std::string, double> parse_labels(const std::filesystem::path& path);
void write_labels(std::ostream& out, const std::map<std::string, double>& labels);

}  // namespace vbreath
