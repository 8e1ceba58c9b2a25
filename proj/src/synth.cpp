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

#include "vbreath/synth.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vbreath/error.hpp"

namespace vbreath {
namespace {

constexpr double kGravity = 9.80665;
// Overtones stay below the fundamental even when it falls between two DFT bins
// (rectangular-window scalloping costs it up to ~36%), so the vertical peak stays at the cadence.
constexpr double kMaxOvertone = 0.55;
constexpr double kDurationS = 16.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t a, std::uint32_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), a, b};
  return std::mt19937_64(seq);
}

double quantize(double v) { return std::round(v * 1e5) / 1e5; }

struct DeviceBody {
  double accel_gain;
  double gyro_gain;
  double phase_offset;
};

DeviceBody body_of(Device d, double arm) {
  switch (d) {
    case Device::Glass: return {0.6, 0.35, 0.0};
    case Device::Watch: return {0.9 * arm, 1.6 * arm, 0.0};
    case Device::Band: return {0.9 * arm, 1.6 * arm, std::numbers::pi};
    case Device::Phone: return {1.0, 0.5, 0.2};
  }
  return {1.0, 1.0, 0.0};
}

// Step-phase noise shared by every device in a session: one knot per step,
// linearly interpolated.
class PhaseJitter {
 public:
  PhaseJitter(double cadence_hz, double sigma, std::mt19937_64& rng) : step_s_(1.0 / cadence_hz) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto knots = static_cast<std::size_t>(std::ceil(kDurationS / step_s_)) + 2;
    knots_.resize(knots);
    for (auto& k : knots_) k = sigma * normal(rng);
  }

  double at(double t) const {
    const double pos = t / step_s_;
    const auto i = std::min(static_cast<std::size_t>(pos), knots_.size() - 2);
    const double frac = pos - static_cast<double>(i);
    return knots_[i] + frac * (knots_[i + 1] - knots_[i]);
  }

 private:
  double step_s_;
  std::vector<double> knots_;
};

GaitRecording generate_session(const SubjectProfile& p, const EffectModel& effect, Session session) {
  const bool after = session == Session::After;
  const double impairment = after ? std::pow(p.brac / kMaxBrac, effect.dose_exponent) : 0.0;
  const double cadence = p.cadence_hz * (1.0 - effect.cadence_slowdown * impairment);
  const auto session_tag = static_cast<std::uint32_t>(session);

  auto session_rng = make_rng(p.seed, session_tag, 1000);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  const double phase0 = angle(session_rng);
  const double sway_phase = angle(session_rng);
  const PhaseJitter jitter(cadence, effect.phase_jitter_rad * impairment, session_rng);
  const double sway = effect.sway_amplitude * impairment;

  std::vector<SensorStream> streams;
  DeviceMask devices;
  for (Device d : kAllDevices) {
    if (d == Device::Phone && !p.has_phone) continue;
    devices = devices.with(d);
    const auto& spec = device_spec(d);
    const auto body = body_of(d, p.arm_swing_ratio);

    // Mounting orientation is a property of the subject and device, not the session.
    auto mount_rng = make_rng(p.seed, 7, static_cast<std::uint32_t>(d));
    std::normal_distribution<double> tilt(0.0, 0.08);
    std::normal_distribution<double> yaw(0.0, 0.3);
    const Eigen::Matrix3d mount =
        (Eigen::AngleAxisd(yaw(mount_rng), Eigen::Vector3d::UnitZ()) *
         Eigen::AngleAxisd(tilt(mount_rng), Eigen::Vector3d::UnitY()) *
         Eigen::AngleAxisd(tilt(mount_rng), Eigen::Vector3d::UnitX()))
            .toRotationMatrix();
    const Eigen::Vector3d field(20.0 + 2.0 * tilt(mount_rng), 5.0, -40.0);
    std::uniform_real_distribution<double> spread(0.8, 1.2);
    const double h2 = std::min(kMaxOvertone, p.harmonic_2 * spread(mount_rng));
    const double h3 = std::min(kMaxOvertone, p.harmonic_3 * spread(mount_rng));
    const double p2 = angle(mount_rng);
    const double p3 = angle(mount_rng);

    auto noise_rng = make_rng(p.seed, session_tag + 10, static_cast<std::uint32_t>(d));
    std::normal_distribution<double> accel_noise(0.0, 0.15 * effect.noise_scale);
    std::normal_distribution<double> gravity_noise(0.0, 0.01 * effect.noise_scale);
    std::normal_distribution<double> gyro_noise(0.0, 0.03 * effect.noise_scale);
    std::normal_distribution<double> mag_noise(0.0, 0.4 * effect.noise_scale);

    std::vector<std::vector<Sample>> per_sensor(spec.sensors.size());
    const double rate = spec.max_rate_hz;
    for (std::int64_t k = 0;; ++k) {
      const auto t_ns = std::llround(static_cast<double>(k) * 1e9 / rate);
      if (t_ns >= static_cast<std::int64_t>(kDurationS * 1e9)) break;
      const double t = static_cast<double>(t_ns) * 1e-9;
      const double phi = kTwoPi * cadence * t + phase0 + jitter.at(t) + body.phase_offset;
      const double sway_wave = std::sin(kTwoPi * effect.sway_hz * t + sway_phase);
      const double sway_rate = std::cos(kTwoPi * effect.sway_hz * t + sway_phase);
      const double amp = p.step_amplitude * body.accel_gain;

      // World frame: x mediolateral, y anterior-posterior, z vertical.
      const Eigen::Vector3d motion(0.25 * amp * std::sin(0.5 * phi + 0.3) + sway * sway_wave,
                                   0.4 * amp * (std::sin(phi + 1.2) + h2 * std::sin(2.0 * phi + p2 + 1.0)),
                                   amp * (std::sin(phi) + h2 * std::sin(2.0 * phi + p2) + h3 * std::sin(3.0 * phi + p3)));
      const Eigen::Vector3d gravity(0.0, 0.0, kGravity);
      const double g = body.gyro_gain;
      const Eigen::Vector3d rotation(g * (std::sin(phi + 0.4) + 0.5 * h3 * std::sin(3.0 * phi + p3)), 0.35 * g * std::sin(2.0 * phi),
                                     0.25 * g * std::cos(phi) + 0.15 * sway * sway_rate);
      const double heading = 0.08 * std::sin(phi) + 0.1 * sway * sway_wave;
      const Eigen::Vector3d magnetic = Eigen::AngleAxisd(heading, Eigen::Vector3d::UnitZ()) * field;

      for (std::size_t s = 0; s < spec.sensors.size(); ++s) {
        Eigen::Vector3d v = Eigen::Vector3d::Zero();
        switch (spec.sensors[s]) {
          case SensorKind::Accelerometer:
            v = mount * (gravity + motion);
            v += Eigen::Vector3d(accel_noise(noise_rng), accel_noise(noise_rng), accel_noise(noise_rng));
            break;
          case SensorKind::LinearAcceleration:
            v = mount * motion;
            v += Eigen::Vector3d(accel_noise(noise_rng), accel_noise(noise_rng), accel_noise(noise_rng));
            break;
          case SensorKind::Gyroscope:
            v = mount * rotation;
            v += Eigen::Vector3d(gyro_noise(noise_rng), gyro_noise(noise_rng), gyro_noise(noise_rng));
            break;
          case SensorKind::Gravity:
            v = mount * gravity;
            v += Eigen::Vector3d(gravity_noise(noise_rng), gravity_noise(noise_rng), gravity_noise(noise_rng));
            break;
          case SensorKind::Compass:
            v = mount * magnetic;
            v += Eigen::Vector3d(mag_noise(noise_rng), mag_noise(noise_rng), mag_noise(noise_rng));
            break;
        }
        per_sensor[s].push_back({t_ns, quantize(v.x()), quantize(v.y()), quantize(v.z())});
      }
    }
    for (std::size_t s = 0; s < spec.sensors.size(); ++s)
      streams.emplace_back(d, spec.sensors[s], std::move(per_sensor[s]));
  }
  return GaitRecording(p.subject_id, session, devices, std::move(streams));
}

}  // namespace

void validate(const SubjectProfile& p) {
  auto bad = [&](const std::string& what) { fail(ErrorCode::InvalidProfile, p.subject_id + ": " + what); };
  if (p.subject_id.empty()) bad("empty subject id");
  if (!(p.cadence_hz > 0.0) || !std::isfinite(p.cadence_hz)) bad("cadence must be positive");
  if (!(p.step_amplitude > 0.0) || !std::isfinite(p.step_amplitude)) bad("step amplitude must be positive");
  if (!(p.arm_swing_ratio >= 0.0) || !std::isfinite(p.arm_swing_ratio)) bad("arm swing ratio must be non-negative");
  if (!(p.harmonic_2 >= 0.0 && p.harmonic_2 <= kMaxOvertone) || !(p.harmonic_3 >= 0.0 && p.harmonic_3 <= kMaxOvertone))
    bad("harmonic amplitudes must lie in [0, " + std::to_string(kMaxOvertone) + "]");
  if (!(p.brac >= 0.0 && p.brac <= kMaxBrac)) bad("brac must lie in [0, 430]");
}

SubjectPair generate_pair(const SubjectProfile& profile, const EffectModel& effect) {
  validate(profile);
  if (!(effect.cadence_slowdown >= 0.0 && effect.cadence_slowdown < 1.0) || !(effect.sway_hz > 0.0) ||
      !(effect.phase_jitter_rad >= 0.0) || !(effect.sway_amplitude >= 0.0) || !(effect.dose_exponent > 0.0) ||
      !(effect.noise_scale >= 0.0))
    fail(ErrorCode::InvalidProfile, "effect model out of range");
  return SubjectPair(generate_session(profile, effect, Session::Before),
                     generate_session(profile, effect, Session::After), profile.brac);
}

std::vector<SubjectProfile> draw_profiles(std::size_t n, const BracDistribution& dist, std::uint64_t master_seed) {
  if (n < 3) fail(ErrorCode::TooFewSubjects, "need at least 3 subjects, got " + std::to_string(n));
  if (!(dist.sober_fraction >= 0.0 && dist.sober_fraction <= 1.0) || !(dist.sober_max > 0.0) ||
      !(dist.sober_skew > 0.0) || !(dist.drunk_min >= dist.sober_max) || !(dist.drunk_max >= dist.drunk_min) ||
      !(dist.drunk_max <= kMaxBrac) || !(dist.no_phone_fraction >= 0.0 && dist.no_phone_fraction <= 1.0))
    fail(ErrorCode::BadDistribution, "brac distribution parameters out of range");

  auto rng = make_rng(master_seed, 0xB4AC, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto sober = static_cast<std::size_t>(std::llround(dist.sober_fraction * static_cast<double>(n)));
  const auto no_phone = static_cast<std::size_t>(std::llround(dist.no_phone_fraction * static_cast<double>(n)));

  std::vector<double> bracs;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = unit(rng);
    bracs.push_back(i < sober ? dist.sober_max * std::pow(u, dist.sober_skew)
                              : dist.drunk_min + u * (dist.drunk_max - dist.drunk_min));
  }
  std::shuffle(bracs.begin(), bracs.end(), rng);

  const int width = n >= 100 ? 3 : 2;
  std::vector<SubjectProfile> profiles;
  for (std::size_t i = 0; i < n; ++i) {
    SubjectProfile p;
    std::string num = std::to_string(i + 1);
    p.subject_id = "s" + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(num.size()))), '0') + num;
    p.cadence_hz = 1.6 + 0.6 * unit(rng);
    p.step_amplitude = 1.5 + 1.5 * unit(rng);
    p.arm_swing_ratio = 0.7 + 0.6 * unit(rng);
    p.harmonic_2 = 0.15 + 0.4 * unit(rng);
    p.harmonic_3 = 0.4 * unit(rng);
    p.brac = std::round(bracs[i]);
    p.seed = rng();
    p.has_phone = i >= no_phone;
    profiles.push_back(std::move(p));
  }
  return profiles;
}

std::vector<SubjectPair> generate_dataset(std::size_t n, const BracDistribution& dist, std::uint64_t master_seed,
                                          const EffectModel& effect) {
  std::vector<SubjectPair> pairs;
  for (const auto& profile : draw_profiles(n, dist, master_seed)) pairs.push_back(generate_pair(profile, effect));
  return pairs;
}

}  // namespace vbreath
