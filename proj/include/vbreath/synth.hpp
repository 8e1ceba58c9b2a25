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

#include <cstdint>
#include <string>
#include <vector>

#include "vbreath/datamodel.hpp"

namespace vbreath {

inline constexpr double kMaxBrac = 430.0;

struct SubjectProfile {
  std::string subject_id;
  double cadence_hz = 1.9;      // steps per second, [1.6, 2.2]
  double step_amplitude = 2.0;  // m/s^2
  double arm_swing_ratio = 1.0;
  double harmonic_2 = 0.35;     // heel-strike shape relative to the step fundamental, [0, 0.55]
  double harmonic_3 = 0.0;      // [0, 0.55]
  double brac = 0.0;            // [0, 430]
  std::uint64_t seed = 0;
  bool has_phone = true;
};

/// Impairment applied to the After session, scaled by (brac / 430)^dose_exponent.
struct EffectModel {
  double dose_exponent = 1.0;
  double cadence_slowdown = 0.25;  // fraction of cadence lost at the maximum BrAC
  double phase_jitter_rad = 0.5;   // per-step phase noise std
  double sway_amplitude = 1.5;     // m/s^2 of mediolateral sway
  double sway_hz = 0.4;
  double noise_scale = 1.0;  // multiplies every sensor's white-noise std, both sessions
};

struct BracDistribution {
  double sober_fraction = 0.7;  // share of subjects below sober_max
  double sober_max = 220.0;
  double sober_skew = 2.0;      // sober brac = sober_max * u^skew
  double drunk_min = 240.0;
  double drunk_max = kMaxBrac;
  double no_phone_fraction = 0.0;
};

/// Throws InvalidProfile.
void validate(const SubjectProfile& profile);

/// Before and After recordings with every device sampled at its native rate over 16 s.
SubjectPair generate_pair(const SubjectProfile& profile, const EffectModel& effect = {});

/// Deterministic per master_seed. Throws TooFewSubjects (n < 3) and BadDistribution.
std::vector<SubjectProfile> draw_profiles(std::size_t n, const BracDistribution& distribution,
                                          std::uint64_t master_seed);

std::vector<SubjectPair> generate_dataset(std::size_t n, const BracDistribution& distribution,
                                          std::uint64_t master_seed, const EffectModel& effect = {});

}  // namespace vbreath
