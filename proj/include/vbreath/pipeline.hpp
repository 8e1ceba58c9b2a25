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
#include <filesystem>
#include <span>
#include <vector>

#include "vbreath/dataset.hpp"
#include "vbreath/datamodel.hpp"
#include "vbreath/signal.hpp"
#include "vbreath/synth.hpp"

namespace vbreath {

/// f-difference rows for every pair over the union of their devices.
/// Subjects missing a device get NaN cells for that block.
Dataset build_dataset(std::span<const SubjectPair> pairs, const SignalConfig& config = {});

/// Pairs every `*.csv` recording in `dir` (labels.csv excluded) with its label.
/// Throws MissingSession and MissingLabel.
std::vector<SubjectPair> load_pairs(const std::filesystem::path& dir, const std::filesystem::path& labels);

Dataset extract_dataset(const std::filesystem::path& dir, const std::filesystem::path& labels,
                        const SignalConfig& config = {});

/// Writes `<id>_before.csv`, `<id>_after.csv` and `labels.csv`.
void write_pairs(const std::filesystem::path& dir, std::span<const SubjectPair> pairs);

void simulate_to_directory(const std::filesystem::path& dir, std::size_t n, std::uint64_t seed,
                           const BracDistribution& distribution = {}, const EffectModel& effect = {});

}  // namespace vbreath
