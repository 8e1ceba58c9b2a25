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

#include "vbreath/pipeline.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <limits>
#include <map>
#include <optional>

#include "parallel.hpp"
#include "vbreath/error.hpp"

namespace vbreath {
namespace {

struct Block {
  std::vector<std::string> names;
  std::vector<double> values;
};

// Splits a vector into its per-device blocks, keyed by device index.
std::array<std::optional<Block>, 4> split_blocks(const FeatureVector& v) {
  std::array<std::optional<Block>, 4> blocks;
  for (std::size_t c = 0; c < v.catalog->size(); ++c) {
    const auto& name = (*v.catalog)[c];
    auto& b = blocks[static_cast<std::size_t>(device_of(name))];
    if (!b) b.emplace();
    b->names.push_back(name);
    b->values.push_back(v.values[c]);
  }
  return blocks;
}

}  // namespace

Dataset build_dataset(std::span<const SubjectPair> pairs, const SignalConfig& config) {
  if (pairs.empty()) fail(ErrorCode::EmptyData, "no subjects");
  std::vector<LabeledInstance> instances(pairs.size());
  detail::parallel_for(pairs.size(), [&](std::size_t i) {
    instances[i] = make_instance(pairs[i], pairs[i].before.devices(), config);
  });

  std::vector<std::array<std::optional<Block>, 4>> split;
  std::array<std::optional<std::vector<std::string>>, 4> layout;
  for (const auto& inst : instances) {
    split.push_back(split_blocks(inst.diff));
    for (std::size_t d = 0; d < 4; ++d) {
      const auto& b = split.back()[d];
      if (!b) continue;
      if (!layout[d]) layout[d] = b->names;
      else if (*layout[d] != b->names)
        fail(ErrorCode::CatalogMismatch, inst.subject_id + " carries a different " +
                                             std::string(to_string(static_cast<Device>(d))) + " sensor set");
    }
  }

  std::vector<std::string> names;
  for (const auto& l : layout)
    if (l) names.insert(names.end(), l->begin(), l->end());
  auto catalog = std::make_shared<const Catalog>(std::move(names));

  for (std::size_t i = 0; i < instances.size(); ++i) {
    std::vector<double> row;
    row.reserve(catalog->size());
    for (std::size_t d = 0; d < 4; ++d) {
      if (!layout[d]) continue;
      if (split[i][d]) row.insert(row.end(), split[i][d]->values.begin(), split[i][d]->values.end());
      else row.insert(row.end(), layout[d]->size(), std::numeric_limits<double>::quiet_NaN());
    }
    instances[i].diff = FeatureVector{catalog, std::move(row)};
  }
  return dataset_from_instances(std::move(instances));
}

std::vector<SubjectPair> load_pairs(const std::filesystem::path& dir, const std::filesystem::path& labels_path) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) fail(ErrorCode::IoError, "not a directory: " + dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    if (entry.path().filename() == "labels.csv") continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrorCode::MissingSession, "empty manifest: no recordings in " + dir.string());

  std::map<std::string, std::array<std::optional<GaitRecording>, 2>> sessions;
  for (const auto& f : files) {
    auto rec = parse_recording(f);
    auto& slot = sessions[rec.subject_id()][static_cast<std::size_t>(rec.session())];
    if (slot)
      fail(ErrorCode::DuplicateSubject, "two " + std::string(to_string(rec.session())) + " recordings for " +
                                            rec.subject_id());
    slot = std::move(rec);
  }

  const auto labels = parse_labels(labels_path);
  std::vector<SubjectPair> pairs;
  for (auto& [subject, pair] : sessions) {
    for (Session s : {Session::Before, Session::After})
      if (!pair[static_cast<std::size_t>(s)])
        fail(ErrorCode::MissingSession, subject + " has no " + std::string(to_string(s)) + " recording");
    const auto label = labels.find(subject);
    if (label == labels.end()) fail(ErrorCode::MissingLabel, "no label for " + subject);
    pairs.emplace_back(std::move(*pair[0]), std::move(*pair[1]), label->second);
  }
  for (const auto& [subject, brac] : labels)
    if (!sessions.contains(subject)) fail(ErrorCode::MissingSession, "labelled subject " + subject + " has no recordings");
  return pairs;
}

Dataset extract_dataset(const std::filesystem::path& dir, const std::filesystem::path& labels,
                        const SignalConfig& config) {
  const auto pairs = load_pairs(dir, labels);
  return build_dataset(pairs, config);
}

void write_pairs(const std::filesystem::path& dir, std::span<const SubjectPair> pairs) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  std::map<std::string, double> labels;
  for (const auto& p : pairs) {
    save_recording(dir / (p.subject_id() + "_before.csv"), p.before);
    save_recording(dir / (p.subject_id() + "_after.csv"), p.after);
    labels[p.subject_id()] = p.brac;
  }
  std::ofstream out(dir / "labels.csv", std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write labels.csv in " + dir.string());
  write_labels(out, labels);
  if (!out) fail(ErrorCode::IoError, "write failed: labels.csv");
}

void simulate_to_directory(const std::filesystem::path& dir, std::size_t n, std::uint64_t seed,
                           const BracDistribution& distribution, const EffectModel& effect) {
  const auto pairs = generate_dataset(n, distribution, seed, effect);
  write_pairs(dir, pairs);
}

}  // namespace vbreath
