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

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vbreath/datamodel.hpp"
#include "vbreath/features.hpp"
#include "vbreath/models.hpp"

namespace vbreath {

/// Feature matrix: one f-difference row per subject over a shared catalog.
/// Cells of devices a subject did not carry hold NaN and are flagged in `present`.
struct Dataset {
  std::shared_ptr<const Catalog> catalog;
  std::vector<std::string> subjects;
  std::vector<std::vector<double>> rows;
  std::vector<double> brac;
  std::vector<DeviceMask> present;

  std::size_t size() const { return subjects.size(); }
  std::size_t features() const { return catalog ? catalog->size() : 0; }

  /// Devices that have at least one column in the catalog.
  DeviceMask catalog_devices() const;
  Matrix matrix() const;
};

/// Rows sorted by subject id. All instances must share one catalog (CatalogMismatch).
Dataset dataset_from_instances(std::vector<LabeledInstance> instances);

/// Columns of the masked devices; rows that carry every masked device.
/// Throws MissingDevice when the catalog lacks a masked device.
Dataset select_devices(const Dataset& data, DeviceMask mask);

Dataset select_columns(const Dataset& data, std::span<const std::size_t> columns);

/// Column indices whose family is (or, with `complement`, is not) `family`.
std::vector<std::size_t> family_columns(const Catalog& catalog, FeatureFamily family, bool complement);

/// Header `subject_id,<catalog...>,brac`; missing-device cells are empty.
void write_matrix(std::ostream& out, const Dataset& data);
Dataset read_matrix(std::istream& in, std::string_view source = "<stream>");
void save_matrix(const std::filesystem::path& path, const Dataset& data);
Dataset load_matrix(const std::filesystem::path& path);

}  // namespace vbreath
