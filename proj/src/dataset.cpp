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

#include "vbreath/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "vbreath/error.hpp"
#include "vbreath/text.hpp"

namespace vbreath {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

DeviceMask row_presence(const Catalog& catalog, std::span<const double> row) {
  std::array<int, 4> seen{}, finite{};
  for (std::size_t c = 0; c < catalog.size(); ++c) {
    const auto d = static_cast<std::size_t>(device_of(catalog[c]));
    ++seen[d];
    if (std::isfinite(row[c])) ++finite[d];
  }
  DeviceMask mask;
  for (Device d : kAllDevices) {
    const auto i = static_cast<std::size_t>(d);
    if (seen[i] == 0) continue;
    if (finite[i] == seen[i]) mask = mask.with(d);
    else if (finite[i] != 0)
      fail(ErrorCode::MalformedFile, "partially missing " + std::string(to_string(d)) + " block");
  }
  return mask;
}

}  // namespace

DeviceMask Dataset::catalog_devices() const {
  DeviceMask mask;
  if (!catalog) return mask;
  for (const auto& name : catalog->names()) mask = mask.with(device_of(name));
  return mask;
}

Matrix Dataset::matrix() const {
  Matrix m(rows.size(), features());
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  return m;
}

Dataset dataset_from_instances(std::vector<LabeledInstance> instances) {
  std::sort(instances.begin(), instances.end(),
            [](const auto& a, const auto& b) { return a.subject_id < b.subject_id; });
  Dataset data;
  for (auto& inst : instances) {
    if (!inst.diff.catalog) fail(ErrorCode::CatalogMismatch, "instance without catalog");
    if (!data.catalog) data.catalog = inst.diff.catalog;
    else if (data.catalog != inst.diff.catalog && !(*data.catalog == *inst.diff.catalog))
      fail(ErrorCode::CatalogMismatch, "instance " + inst.subject_id + " has a different catalog");
    if (!data.subjects.empty() && data.subjects.back() == inst.subject_id)
      fail(ErrorCode::DuplicateSubject, "duplicate subject " + inst.subject_id);
    data.present.push_back(row_presence(*data.catalog, inst.diff.values));
    data.subjects.push_back(std::move(inst.subject_id));
    data.rows.push_back(std::move(inst.diff.values));
    data.brac.push_back(inst.brac);
  }
  return data;
}

Dataset select_devices(const Dataset& data, DeviceMask mask) {
  if (mask.empty()) fail(ErrorCode::InvalidArgument, "empty device mask");
  if (!data.catalog_devices().contains(mask))
    fail(ErrorCode::MissingDevice, "feature matrix has no columns for " + mask.to_string());
  std::vector<std::size_t> columns;
  for (std::size_t c = 0; c < data.features(); ++c)
    if (mask.contains(device_of((*data.catalog)[c]))) columns.push_back(c);
  Dataset sliced = select_columns(data, columns);
  Dataset out;
  out.catalog = sliced.catalog;
  for (std::size_t r = 0; r < sliced.size(); ++r) {
    if (!data.present[r].contains(mask)) continue;
    out.subjects.push_back(sliced.subjects[r]);
    out.rows.push_back(std::move(sliced.rows[r]));
    out.brac.push_back(sliced.brac[r]);
    out.present.push_back(DeviceMask(data.present[r].bits() & mask.bits()));
  }
  return out;
}

Dataset select_columns(const Dataset& data, std::span<const std::size_t> columns) {
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (auto c : columns) {
    if (c >= data.features()) fail(ErrorCode::DimensionMismatch, "column index out of range");
    names.push_back((*data.catalog)[c]);
  }
  Dataset out;
  out.catalog = std::make_shared<const Catalog>(std::move(names));
  out.subjects = data.subjects;
  out.brac = data.brac;
  for (std::size_t r = 0; r < data.size(); ++r) {
    std::vector<double> row;
    row.reserve(columns.size());
    for (auto c : columns) row.push_back(data.rows[r][c]);
    out.present.push_back(row_presence(*out.catalog, row));
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<std::size_t> family_columns(const Catalog& catalog, FeatureFamily family, bool complement) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < catalog.size(); ++c)
    if ((family_of(catalog[c]) == family) != complement) out.push_back(c);
  return out;
}

void write_matrix(std::ostream& out, const Dataset& data) {
  std::string buf = "subject_id";
  for (const auto& name : data.catalog->names()) {
    buf += ',';
    buf += name;
  }
  buf += ",brac\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    buf += data.subjects[r];
    for (double v : data.rows[r]) {
      buf += ',';
      if (std::isfinite(v)) text::append_double(buf, v);
    }
    buf += ',';
    text::append_double(buf, data.brac[r]);
    buf += '\n';
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

Dataset read_matrix(std::istream& in, std::string_view source) {
  const std::string buffer(std::istreambuf_iterator<char>(in), {});
  std::vector<std::string_view> lines;
  {
    std::string_view rest = buffer;
    while (!rest.empty()) {
      const auto nl = rest.find('\n');
      auto line = rest.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!text::trim(line).empty()) lines.push_back(line);
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }
  const std::string src(source);
  if (lines.empty()) fail(ErrorCode::MalformedFile, src + ": empty feature matrix");
  const auto header = text::split_fields(lines[0]);
  if (header.size() < 3 || text::trim(header.front()) != "subject_id" || text::trim(header.back()) != "brac")
    fail(ErrorCode::MalformedFile, src + ": header must be subject_id,<features...>,brac");
  std::vector<std::string> names;
  for (std::size_t i = 1; i + 1 < header.size(); ++i) {
    names.emplace_back(text::trim(header[i]));
    (void)family_of(names.back());
    (void)device_of(names.back());
  }

  std::vector<LabeledInstance> instances;
  auto catalog = std::make_shared<const Catalog>(std::move(names));
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = text::split_fields(lines[l]);
    const auto where = src + ":" + std::to_string(l + 1);
    if (fields.size() != header.size()) fail(ErrorCode::MalformedFile, where + ": wrong field count");
    LabeledInstance inst{std::string(text::trim(fields.front())), {catalog, {}}, 0.0};
    if (inst.subject_id.empty()) fail(ErrorCode::MalformedFile, where + ": empty subject_id");
    inst.diff.values.reserve(catalog->size());
    for (std::size_t i = 1; i + 1 < fields.size(); ++i) {
      if (text::trim(fields[i]).empty()) {
        inst.diff.values.push_back(kMissing);
        continue;
      }
      const auto v = text::parse_double(fields[i]);
      if (!v || !std::isfinite(*v)) fail(ErrorCode::MalformedFile, where + ": bad feature value");
      inst.diff.values.push_back(*v);
    }
    const auto brac = text::parse_double(fields.back());
    if (!brac || !std::isfinite(*brac)) fail(ErrorCode::MalformedFile, where + ": bad brac");
    if (*brac < 0.0) fail(ErrorCode::NegativeBrac, where + ": negative brac");
    inst.brac = *brac;
    instances.push_back(std::move(inst));
  }
  Dataset data = dataset_from_instances(std::move(instances));
  if (!data.catalog) data.catalog = catalog;
  return data;
}

void save_matrix(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  write_matrix(out, data);
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

Dataset load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return read_matrix(in, path.string());
}

}  // namespace vbreath
