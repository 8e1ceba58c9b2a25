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

#include "vbreath/datamodel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>
#include <sstream>

#include "vbreath/error.hpp"
#include "vbreath/text.hpp"

namespace vbreath {
namespace {

constexpr std::string_view kRecordingHeader = "subject_id,session,device,sensor";
constexpr std::string_view kLabelsHeader = "subject_id,brac";
constexpr std::string_view kStreamTag = "#stream";

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char l, char r) {
           return std::tolower(static_cast<unsigned char>(l)) ==
                  std::tolower(static_cast<unsigned char>(r));
         });
}

std::string where(std::string_view source, std::size_t line_no) {
  std::ostringstream os;
  os << source << ":" << line_no;
  return os.str();
}

// Iterates '\n'-separated lines of an in-memory buffer.
class LineReader {
 public:
  explicit LineReader(std::string_view buffer) : rest_(buffer) {}

  bool next(std::string_view& line) {
    if (rest_.empty()) return false;
    const auto nl = rest_.find('\n');
    if (nl == std::string_view::npos) {
      line = rest_;
      rest_ = {};
    } else {
      line = rest_.substr(0, nl);
      rest_.remove_prefix(nl + 1);
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no_;
    return true;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::string_view rest_;
  std::size_t line_no_ = 0;
};

std::string slurp(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string slurp_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return slurp(in);
}

}  // namespace

const DeviceSpec& device_spec(Device device) {
  static const std::array<DeviceSpec, 4> kSpecs{{
      {Device::Glass, BodyLocation::Head, {kAllSensors.begin(), kAllSensors.end()}, 100.0},
      {Device::Watch, BodyLocation::LeftHand, {kAllSensors.begin(), kAllSensors.end()}, 200.0},
      {Device::Band, BodyLocation::RightHand, {SensorKind::Accelerometer, SensorKind::Gyroscope}, 62.0},
      {Device::Phone, BodyLocation::Rump, {kAllSensors.begin(), kAllSensors.end()}, 180.0},
  }};
  return kSpecs[static_cast<std::size_t>(device)];
}

std::string_view to_string(Device device) noexcept {
  switch (device) {
    case Device::Glass: return "Glass";
    case Device::Watch: return "Watch";
    case Device::Band: return "Band";
    case Device::Phone: return "Phone";
  }
  return "?";
}

std::string_view to_string(SensorKind sensor) noexcept {
  switch (sensor) {
    case SensorKind::Accelerometer: return "Accelerometer";
    case SensorKind::LinearAcceleration: return "LinearAcceleration";
    case SensorKind::Gyroscope: return "Gyroscope";
    case SensorKind::Gravity: return "Gravity";
    case SensorKind::Compass: return "Compass";
  }
  return "?";
}

std::string_view to_string(Session session) noexcept {
  return session == Session::Before ? "Before" : "After";
}

std::string_view to_string(Axis axis) noexcept {
  switch (axis) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    case Axis::Z: return "Z";
  }
  return "?";
}

Device parse_device(std::string_view name) {
  name = text::trim(name);
  for (Device d : kAllDevices)
    if (iequals(name, to_string(d))) return d;
  fail(ErrorCode::UnknownDevice, "unknown device '" + std::string(name) + "'");
}

SensorKind parse_sensor(std::string_view name) {
  name = text::trim(name);
  for (SensorKind s : kAllSensors)
    if (iequals(name, to_string(s))) return s;
  if (iequals(name, "Linear")) return SensorKind::LinearAcceleration;
  fail(ErrorCode::UnknownSensor, "unknown sensor '" + std::string(name) + "'");
}

Session parse_session(std::string_view name) {
  name = text::trim(name);
  if (iequals(name, "before")) return Session::Before;
  if (iequals(name, "after")) return Session::After;
  fail(ErrorCode::MalformedFile, "unknown session '" + std::string(name) + "'");
}

std::vector<Device> DeviceMask::devices() const {
  std::vector<Device> out;
  for (Device d : kAllDevices)
    if (contains(d)) out.push_back(d);
  return out;
}

std::string DeviceMask::to_string() const {
  if (*this == all()) return "all";
  std::string out;
  for (Device d : devices()) {
    if (!out.empty()) out += '+';
    out += vbreath::to_string(d);
  }
  return out;
}

DeviceMask DeviceMask::parse(std::string_view text) {
  text = text::trim(text);
  if (iequals(text, "all") || iequals(text, "all-four")) return all();
  DeviceMask mask;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find_first_of("+,;", start);
    if (end == std::string_view::npos) end = text.size();
    const auto token = text::trim(text.substr(start, end - start));
    if (token.empty()) fail(ErrorCode::InvalidArgument, "empty device in mask '" + std::string(text) + "'");
    try {
      mask = mask.with(parse_device(token));
    } catch (const Error& e) {
      fail(ErrorCode::InvalidArgument, e.what());
    }
    start = end + 1;
  }
  return mask;
}

const std::vector<DeviceMask>& ablation_device_masks() {
  static const std::vector<DeviceMask> kMasks{
      DeviceMask::all(),
      DeviceMask::of(Device::Phone),
      DeviceMask::of(Device::Watch),
      DeviceMask::of(Device::Glass),
      DeviceMask::of(Device::Phone).with(Device::Watch),
      DeviceMask::of(Device::Phone).with(Device::Glass),
  };
  return kMasks;
}

SensorStream::SensorStream(Device device, SensorKind sensor, std::vector<Sample> samples)
    : device_(device), sensor_(sensor), samples_(std::move(samples)) {
  const auto label = std::string(to_string(device)) + "/" + std::string(to_string(sensor));
  if (samples_.size() < 2) fail(ErrorCode::EmptyStream, label + ": fewer than 2 samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.z))
      fail(ErrorCode::NonFiniteInput, label + ": non-finite value at sample " + std::to_string(i));
    if (i > 0 && s.t_ns <= samples_[i - 1].t_ns)
      fail(ErrorCode::NonMonotonicTime,
           label + ": timestamp " + std::to_string(s.t_ns) + " does not increase");
  }
}

GaitRecording::GaitRecording(std::string subject_id, Session session, DeviceMask devices,
                             std::vector<SensorStream> streams)
    : subject_id_(std::move(subject_id)),
      session_(session),
      devices_(devices),
      streams_(std::move(streams)) {
  if (subject_id_.empty()) fail(ErrorCode::MalformedFile, "empty subject_id");
  std::stable_sort(streams_.begin(), streams_.end(), [](const auto& a, const auto& b) {
    return std::pair(a.device(), a.sensor()) < std::pair(b.device(), b.sensor());
  });
  for (std::size_t i = 0; i < streams_.size(); ++i) {
    const auto& s = streams_[i];
    if (!devices_.contains(s.device()))
      fail(ErrorCode::MalformedFile, "stream for undeclared device " + std::string(to_string(s.device())));
    const auto& spec = device_spec(s.device()).sensors;
    if (std::find(spec.begin(), spec.end(), s.sensor()) == spec.end())
      fail(ErrorCode::UnknownSensor, std::string(to_string(s.device())) + " has no " +
                                         std::string(to_string(s.sensor())));
    if (i > 0 && streams_[i - 1].device() == s.device() && streams_[i - 1].sensor() == s.sensor())
      fail(ErrorCode::DuplicateStream, "duplicate stream " + std::string(to_string(s.device())) +
                                           "/" + std::string(to_string(s.sensor())));
  }
  for (Device d : devices_.devices())
    if (sensors_of(d).empty())
      fail(ErrorCode::MissingDevice, "declared device " + std::string(to_string(d)) + " has no streams");
}

const SensorStream* GaitRecording::find(Device device, SensorKind sensor) const {
  for (const auto& s : streams_)
    if (s.device() == device && s.sensor() == sensor) return &s;
  return nullptr;
}

std::vector<SensorKind> GaitRecording::sensors_of(Device device) const {
  std::vector<SensorKind> out;
  for (const auto& s : streams_)
    if (s.device() == device) out.push_back(s.sensor());
  return out;
}

SubjectPair::SubjectPair(GaitRecording before_rec, GaitRecording after_rec, double brac_value)
    : before(std::move(before_rec)), after(std::move(after_rec)), brac(brac_value) {
  if (before.session() != Session::Before || after.session() != Session::After)
    fail(ErrorCode::MissingSession, "pair for " + before.subject_id() + " needs Before and After sessions");
  if (before.subject_id() != after.subject_id())
    fail(ErrorCode::MalformedFile, "pair mixes subjects " + before.subject_id() + " and " + after.subject_id());
  if (!(brac >= 0.0) || !std::isfinite(brac))
    fail(ErrorCode::NegativeBrac, "brac must be finite and non-negative for " + before.subject_id());
  bool same = before.devices() == after.devices() && before.streams().size() == after.streams().size();
  for (std::size_t i = 0; same && i < before.streams().size(); ++i)
    same = before.streams()[i].device() == after.streams()[i].device() &&
           before.streams()[i].sensor() == after.streams()[i].sensor();
  if (!same)
    fail(ErrorCode::CatalogMismatch, "Before/After sensor sets differ for " + before.subject_id());
}

BracThreshold::BracThreshold(int value) : value_(value) {
  if (std::find(kAllowed.begin(), kAllowed.end(), value) == kAllowed.end())
    fail(ErrorCode::InvalidArgument,
         "threshold " + std::to_string(value) + " not in {220, 240, 250, 350}");
}

BracClass label_class(double brac, BracThreshold threshold) {
  return brac < static_cast<double>(threshold.value()) ? BracClass::Sober : BracClass::Drunk;
}

GaitRecording read_recording(std::istream& in, std::string_view source) {
  const std::string buffer = slurp(in);
  LineReader reader(buffer);
  std::string_view line;

  if (!reader.next(line) || text::trim(line) != kRecordingHeader)
    fail(ErrorCode::MalformedFile, where(source, 1) + ": expected header '" +
                                       std::string(kRecordingHeader) + "'");
  if (!reader.next(line)) fail(ErrorCode::MalformedFile, where(source, 2) + ": missing metadata row");
  const auto meta = text::split_fields(line);
  if (meta.size() != 4) fail(ErrorCode::MalformedFile, where(source, 2) + ": metadata row needs 4 fields");
  const std::string subject(text::trim(meta[0]));
  const Session session = parse_session(meta[1]);
  DeviceMask devices;
  {
    std::string_view list = text::trim(meta[2]);
    std::size_t start = 0;
    while (start <= list.size() && !list.empty()) {
      auto end = list.find(';', start);
      if (end == std::string_view::npos) end = list.size();
      devices = devices.with(parse_device(list.substr(start, end - start)));
      start = end + 1;
    }
  }
  const auto declared = text::parse_int64(meta[3]);
  if (!declared || *declared < 0)
    fail(ErrorCode::MalformedFile, where(source, 2) + ": bad stream count");

  struct Section {
    Device device;
    SensorKind sensor;
    std::vector<Sample> samples;
  };
  std::vector<Section> sections;
  while (reader.next(line)) {
    if (text::trim(line).empty()) continue;
    if (line.starts_with(kStreamTag)) {
      const auto f = text::split_fields(line);
      if (f.size() != 3 || text::trim(f[0]) != kStreamTag)
        fail(ErrorCode::MalformedFile, where(source, reader.line_no()) + ": bad stream line");
      sections.push_back({parse_device(f[1]), parse_sensor(f[2]), {}});
      continue;
    }
    if (sections.empty())
      fail(ErrorCode::MalformedFile, where(source, reader.line_no()) + ": data row before any #stream");
    const auto f = text::split_fields(line);
    if (f.size() != 4) fail(ErrorCode::MalformedFile, where(source, reader.line_no()) + ": expected t_ns,x,y,z");
    const auto t = text::parse_int64(f[0]);
    const auto x = text::parse_double(f[1]);
    const auto y = text::parse_double(f[2]);
    const auto z = text::parse_double(f[3]);
    if (!t || !x || !y || !z)
      fail(ErrorCode::MalformedFile, where(source, reader.line_no()) + ": unparseable number");
    sections.back().samples.push_back({*t, *x, *y, *z});
  }
  if (static_cast<std::int64_t>(sections.size()) != *declared)
    fail(ErrorCode::MalformedFile, std::string(source) + ": metadata declares " +
                                       std::to_string(*declared) + " streams, found " +
                                       std::to_string(sections.size()));

  std::vector<SensorStream> streams;
  streams.reserve(sections.size());
  for (auto& s : sections) {
    try {
      streams.emplace_back(s.device, s.sensor, std::move(s.samples));
    } catch (const Error& e) {
      fail(e.code(), std::string(source) + ": " + e.what());
    }
  }
  return GaitRecording(subject, session, devices, std::move(streams));
}

GaitRecording parse_recording(const std::filesystem::path& path) {
  const std::string buffer = slurp_file(path);
  std::istringstream in(buffer);
  return read_recording(in, path.string());
}

void write_recording(std::ostream& out, const GaitRecording& recording) {
  std::string buf;
  buf.reserve(1 << 20);
  buf += kRecordingHeader;
  buf += '\n';
  buf += recording.subject_id();
  buf += ',';
  buf += to_string(recording.session());
  buf += ',';
  bool first = true;
  for (Device d : recording.devices().devices()) {
    if (!first) buf += ';';
    buf += to_string(d);
    first = false;
  }
  buf += ',';
  buf += std::to_string(recording.streams().size());
  buf += '\n';
  for (const auto& stream : recording.streams()) {
    buf += kStreamTag;
    buf += ',';
    buf += to_string(stream.device());
    buf += ',';
    buf += to_string(stream.sensor());
    buf += '\n';
    for (const auto& s : stream.samples()) {
      buf += std::to_string(s.t_ns);
      buf += ',';
      text::append_double(buf, s.x);
      buf += ',';
      text::append_double(buf, s.y);
      buf += ',';
      text::append_double(buf, s.z);
      buf += '\n';
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    buf.clear();
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void save_recording(const std::filesystem::path& path, const GaitRecording& recording) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  write_recording(out, recording);
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

std::map<std::string, double> read_labels(std::istream& in, std::string_view source) {
  const std::string buffer = slurp(in);
  LineReader reader(buffer);
  std::string_view line;
  if (!reader.next(line) || text::trim(line) != kLabelsHeader)
    fail(ErrorCode::MalformedFile, where(source, 1) + ": expected header '" +
                                       std::string(kLabelsHeader) + "'");
  std::map<std::string, double> labels;
  while (reader.next(line)) {
    if (text::trim(line).empty()) continue;
    const auto f = text::split_fields(line);
    if (f.size() != 2 || text::trim(f[0]).empty())
      fail(ErrorCode::MalformedFile, where(source, reader.line_no()) + ": expected subject_id,brac");
    const auto brac = text::parse_double(f[1]);
    if (!brac || !std::isfinite(*brac))
      fail(ErrorCode::MalformedFile, where(source, reader.line_no()) + ": bad brac value");
    if (*brac < 0.0)
      fail(ErrorCode::NegativeBrac, where(source, reader.line_no()) + ": negative brac");
    const std::string subject(text::trim(f[0]));
    if (!labels.emplace(subject, *brac).second)
      fail(ErrorCode::DuplicateSubject, where(source, reader.line_no()) + ": duplicate subject " + subject);
  }
  return labels;
}

std::map<std::string, double> parse_labels(const std::filesystem::path& path) {
  const std::string buffer = slurp_file(path);
  std::istringstream in(buffer);
  return read_labels(in, path.string());
}

void write_labels(std::ostream& out, const std::map<std::string, double>& labels) {
  out << kLabelsHeader << '\n';
  for (const auto& [subject, brac] : labels) out << subject << ',' << text::format_double(brac) << '\n';
}

}  // namespace vbreath
