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

#include "vbreath/features.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <numeric>

#include "vbreath/error.hpp"
#include "vbreath/spectrum.hpp"

namespace vbreath {
namespace {

// Shifted by the first sample so constant signals come out exact.
double mean_of(std::span<const double> v) {
  double dev = 0.0;
  for (double x : v) dev += x - v.front();
  return v.front() + dev / static_cast<double>(v.size());
}

// Sign changes between consecutive non-zero values; zeros carry the previous sign.
std::size_t sign_changes(std::span<const double> v, double offset) {
  std::size_t changes = 0;
  int last = 0;
  for (double x : v) {
    const double d = x - offset;
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

bool negligible_spread(double stddev, double mean) {
  return stddev <= 1e-12 * std::max(1.0, std::abs(mean));
}

// Non-DC bins ordered by descending magnitude, ties toward the lower bin.
std::vector<std::size_t> ranked_bins(std::span<const double> signal) {
  const double mu = mean_of(signal);
  std::vector<double> centered(signal.begin(), signal.end());
  double scale = 1.0;
  for (auto& x : centered) {
    scale = std::max(scale, std::abs(x));
    x -= mu;
  }
  const auto spectrum = real_dft(centered);
  // Round-off leakage on flat signals collapses to exact zero so ties resolve by bin.
  const double floor = 1e-12 * scale * static_cast<double>(signal.size());
  std::vector<double> mag(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double m = std::abs(spectrum[k]);
    mag[k] = m <= floor ? 0.0 : m;
  }
  std::vector<std::size_t> bins(spectrum.size() - 1);
  std::iota(bins.begin(), bins.end(), std::size_t{1});
  std::stable_sort(bins.begin(), bins.end(),
                   [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
  return bins;
}

std::vector<double> trapezoid_running(std::span<const double> v, double dt) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) out[i] = out[i - 1] + 0.5 * dt * (v[i - 1] + v[i]);
  return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  const auto n = static_cast<double>(a.size());
  if (negligible_spread(std::sqrt(saa / n), ma) || negligible_spread(std::sqrt(sbb / n), mb)) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

Eigen::Matrix3d covariance(const std::vector<Eigen::Vector3d>& pts) {
  Eigen::Vector3d dev = Eigen::Vector3d::Zero();
  for (const auto& p : pts) dev += p - pts.front();
  const Eigen::Vector3d mu = pts.front() + dev / static_cast<double>(pts.size());
  Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) c += (p - mu) * (p - mu).transpose();
  return c / static_cast<double>(pts.size());
}

std::string feature_name(Device d, std::string_view sensor, std::string_view axis, FeatureFamily f,
                         std::string_view id) {
  std::string out;
  out.reserve(48);
  out.append(to_string(d)).append(".").append(sensor).append(".").append(axis).append(".");
  out.append(family_token(f)).append(".").append(id);
  return out;
}

std::string_view name_token(std::string_view name, std::size_t index) {
  for (std::size_t i = 0; i < index; ++i) {
    const auto dot = name.find('.');
    if (dot == std::string_view::npos) return {};
    name.remove_prefix(dot + 1);
  }
  return name.substr(0, name.find('.'));
}

}  // namespace

std::string_view to_string(FeatureFamily family) noexcept {
  switch (family) {
    case FeatureFamily::Statistics: return "Statistics";
    case FeatureFamily::Frequency: return "Frequency";
    case FeatureFamily::Histogram: return "Histogram";
    case FeatureFamily::KnownGait: return "KnownGait";
  }
  return "?";
}

std::string_view family_token(FeatureFamily family) noexcept {
  switch (family) {
    case FeatureFamily::Statistics: return "stat";
    case FeatureFamily::Frequency: return "fft";
    case FeatureFamily::Histogram: return "hist";
    case FeatureFamily::KnownGait: return "gait";
  }
  return "?";
}

std::array<double, 11> StatFeatures::values() const {
  return {mean, variance, stddev, skewness, min, max, median, range, rms,
          zero_crossing_rate, mean_crossing_rate};
}

StatFeatures stat_features(std::span<const double> signal) {
  if (signal.size() < 2) fail(ErrorCode::TooShort, "statistics need at least 2 samples");
  const auto n = static_cast<double>(signal.size());
  StatFeatures f{};
  // Extended-precision moments keep near-symmetric signals from losing their skew to round-off.
  long double total = 0.0L;
  for (double x : signal) total += x;
  const long double mu = total / signal.size();
  f.mean = static_cast<double>(mu);
  long double m2 = 0.0L, m3 = 0.0L, sq = 0.0L;
  for (double x : signal) {
    const long double d = x - mu;
    m2 += d * d;
    m3 += d * d * d;
    sq += static_cast<long double>(x) * x;
  }
  const long double var = m2 / n;
  f.variance = static_cast<double>(var);
  f.stddev = std::sqrt(f.variance);
  f.skewness =
      negligible_spread(f.stddev, f.mean) ? 0.0 : static_cast<double>((m3 / n) / (var * std::sqrt(var)));
  const auto [mn, mx] = std::minmax_element(signal.begin(), signal.end());
  f.min = *mn;
  f.max = *mx;
  f.range = f.max - f.min;

  std::vector<double> sorted(signal.begin(), signal.end());
  const auto mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
  f.median = sorted[mid];
  if (sorted.size() % 2 == 0) {
    const double lower = *std::max_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid));
    f.median = 0.5 * (lower + f.median);
  }
  f.rms = static_cast<double>(std::sqrt(sq / n));
  f.zero_crossing_rate = static_cast<double>(sign_changes(signal, 0.0)) / (n - 1.0);
  f.mean_crossing_rate = static_cast<double>(sign_changes(signal, f.mean)) / (n - 1.0);
  return f;
}

std::array<double, 3> axis_covariances(std::span<const double> x, std::span<const double> y,
                                       std::span<const double> z) {
  if (x.size() != y.size() || x.size() != z.size())
    fail(ErrorCode::LengthMismatch, "axis signals differ in length");
  if (x.size() < 2) fail(ErrorCode::TooShort, "covariance needs at least 2 samples");
  const double mx = mean_of(x), my = mean_of(y), mz = mean_of(z);
  double xy = 0.0, xz = 0.0, yz = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xy += (x[i] - mx) * (y[i] - my);
    xz += (x[i] - mx) * (z[i] - mz);
    yz += (y[i] - my) * (z[i] - mz);
  }
  const auto n = static_cast<double>(x.size());
  return {xy / n, xz / n, yz / n};
}

std::array<double, 6> FftFeatures::values() const {
  return {energy, top_frequencies_hz[0], top_frequencies_hz[1], top_frequencies_hz[2],
          top_frequencies_hz[3], dominant_bin};
}

FftFeatures fft_features(std::span<const double> signal, double rate_hz) {
  if (signal.size() < 8) fail(ErrorCode::TooShort, "spectral features need at least 8 samples");
  const auto n = static_cast<double>(signal.size());
  FftFeatures f{};
  f.energy = spectral_energy(real_dft(signal), signal.size());
  const auto bins = ranked_bins(signal);
  for (std::size_t i = 0; i < 4; ++i) f.top_frequencies_hz[i] = static_cast<double>(bins[i]) * rate_hz / n;
  f.dominant_bin = static_cast<double>(bins.front());
  return f;
}

double dominant_frequency_hz(std::span<const double> signal, double rate_hz) {
  if (signal.size() < 2) fail(ErrorCode::TooShort, "dominant frequency needs at least 2 samples");
  return static_cast<double>(ranked_bins(signal).front()) * rate_hz / static_cast<double>(signal.size());
}

HistogramSupport histogram_support(SensorKind sensor) {
  switch (sensor) {
    case SensorKind::Accelerometer:
    case SensorKind::LinearAcceleration:
    case SensorKind::Gravity: return {-20, 20};
    case SensorKind::Gyroscope: return {-10, 10};
    case SensorKind::Compass: return {-100, 100};
  }
  return {0, 0};
}

std::vector<double> histogram_features(std::span<const double> signal, HistogramSupport support) {
  if (signal.empty()) fail(ErrorCode::EmptySignal, "histogram of an empty signal");
  if (support.hi < support.lo) fail(ErrorCode::InvalidArgument, "empty histogram support");
  std::vector<double> counts(support.size(), 0.0);
  for (double x : signal) {
    if (!std::isfinite(x)) fail(ErrorCode::NonFiniteInput, "non-finite value in histogram input");
    const double r = std::clamp(std::round(x), static_cast<double>(support.lo), static_cast<double>(support.hi));
    counts[static_cast<std::size_t>(static_cast<int>(r) - support.lo)] += 1.0;
  }
  const auto n = static_cast<double>(signal.size());
  for (auto& c : counts) c /= n;
  return counts;
}

std::array<double, 13> GaitFeatures::values() const {
  return {movement_intensity,  normalized_sma,  eigenvalues[0],       eigenvalues[1],
          eigenvalues[2],      gravity_heading_correlation,          velocity_heading,
          velocity_gravity,    rotation_angle_gravity,               dominant_frequency_hz,
          magnitude_energy,    acceleration_energy,                  rotation_energy};
}

GaitFeatures gait_features(const std::array<AxisSignal, 3>& accel,
                           const std::array<AxisSignal, 3>* gyro) {
  if (gyro == nullptr) fail(ErrorCode::MissingSensor, "rotation features need a gyroscope");
  const auto n = accel[0].values.size();
  for (const auto* set : {&accel, gyro})
    for (const auto& axis : *set)
      if (axis.values.size() != n) fail(ErrorCode::LengthMismatch, "gait inputs differ in length");
  if (n < 2) fail(ErrorCode::TooShort, "gait features need at least 2 samples");
  const double rate = accel[0].rate_hz;
  const double dt = 1.0 / rate;
  const auto nd = static_cast<double>(n);

  std::vector<Eigen::Vector3d> a(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = {accel[0].values[i], accel[1].values[i], accel[2].values[i]};
    w[i] = {(*gyro)[0].values[i], (*gyro)[1].values[i], (*gyro)[2].values[i]};
  }

  GaitFeatures g{};
  std::vector<double> magnitude(n);
  double abs_sum = 0.0, mag_sq = 0.0, rot_sq = 0.0;
  Eigen::Vector3d dev_a = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    magnitude[i] = a[i].norm();
    abs_sum += a[i].cwiseAbs().sum();
    mag_sq += a[i].squaredNorm();
    rot_sq += w[i].squaredNorm();
    dev_a += a[i] - a[0];
  }
  const Eigen::Vector3d mean_a = a[0] + dev_a / nd;
  g.movement_intensity = std::accumulate(magnitude.begin(), magnitude.end(), 0.0) / nd;
  g.normalized_sma = abs_sum / nd;
  g.acceleration_energy = mag_sq / nd;
  g.rotation_energy = rot_sq / nd;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(covariance(a), Eigen::EigenvaluesOnly);
  for (int i = 0; i < 3; ++i) g.eigenvalues[static_cast<std::size_t>(i)] = eig.eigenvalues()[2 - i];

  const Eigen::Vector3d gravity_dir =
      mean_a.norm() > 0.0 ? Eigen::Vector3d(mean_a.normalized()) : Eigen::Vector3d::UnitZ();

  std::vector<Eigen::Vector3d> residual(n);
  for (std::size_t i = 0; i < n; ++i) residual[i] = a[i] - a[i].dot(gravity_dir) * gravity_dir;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> res_eig(covariance(residual));
  Eigen::Vector3d heading_dir = res_eig.eigenvectors().col(2);
  if (!(res_eig.eigenvalues()[2] > 1e-12)) {
    // No horizontal motion: any gravity-orthogonal axis will do; pick it deterministically.
    Eigen::Index least;
    gravity_dir.cwiseAbs().minCoeff(&least);
    Eigen::Vector3d e = Eigen::Vector3d::Unit(least);
    heading_dir = (e - e.dot(gravity_dir) * gravity_dir).normalized();
  }
  Eigen::Index largest;
  heading_dir.cwiseAbs().maxCoeff(&largest);
  if (heading_dir[largest] < 0.0) heading_dir = -heading_dir;

  std::vector<double> along_g(n), along_h(n), rot_g(n);
  for (std::size_t i = 0; i < n; ++i) {
    along_g[i] = a[i].dot(gravity_dir);
    along_h[i] = a[i].dot(heading_dir);
    rot_g[i] = w[i].dot(gravity_dir);
  }
  g.gravity_heading_correlation = pearson(along_g, along_h);

  auto mean_velocity = [&](std::vector<double> proj) {
    const double mu = mean_of(proj);
    for (auto& p : proj) p -= mu;
    const auto v = trapezoid_running(proj, dt);
    return mean_of(v);
  };
  g.velocity_heading = mean_velocity(along_h);
  g.velocity_gravity = mean_velocity(along_g);
  g.rotation_angle_gravity = mean_of(trapezoid_running(rot_g, dt));

  g.dominant_frequency_hz = dominant_frequency_hz(magnitude, rate);
  g.magnitude_energy = spectral_energy(real_dft(magnitude), n);
  return g;
}

std::uint64_t Catalog::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  bool first = true;
  for (const auto& name : names_) {
    if (!first) {
      h ^= static_cast<unsigned char>('\n');
      h *= 0x100000001b3ull;
    }
    first = false;
    for (unsigned char c : name) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

FeatureFamily family_of(std::string_view feature_name) {
  const auto token = name_token(feature_name, 3);
  for (FeatureFamily f : kAllFamilies)
    if (token == family_token(f)) return f;
  fail(ErrorCode::CatalogMismatch, "no feature family in name '" + std::string(feature_name) + "'");
}

Device device_of(std::string_view feature_name) {
  try {
    return parse_device(name_token(feature_name, 0));
  } catch (const Error&) {
    fail(ErrorCode::CatalogMismatch, "no device in feature name '" + std::string(feature_name) + "'");
  }
}

std::vector<std::string> device_block_names(Device device, std::span<const SensorKind> sensors) {
  std::vector<std::string> names;
  for (SensorKind sensor : sensors) {
    const auto sname = to_string(sensor);
    for (Axis axis : kAllAxes) {
      const auto aname = to_string(axis);
      for (auto id : kStatNames) names.push_back(feature_name(device, sname, aname, FeatureFamily::Statistics, id));
      for (auto id : kFftNames) names.push_back(feature_name(device, sname, aname, FeatureFamily::Frequency, id));
      const auto support = histogram_support(sensor);
      for (int v = support.lo; v <= support.hi; ++v)
        names.push_back(feature_name(device, sname, aname, FeatureFamily::Histogram, std::to_string(v)));
    }
    for (std::string_view pair : {"XY", "XZ", "YZ"})
      names.push_back(feature_name(device, sname, pair, FeatureFamily::Statistics, "cov"));
  }
  for (auto id : kGaitNames) names.push_back(feature_name(device, "All", "XYZ", FeatureFamily::KnownGait, id));
  return names;
}

std::vector<double> device_block_values(const GaitRecording& recording, Device device,
                                        const SignalConfig& config) {
  if (!recording.devices().contains(device))
    fail(ErrorCode::MissingDevice, recording.subject_id() + " has no " + std::string(to_string(device)));
  std::vector<double> values;
  std::optional<std::array<AxisSignal, 3>> accel, gyro;
  for (SensorKind sensor : recording.sensors_of(device)) {
    const auto axes = condition_stream(*recording.find(device, sensor), config);
    for (const auto& axis : axes) {
      for (double v : stat_features(axis.values).values()) values.push_back(v);
      for (double v : fft_features(axis.values, axis.rate_hz).values()) values.push_back(v);
      for (double v : histogram_features(axis.values, histogram_support(sensor))) values.push_back(v);
    }
    for (double v : axis_covariances(axes[0].values, axes[1].values, axes[2].values)) values.push_back(v);
    if (sensor == SensorKind::Accelerometer) accel = axes;
    if (sensor == SensorKind::Gyroscope) gyro = axes;
  }
  if (!accel)
    fail(ErrorCode::MissingSensor, std::string(to_string(device)) + " lacks an accelerometer");
  const auto gait = gait_features(*accel, gyro ? &*gyro : nullptr);
  for (double v : gait.values()) values.push_back(v);
  for (double v : values)
    if (!std::isfinite(v)) fail(ErrorCode::NonFiniteInput, "non-finite feature for " + recording.subject_id());
  return values;
}

FeatureVector assemble_feature_vector(const GaitRecording& recording, DeviceMask mask,
                                      const SignalConfig& config) {
  if (mask.empty()) fail(ErrorCode::InvalidArgument, "empty device mask");
  std::vector<std::string> names;
  std::vector<double> values;
  for (Device d : mask.devices()) {
    if (!recording.devices().contains(d))
      fail(ErrorCode::MissingDevice, recording.subject_id() + " (" + std::string(to_string(recording.session())) +
                                         ") has no " + std::string(to_string(d)));
    const auto sensors = recording.sensors_of(d);
    auto block_names = device_block_names(d, sensors);
    auto block = device_block_values(recording, d, config);
    names.insert(names.end(), std::make_move_iterator(block_names.begin()),
                 std::make_move_iterator(block_names.end()));
    values.insert(values.end(), block.begin(), block.end());
  }
  return {std::make_shared<const Catalog>(std::move(names)), std::move(values)};
}

FeatureVector feature_difference(const FeatureVector& before, const FeatureVector& after) {
  if (!before.catalog || !after.catalog ||
      (before.catalog != after.catalog && !(*before.catalog == *after.catalog)))
    fail(ErrorCode::CatalogMismatch, "before/after catalogs differ");
  if (before.values.size() != before.catalog->size() || after.values.size() != before.values.size())
    fail(ErrorCode::CatalogMismatch, "vector length does not match its catalog");
  FeatureVector diff{before.catalog, std::vector<double>(before.values.size())};
  for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] = after.values[i] - before.values[i];
  return diff;
}

LabeledInstance make_instance(const SubjectPair& pair, DeviceMask mask, const SignalConfig& config) {
  auto before = assemble_feature_vector(pair.before, mask, config);
  auto after = assemble_feature_vector(pair.after, mask, config);
  return {pair.subject_id(), feature_difference(before, after), pair.brac};
}

}  // namespace vbreath
