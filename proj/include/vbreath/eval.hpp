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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vbreath/dataset.hpp"
#include "vbreath/models.hpp"

namespace vbreath {

struct RocPoint {
  double fpr;
  double tpr;
  double threshold;  // predict Drunk when score >= threshold; +inf for the origin
};

struct ConfusionMatrix {
  std::size_t true_positive = 0;   // predicted drunk, truly drunk
  std::size_t false_positive = 0;  // predicted drunk, truly sober
  std::size_t false_negative = 0;  // predicted sober, truly drunk
  std::size_t true_negative = 0;   // predicted sober, truly sober

  std::size_t total() const { return true_positive + false_positive + false_negative + true_negative; }
};

struct RegressionMetrics {
  double mae;
  double rmse;
};

// Labels are 1 for Drunk (positive) and 0 for Sober.

/// Mann-Whitney estimate, ties count one half. Throws SingleClass.
double auc(std::span<const double> scores, std::span<const int> labels);
/// Unique scores descending as cutoffs, (0,0) first and (1,1) last.
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);
double trapezoid_area(std::span<const RocPoint> roc);
/// Smallest FPR over cutoffs whose TPR >= tpr_target. Throws SingleClass.
double fpr_at_fixed_tpr(std::span<const double> scores, std::span<const int> labels, double tpr_target = 1.0);
ConfusionMatrix confusion_matrix(std::span<const double> scores, std::span<const int> labels,
                                 double cutoff = 0.5);
/// Throws LengthMismatch.
RegressionMetrics regression_metrics(std::span<const double> estimates, std::span<const double> labels);

struct EvalConfig {
  ModelKind model = ModelKind::GradientBoostingClassifier;
  Hyperparams params = default_hyperparams(ModelKind::GradientBoostingClassifier);
  std::optional<BracThreshold> threshold = BracThreshold(240);  // classification only
  double cutoff = 0.5;
  DeviceMask mask = DeviceMask::all();
};

struct Prediction {
  std::string subject_id;
  double value;  // score (classification) or BrAC estimate (regression)
  double brac;
};

struct EvalReport {
  ModelKind model;
  Task task;
  int threshold = 0;
  DeviceMask mask;
  double cutoff = 0.5;
  std::size_t n_features = 0;
  std::vector<Prediction> predictions;  // one per subject, by subject id

  // classification
  std::vector<RocPoint> roc;
  double auc = 0.0;
  ConfusionMatrix confusion;
  double fpr_at_tpr1 = 0.0;

  // regression
  double mae = 0.0;
  double rmse = 0.0;
};

/// Leave-one-subject-out: each subject is predicted by a model trained on all the others;
/// metrics use the pooled held-out predictions. Throws TooFewSubjects, SingleClassAtThreshold.
EvalReport loso(const Dataset& data, const EvalConfig& config);

/// Class labels of `data` at `threshold` (1 = Drunk).
std::vector<int> class_labels(std::span<const double> brac, BracThreshold threshold);

struct FamilyAblationRow {
  FeatureFamily family;
  double auc_only;
  double auc_without;
};

/// Histogram, KnownGait, Frequency, Statistics, each alone and each left out.
std::vector<FamilyAblationRow> ablate_feature_sets(const Dataset& data, const EvalConfig& config);

struct DeviceAblationRow {
  DeviceMask mask;
  EvalReport report;
};

/// One report per combination in ablation_device_masks().
std::vector<DeviceAblationRow> ablate_devices(const Dataset& data, const EvalConfig& config);

/// report.csv, roc.csv (classification) and predictions.csv under `dir`.
void write_report_files(const std::filesystem::path& dir, const EvalReport& report);
void write_report_csv(std::ostream& out, const EvalReport& report);
void write_roc_csv(std::ostream& out, const EvalReport& report);
void write_predictions_csv(std::ostream& out, const EvalReport& report);

void write_family_ablation_csv(std::ostream& out, std::span<const FamilyAblationRow> rows);
void write_device_ablation_csv(std::ostream& out, std::span<const DeviceAblationRow> rows);

}  // namespace vbreath
