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

#include "vbreath/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include "parallel.hpp"
#include "vbreath/error.hpp"
#include "vbreath/text.hpp"

namespace vbreath {
namespace {

void check_scored(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) fail(ErrorCode::LengthMismatch, "scores and labels differ in length");
  std::size_t pos = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) fail(ErrorCode::NonBinaryLabels, "labels must be 0 or 1");
    pos += static_cast<std::size_t>(l);
  }
  if (pos == 0 || pos == labels.size()) fail(ErrorCode::SingleClass, "both classes are required");
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return text::format_double(v);
}

}  // namespace

double auc(std::span<const double> scores, std::span<const int> labels) {
  check_scored(scores, labels);
  const auto n = scores.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Mid-ranks (1-based) for tied runs.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[idx[j]] == scores[idx[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k)
      if (labels[idx[k]] == 1) {
        positive_rank_sum += mid_rank;
        ++positives;
      }
    i = j;
  }
  const auto p = static_cast<double>(positives);
  const auto q = static_cast<double>(n - positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
  check_scored(scores, labels);
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const auto positives = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const auto negatives = static_cast<double>(labels.size()) - positives;

  std::vector<RocPoint> roc{{0.0, 0.0, std::numeric_limits<double>::infinity()}};
  double tp = 0.0, fp = 0.0;
  for (std::size_t i = 0; i < idx.size();) {
    const double cut = scores[idx[i]];
    while (i < idx.size() && scores[idx[i]] == cut) {
      (labels[idx[i]] == 1 ? tp : fp) += 1.0;
      ++i;
    }
    roc.push_back({fp / negatives, tp / positives, cut});
  }
  return roc;
}

double trapezoid_area(std::span<const RocPoint> roc) {
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i)
    area += (roc[i].fpr - roc[i - 1].fpr) * 0.5 * (roc[i].tpr + roc[i - 1].tpr);
  return area;
}

double fpr_at_fixed_tpr(std::span<const double> scores, std::span<const int> labels, double tpr_target) {
  double best = 1.0;
  for (const auto& pt : roc_curve(scores, labels))
    if (pt.tpr >= tpr_target) best = std::min(best, pt.fpr);
  return best;
}

ConfusionMatrix confusion_matrix(std::span<const double> scores, std::span<const int> labels, double cutoff) {
  if (scores.size() != labels.size()) fail(ErrorCode::LengthMismatch, "scores and labels differ in length");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= cutoff;
    const bool truth = labels[i] == 1;
    if (predicted && truth) ++cm.true_positive;
    else if (predicted) ++cm.false_positive;
    else if (truth) ++cm.false_negative;
    else ++cm.true_negative;
  }
  return cm;
}

RegressionMetrics regression_metrics(std::span<const double> estimates, std::span<const double> labels) {
  if (estimates.size() != labels.size() || estimates.empty())
    fail(ErrorCode::LengthMismatch, "estimates and labels must be non-empty and equal in length");
  double abs_sum = 0.0, sq_sum = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double e = estimates[i] - labels[i];
    abs_sum += std::abs(e);
    sq_sum += e * e;
  }
  const auto n = static_cast<double>(estimates.size());
  return {abs_sum / n, std::sqrt(sq_sum / n)};
}

std::vector<int> class_labels(std::span<const double> brac, BracThreshold threshold) {
  std::vector<int> labels;
  labels.reserve(brac.size());
  for (double b : brac) labels.push_back(label_class(b, threshold) == BracClass::Drunk ? 1 : 0);
  return labels;
}

EvalReport loso(const Dataset& all, const EvalConfig& config) {
  const Dataset data = select_devices(all, config.mask);
  const Task task = task_of(config.model);
  const auto n = data.size();
  if (n < 3) fail(ErrorCode::TooFewSubjects, "leave-one-subject-out needs at least 3 subjects, got " +
                                                  std::to_string(n));
  if (task == Task::Classify && !config.threshold)
    fail(ErrorCode::InvalidArgument, "classification needs a BrAC threshold");

  std::vector<double> targets(n);
  std::vector<int> labels;
  if (task == Task::Classify) {
    labels = class_labels(data.brac, *config.threshold);
    const auto drunk = std::count(labels.begin(), labels.end(), 1);
    if (drunk == 0 || drunk == static_cast<std::ptrdiff_t>(n))
      fail(ErrorCode::SingleClassAtThreshold, "every subject falls in one class at threshold " +
                                                  std::to_string(config.threshold->value()));
    for (std::size_t i = 0; i < n; ++i) targets[i] = labels[i];
  } else {
    targets = data.brac;
  }

  const Matrix x = data.matrix();
  std::vector<double> held_out(n);
  detail::parallel_for(n, [&](std::size_t fold) {
    Matrix train(n - 1, x.cols());
    std::vector<double> y;
    y.reserve(n - 1);
    for (std::size_t r = 0, k = 0; r < n; ++r) {
      if (r == fold) continue;
      std::copy(x.row(r).begin(), x.row(r).end(), train.row(k++).begin());
      y.push_back(targets[r]);
    }
    if (task == Task::Classify) {
      const double positives = std::accumulate(y.begin(), y.end(), 0.0);
      if (positives == 0.0 || positives == static_cast<double>(y.size())) {
        // Training fold holds one class only: the learner can only echo it.
        held_out[fold] = positives == 0.0 ? 0.0 : 1.0;
        return;
      }
    }
    const Model model = train_model(config.model, train, y, config.params);
    held_out[fold] = predict(model, x.row(fold));
  });

  EvalReport report;
  report.model = config.model;
  report.task = task;
  report.threshold = config.threshold && task == Task::Classify ? config.threshold->value() : 0;
  report.mask = config.mask;
  report.cutoff = config.cutoff;
  report.n_features = data.features();
  for (std::size_t i = 0; i < n; ++i) report.predictions.push_back({data.subjects[i], held_out[i], data.brac[i]});

  if (task == Task::Classify) {
    report.roc = roc_curve(held_out, labels);
    report.auc = auc(held_out, labels);
    report.confusion = confusion_matrix(held_out, labels, config.cutoff);
    report.fpr_at_tpr1 = fpr_at_fixed_tpr(held_out, labels, 1.0);
  } else {
    const auto m = regression_metrics(held_out, data.brac);
    report.mae = m.mae;
    report.rmse = m.rmse;
  }
  return report;
}

std::vector<FamilyAblationRow> ablate_feature_sets(const Dataset& all, const EvalConfig& config) {
  if (task_of(config.model) != Task::Classify)
    fail(ErrorCode::InvalidArgument, "feature-set ablation compares AUCs and needs a classifier");
  const Dataset data = select_devices(all, config.mask);
  EvalConfig sub = config;
  sub.mask = data.catalog_devices();
  std::vector<FamilyAblationRow> rows;
  for (FeatureFamily family : kAllFamilies) {
    const auto only = family_columns(*data.catalog, family, false);
    const auto without = family_columns(*data.catalog, family, true);
    rows.push_back({family, loso(select_columns(data, only), sub).auc,
                    loso(select_columns(data, without), sub).auc});
  }
  return rows;
}

std::vector<DeviceAblationRow> ablate_devices(const Dataset& data, const EvalConfig& config) {
  std::vector<DeviceAblationRow> rows;
  for (DeviceMask mask : ablation_device_masks()) {
    EvalConfig sub = config;
    sub.mask = mask;
    rows.push_back({mask, loso(data, sub)});
  }
  return rows;
}

void write_report_csv(std::ostream& out, const EvalReport& r) {
  out << "metric,value\n";
  out << "model," << to_string(r.model) << '\n';
  out << "task," << to_string(r.task) << '\n';
  out << "devices," << r.mask.to_string() << '\n';
  out << "subjects," << r.predictions.size() << '\n';
  out << "features," << r.n_features << '\n';
  if (r.task == Task::Classify) {
    out << "threshold," << r.threshold << '\n';
    out << "auc," << fmt(r.auc) << '\n';
    out << "fpr_at_tpr1," << fmt(r.fpr_at_tpr1) << '\n';
    out << "cutoff," << fmt(r.cutoff) << '\n';
    out << "tp," << r.confusion.true_positive << '\n';
    out << "fp," << r.confusion.false_positive << '\n';
    out << "fn," << r.confusion.false_negative << '\n';
    out << "tn," << r.confusion.true_negative << '\n';
  } else {
    out << "mae," << fmt(r.mae) << '\n';
    out << "rmse," << fmt(r.rmse) << '\n';
  }
}

void write_roc_csv(std::ostream& out, const EvalReport& r) {
  out << "fpr,tpr,threshold\n";
  for (const auto& p : r.roc) out << fmt(p.fpr) << ',' << fmt(p.tpr) << ',' << fmt(p.threshold) << '\n';
}

void write_predictions_csv(std::ostream& out, const EvalReport& r) {
  out << "subject_id," << (r.task == Task::Classify ? "score" : "estimate") << ",brac\n";
  for (const auto& p : r.predictions) out << p.subject_id << ',' << fmt(p.value) << ',' << fmt(p.brac) << '\n';
}

void write_report_files(const std::filesystem::path& dir, const EvalReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  auto emit = [&](const char* name, void (*writer)(std::ostream&, const EvalReport&)) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot write " + (dir / name).string());
    writer(out, report);
  };
  emit("report.csv", write_report_csv);
  if (report.task == Task::Classify) emit("roc.csv", write_roc_csv);
  emit("predictions.csv", write_predictions_csv);
}

void write_family_ablation_csv(std::ostream& out, std::span<const FamilyAblationRow> rows) {
  out << "family,auc_only,auc_without\n";
  for (const auto& r : rows) out << to_string(r.family) << ',' << fmt(r.auc_only) << ',' << fmt(r.auc_without) << '\n';
}

void write_device_ablation_csv(std::ostream& out, std::span<const DeviceAblationRow> rows) {
  const bool classify = !rows.empty() && rows.front().report.task == Task::Classify;
  out << (classify ? "devices,subjects,auc,fpr_at_tpr1\n" : "devices,subjects,mae,rmse\n");
  for (const auto& r : rows) {
    out << r.mask.to_string() << ',' << r.report.predictions.size() << ',';
    if (classify) out << fmt(r.report.auc) << ',' << fmt(r.report.fpr_at_tpr1) << '\n';
    else out << fmt(r.report.mae) << ',' << fmt(r.report.rmse) << '\n';
  }
}

}  // namespace vbreath
