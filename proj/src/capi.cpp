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

#include "vbreath/vbreath.h"

#include <cmath>
#include <fstream>
#include <new>
#include <optional>
#include <string>

#include "vbreath/dataset.hpp"
#include "vbreath/error.hpp"
#include "vbreath/eval.hpp"
#include "vbreath/models.hpp"
#include "vbreath/pipeline.hpp"

struct vb_dataset {
  vbreath::Dataset data;
};

struct vb_model {
  vbreath::Model model;
};

struct vb_report {
  vbreath::EvalReport report;
};

namespace {

using vbreath::ErrorCode;

thread_local std::string g_last_error;

vb_status to_status(ErrorCode code) { return static_cast<vb_status>(static_cast<int>(code) + 1); }

template <typename Fn>
vb_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return VB_OK;
  } catch (const vbreath::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return VB_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (p == nullptr) vbreath::fail(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

vbreath::DeviceMask mask_for(const vbreath::Dataset& data, const char* devices) {
  if (devices == nullptr || *devices == '\0') return data.catalog_devices();
  return vbreath::DeviceMask::parse(devices);
}

vbreath::SignalConfig signal_config(const vb_signal_options* o) {
  vbreath::SignalConfig c;
  if (o == nullptr) return c;
  c.target_hz = o->target_hz;
  c.sma_window = o->sma_window;
  c.window_start_s = o->window_start_s;
  c.window_end_s = o->window_end_s;
  if (!(c.target_hz > 0.0) || !std::isfinite(c.target_hz))
    vbreath::fail(ErrorCode::InvalidArgument, "target rate must be positive");
  if (c.sma_window < 1) vbreath::fail(ErrorCode::InvalidArgument, "SMA window must be positive");
  if (!(c.window_end_s > c.window_start_s) || c.window_start_s < 0.0)
    vbreath::fail(ErrorCode::InvalidArgument, "window must satisfy 0 <= start < end");
  return c;
}

struct ModelSetup {
  vbreath::ModelKind kind;
  vbreath::Hyperparams params;
  std::optional<vbreath::BracThreshold> threshold;
};

ModelSetup model_setup(const vb_model_options* o) {
  require(o, "model options");
  require(o->model, "model name");
  ModelSetup s{vbreath::parse_model_kind(o->model), {}, std::nullopt};
  const auto task = vbreath::task_of(s.kind);
  if (o->task != nullptr && vbreath::parse_task(o->task) != task)
    vbreath::fail(ErrorCode::InvalidArgument, std::string("model ") + o->model + " is a " +
                                                  std::string(vbreath::to_string(task)) + " model, not " + o->task);
  if (task == vbreath::Task::Classify) s.threshold = vbreath::BracThreshold(o->threshold);
  if (s.kind != vbreath::ModelKind::Lasso && o->n_estimators < 1)
    vbreath::fail(ErrorCode::InvalidArgument, "n_estimators must be >= 1");
  if (!(o->learning_rate > 0.0)) vbreath::fail(ErrorCode::InvalidArgument, "learning rate must be positive");
  if (o->min_samples_split < 2) vbreath::fail(ErrorCode::InvalidArgument, "min_samples_split must be >= 2");
  if (!(o->alpha >= 0.0)) vbreath::fail(ErrorCode::InvalidArgument, "alpha must be non-negative");
  if (!(o->tol > 0.0)) vbreath::fail(ErrorCode::InvalidArgument, "tol must be positive");
  if (o->max_sweeps < 1) vbreath::fail(ErrorCode::InvalidArgument, "max_sweeps must be >= 1");
  s.params.n_estimators = o->n_estimators;
  s.params.learning_rate = o->learning_rate;
  s.params.max_depth = o->max_depth;
  s.params.min_samples_split = o->min_samples_split;
  s.params.alpha = o->alpha;
  s.params.tol = o->tol;
  s.params.max_sweeps = o->max_sweeps;
  s.params.random_seed = o->seed;
  return s;
}

vbreath::EvalConfig eval_config(const vb_model_options* options) {
  auto s = model_setup(options);
  vbreath::EvalConfig c;
  c.model = s.kind;
  c.params = s.params;
  c.threshold = s.threshold;
  return c;
}

template <typename T>
T* check_out(T** out) {
  require(out, "output handle");
  *out = nullptr;
  return nullptr;
}

}  // namespace

extern "C" {

const char* vb_status_name(vb_status status) {
  if (status == VB_OK) return "OK";
  if (status == VB_ERR_INTERNAL) return "Internal";
  if (status < VB_OK || status > VB_ERR_INTERNAL) return "Unknown";
  // error_code_name returns views of string literals.
  return vbreath::error_code_name(static_cast<ErrorCode>(static_cast<int>(status) - 1)).data();
}

const char* vb_last_error_message(void) { return g_last_error.c_str(); }

const char* vb_version(void) { return "1.0.0"; }

void vb_signal_options_default(vb_signal_options* options) {
  if (options == nullptr) return;
  const vbreath::SignalConfig c;
  *options = {c.target_hz, c.sma_window, c.window_start_s, c.window_end_s};
}

vb_status vb_model_options_default(const char* model, vb_model_options* options) {
  return guarded([&] {
    require(model, "model name");
    require(options, "options");
    const auto kind = vbreath::parse_model_kind(model);
    const auto p = vbreath::default_hyperparams(kind);
    *options = {model, nullptr, 240, p.n_estimators, p.learning_rate, p.max_depth, p.min_samples_split,
                p.alpha, p.tol, p.max_sweeps, p.random_seed};
  });
}

vb_status vb_extract(const char* recordings_dir, const char* labels_path, const vb_signal_options* options,
                     vb_dataset** out) {
  return guarded([&] {
    check_out(out);
    require(recordings_dir, "recordings directory");
    const std::filesystem::path dir(recordings_dir);
    const auto labels = labels_path != nullptr ? std::filesystem::path(labels_path) : dir / "labels.csv";
    *out = new vb_dataset{vbreath::extract_dataset(dir, labels, signal_config(options))};
  });
}

vb_status vb_dataset_load(const char* path, vb_dataset** out) {
  return guarded([&] {
    check_out(out);
    require(path, "path");
    *out = new vb_dataset{vbreath::load_matrix(path)};
  });
}

vb_status vb_dataset_save(const vb_dataset* dataset, const char* path) {
  return guarded([&] {
    require(dataset, "dataset");
    require(path, "path");
    vbreath::save_matrix(path, dataset->data);
  });
}

size_t vb_dataset_rows(const vb_dataset* dataset) { return dataset ? dataset->data.size() : 0; }

size_t vb_dataset_features(const vb_dataset* dataset) { return dataset ? dataset->data.features() : 0; }

uint64_t vb_dataset_fingerprint(const vb_dataset* dataset) {
  return dataset && dataset->data.catalog ? dataset->data.catalog->fingerprint() : 0;
}

vb_status vb_dataset_feature_name(const vb_dataset* dataset, size_t column, const char** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "output");
    if (column >= dataset->data.features()) vbreath::fail(ErrorCode::DimensionMismatch, "column out of range");
    *out = (*dataset->data.catalog)[column].c_str();
  });
}

vb_status vb_dataset_subject(const vb_dataset* dataset, size_t row, const char** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "output");
    if (row >= dataset->data.size()) vbreath::fail(ErrorCode::DimensionMismatch, "row out of range");
    *out = dataset->data.subjects[row].c_str();
  });
}

vb_status vb_dataset_brac(const vb_dataset* dataset, size_t row, double* out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "output");
    if (row >= dataset->data.size()) vbreath::fail(ErrorCode::DimensionMismatch, "row out of range");
    *out = dataset->data.brac[row];
  });
}

vb_status vb_dataset_row(const vb_dataset* dataset, size_t row, double* out, size_t n) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "output");
    if (row >= dataset->data.size()) vbreath::fail(ErrorCode::DimensionMismatch, "row out of range");
    if (n != dataset->data.features())
      vbreath::fail(ErrorCode::DimensionMismatch, "buffer holds " + std::to_string(n) + " values, row has " +
                                                      std::to_string(dataset->data.features()));
    std::copy(dataset->data.rows[row].begin(), dataset->data.rows[row].end(), out);
  });
}

vb_status vb_dataset_select_devices(const vb_dataset* dataset, const char* devices, vb_dataset** out) {
  return guarded([&] {
    check_out(out);
    require(dataset, "dataset");
    *out = new vb_dataset{vbreath::select_devices(dataset->data, mask_for(dataset->data, devices))};
  });
}

void vb_dataset_free(vb_dataset* dataset) { delete dataset; }

vb_status vb_train(const vb_dataset* dataset, const vb_model_options* options, const char* devices,
                   vb_model** out) {
  return guarded([&] {
    check_out(out);
    require(dataset, "dataset");
    const auto setup = model_setup(options);
    const auto data = vbreath::select_devices(dataset->data, mask_for(dataset->data, devices));
    if (data.size() == 0) vbreath::fail(ErrorCode::EmptyData, "no subject carries every selected device");
    std::vector<double> y = data.brac;
    if (setup.threshold) {
      const auto labels = vbreath::class_labels(data.brac, *setup.threshold);
      y.assign(labels.begin(), labels.end());
    }
    auto model = vbreath::train_model(setup.kind, data.matrix(), y, setup.params);
    model.catalog_fingerprint = data.catalog->fingerprint();
    model.threshold = setup.threshold ? setup.threshold->value() : 0;
    *out = new vb_model{std::move(model)};
  });
}

vb_status vb_model_save(const vb_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    vbreath::save_model(path, model->model);
  });
}

vb_status vb_model_load(const char* path, vb_model** out) {
  return guarded([&] {
    check_out(out);
    require(path, "path");
    *out = new vb_model{vbreath::load_model(path)};
  });
}

const char* vb_model_kind(const vb_model* model) {
  return model ? vbreath::to_string(model->model.kind).data() : "";
}

const char* vb_model_task(const vb_model* model) {
  return model ? vbreath::to_string(model->model.task()).data() : "";
}

int vb_model_threshold(const vb_model* model) { return model ? model->model.threshold : 0; }

size_t vb_model_features(const vb_model* model) { return model ? model->model.n_features : 0; }

uint64_t vb_model_fingerprint(const vb_model* model) { return model ? model->model.catalog_fingerprint : 0; }

vb_status vb_model_predict(const vb_model* model, const vb_dataset* dataset, double* out, size_t n) {
  return guarded([&] {
    require(model, "model");
    require(dataset, "dataset");
    require(out, "output");
    const auto& data = dataset->data;
    if (data.catalog->fingerprint() != model->model.catalog_fingerprint)
      vbreath::fail(ErrorCode::CatalogFingerprintMismatch,
                    "feature catalog differs from the one the model was trained on");
    if (n != data.size())
      vbreath::fail(ErrorCode::DimensionMismatch, "buffer holds " + std::to_string(n) + " values for " +
                                                      std::to_string(data.size()) + " rows");
    for (std::size_t r = 0; r < data.size(); ++r) {
      for (double v : data.rows[r])
        if (!std::isfinite(v))
          vbreath::fail(ErrorCode::MissingDevice, data.subjects[r] + " lacks a device the model needs");
      out[r] = vbreath::predict(model->model, data.rows[r]);
    }
  });
}

void vb_model_free(vb_model* model) { delete model; }

vb_status vb_evaluate(const vb_dataset* dataset, const vb_model_options* options, const char* devices,
                      double cutoff, vb_report** out) {
  return guarded([&] {
    check_out(out);
    require(dataset, "dataset");
    auto config = eval_config(options);
    config.mask = mask_for(dataset->data, devices);
    if (!(cutoff >= 0.0 && cutoff <= 1.0)) vbreath::fail(ErrorCode::InvalidArgument, "cutoff must lie in [0, 1]");
    config.cutoff = cutoff;
    *out = new vb_report{vbreath::loso(dataset->data, config)};
  });
}

const char* vb_report_task(const vb_report* report) {
  return report ? vbreath::to_string(report->report.task).data() : "";
}

size_t vb_report_subjects(const vb_report* report) { return report ? report->report.predictions.size() : 0; }

double vb_report_auc(const vb_report* report) { return report ? report->report.auc : NAN; }

double vb_report_fpr_at_tpr1(const vb_report* report) { return report ? report->report.fpr_at_tpr1 : NAN; }

double vb_report_mae(const vb_report* report) { return report ? report->report.mae : NAN; }

double vb_report_rmse(const vb_report* report) { return report ? report->report.rmse : NAN; }

vb_status vb_report_prediction(const vb_report* report, size_t i, const char** subject, double* value,
                               double* brac) {
  return guarded([&] {
    require(report, "report");
    if (i >= report->report.predictions.size())
      vbreath::fail(ErrorCode::DimensionMismatch, "prediction index out of range");
    const auto& p = report->report.predictions[i];
    if (subject) *subject = p.subject_id.c_str();
    if (value) *value = p.value;
    if (brac) *brac = p.brac;
  });
}

vb_status vb_report_write(const vb_report* report, const char* dir) {
  return guarded([&] {
    require(report, "report");
    require(dir, "directory");
    vbreath::write_report_files(dir, report->report);
  });
}

void vb_report_free(vb_report* report) { delete report; }

vb_status vb_ablate(const vb_dataset* dataset, const vb_model_options* options, const char* kind,
                    const char* out_csv, size_t* rows) {
  return guarded([&] {
    require(dataset, "dataset");
    require(kind, "ablation kind");
    require(out_csv, "output path");
    const std::string k(kind);
    if (k != "features" && k != "devices")
      vbreath::fail(ErrorCode::InvalidArgument, "ablation kind must be features or devices, got " + k);
    const auto config = eval_config(options);
    std::ofstream out(out_csv, std::ios::binary);
    if (!out) vbreath::fail(ErrorCode::IoError, std::string("cannot write ") + out_csv);
    std::size_t count = 0;
    if (k == "features") {
      const auto result = vbreath::ablate_feature_sets(dataset->data, config);
      vbreath::write_family_ablation_csv(out, result);
      count = result.size();
    } else {
      const auto result = vbreath::ablate_devices(dataset->data, config);
      vbreath::write_device_ablation_csv(out, result);
      count = result.size();
    }
    out.flush();
    if (!out) vbreath::fail(ErrorCode::IoError, std::string("write failed: ") + out_csv);
    if (rows) *rows = count;
  });
}

vb_status vb_simulate(size_t n, uint64_t seed, const char* out_dir) {
  return guarded([&] {
    require(out_dir, "output directory");
    vbreath::simulate_to_directory(out_dir, n, seed);
  });
}

}  // extern "C"
