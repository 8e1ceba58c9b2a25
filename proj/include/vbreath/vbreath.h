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

/* C interface to the vbreath library. Every call that can fail returns a
 * vb_status; on failure vb_last_error_message() holds a one-line description
 * for the calling thread. Handles are opaque and owned by the caller. */
#ifndef VBREATH_VBREATH_H_
#define VBREATH_VBREATH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(VBREATH_BUILDING)
#define VB_API __attribute__((visibility("default")))
#else
#define VB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vb_status {
  VB_OK = 0,
  VB_ERR_MALFORMED_FILE,
  VB_ERR_NON_MONOTONIC_TIME,
  VB_ERR_UNKNOWN_DEVICE,
  VB_ERR_UNKNOWN_SENSOR,
  VB_ERR_EMPTY_STREAM,
  VB_ERR_DUPLICATE_SUBJECT,
  VB_ERR_NEGATIVE_BRAC,
  VB_ERR_DUPLICATE_STREAM,
  VB_ERR_WINDOW_EMPTY,
  VB_ERR_EVEN_WINDOW,
  VB_ERR_EMPTY_SIGNAL,
  VB_ERR_NON_FINITE_INPUT,
  VB_ERR_TOO_SHORT,
  VB_ERR_MISSING_SENSOR,
  VB_ERR_MISSING_DEVICE,
  VB_ERR_CATALOG_MISMATCH,
  VB_ERR_EMPTY_DATA,
  VB_ERR_NON_BINARY_LABELS,
  VB_ERR_DEGENERATE_WEIGHTS,
  VB_ERR_SINGLE_CLASS,
  VB_ERR_DIMENSION_MISMATCH,
  VB_ERR_MALFORMED_MODEL_FILE,
  VB_ERR_CATALOG_FINGERPRINT_MISMATCH,
  VB_ERR_SINGLE_CLASS_AT_THRESHOLD,
  VB_ERR_TOO_FEW_SUBJECTS,
  VB_ERR_LENGTH_MISMATCH,
  VB_ERR_INVALID_PROFILE,
  VB_ERR_BAD_DISTRIBUTION,
  VB_ERR_MISSING_SESSION,
  VB_ERR_MISSING_LABEL,
  VB_ERR_INVALID_ARGUMENT,
  VB_ERR_IO,
  VB_ERR_INTERNAL
} vb_status;

typedef struct vb_dataset vb_dataset;
typedef struct vb_model vb_model;
typedef struct vb_report vb_report;

/* "OK", "MalformedFile", ... "Internal". Never NULL. */
VB_API const char* vb_status_name(vb_status status);
/* Message of the last failed call on this thread, "" if none. */
VB_API const char* vb_last_error_message(void);
VB_API const char* vb_version(void);

typedef struct vb_signal_options {
  double target_hz;
  int sma_window;
  double window_start_s;
  double window_end_s;
} vb_signal_options;

VB_API void vb_signal_options_default(vb_signal_options* options);

typedef struct vb_model_options {
  const char* model; /* dt, adaboost, gbc, rt, abr, gbr, lasso */
  const char* task;  /* NULL, "classify" or "regress"; must agree with the model */
  int threshold;     /* 220, 240, 250 or 350; ignored by regressors */
  int n_estimators;
  double learning_rate;
  int max_depth; /* negative: unlimited */
  int min_samples_split;
  double alpha;
  double tol;
  int max_sweeps;
  uint64_t seed;
} vb_model_options;

/* Defaults for `model` with threshold 240. */
VB_API vb_status vb_model_options_default(const char* model, vb_model_options* options);

/* Datasets. */
VB_API vb_status vb_extract(const char* recordings_dir, const char* labels_path,
                            const vb_signal_options* options, vb_dataset** out);
VB_API vb_status vb_dataset_load(const char* path, vb_dataset** out);
VB_API vb_status vb_dataset_save(const vb_dataset* dataset, const char* path);
VB_API size_t vb_dataset_rows(const vb_dataset* dataset);
VB_API size_t vb_dataset_features(const vb_dataset* dataset);
VB_API uint64_t vb_dataset_fingerprint(const vb_dataset* dataset);
VB_API vb_status vb_dataset_feature_name(const vb_dataset* dataset, size_t column, const char** out);
VB_API vb_status vb_dataset_subject(const vb_dataset* dataset, size_t row, const char** out);
VB_API vb_status vb_dataset_brac(const vb_dataset* dataset, size_t row, double* out);
/* Copies one row; missing-device cells are NaN. `n` must equal the feature count. */
VB_API vb_status vb_dataset_row(const vb_dataset* dataset, size_t row, double* out, size_t n);
/* `devices` is "all" or names joined by '+', e.g. "Phone+Watch". */
VB_API vb_status vb_dataset_select_devices(const vb_dataset* dataset, const char* devices, vb_dataset** out);
VB_API void vb_dataset_free(vb_dataset* dataset);

/* Models. */
VB_API vb_status vb_train(const vb_dataset* dataset, const vb_model_options* options, const char* devices,
                          vb_model** out);
VB_API vb_status vb_model_save(const vb_model* model, const char* path);
VB_API vb_status vb_model_load(const char* path, vb_model** out);
VB_API const char* vb_model_kind(const vb_model* model);
VB_API const char* vb_model_task(const vb_model* model);
VB_API int vb_model_threshold(const vb_model* model);
VB_API size_t vb_model_features(const vb_model* model);
VB_API uint64_t vb_model_fingerprint(const vb_model* model);
/* One score (classifiers) or BrAC estimate (regressors) per row. The dataset
 * catalog must match the one the model was trained on. */
VB_API vb_status vb_model_predict(const vb_model* model, const vb_dataset* dataset, double* out, size_t n);
VB_API void vb_model_free(vb_model* model);

/* Leave-one-subject-out evaluation. */
VB_API vb_status vb_evaluate(const vb_dataset* dataset, const vb_model_options* options, const char* devices,
                             double cutoff, vb_report** out);
VB_API const char* vb_report_task(const vb_report* report);
VB_API size_t vb_report_subjects(const vb_report* report);
VB_API double vb_report_auc(const vb_report* report);
VB_API double vb_report_fpr_at_tpr1(const vb_report* report);
VB_API double vb_report_mae(const vb_report* report);
VB_API double vb_report_rmse(const vb_report* report);
VB_API vb_status vb_report_prediction(const vb_report* report, size_t i, const char** subject, double* value,
                                      double* brac);
/* report.csv, predictions.csv and, for classifiers, roc.csv. */
VB_API vb_status vb_report_write(const vb_report* report, const char* dir);
VB_API void vb_report_free(vb_report* report);

/* `kind` is "features" (classifiers only) or "devices". Writes one CSV row per
 * family or device mask; `rows` may be NULL. */
VB_API vb_status vb_ablate(const vb_dataset* dataset, const vb_model_options* options, const char* kind,
                           const char* out_csv, size_t* rows);

/* Writes `<id>_before.csv`, `<id>_after.csv` and `labels.csv` under `out_dir`. */
VB_API vb_status vb_simulate(size_t n, uint64_t seed, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* VBREATH_VBREATH_H_ */
