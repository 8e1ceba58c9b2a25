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

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vbreath/vbreath.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Thrown after a failed C call; carries the status so main can pick an exit code.
struct CallFailed {
  vb_status status;
  std::string message;
};

void check(vb_status status) {
  if (status != VB_OK) throw CallFailed{status, vb_last_error_message()};
}

struct DatasetDeleter {
  void operator()(vb_dataset* d) const { vb_dataset_free(d); }
};
struct ModelDeleter {
  void operator()(vb_model* m) const { vb_model_free(m); }
};
struct ReportDeleter {
  void operator()(vb_report* r) const { vb_report_free(r); }
};
using DatasetPtr = std::unique_ptr<vb_dataset, DatasetDeleter>;
using ModelPtr = std::unique_ptr<vb_model, ModelDeleter>;
using ReportPtr = std::unique_ptr<vb_report, ReportDeleter>;

DatasetPtr load_dataset(const std::string& path) {
  vb_dataset* d = nullptr;
  check(vb_dataset_load(path.c_str(), &d));
  return DatasetPtr(d);
}

const char* opt_cstr(const std::optional<std::string>& s) { return s ? s->c_str() : nullptr; }

// Model flags shared by train, evaluate and ablate. Values left unset fall back
// to the per-model defaults of the library.
struct ModelFlags {
  std::string model = "gbc";
  std::optional<std::string> task;
  int threshold = 240;
  std::optional<int> n_estimators;
  std::optional<double> learning_rate;
  std::optional<int> max_depth;
  std::optional<int> min_samples_split;
  std::optional<double> alpha;
  std::optional<double> tol;
  std::optional<int> max_sweeps;
  std::uint64_t seed = 42;
  std::optional<std::string> devices;

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", model, "Learner")
        ->check(CLI::IsMember({"dt", "adaboost", "gbc", "rt", "abr", "gbr", "lasso"}))
        ->capture_default_str();
    cmd->add_option("--task", task, "classify or regress; must match the model")
        ->check(CLI::IsMember({"classify", "regress"}));
    cmd->add_option("--threshold", threshold, "BrAC threshold in ug/L (classifiers)")
        ->check(CLI::IsMember({220, 240, 250, 350}))
        ->capture_default_str();
    cmd->add_option("--devices", devices, "all, or devices joined by '+', e.g. Phone+Watch");
    cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    cmd->add_option("--n-estimators", n_estimators, "Boosting stages");
    cmd->add_option("--learning-rate", learning_rate, "Boosting shrinkage");
    cmd->add_option("--max-depth", max_depth, "Tree depth, negative for unlimited");
    cmd->add_option("--min-samples-split", min_samples_split, "Smallest node that may split");
    cmd->add_option("--alpha", alpha, "Lasso L1 penalty");
    cmd->add_option("--tol", tol, "Lasso convergence tolerance");
    cmd->add_option("--max-sweeps", max_sweeps, "Lasso coordinate-descent sweeps");
  }

  vb_model_options options() const {
    vb_model_options o;
    check(vb_model_options_default(model.c_str(), &o));
    o.model = model.c_str();
    o.task = opt_cstr(task);
    o.threshold = threshold;
    o.seed = seed;
    if (n_estimators) o.n_estimators = *n_estimators;
    if (learning_rate) o.learning_rate = *learning_rate;
    if (max_depth) o.max_depth = *max_depth;
    if (min_samples_split) o.min_samples_split = *min_samples_split;
    if (alpha) o.alpha = *alpha;
    if (tol) o.tol = *tol;
    if (max_sweeps) o.max_sweeps = *max_sweeps;
    return o;
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CallFailed{VB_ERR_IO, "cannot write " + path};
  return out;
}

std::string fmt(double v) { return std::to_string(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimate drunkenness from before/after walking recordings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vb_version()));

  // extract
  auto* extract = app.add_subcommand("extract", "Build the feature matrix from a recordings directory");
  std::string rec_dir, labels, matrix_out;
  vb_signal_options signal;
  vb_signal_options_default(&signal);
  extract->add_option("dir", rec_dir, "Directory of recording CSV files")->required();
  extract->add_option("--labels", labels, "Labels CSV (default <dir>/labels.csv)");
  extract->add_option("--out", matrix_out, "Feature matrix CSV")->required();
  extract->add_option("--target-hz", signal.target_hz, "Resampling rate")->capture_default_str();
  extract->add_option("--sma-window", signal.sma_window, "Moving-average width (odd)")->capture_default_str();
  extract->add_option("--window-start", signal.window_start_s, "Window start in seconds")->capture_default_str();
  extract->add_option("--window-end", signal.window_end_s, "Window end in seconds")->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "Fit a model on a feature matrix");
  std::string matrix_in, model_out;
  ModelFlags train_flags;
  train->add_option("matrix", matrix_in, "Feature matrix CSV")->required();
  train->add_option("--out", model_out, "Model file")->required();
  train_flags.attach(train);

  // predict
  auto* predict = app.add_subcommand("predict", "Score a feature matrix with a saved model");
  std::string model_file, predict_out;
  std::optional<std::string> predict_devices;
  double cutoff = 0.5;
  predict->add_option("matrix", matrix_in, "Feature matrix CSV")->required();
  predict->add_option("--model-file", model_file, "Model written by train")->required();
  predict->add_option("--devices", predict_devices, "Devices the model was trained on");
  predict->add_option("--cutoff", cutoff, "Score at or above which a subject is called drunk")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  predict->add_option("--out", predict_out, "Predictions CSV (default stdout)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Leave-one-subject-out evaluation");
  std::string eval_dir;
  ModelFlags eval_flags;
  evaluate->add_option("matrix", matrix_in, "Feature matrix CSV")->required();
  evaluate->add_option("--out", eval_dir, "Directory for report.csv, roc.csv, predictions.csv")->required();
  evaluate->add_option("--cutoff", cutoff, "Score cutoff for the confusion matrix")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  eval_flags.attach(evaluate);

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Feature-family or device ablation");
  std::string kind, ablate_out;
  ModelFlags ablate_flags;
  ablate->add_option("matrix", matrix_in, "Feature matrix CSV")->required();
  ablate->add_option("--kind", kind, "features or devices")
      ->required()
      ->check(CLI::IsMember({"features", "devices"}));
  ablate->add_option("--out", ablate_out, "Ablation CSV")->required();
  ablate_flags.attach(ablate);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic recordings directory");
  std::size_t n_subjects = 30;
  std::uint64_t sim_seed = 42;
  std::string sim_dir;
  simulate->add_option("-n", n_subjects, "Number of subjects")->check(CLI::Range(3, 100000))->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Master seed")->capture_default_str();
  simulate->add_option("--out", sim_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (auto& c : msg)
      if (c == '\n') c = ' ';
    std::fprintf(stderr, "ERROR Usage: %s\n", msg.c_str());
    return kExitUsage;
  }

  try {
    if (extract->parsed()) {
      vb_dataset* raw = nullptr;
      check(vb_extract(rec_dir.c_str(), labels.empty() ? nullptr : labels.c_str(), &signal, &raw));
      DatasetPtr data(raw);
      check(vb_dataset_save(data.get(), matrix_out.c_str()));
      std::printf("catalog %zu features, %zu subjects\n", vb_dataset_features(data.get()),
                  vb_dataset_rows(data.get()));
    } else if (train->parsed()) {
      auto data = load_dataset(matrix_in);
      const auto options = train_flags.options();
      vb_model* raw = nullptr;
      check(vb_train(data.get(), &options, opt_cstr(train_flags.devices), &raw));
      ModelPtr model(raw);
      check(vb_model_save(model.get(), model_out.c_str()));
      std::printf("trained %s on %zu features\n", vb_model_kind(model.get()), vb_model_features(model.get()));
    } else if (predict->parsed()) {
      auto data = load_dataset(matrix_in);
      vb_model* raw = nullptr;
      check(vb_model_load(model_file.c_str(), &raw));
      ModelPtr model(raw);
      if (predict_devices) {
        vb_dataset* sliced = nullptr;
        check(vb_dataset_select_devices(data.get(), predict_devices->c_str(), &sliced));
        data.reset(sliced);
      }
      const std::size_t n = vb_dataset_rows(data.get());
      std::vector<double> values(n);
      check(vb_model_predict(model.get(), data.get(), values.data(), n));
      const bool classify = std::string(vb_model_task(model.get())) == "classify";
      std::string text = classify ? "subject_id,score,drunk\n" : "subject_id,estimate\n";
      char buf[64];
      for (std::size_t r = 0; r < n; ++r) {
        const char* subject = nullptr;
        check(vb_dataset_subject(data.get(), r, &subject));
        std::snprintf(buf, sizeof buf, "%.17g", values[r]);
        text += std::string(subject) + "," + buf;
        if (classify) text += values[r] >= cutoff ? ",1" : ",0";
        text += "\n";
      }
      if (predict_out.empty()) {
        std::fputs(text.c_str(), stdout);
      } else {
        auto out = open_output(predict_out);
        out << text;
      }
    } else if (evaluate->parsed()) {
      auto data = load_dataset(matrix_in);
      const auto options = eval_flags.options();
      vb_report* raw = nullptr;
      check(vb_evaluate(data.get(), &options, opt_cstr(eval_flags.devices), cutoff, &raw));
      ReportPtr report(raw);
      check(vb_report_write(report.get(), eval_dir.c_str()));
      if (std::string(vb_report_task(report.get())) == "classify")
        std::printf("auc %s fpr_at_tpr1 %s subjects %zu\n", fmt(vb_report_auc(report.get())).c_str(),
                    fmt(vb_report_fpr_at_tpr1(report.get())).c_str(), vb_report_subjects(report.get()));
      else
        std::printf("mae %s rmse %s subjects %zu\n", fmt(vb_report_mae(report.get())).c_str(),
                    fmt(vb_report_rmse(report.get())).c_str(), vb_report_subjects(report.get()));
    } else if (ablate->parsed()) {
      auto data = load_dataset(matrix_in);
      const auto options = ablate_flags.options();
      std::size_t rows = 0;
      check(vb_ablate(data.get(), &options, kind.c_str(), ablate_out.c_str(), &rows));
      std::printf("%zu %s ablation rows\n", rows, kind.c_str());
    } else if (simulate->parsed()) {
      check(vb_simulate(n_subjects, sim_seed, sim_dir.c_str()));
      std::printf("simulated %zu subjects\n", n_subjects);
    }
  } catch (const CallFailed& f) {
    std::fprintf(stderr, "ERROR %s: %s\n", vb_status_name(f.status), f.message.c_str());
    return f.status == VB_ERR_INVALID_ARGUMENT ? kExitUsage : kExitFailure;
  }
  return 0;
}
