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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vbreath {

/// Dense row-major instance matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Task : std::uint8_t { Classify, Regress };

enum class ModelKind : std::uint8_t {
  DecisionTree,                // dt
  AdaBoostClassifier,          // adaboost
  GradientBoostingClassifier,  // gbc
  RegressionTree,              // rt
  AdaBoostRegressor,           // abr
  GradientBoostingRegressor,   // gbr
  Lasso,                       // lasso
};

std::string_view to_string(Task task) noexcept;
Task parse_task(std::string_view name);
std::string_view to_string(ModelKind kind) noexcept;
/// Accepts the CLI tokens dt, adaboost, gbc, rt, abr, gbr, lasso. Throws InvalidArgument.
ModelKind parse_model_kind(std::string_view name);
Task task_of(ModelKind kind) noexcept;

struct Hyperparams {
  int n_estimators = 100;
  double learning_rate = 0.1;
  int max_depth = 3;  // negative: unlimited
  int min_samples_split = 2;
  double alpha = 1.0;
  double tol = 1e-4;
  int max_sweeps = 1000;
  std::uint64_t random_seed = 42;
};

Hyperparams default_hyperparams(ModelKind kind);

// ---------------------------------------------------------------------------
// CART

struct TreeNode {
  int feature = -1;  // < 0 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf: mean target, or P(positive) for classification

  bool is_leaf() const { return feature < 0; }
};

class Tree {
 public:
  Tree() = default;
  explicit Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  /// Rows with x[feature] <= threshold descend left.
  double predict(std::span<const double> x) const { return nodes_[leaf_index(x)].value; }
  std::size_t leaf_index(std::span<const double> x) const;

  std::span<const TreeNode> nodes() const { return nodes_; }
  std::vector<TreeNode>& mutable_nodes() { return nodes_; }
  int depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

struct TreeParams {
  int max_depth = -1;
  int min_samples_split = 2;
};

/// Entropy (bits) information gain for classification, squared-error reduction for
/// regression. Ties go to the lower feature index, then the lower threshold.
/// `weights` is empty or one non-negative weight per row.
Tree train_cart(const Matrix& x, std::span<const double> y, Task task, const TreeParams& params,
                std::span<const double> weights = {});

/// Shannon entropy in bits of a weighted binary split.
double binary_entropy(double positive_weight, double total_weight);

// ---------------------------------------------------------------------------
// Ensembles

struct Model {
  ModelKind kind = ModelKind::DecisionTree;
  Hyperparams params;
  std::size_t n_features = 0;
  std::uint64_t catalog_fingerprint = 0;
  int threshold = 0;  // BrAC cut used to derive class labels; 0 for regression

  double init_value = 0.0;
  std::vector<Tree> trees;
  std::vector<double> stage_weights;

  std::vector<double> lasso_weights;  // original feature scale
  double lasso_intercept = 0.0;
  bool converged = true;

  Task task() const { return task_of(kind); }
};

/// Per-stage diagnostics collected during training.
struct TrainingTrace {
  std::vector<double> training_mse;     // gradient boosting regression, index 0 = init only
  std::vector<double> stage_errors;     // AdaBoost weighted error (classification) or average loss (R2)
  std::vector<double> lasso_objective;  // after each sweep, index 0 = initial point
  int sweeps = 0;
};

/// y in {0, 1} for classifiers. Throws EmptyData, NonBinaryLabels, SingleClass, DegenerateWeights.
Model train_model(ModelKind kind, const Matrix& x, std::span<const double> y, const Hyperparams& params,
                  TrainingTrace* trace = nullptr);

Model train_adaboost(const Matrix& x, std::span<const double> y, Task task, const Hyperparams& params,
                     TrainingTrace* trace = nullptr);
Model train_gradient_boosting(const Matrix& x, std::span<const double> y, Task task,
                              const Hyperparams& params, TrainingTrace* trace = nullptr);
Model train_lasso(const Matrix& x, std::span<const double> y, const Hyperparams& params,
                  TrainingTrace* trace = nullptr);

/// Classification: score in [0,1], higher = more likely Drunk. Regression: BrAC estimate.
double predict(const Model& model, std::span<const double> x);

double soft_threshold(double value, double lambda);
/// 0.5 * ln((1 - eps) / eps) with eps floored at 1e-10.
double adaboost_stage_weight(double weighted_error);
double logistic(double z);

// ---------------------------------------------------------------------------
// Model file

void write_model(std::ostream& out, const Model& model);
/// Throws MalformedModelFile; CatalogFingerprintMismatch when `expected_fingerprint`
/// is given and differs.
Model read_model(std::istream& in, std::optional<std::uint64_t> expected_fingerprint = std::nullopt);

void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path, std::optional<std::uint64_t> expected_fingerprint = std::nullopt);

}  // namespace vbreath
