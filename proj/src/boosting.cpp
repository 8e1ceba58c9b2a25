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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cart_trainer.hpp"
#include "vbreath/error.hpp"
#include "vbreath/models.hpp"

namespace vbreath {
namespace {

constexpr double kErrorFloor = 1e-10;

void check_training_data(const Matrix& x, std::span<const double> y) {
  if (x.rows() == 0 || x.cols() == 0) fail(ErrorCode::EmptyData, "empty training matrix");
  if (y.size() != x.rows()) fail(ErrorCode::LengthMismatch, "target length differs from row count");
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (double v : x.row(r))
      if (!std::isfinite(v)) fail(ErrorCode::NonFiniteInput, "non-finite feature value");
  for (double v : y)
    if (!std::isfinite(v)) fail(ErrorCode::NonFiniteInput, "non-finite target");
}

void check_binary(std::span<const double> y) {
  for (double v : y)
    if (v != 0.0 && v != 1.0) fail(ErrorCode::NonBinaryLabels, "classification labels must be 0 or 1");
}

double normalize(std::vector<double>& w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total))
    fail(ErrorCode::DegenerateWeights, "sample weights collapsed to zero");
  for (auto& v : w) v /= total;
  return total;
}

double weighted_median(std::span<const double> values, std::span<const double> weights) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double cumulative = 0.0;
  for (std::size_t i : idx) {
    cumulative += weights[i];
    if (cumulative >= 0.5 * total) return values[i];
  }
  return values[idx.back()];
}

Model blank_model(ModelKind kind, const Matrix& x, const Hyperparams& params) {
  Model m;
  m.kind = kind;
  m.params = params;
  m.n_features = x.cols();
  return m;
}

TreeParams tree_params(const Hyperparams& p) { return {p.max_depth, p.min_samples_split}; }

}  // namespace

std::string_view to_string(Task task) noexcept { return task == Task::Classify ? "classify" : "regress"; }

Task parse_task(std::string_view name) {
  if (name == "classify") return Task::Classify;
  if (name == "regress") return Task::Regress;
  fail(ErrorCode::InvalidArgument, "unknown task '" + std::string(name) + "'");
}

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::DecisionTree: return "dt";
    case ModelKind::AdaBoostClassifier: return "adaboost";
    case ModelKind::GradientBoostingClassifier: return "gbc";
    case ModelKind::RegressionTree: return "rt";
    case ModelKind::AdaBoostRegressor: return "abr";
    case ModelKind::GradientBoostingRegressor: return "gbr";
    case ModelKind::Lasso: return "lasso";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  for (auto k : {ModelKind::DecisionTree, ModelKind::AdaBoostClassifier, ModelKind::GradientBoostingClassifier,
                 ModelKind::RegressionTree, ModelKind::AdaBoostRegressor, ModelKind::GradientBoostingRegressor,
                 ModelKind::Lasso})
    if (name == to_string(k)) return k;
  fail(ErrorCode::InvalidArgument, "unknown model '" + std::string(name) + "'");
}

Task task_of(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::DecisionTree:
    case ModelKind::AdaBoostClassifier:
    case ModelKind::GradientBoostingClassifier: return Task::Classify;
    default: return Task::Regress;
  }
}

Hyperparams default_hyperparams(ModelKind kind) {
  Hyperparams p;
  switch (kind) {
    case ModelKind::DecisionTree:
    case ModelKind::RegressionTree:
      p.n_estimators = 1;
      p.learning_rate = 1.0;
      p.max_depth = -1;
      break;
    case ModelKind::AdaBoostClassifier:
      p.n_estimators = 50;
      p.learning_rate = 1.0;
      p.max_depth = 1;
      break;
    case ModelKind::AdaBoostRegressor:
      p.n_estimators = 50;
      p.learning_rate = 1.0;
      p.max_depth = 3;
      break;
    case ModelKind::GradientBoostingClassifier:
    case ModelKind::GradientBoostingRegressor:
      break;
    case ModelKind::Lasso:
      p.n_estimators = 0;
      p.learning_rate = 1.0;
      p.max_depth = 0;
      p.alpha = 1.0;
      break;
  }
  return p;
}

double soft_threshold(double value, double lambda) {
  if (value > lambda) return value - lambda;
  if (value < -lambda) return value + lambda;
  return 0.0;
}

double adaboost_stage_weight(double weighted_error) {
  const double eps = std::clamp(weighted_error, kErrorFloor, 1.0 - kErrorFloor);
  return 0.5 * std::log((1.0 - eps) / eps);
}

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Model train_adaboost(const Matrix& x, std::span<const double> y, Task task, const Hyperparams& params,
                     TrainingTrace* trace) {
  check_training_data(x, y);
  const auto n = x.rows();
  const detail::CartTrainer trainer(x);
  std::vector<double> w(n, 1.0 / static_cast<double>(n));

  if (task == Task::Classify) {
    check_binary(y);
    Model model = blank_model(ModelKind::AdaBoostClassifier, x, params);
    std::vector<double> h(n);
    for (int m = 0; m < params.n_estimators; ++m) {
      Tree stump = trainer.fit(y, Task::Classify, tree_params(params), w);
      for (std::size_t i = 0; i < n; ++i) h[i] = stump.predict(x.row(i)) >= 0.5 ? 1.0 : -1.0;
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if ((h[i] > 0.0) != (y[i] == 1.0)) err += w[i];
      if (err > 0.5) {
        // Worse than chance: the inverted learner is better than chance.
        for (auto& node : stump.mutable_nodes())
          if (node.is_leaf()) node.value = 1.0 - node.value;
        for (auto& v : h) v = -v;
        err = 1.0 - err;
      }
      if (err >= 0.5) break;  // no information left
      const double alpha = params.learning_rate * adaboost_stage_weight(err);
      model.trees.push_back(std::move(stump));
      model.stage_weights.push_back(alpha);
      if (trace) trace->stage_errors.push_back(err);
      if (err <= kErrorFloor) break;
      for (std::size_t i = 0; i < n; ++i) w[i] *= std::exp(-alpha * (2.0 * y[i] - 1.0) * h[i]);
      normalize(w);
    }
    return model;
  }

  Model model = blank_model(ModelKind::AdaBoostRegressor, x, params);
  std::vector<double> loss(n);
  for (int m = 0; m < params.n_estimators; ++m) {
    Tree tree = trainer.fit(y, Task::Regress, tree_params(params), w);
    double max_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      loss[i] = std::abs(y[i] - tree.predict(x.row(i)));
      max_err = std::max(max_err, loss[i]);
    }
    if (max_err == 0.0) {
      model.trees.push_back(std::move(tree));
      model.stage_weights.push_back(1.0);
      if (trace) trace->stage_errors.push_back(0.0);
      break;
    }
    double avg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      loss[i] /= max_err;
      avg += w[i] * loss[i];
    }
    if (avg >= 0.5) {
      if (model.trees.empty()) {
        model.trees.push_back(std::move(tree));
        model.stage_weights.push_back(1.0);
        if (trace) trace->stage_errors.push_back(avg);
      }
      break;
    }
    const double beta = avg / (1.0 - avg);
    model.trees.push_back(std::move(tree));
    model.stage_weights.push_back(params.learning_rate * std::log(1.0 / beta));
    if (trace) trace->stage_errors.push_back(avg);
    for (std::size_t i = 0; i < n; ++i) w[i] *= std::pow(beta, (1.0 - loss[i]) * params.learning_rate);
    normalize(w);
  }
  return model;
}

Model train_gradient_boosting(const Matrix& x, std::span<const double> y, Task task,
                              const Hyperparams& params, TrainingTrace* trace) {
  check_training_data(x, y);
  const auto n = x.rows();
  const detail::CartTrainer trainer(x);
  std::vector<double> f(n), residual(n);
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);

  auto record_mse = [&] {
    if (!trace) return;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) sse += (y[i] - f[i]) * (y[i] - f[i]);
    trace->training_mse.push_back(sse / static_cast<double>(n));
  };

  if (task == Task::Regress) {
    Model model = blank_model(ModelKind::GradientBoostingRegressor, x, params);
    model.init_value = mean_y;
    std::fill(f.begin(), f.end(), mean_y);
    record_mse();
    for (int m = 0; m < params.n_estimators; ++m) {
      for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - f[i];
      Tree tree = trainer.fit(residual, Task::Regress, tree_params(params), {});
      for (std::size_t i = 0; i < n; ++i) f[i] += params.learning_rate * tree.predict(x.row(i));
      model.trees.push_back(std::move(tree));
      model.stage_weights.push_back(params.learning_rate);
      record_mse();
    }
    return model;
  }

  check_binary(y);
  if (mean_y == 0.0 || mean_y == 1.0)
    fail(ErrorCode::SingleClass, "gradient boosting classification needs both classes");
  Model model = blank_model(ModelKind::GradientBoostingClassifier, x, params);
  model.init_value = std::log(mean_y / (1.0 - mean_y));
  std::fill(f.begin(), f.end(), model.init_value);
  std::vector<double> prob(n);
  for (int m = 0; m < params.n_estimators; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      prob[i] = logistic(f[i]);
      residual[i] = y[i] - prob[i];
    }
    Tree tree = trainer.fit(residual, Task::Regress, tree_params(params), {});
    // One Newton step per leaf on the binomial deviance.
    auto& nodes = tree.mutable_nodes();
    std::vector<double> num(nodes.size(), 0.0), den(nodes.size(), 0.0);
    std::vector<std::size_t> leaf_of(n);
    for (std::size_t i = 0; i < n; ++i) {
      leaf_of[i] = tree.leaf_index(x.row(i));
      num[leaf_of[i]] += residual[i];
      den[leaf_of[i]] += prob[i] * (1.0 - prob[i]);
    }
    for (std::size_t k = 0; k < nodes.size(); ++k)
      if (nodes[k].is_leaf()) nodes[k].value = std::abs(den[k]) < 1e-150 ? 0.0 : num[k] / den[k];
    for (std::size_t i = 0; i < n; ++i) f[i] += params.learning_rate * nodes[leaf_of[i]].value;
    model.trees.push_back(std::move(tree));
    model.stage_weights.push_back(params.learning_rate);
  }
  return model;
}

Model train_lasso(const Matrix& x, std::span<const double> y, const Hyperparams& params, TrainingTrace* trace) {
  check_training_data(x, y);
  if (!(params.alpha >= 0.0)) fail(ErrorCode::InvalidArgument, "alpha must be non-negative");
  const auto n = x.rows();
  const auto p = x.cols();
  const auto nd = static_cast<double>(n);

  // Standardized columns, column-major.
  std::vector<double> mean(p, 0.0), scale(p, 0.0), z(n * p, 0.0), col_sq(p, 0.0);
  std::vector<char> active(p, 0);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) mean[j] += x(i, j);
    mean[j] /= nd;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (x(i, j) - mean[j]) * (x(i, j) - mean[j]);
    scale[j] = std::sqrt(var / nd);
    if (scale[j] <= 1e-12 * std::max(1.0, std::abs(mean[j]))) continue;
    active[j] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = (x(i, j) - mean[j]) / scale[j];
      z[j * n + i] = v;
      col_sq[j] += v * v;
    }
    col_sq[j] /= nd;
  }

  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / nd;
  std::vector<double> r(n), w(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - mean_y;

  auto objective = [&] {
    double sse = 0.0;
    for (double v : r) sse += v * v;
    double l1 = 0.0;
    for (double v : w) l1 += std::abs(v);
    return sse / (2.0 * nd) + params.alpha * l1;
  };
  if (trace) trace->lasso_objective.push_back(objective());

  Model model = blank_model(ModelKind::Lasso, x, params);
  model.converged = false;
  int sweep = 0;
  while (sweep < params.max_sweeps) {
    ++sweep;
    double max_change = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (!active[j]) continue;
      const double* zj = z.data() + j * n;
      double rho = 0.0;
      for (std::size_t i = 0; i < n; ++i) rho += zj[i] * r[i];
      rho = rho / nd + col_sq[j] * w[j];
      const double updated = soft_threshold(rho, params.alpha) / col_sq[j];
      const double delta = updated - w[j];
      if (delta != 0.0) {
        for (std::size_t i = 0; i < n; ++i) r[i] -= delta * zj[i];
        w[j] = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (trace) trace->lasso_objective.push_back(objective());
    if (max_change < params.tol) {
      model.converged = true;
      break;
    }
  }
  if (trace) trace->sweeps = sweep;

  model.lasso_weights.assign(p, 0.0);
  double intercept = mean_y;
  for (std::size_t j = 0; j < p; ++j) {
    if (!active[j]) continue;
    model.lasso_weights[j] = w[j] / scale[j];
    intercept -= model.lasso_weights[j] * mean[j];
  }
  model.lasso_intercept = intercept;
  return model;
}

Model train_model(ModelKind kind, const Matrix& x, std::span<const double> y, const Hyperparams& params,
                  TrainingTrace* trace) {
  switch (kind) {
    case ModelKind::DecisionTree:
    case ModelKind::RegressionTree: {
      check_training_data(x, y);
      if (kind == ModelKind::DecisionTree) check_binary(y);
      Model model = blank_model(kind, x, params);
      model.trees.push_back(train_cart(x, y, task_of(kind), tree_params(params)));
      model.stage_weights.push_back(1.0);
      return model;
    }
    case ModelKind::AdaBoostClassifier:
    case ModelKind::AdaBoostRegressor: return train_adaboost(x, y, task_of(kind), params, trace);
    case ModelKind::GradientBoostingClassifier:
    case ModelKind::GradientBoostingRegressor: return train_gradient_boosting(x, y, task_of(kind), params, trace);
    case ModelKind::Lasso: return train_lasso(x, y, params, trace);
  }
  fail(ErrorCode::InvalidArgument, "unknown model kind");
}

double predict(const Model& model, std::span<const double> x) {
  if (x.size() != model.n_features)
    fail(ErrorCode::DimensionMismatch, "model expects " + std::to_string(model.n_features) +
                                           " features, got " + std::to_string(x.size()));
  switch (model.kind) {
    case ModelKind::DecisionTree:
    case ModelKind::RegressionTree: return model.trees.at(0).predict(x);
    case ModelKind::AdaBoostClassifier: {
      double score = 0.0;
      for (std::size_t m = 0; m < model.trees.size(); ++m)
        score += model.stage_weights[m] * (model.trees[m].predict(x) >= 0.5 ? 1.0 : -1.0);
      return logistic(score);
    }
    case ModelKind::AdaBoostRegressor: {
      if (model.trees.empty()) return 0.0;
      std::vector<double> preds(model.trees.size());
      for (std::size_t m = 0; m < model.trees.size(); ++m) preds[m] = model.trees[m].predict(x);
      return weighted_median(preds, model.stage_weights);
    }
    case ModelKind::GradientBoostingClassifier:
    case ModelKind::GradientBoostingRegressor: {
      double f = model.init_value;
      for (std::size_t m = 0; m < model.trees.size(); ++m) f += model.stage_weights[m] * model.trees[m].predict(x);
      return model.kind == ModelKind::GradientBoostingClassifier ? logistic(f) : f;
    }
    case ModelKind::Lasso: {
      double f = model.lasso_intercept;
      for (std::size_t j = 0; j < x.size(); ++j) f += model.lasso_weights[j] * x[j];
      return f;
    }
  }
  return 0.0;
}

}  // namespace vbreath
