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

namespace vbreath {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) fail(ErrorCode::DimensionMismatch, "ragged rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

double binary_entropy(double positive_weight, double total_weight) {
  if (!(total_weight > 0.0)) return 0.0;
  const double p = positive_weight / total_weight;
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

std::size_t Tree::leaf_index(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return i;
}

int Tree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<int> d(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

namespace detail {

CartTrainer::CartTrainer(const Matrix& x)
    : rows_(x.rows()), cols_(x.cols()), columns_(x.rows() * x.cols()), presorted_(x.rows() * x.cols()) {
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) columns_[c * rows_ + r] = x(r, c);
  for (std::size_t c = 0; c < cols_; ++c) {
    auto* order = presorted_.data() + c * rows_;
    const double* col = columns_.data() + c * rows_;
    std::iota(order, order + rows_, std::uint32_t{0});
    std::stable_sort(order, order + rows_, [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
  }
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

class Grower {
 public:
  Grower(std::size_t rows, std::size_t cols, const std::vector<double>& columns,
         std::vector<std::uint32_t> order, std::span<const double> y, Task task,
         const TreeParams& params, std::span<const double> w)
      : rows_(rows), cols_(cols), columns_(columns), order_(std::move(order)), y_(y), task_(task),
        params_(params), w_(w), goes_left_(rows), scratch_(rows) {}

  std::vector<TreeNode> grow() {
    build(0, rows_, 0);
    return std::move(nodes_);
  }

 private:
  double col(std::size_t f, std::uint32_t r) const { return columns_[f * rows_ + r]; }
  std::uint32_t* segment(std::size_t f) { return order_.data() + f * rows_; }

  int build(std::size_t begin, std::size_t end, int depth) {
    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back({});

    const auto* rows = segment(0);
    double weight = 0.0, sum = 0.0, lo = 0.0, hi = 0.0;
    bool seen = false;
    for (auto i = begin; i < end; ++i) {
      const auto r = rows[i];
      weight += w_[r];
      sum += w_[r] * y_[r];
      if (w_[r] > 0.0) {
        lo = seen ? std::min(lo, y_[r]) : y_[r];
        hi = seen ? std::max(hi, y_[r]) : y_[r];
        seen = true;
      }
    }
    if (weight > 0.0) {
      nodes_[static_cast<std::size_t>(index)].value = sum / weight;
    } else {
      double plain = 0.0;
      for (auto i = begin; i < end; ++i) plain += y_[rows[i]];
      nodes_[static_cast<std::size_t>(index)].value = plain / static_cast<double>(end - begin);
    }

    const auto count = end - begin;
    const bool depth_capped = params_.max_depth >= 0 && depth >= params_.max_depth;
    if (depth_capped || count < static_cast<std::size_t>(std::max(2, params_.min_samples_split)) ||
        !seen || lo == hi)
      return index;

    const Split split = best_split(begin, end, weight, sum);
    if (split.feature < 0) return index;

    // Stable partition of every feature segment keeps each side presorted.
    const auto f = static_cast<std::size_t>(split.feature);
    std::size_t left_count = 0;
    for (auto i = begin; i < end; ++i) {
      const auto r = rows[i];
      goes_left_[r] = col(f, r) <= split.threshold;
      left_count += goes_left_[r] ? 1 : 0;
    }
    for (std::size_t c = 0; c < cols_; ++c) {
      auto* seg = segment(c);
      std::size_t l = begin, k = 0;
      for (auto i = begin; i < end; ++i) {
        if (goes_left_[seg[i]]) seg[l++] = seg[i];
        else scratch_[k++] = seg[i];
      }
      std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(k), seg + l);
    }

    const int left = build(begin, begin + left_count, depth + 1);
    const int right = build(begin + left_count, end, depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(index)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return index;
  }

  Split best_split(std::size_t begin, std::size_t end, double weight, double sum) {
    Split best;
    const double parent_entropy = task_ == Task::Classify ? binary_entropy(sum, weight) : 0.0;
    const double parent_term = task_ == Task::Regress ? sum * sum / weight : 0.0;
    for (std::size_t f = 0; f < cols_; ++f) {
      const auto* seg = segment(f);
      double wl = 0.0, sl = 0.0;
      for (auto i = begin; i + 1 < end; ++i) {
        const auto r = seg[i];
        wl += w_[r];
        sl += w_[r] * y_[r];
        const double a = col(f, r);
        const double b = col(f, seg[i + 1]);
        if (!(a < b)) continue;
        const double wr = weight - wl;
        if (!(wl > 0.0) || !(wr > 0.0)) continue;
        const double sr = sum - sl;
        double gain;
        if (task_ == Task::Classify) {
          gain = parent_entropy - (wl / weight) * binary_entropy(sl, wl) -
                 (wr / weight) * binary_entropy(std::max(0.0, sr), wr);
        } else {
          gain = (sl * sl / wl + sr * sr / wr - parent_term) / weight;
        }
        if (best.feature < 0 || gain > best.gain + 1e-12 * std::max(1.0, std::abs(best.gain))) {
          double threshold = 0.5 * (a + b);
          if (!(threshold < b)) threshold = a;
          best = {static_cast<int>(f), threshold, gain};
        }
      }
    }
    return best;
  }

  std::size_t rows_;
  std::size_t cols_;
  const std::vector<double>& columns_;
  std::vector<std::uint32_t> order_;
  std::span<const double> y_;
  Task task_;
  TreeParams params_;
  std::span<const double> w_;
  std::vector<char> goes_left_;
  std::vector<std::uint32_t> scratch_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

Tree CartTrainer::fit(std::span<const double> y, Task task, const TreeParams& params,
                      std::span<const double> weights) const {
  if (rows_ == 0) fail(ErrorCode::EmptyData, "no training rows");
  if (y.size() != rows_) fail(ErrorCode::LengthMismatch, "target length differs from row count");
  std::vector<double> unit;
  if (weights.empty()) {
    unit.assign(rows_, 1.0);
    weights = unit;
  } else if (weights.size() != rows_) {
    fail(ErrorCode::LengthMismatch, "weight length differs from row count");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (!std::isfinite(y[i])) fail(ErrorCode::NonFiniteInput, "non-finite target");
    if (task == Task::Classify && y[i] != 0.0 && y[i] != 1.0)
      fail(ErrorCode::NonBinaryLabels, "classification labels must be 0 or 1");
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
      fail(ErrorCode::DegenerateWeights, "sample weights must be finite and non-negative");
  }
  if (std::accumulate(weights.begin(), weights.end(), 0.0) <= 0.0)
    fail(ErrorCode::DegenerateWeights, "sample weights sum to zero");
  Grower grower(rows_, cols_, columns_, presorted_, y, task, params, weights);
  return Tree(grower.grow());
}

}  // namespace detail

Tree train_cart(const Matrix& x, std::span<const double> y, Task task, const TreeParams& params,
                std::span<const double> weights) {
  if (x.rows() == 0) fail(ErrorCode::EmptyData, "no training rows");
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (double v : x.row(r))
      if (!std::isfinite(v)) fail(ErrorCode::NonFiniteInput, "non-finite feature value");
  return detail::CartTrainer(x).fit(y, task, params, weights);
}

}  // namespace vbreath
