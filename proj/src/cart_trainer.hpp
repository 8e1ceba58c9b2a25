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
#include <span>
#include <vector>

#include "vbreath/models.hpp"

namespace vbreath::detail {

// Presorts every feature column once so repeated fits on the same matrix
// (boosting stages) only pay for the split scans.
class CartTrainer {
 public:
  explicit CartTrainer(const Matrix& x);

  Tree fit(std::span<const double> y, Task task, const TreeParams& params,
           std::span<const double> weights) const;

  std::size_t rows() const { return rows_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> columns_;         // column-major copy
  std::vector<std::uint32_t> presorted_;  // per feature, rows by ascending value
};

}  // namespace vbreath::detail
