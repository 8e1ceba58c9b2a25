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

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vbreath::text {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);
void append_double(std::string& out, double value);

std::optional<double> parse_double(std::string_view field);
std::optional<std::int64_t> parse_int64(std::string_view field);

/// Splits on ',' without quoting support; the formats here never quote.
std::vector<std::string_view> split_fields(std::string_view line);

std::string_view trim(std::string_view s);

}  // namespace vbreath::text
