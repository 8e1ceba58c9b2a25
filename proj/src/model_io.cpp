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

#include <cinttypes>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "vbreath/error.hpp"
#include "vbreath/models.hpp"
#include "vbreath/text.hpp"

namespace vbreath {
namespace {

constexpr std::string_view kMagic = "vbreath-model";
constexpr int kVersion = 1;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

void write_doubles(std::ostream& out, std::string_view key, const std::vector<double>& values) {
  out << key << ' ' << values.size();
  for (double v : values) out << ' ' << text::format_double(v);
  out << '\n';
}

void write_tree(std::ostream& out, const Tree& tree, int node) {
  const auto& n = tree.nodes()[static_cast<std::size_t>(node)];
  if (n.is_leaf()) {
    out << "L " << text::format_double(n.value) << '\n';
    return;
  }
  // Internal nodes keep their own value so refitted leaves and splits both round-trip.
  out << "S " << n.feature << ' ' << text::format_double(n.threshold) << ' ' << text::format_double(n.value)
      << '\n';
  write_tree(out, tree, n.left);
  write_tree(out, tree, n.right);
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  [[noreturn]] void bad(const std::string& what) const {
    fail(ErrorCode::MalformedModelFile, "model file line " + std::to_string(line_no_) + ": " + what);
  }

  std::istringstream line() {
    std::string s;
    if (!std::getline(in_, s)) bad("unexpected end of file");
    ++line_no_;
    return std::istringstream(s);
  }

  std::string token(std::istringstream& ls) const {
    std::string t;
    if (!(ls >> t)) bad("missing field");
    return t;
  }

  double number(std::istringstream& ls) const {
    const auto v = text::parse_double(token(ls));
    if (!v) bad("bad number");
    return *v;
  }

  std::int64_t integer(std::istringstream& ls) const {
    const auto v = text::parse_int64(token(ls));
    if (!v) bad("bad integer");
    return *v;
  }

  std::istringstream keyed(std::string_view key) {
    auto ls = line();
    if (token(ls) != key) bad("expected '" + std::string(key) + "'");
    return ls;
  }

  double keyed_number(std::string_view key) {
    auto ls = keyed(key);
    return number(ls);
  }

  std::int64_t keyed_integer(std::string_view key) {
    auto ls = keyed(key);
    return integer(ls);
  }

  std::vector<double> keyed_doubles(std::string_view key) {
    auto ls = keyed(key);
    const auto count = integer(ls);
    if (count < 0) bad("negative count");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) out.push_back(number(ls));
    return out;
  }

  int read_tree(std::vector<TreeNode>& nodes, std::size_t budget, int depth) {
    if (nodes.size() >= budget || depth > 100000) bad("tree larger than declared");
    auto ls = line();
    const auto tag = token(ls);
    const int index = static_cast<int>(nodes.size());
    nodes.push_back({});
    if (tag == "L") {
      nodes.back().value = number(ls);
      return index;
    }
    if (tag != "S") bad("expected tree node");
    const auto feature = integer(ls);
    if (feature < 0) bad("negative feature index");
    const double threshold = number(ls);
    const double value = number(ls);
    const int left = read_tree(nodes, budget, depth + 1);
    const int right = read_tree(nodes, budget, depth + 1);
    auto& n = nodes[static_cast<std::size_t>(index)];
    n.feature = static_cast<int>(feature);
    n.threshold = threshold;
    n.value = value;
    n.left = left;
    n.right = right;
    return index;
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

void write_model(std::ostream& out, const Model& m) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "kind " << to_string(m.kind) << '\n';
  out << "task " << to_string(m.task()) << '\n';
  out << "threshold " << m.threshold << '\n';
  out << "n_features " << m.n_features << '\n';
  out << "catalog_fingerprint " << hex64(m.catalog_fingerprint) << '\n';
  out << "n_estimators " << m.params.n_estimators << '\n';
  out << "learning_rate " << text::format_double(m.params.learning_rate) << '\n';
  out << "max_depth " << m.params.max_depth << '\n';
  out << "min_samples_split " << m.params.min_samples_split << '\n';
  out << "alpha " << text::format_double(m.params.alpha) << '\n';
  out << "tol " << text::format_double(m.params.tol) << '\n';
  out << "max_sweeps " << m.params.max_sweeps << '\n';
  out << "random_seed " << m.params.random_seed << '\n';
  out << "init_value " << text::format_double(m.init_value) << '\n';
  out << "converged " << (m.converged ? 1 : 0) << '\n';
  out << "lasso_intercept " << text::format_double(m.lasso_intercept) << '\n';
  write_doubles(out, "lasso_weights", m.lasso_weights);
  write_doubles(out, "stage_weights", m.stage_weights);
  out << "trees " << m.trees.size() << '\n';
  for (const auto& tree : m.trees) {
    out << "tree " << tree.nodes().size() << '\n';
    if (!tree.nodes().empty()) write_tree(out, tree, 0);
  }
  out << "end\n";
}

Model read_model(std::istream& in, std::optional<std::uint64_t> expected_fingerprint) {
  Reader r(in);
  Model m;
  {
    auto ls = r.line();
    if (r.token(ls) != kMagic) r.bad("not a model file");
    if (r.integer(ls) != kVersion) r.bad("unsupported version");
  }
  {
    auto ls = r.keyed("kind");
    try {
      m.kind = parse_model_kind(r.token(ls));
    } catch (const Error& e) {
      r.bad(e.what());
    }
  }
  {
    auto ls = r.keyed("task");
    if (r.token(ls) != to_string(m.task())) r.bad("task does not match kind");
  }
  m.threshold = static_cast<int>(r.keyed_integer("threshold"));
  const auto n_features = r.keyed_integer("n_features");
  if (n_features < 0) r.bad("negative n_features");
  m.n_features = static_cast<std::size_t>(n_features);
  {
    auto ls = r.keyed("catalog_fingerprint");
    const auto hex = r.token(ls);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), v, 16);
    if (ec != std::errc{} || ptr != hex.data() + hex.size() || hex.size() != 16) r.bad("bad fingerprint");
    m.catalog_fingerprint = v;
  }
  m.params.n_estimators = static_cast<int>(r.keyed_integer("n_estimators"));
  m.params.learning_rate = r.keyed_number("learning_rate");
  m.params.max_depth = static_cast<int>(r.keyed_integer("max_depth"));
  m.params.min_samples_split = static_cast<int>(r.keyed_integer("min_samples_split"));
  m.params.alpha = r.keyed_number("alpha");
  m.params.tol = r.keyed_number("tol");
  m.params.max_sweeps = static_cast<int>(r.keyed_integer("max_sweeps"));
  {
    auto ls = r.keyed("random_seed");
    const auto tok = r.token(ls);
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), seed);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) r.bad("bad seed");
    m.params.random_seed = seed;
  }
  m.init_value = r.keyed_number("init_value");
  m.converged = r.keyed_integer("converged") != 0;
  m.lasso_intercept = r.keyed_number("lasso_intercept");
  m.lasso_weights = r.keyed_doubles("lasso_weights");
  m.stage_weights = r.keyed_doubles("stage_weights");
  const auto tree_count = r.keyed_integer("trees");
  if (tree_count < 0) r.bad("negative tree count");
  for (std::int64_t t = 0; t < tree_count; ++t) {
    const auto node_count = r.keyed_integer("tree");
    if (node_count < 0) r.bad("negative node count");
    std::vector<TreeNode> nodes;
    if (node_count > 0) r.read_tree(nodes, static_cast<std::size_t>(node_count), 0);
    if (nodes.size() != static_cast<std::size_t>(node_count)) r.bad("tree node count mismatch");
    for (const auto& n : nodes)
      if (!n.is_leaf() && static_cast<std::size_t>(n.feature) >= m.n_features) r.bad("feature index out of range");
    m.trees.emplace_back(std::move(nodes));
  }
  {
    auto ls = r.line();
    if (r.token(ls) != "end") r.bad("missing end marker");
  }

  if (m.kind == ModelKind::Lasso && m.lasso_weights.size() != m.n_features) r.bad("lasso weight count");
  if (m.kind != ModelKind::Lasso && m.stage_weights.size() != m.trees.size()) r.bad("stage weight count");
  if ((m.kind == ModelKind::DecisionTree || m.kind == ModelKind::RegressionTree) && m.trees.size() != 1)
    r.bad("single tree expected");
  for (const auto& t : m.trees)
    if (t.nodes().empty()) r.bad("empty tree");

  if (expected_fingerprint && *expected_fingerprint != m.catalog_fingerprint)
    fail(ErrorCode::CatalogFingerprintMismatch, "model catalog " + hex64(m.catalog_fingerprint) +
                                                    " does not match feature matrix " + hex64(*expected_fingerprint));
  return m;
}

void save_model(const std::string& path, const Model& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path);
  write_model(out, model);
  if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

Model load_model(const std::string& path, std::optional<std::uint64_t> expected_fingerprint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  return read_model(in, expected_fingerprint);
}

}  // namespace vbreath
