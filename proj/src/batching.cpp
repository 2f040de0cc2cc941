// Copyright 2026 The sumgraph Authors. All Rights Reserved.
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

#include "sumgraph/batching.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "json.hpp"

namespace sumgraph {

using ordered_json = nlohmann::ordered_json;

Selection all_subjects(const SubjectMap& m) {
  Selection out;
  out.reserve(m.size());
  for (const auto& r : m.records()) out.push_back(r.subject);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- folds

std::uint8_t fold_of(std::string_view surface, std::uint64_t seed, std::uint32_t folds) {
  if (folds == 0 || folds > 256) throw std::invalid_argument("folds must be in 1..256");
  const std::uint64_t x = mix64(fnv1a64(surface) ^ mix64(seed));
  // Multiply-high maps the 64-bit draw onto [0, folds) without modulo bias
  // beyond 2^-64 granularity.
  const auto wide = static_cast<unsigned __int128>(x) * folds;
  return static_cast<std::uint8_t>(wide >> 64);
}

FoldAssignment split_folds(SubjectMap& m, const TermDictionary& dict, std::uint64_t seed,
                           std::uint32_t folds) {
  FoldAssignment out;
  out.folds = folds;
  out.fold.reserve(m.size());
  for (auto& r : m.records()) {
    const auto f = fold_of(dict.decode(r.subject).ntriples(), seed, folds);
    r.fold = f;
    out.fold.emplace(r.subject, f);
  }
  return out;
}

FoldRoles make_fold_roles(std::uint32_t test_fold, std::uint32_t folds) {
  if (folds < 3) throw std::invalid_argument("need at least 3 folds for train/val/test");
  if (test_fold >= folds) throw std::invalid_argument("test fold out of range");
  FoldRoles roles;
  roles.test.push_back(static_cast<std::uint8_t>(test_fold));
  const auto val = (test_fold + 1) % folds;
  roles.val.push_back(static_cast<std::uint8_t>(val));
  for (std::uint32_t f = 0; f < folds; ++f) {
    if (f != test_fold && f != val) roles.train.push_back(static_cast<std::uint8_t>(f));
  }
  return roles;
}

std::string_view to_string(FoldRole r) {
  switch (r) {
    case FoldRole::Train: return "train";
    case FoldRole::Val: return "val";
    case FoldRole::Test: return "test";
  }
  return "?";
}

FoldRole parse_fold_role(std::string_view s) {
  if (s == "train") return FoldRole::Train;
  if (s == "val") return FoldRole::Val;
  if (s == "test") return FoldRole::Test;
  throw std::invalid_argument("unknown fold role '" + std::string(s) + "'");
}

const std::vector<std::uint8_t>& folds_for(const FoldRoles& roles, FoldRole r) {
  switch (r) {
    case FoldRole::Train: return roles.train;
    case FoldRole::Val: return roles.val;
    case FoldRole::Test: return roles.test;
  }
  return roles.train;
}

Selection select_folds(const SubjectMap& m, const Selection& selection,
                       std::span<const std::uint8_t> folds) {
  Selection out;
  for (TermId s : selection) {
    const auto& r = m.at(s);
    if (!r.fold) throw std::logic_error("subject " + std::to_string(s) + " has no fold");
    if (std::find(folds.begin(), folds.end(), *r.fold) != folds.end()) out.push_back(s);
  }
  return out;
}

// -------------------------------------------------------------- filters

namespace {

EqClass label_of(const SubjectMap& m, TermId s) {
  const auto& r = m.at(s);
  if (!r.label) throw UnlabeledSubject(s);
  return *r.label;
}

}  // namespace

FilterReport describe(const SubjectMap& m, const Selection& selection) {
  std::unordered_set<EqClass, EqClassHash> classes;
  for (TermId s : selection) classes.insert(label_of(m, s));
  return FilterReport{selection.size(), classes.size()};
}

Selection filter_min_support(const SubjectMap& m, const Selection& selection,
                             std::uint64_t threshold) {
  std::unordered_map<EqClass, std::uint64_t, EqClassHash> counts;
  for (TermId s : selection) ++counts[label_of(m, s)];
  Selection out;
  for (TermId s : selection) {
    if (counts[label_of(m, s)] >= threshold) out.push_back(s);
  }
  return out;
}

std::size_t subgraph_node_count(TermId s, SummaryModel model, const SubjectMap& m) {
  const auto& root = m.at(s);
  std::unordered_set<TermId> nodes{s};
  for (const auto& e : root.edges) nodes.insert(e.object);
  if (is_two_hop(model)) {
    std::unordered_set<TermId> expanded{s};
    for (const auto& e : root.edges) {
      if (!expanded.insert(e.object).second) continue;
      if (const auto* sub = m.find(e.object)) {
        for (const auto& e2 : sub->edges) nodes.insert(e2.object);
      }
    }
  }
  return nodes.size();
}

Selection filter_subgraph_size(const SubjectMap& m, const Selection& selection,
                               SummaryModel model, std::size_t max_nodes) {
  Selection out;
  for (TermId s : selection) {
    if (subgraph_node_count(s, model, m) < max_nodes) out.push_back(s);
  }
  return out;
}

Selection subsample_fraction(const SubjectMap& m, const TermDictionary& dict,
                             const Selection& selection, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("fraction must be in [0, 1]");
  }
  Selection out;
  // Distinct stream from fold assignment under the same seed.
  const std::uint64_t key = mix64(seed ^ 0x5ab5a3b1e5eedULL);
  for (TermId s : selection) {
    m.at(s);
    const double u = unit_interval(mix64(fnv1a64(dict.decode(s).ntriples()) ^ key));
    if (u < fraction) out.push_back(s);
  }
  return out;
}

// ------------------------------------------------------------ subgraphs

LabelMap::LabelMap(std::vector<EqClass> classes) : classes_(std::move(classes)) {
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    index_.emplace(classes_[i], static_cast<std::int64_t>(i));
  }
}

LabelMap LabelMap::from_selection(const SubjectMap& m, const Selection& selection) {
  std::vector<EqClass> classes;
  classes.reserve(selection.size());
  for (TermId s : selection) classes.push_back(label_of(m, s));
  return LabelMap(std::move(classes));
}

std::int64_t LabelMap::index_of(EqClass c) const {
  auto it = index_.find(c);
  return it == index_.end() ? -1 : it->second;
}

GraphData data_conversion(TermId s, SummaryModel model, const SubjectMap& m,
                          const LabelMap& labels) {
  const auto& root = m.at(s);
  if (!root.label) throw UnlabeledSubject(s);

  GraphData g;
  g.subject = s;
  g.root_index = 0;
  std::unordered_map<TermId, std::uint32_t> index;
  auto node_of = [&](TermId t) {
    auto [it, inserted] = index.try_emplace(t, g.num_nodes);
    if (inserted) ++g.num_nodes;
    return it->second;
  };
  auto add_edge = [&](TermId from, const Edge& e) {
    const auto src = node_of(from);
    g.adjacency.push_back({src, node_of(e.object)});
    g.edge_types.push_back(e.predicate);
  };

  node_of(s);
  for (const auto& e : root.edges) add_edge(s, e);
  if (is_two_hop(model)) {
    std::unordered_set<TermId> expanded{s};
    for (const auto& e : root.edges) {
      if (!expanded.insert(e.object).second) continue;
      if (const auto* sub = m.find(e.object)) {
        for (const auto& e2 : sub->edges) add_edge(e.object, e2);
      }
    }
  }
  g.labels.assign(g.num_nodes, -1);
  g.labels[0] = labels.index_of(*root.label);
  return g;
}

// -------------------------------------------------------------- batches

std::uint32_t MiniBatch::real_nodes() const noexcept {
  std::uint32_t n = 0;
  for (const auto& g : graphs) n += g.num_nodes;
  return n;
}

std::vector<std::int64_t> MiniBatch::node_labels() const {
  std::vector<std::int64_t> out;
  out.reserve(total_nodes());
  for (const auto& g : graphs) out.insert(out.end(), g.labels.begin(), g.labels.end());
  out.insert(out.end(), dummy_count, -1);
  return out;
}

std::vector<std::uint32_t> MiniBatch::node_offsets() const {
  std::vector<std::uint32_t> out;
  std::uint32_t offset = 0;
  for (const auto& g : graphs) {
    out.push_back(offset);
    offset += g.num_nodes;
  }
  return out;
}

std::string_view to_string(SamplingWeights w) {
  return w == SamplingWeights::Inverse ? "inverse" : "uniform";
}

SamplingWeights parse_weights(std::string_view s) {
  if (s == "inverse") return SamplingWeights::Inverse;
  if (s == "uniform") return SamplingWeights::Uniform;
  throw std::invalid_argument("unknown weights '" + std::string(s) + "'");
}

std::unordered_map<std::int64_t, std::uint64_t> root_class_counts(
    std::span<const GraphData> graphs) {
  std::unordered_map<std::int64_t, std::uint64_t> counts;
  for (const auto& g : graphs) ++counts[g.labels.at(g.root_index)];
  return counts;
}

std::vector<double> inverse_class_weights(
    std::span<const GraphData> graphs,
    const std::unordered_map<std::int64_t, std::uint64_t>& class_counts) {
  std::vector<double> w;
  w.reserve(graphs.size());
  for (const auto& g : graphs) {
    auto it = class_counts.find(g.labels.at(g.root_index));
    const std::uint64_t count = it == class_counts.end() ? 1 : std::max<std::uint64_t>(1, it->second);
    w.push_back(1.0 / static_cast<double>(count));
  }
  return w;
}

Foldset::Foldset(std::vector<GraphData> graphs, std::span<const double> weights)
    : graphs_(std::move(graphs)) {
  if (weights.size() != graphs_.size()) {
    throw std::invalid_argument("foldset: one weight per subgraph required");
  }
  cumulative_.reserve(weights.size());
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("foldset: negative weight");
    total += w;
    cumulative_.push_back(total);
  }
}

std::size_t Foldset::draw(std::mt19937_64& rng) const {
  if (graphs_.empty() || cumulative_.back() <= 0.0) throw EmptyFoldset("foldset is empty");
  const double target = unit_interval(rng()) * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                               cumulative_.size() - 1);
}

MiniBatch create_mini_batch(const Foldset& foldset, std::uint32_t guard, std::mt19937_64& rng) {
  if (foldset.graphs().empty()) throw EmptyFoldset("cannot batch an empty foldset");
  MiniBatch batch;
  batch.guard = guard;
  std::uint32_t nodes = 0;
  const GraphData* sample = &foldset.graphs()[foldset.draw(rng)];
  while (nodes + sample->num_nodes < guard) {
    batch.graphs.push_back(*sample);
    nodes += sample->num_nodes;
    sample = &foldset.graphs()[foldset.draw(rng)];
  }
  batch.dummy_count = guard - nodes;
  return batch;
}

std::string batch_to_json(const MiniBatch& b) {
  ordered_json j;
  j["guard"] = b.guard;
  ordered_json graphs = ordered_json::array();
  for (const auto& g : b.graphs) {
    ordered_json edges = ordered_json::array();
    for (std::size_t i = 0; i < g.adjacency.size(); ++i) {
      edges.push_back({g.adjacency[i].src, g.adjacency[i].dst, g.edge_types[i]});
    }
    ordered_json jg;
    jg["root"] = g.root_index;
    jg["n_nodes"] = g.num_nodes;
    jg["labels"] = g.labels;
    jg["edges"] = std::move(edges);
    graphs.push_back(std::move(jg));
  }
  j["graphs"] = std::move(graphs);
  j["dummy_count"] = b.dummy_count;
  return j.dump();
}

MiniBatch batch_from_json(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  MiniBatch b;
  b.guard = j.at("guard").get<std::uint32_t>();
  b.dummy_count = j.at("dummy_count").get<std::uint32_t>();
  for (const auto& jg : j.at("graphs")) {
    GraphData g;
    g.root_index = jg.at("root").get<std::uint32_t>();
    g.num_nodes = jg.at("n_nodes").get<std::uint32_t>();
    g.labels = jg.at("labels").get<std::vector<std::int64_t>>();
    if (g.labels.size() != g.num_nodes) throw std::runtime_error("batch: labels/n_nodes mismatch");
    for (const auto& e : jg.at("edges")) {
      if (e.size() != 3) throw std::runtime_error("batch: edge must be [src, dst, ptype]");
      NodeEdge ne{e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>()};
      if (ne.src >= g.num_nodes || ne.dst >= g.num_nodes) {
        throw std::runtime_error("batch: edge endpoint out of range");
      }
      g.adjacency.push_back(ne);
      g.edge_types.push_back(e[2].get<TermId>());
    }
    b.graphs.push_back(std::move(g));
  }
  return b;
}

void write_batch_file(const std::string& path, std::span<const MiniBatch> batches) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kBatchHeader << '\n';
  for (const auto& b : batches) out << batch_to_json(b) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<MiniBatch> read_batch_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != kBatchHeader) {
    throw std::runtime_error(path + ": missing '" + std::string(kBatchHeader) + "' header");
  }
  std::vector<MiniBatch> out;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(batch_from_json(line));
  }
  return out;
}

ExportResult export_batches(const SubjectMap& m, const Selection& selection,
                            const ExportSpec& spec, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  const FoldRoles roles = make_fold_roles(spec.test_fold, spec.folds);
  const LabelMap labels = LabelMap::from_selection(m, selection);

  auto convert = [&](const Selection& subjects) {
    std::vector<GraphData> out;
    out.reserve(subjects.size());
    for (TermId s : subjects) out.push_back(data_conversion(s, spec.model, m, labels));
    return out;
  };

  const Selection role_subjects = select_folds(m, selection, folds_for(roles, spec.role));
  std::vector<GraphData> graphs = convert(role_subjects);

  std::vector<double> weights(graphs.size(), 1.0);
  if (spec.weights == SamplingWeights::Inverse) {
    // Class frequencies come from the training folds only.
    std::unordered_map<std::int64_t, std::uint64_t> train_counts;
    for (TermId s : select_folds(m, selection, roles.train)) {
      ++train_counts[labels.index_of(*m.at(s).label)];
    }
    weights = inverse_class_weights(graphs, train_counts);
  }

  ExportResult result;
  result.candidate_subgraphs = graphs.size();
  if (spec.count > 0 && graphs.empty()) {
    throw EmptyFoldset("no subjects in the " + std::string(to_string(spec.role)) + " folds");
  }

  if (spec.count > 0) {
    const Foldset foldset(std::move(graphs), weights);
    const auto role_key = static_cast<std::uint64_t>(spec.role) + 1;
    std::mt19937_64 rng(mix64(spec.seed ^ mix64(role_key * 0x100 + spec.test_fold)));
    for (std::uint64_t i = 0; i < spec.count; ++i) {
      const MiniBatch batch = create_mini_batch(foldset, spec.guard, rng);
      char name[32];
      std::snprintf(name, sizeof name, "batch_%06llu.jsonl", static_cast<unsigned long long>(i));
      const std::string path = (fs::path(out_dir) / name).string();
      write_batch_file(path, std::span<const MiniBatch>(&batch, 1));
      result.files.push_back(path);
    }
  }

  ordered_json manifest;
  manifest["format"] = kBatchHeader;
  manifest["model"] = to_string(spec.model);
  manifest["guard"] = spec.guard;
  manifest["folds"] = spec.folds;
  manifest["test_fold"] = spec.test_fold;
  manifest["role"] = to_string(spec.role);
  manifest["fold_roles"] = {{"train", roles.train}, {"val", roles.val}, {"test", roles.test}};
  manifest["weights"] = to_string(spec.weights);
  manifest["seed"] = spec.seed;
  manifest["count"] = spec.count;
  manifest["config_hash"] = spec.config_hash;
  manifest["num_classes"] = labels.size();
  ordered_json label_map = ordered_json::array();
  for (const auto& c : labels.classes()) label_map.push_back(c.hex());
  manifest["label_map"] = std::move(label_map);
  ordered_json names = ordered_json::array();  // relative to the manifest
  for (const auto& f : result.files) names.push_back(fs::path(f).filename().string());
  manifest["files"] = std::move(names);

  result.manifest_path = (fs::path(out_dir) / "manifest.json").string();
  std::ofstream out(result.manifest_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + result.manifest_path);
  out << manifest.dump(2) << '\n';
  return result;
}

}  // namespace sumgraph
