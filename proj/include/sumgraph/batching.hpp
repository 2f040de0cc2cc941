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

#ifndef SUMGRAPH_BATCHING_HPP_
#define SUMGRAPH_BATCHING_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sumgraph/summaries.hpp"

namespace sumgraph {

inline constexpr std::uint32_t kDefaultGuard = 500;
inline constexpr std::uint32_t kDefaultFolds = 10;
inline constexpr std::string_view kBatchHeader = "SUMGRAPH-BATCH v1";

class UnlabeledSubject : public std::logic_error {
 public:
  explicit UnlabeledSubject(TermId id)
      : std::logic_error("subject " + std::to_string(id) + " has no class label") {}
};

class EmptyFoldset : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double unit_interval(std::uint64_t x) noexcept {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Subjects a pipeline stage operates on, ascending by TermId.
using Selection = std::vector<TermId>;

Selection all_subjects(const SubjectMap& m);

// ---------------------------------------------------------------- folds

struct FoldAssignment {
  std::uint32_t folds = kDefaultFolds;
  std::unordered_map<TermId, std::uint8_t> fold;
};

/// Fold of a subject: a pure function of its surface form and the seed.
std::uint8_t fold_of(std::string_view surface, std::uint64_t seed,
                     std::uint32_t folds = kDefaultFolds);

/// Assigns every subject of `m` a fold and records it in the map.
FoldAssignment split_folds(SubjectMap& m, const TermDictionary& dict, std::uint64_t seed,
                           std::uint32_t folds = kDefaultFolds);

struct FoldRoles {
  std::vector<std::uint8_t> train;
  std::vector<std::uint8_t> val;
  std::vector<std::uint8_t> test;
};

/// test = test_fold, val = test_fold + 1 (mod folds), train = the rest.
FoldRoles make_fold_roles(std::uint32_t test_fold, std::uint32_t folds = kDefaultFolds);

enum class FoldRole { Train, Val, Test };
std::string_view to_string(FoldRole r);
FoldRole parse_fold_role(std::string_view s);
const std::vector<std::uint8_t>& folds_for(const FoldRoles& roles, FoldRole r);

/// Subjects of `selection` whose fold is one of `folds`.
Selection select_folds(const SubjectMap& m, const Selection& selection,
                       std::span<const std::uint8_t> folds);

// -------------------------------------------------------------- filters

struct FilterReport {
  std::uint64_t subjects = 0;
  std::uint64_t classes = 0;
};

FilterReport describe(const SubjectMap& m, const Selection& selection);

/// Keeps subjects whose class occurs at least `threshold` times within
/// `selection`. Throws UnlabeledSubject.
Selection filter_min_support(const SubjectMap& m, const Selection& selection,
                             std::uint64_t threshold);

/// Number of nodes data_conversion would produce for `s`.
std::size_t subgraph_node_count(TermId s, SummaryModel model, const SubjectMap& m);

/// Drops subjects whose converted subgraph has >= max_nodes nodes.
Selection filter_subgraph_size(const SubjectMap& m, const Selection& selection,
                               SummaryModel model, std::size_t max_nodes);

/// Seeded Bernoulli(fraction) per subject, keyed by surface form.
Selection subsample_fraction(const SubjectMap& m, const TermDictionary& dict,
                             const Selection& selection, double fraction, std::uint64_t seed);

// ------------------------------------------------------------ subgraphs

/// EqClass -> dense class index, ordered by class hash.
class LabelMap {
 public:
  LabelMap() = default;
  explicit LabelMap(std::vector<EqClass> classes);

  static LabelMap from_selection(const SubjectMap& m, const Selection& selection);

  std::int64_t index_of(EqClass c) const;  // -1 when absent
  std::size_t size() const noexcept { return classes_.size(); }
  const std::vector<EqClass>& classes() const noexcept { return classes_; }

 private:
  std::vector<EqClass> classes_;
  std::unordered_map<EqClass, std::int64_t, EqClassHash> index_;
};

struct NodeEdge {
  std::uint32_t src;
  std::uint32_t dst;
  friend bool operator==(const NodeEdge&, const NodeEdge&) = default;
};

struct GraphData {
  TermId subject = 0;  // in-memory only; not serialized
  std::uint32_t num_nodes = 0;
  std::uint32_t root_index = 0;
  std::vector<std::int64_t> labels;     // class index at the root, -1 elsewhere
  std::vector<NodeEdge> adjacency;      // directed as in the triples
  std::vector<TermId> edge_types;       // parallel to adjacency

  friend bool operator==(const GraphData&, const GraphData&) = default;
};

/// Converts a labelled subject into its model-dependent subgraph. Node 0 is
/// the root; other nodes are numbered in first-encounter order along the
/// edge lists. 2-hop models append the edges of every distinct non-root
/// object that is itself a subject. Throws UnknownSubject / UnlabeledSubject.
GraphData data_conversion(TermId s, SummaryModel model, const SubjectMap& m,
                          const LabelMap& labels);

// -------------------------------------------------------------- batches

struct MiniBatch {
  std::uint32_t guard = kDefaultGuard;
  std::vector<GraphData> graphs;
  std::uint32_t dummy_count = 0;

  std::uint32_t real_nodes() const noexcept;
  std::uint32_t total_nodes() const noexcept { return real_nodes() + dummy_count; }
  /// Batch-level node labels: graphs in order, then dummies (-1).
  std::vector<std::int64_t> node_labels() const;
  /// Offset of each graph's node 0 within the batch; the one-hot feature of
  /// a node is the basis vector at its batch index.
  std::vector<std::uint32_t> node_offsets() const;

  friend bool operator==(const MiniBatch& a, const MiniBatch& b) {
    return a.guard == b.guard && a.graphs == b.graphs && a.dummy_count == b.dummy_count;
  }
};

enum class SamplingWeights { Inverse, Uniform };
std::string_view to_string(SamplingWeights w);
SamplingWeights parse_weights(std::string_view s);

/// Per-graph sampling weight 1 / count(root class), with counts taken from
/// `class_counts` (the training folds). Classes missing there count as 1.
std::vector<double> inverse_class_weights(
    std::span<const GraphData> graphs,
    const std::unordered_map<std::int64_t, std::uint64_t>& class_counts);

/// Root-class occurrence counts of `graphs`.
std::unordered_map<std::int64_t, std::uint64_t> root_class_counts(std::span<const GraphData> graphs);

/// Subgraphs with a cumulative weight table for proportional draws.
class Foldset {
 public:
  Foldset(std::vector<GraphData> graphs, std::span<const double> weights);

  const std::vector<GraphData>& graphs() const noexcept { return graphs_; }
  std::size_t draw(std::mt19937_64& rng) const;

 private:
  std::vector<GraphData> graphs_;
  std::vector<double> cumulative_;
};

/// Draws subgraphs while batch nodes + sample nodes < guard, then pads
/// with isolated dummy nodes up to exactly guard nodes. A sample that does
/// not fit ends the batch and is discarded.
MiniBatch create_mini_batch(const Foldset& foldset, std::uint32_t guard, std::mt19937_64& rng);

/// Single-line JSON with fields guard, graphs, dummy_count.
std::string batch_to_json(const MiniBatch& b);
MiniBatch batch_from_json(std::string_view line);

/// Header line then one JSON batch per line.
void write_batch_file(const std::string& path, std::span<const MiniBatch> batches);
std::vector<MiniBatch> read_batch_file(const std::string& path);

struct ExportSpec {
  SummaryModel model = SummaryModel::AC;
  std::uint32_t guard = kDefaultGuard;
  std::uint32_t folds = kDefaultFolds;
  std::uint32_t test_fold = 0;
  FoldRole role = FoldRole::Train;
  SamplingWeights weights = SamplingWeights::Inverse;
  std::uint64_t count = 0;
  std::uint64_t seed = 42;
  std::string config_hash;
};

struct ExportResult {
  std::vector<std::string> files;
  std::string manifest_path;
  std::uint64_t candidate_subgraphs = 0;
};

/// Writes `spec.count` batch files (batch_NNNNNN.jsonl) and manifest.json
/// into `out_dir`. `selection` is the filtered subject set; folds must be
/// assigned and subjects labelled.
ExportResult export_batches(const SubjectMap& m, const Selection& selection,
                            const ExportSpec& spec, const std::string& out_dir);

}  // namespace sumgraph

#endif  // SUMGRAPH_BATCHING_HPP_
