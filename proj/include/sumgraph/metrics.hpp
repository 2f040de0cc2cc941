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

#ifndef SUMGRAPH_METRICS_HPP_
#define SUMGRAPH_METRICS_HPP_

#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace sumgraph {

/// Vertex -> cluster id.
struct Clustering {
  std::unordered_map<std::uint64_t, std::uint64_t> assignment;

  std::size_t size() const noexcept { return assignment.size(); }

  /// Vertex i gets ids[i].
  static Clustering from_labels(std::span<const std::uint64_t> ids);
};

class VertexSetMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ClusterBreakdown {
  std::uint64_t cluster = 0;
  std::uint64_t size = 0;
  std::uint64_t majority = 0;
  double gini = 0.0;
};

struct ImpurityReport {
  double accuracy = 0.0;
  double gini = 0.0;
  std::uint64_t vertices = 0;
  std::uint64_t clusters = 0;
  std::vector<ClusterBreakdown> per_cluster;  // ascending cluster id
};

/// Majority-cluster accuracy and size-weighted Gini impurity of `pred`
/// against `truth`. Throws VertexSetMismatch if the vertex sets differ.
ImpurityReport evaluate(const Clustering& pred, const Clustering& truth);
/// Same, with vertex i labelled pred[i] / truth[i].
ImpurityReport evaluate(std::span<const std::uint64_t> pred,
                        std::span<const std::uint64_t> truth);

struct ClassCount {
  std::uint64_t label = 0;
  std::uint64_t count = 0;
};

struct ClassStats {
  std::vector<ClassCount> histogram;  // descending count, ties by label
  std::uint64_t vertices = 0;
  std::uint64_t num_classes = 0;
  std::uint64_t singleton_count = 0;
  double singleton_fraction = 0.0;  // singleton classes / classes
};

ClassStats class_stats(const Clustering& truth);
ClassStats class_stats(std::span<const std::uint64_t> labels);

void write_tsv(std::ostream& out, const ImpurityReport& r);
void write_json(std::ostream& out, const ImpurityReport& r);
void write_tsv(std::ostream& out, const ClassStats& s);
void write_json(std::ostream& out, const ClassStats& s);
/// (rank, probability) pairs, rank starting at 1.
void write_rank_series(std::ostream& out, const ClassStats& s);

}  // namespace sumgraph

#endif  // SUMGRAPH_METRICS_HPP_
