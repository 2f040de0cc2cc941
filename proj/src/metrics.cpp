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

#include "sumgraph/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <map>

#include "json.hpp"

namespace sumgraph {

Clustering Clustering::from_labels(std::span<const std::uint64_t> ids) {
  Clustering c;
  c.assignment.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) c.assignment.emplace(i, ids[i]);
  return c;
}

namespace {

ImpurityReport evaluate_pairs(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs) {
  // cluster -> (category -> m_ij)
  std::map<std::uint64_t, std::unordered_map<std::uint64_t, std::uint64_t>> table;
  for (const auto& [pred, truth] : pairs) ++table[pred][truth];

  ImpurityReport r;
  r.vertices = pairs.size();
  r.clusters = table.size();
  if (pairs.empty()) return r;

  const auto n = static_cast<double>(pairs.size());
  std::uint64_t majority_total = 0;
  for (const auto& [cluster, cats] : table) {
    ClusterBreakdown b;
    b.cluster = cluster;
    for (const auto& [_, count] : cats) {
      b.size += count;
      b.majority = std::max(b.majority, count);
    }
    const auto size = static_cast<double>(b.size);
    double sum_sq = 0.0;
    for (const auto& [_, count] : cats) {
      const double p = static_cast<double>(count) / size;
      sum_sq += p * p;
    }
    b.gini = 1.0 - sum_sq;
    r.gini += size / n * b.gini;
    majority_total += b.majority;
    r.per_cluster.push_back(b);
  }
  r.accuracy = static_cast<double>(majority_total) / n;
  return r;
}

ClassStats stats_from_counts(const std::unordered_map<std::uint64_t, std::uint64_t>& counts,
                             std::uint64_t vertices) {
  ClassStats s;
  s.vertices = vertices;
  s.num_classes = counts.size();
  for (const auto& [label, count] : counts) {
    s.histogram.push_back({label, count});
    if (count == 1) ++s.singleton_count;
  }
  std::sort(s.histogram.begin(), s.histogram.end(), [](const ClassCount& a, const ClassCount& b) {
    return a.count != b.count ? a.count > b.count : a.label < b.label;
  });
  s.singleton_fraction =
      s.num_classes == 0 ? 0.0
                         : static_cast<double>(s.singleton_count) / static_cast<double>(s.num_classes);
  return s;
}

}  // namespace

ImpurityReport evaluate(const Clustering& pred, const Clustering& truth) {
  if (pred.size() != truth.size()) {
    throw VertexSetMismatch("clusterings cover " + std::to_string(pred.size()) + " and " +
                            std::to_string(truth.size()) + " vertices");
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  pairs.reserve(pred.size());
  for (const auto& [vertex, cluster] : pred.assignment) {
    auto it = truth.assignment.find(vertex);
    if (it == truth.assignment.end()) {
      throw VertexSetMismatch("vertex " + std::to_string(vertex) + " missing from ground truth");
    }
    pairs.emplace_back(cluster, it->second);
  }
  return evaluate_pairs(pairs);
}

ImpurityReport evaluate(std::span<const std::uint64_t> pred,
                        std::span<const std::uint64_t> truth) {
  if (pred.size() != truth.size()) {
    throw VertexSetMismatch("label vectors differ in length");
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  pairs.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) pairs.emplace_back(pred[i], truth[i]);
  return evaluate_pairs(pairs);
}

ClassStats class_stats(const Clustering& truth) {
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  for (const auto& [_, label] : truth.assignment) ++counts[label];
  return stats_from_counts(counts, truth.size());
}

ClassStats class_stats(std::span<const std::uint64_t> labels) {
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  for (auto label : labels) ++counts[label];
  return stats_from_counts(counts, labels.size());
}

void write_tsv(std::ostream& out, const ImpurityReport& r) {
  out << "vertices\tclusters\taccuracy\tgini_impurity\n"
      << r.vertices << '\t' << r.clusters << '\t' << std::setprecision(17) << r.accuracy << '\t'
      << r.gini << '\n';
}

void write_json(std::ostream& out, const ImpurityReport& r) {
  nlohmann::json j = {{"vertices", r.vertices},
                      {"clusters", r.clusters},
                      {"accuracy", r.accuracy},
                      {"gini_impurity", r.gini}};
  out << j.dump(2) << '\n';
}

void write_tsv(std::ostream& out, const ClassStats& s) {
  out << "vertices\tnum_classes\tsingleton_count\tsingleton_fraction\n"
      << s.vertices << '\t' << s.num_classes << '\t' << s.singleton_count << '\t'
      << std::setprecision(17) << s.singleton_fraction << '\n';
}

void write_json(std::ostream& out, const ClassStats& s) {
  nlohmann::json j = {{"vertices", s.vertices},
                      {"num_classes", s.num_classes},
                      {"singleton_count", s.singleton_count},
                      {"singleton_fraction", s.singleton_fraction}};
  out << j.dump(2) << '\n';
}

void write_rank_series(std::ostream& out, const ClassStats& s) {
  out << "rank\tprobability\n" << std::setprecision(17);
  const auto n = static_cast<double>(s.vertices);
  for (std::size_t i = 0; i < s.histogram.size(); ++i) {
    out << (i + 1) << '\t' << static_cast<double>(s.histogram[i].count) / n << '\n';
  }
}

}  // namespace sumgraph
