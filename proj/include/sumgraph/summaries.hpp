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

#ifndef SUMGRAPH_SUMMARIES_HPP_
#define SUMGRAPH_SUMMARIES_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumgraph/graph_store.hpp"

namespace sumgraph {

/// Attribute Collection, Class Collection, Property Type Collection, SchemEX.
enum class SummaryModel { AC, CC, PTC, SX };

inline constexpr SummaryModel kAllModels[] = {SummaryModel::AC, SummaryModel::CC,
                                              SummaryModel::PTC, SummaryModel::SX};

std::string_view to_string(SummaryModel m);
/// Accepts "ac", "cc", "ptc", "sx" (case-insensitive). Throws std::invalid_argument.
SummaryModel parse_model(std::string_view name);
/// SX looks one hop past the root's neighbors; the others are 1-hop.
constexpr bool is_two_hop(SummaryModel m) { return m == SummaryModel::SX; }

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
/// Joins feature strings before hashing; cannot appear in an IRI.
inline constexpr char kFeatureSeparator = '\x1f';

constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t basis = kFnvOffsetBasis) noexcept {
  std::uint64_t h = basis;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Tagged feature strings: "P:" property, "T:" type, "N:" neighbor signature.
struct FeatureList {
  std::vector<std::string> items;
};

struct FeatureOptions {
  /// Deduplicate identical SX neighbor signatures (set semantics). When
  /// false, repeated signatures are kept as a multiset.
  bool sx_dedup_neighbors = true;
};

/// Sorts the items byte-wise, joins them with 0x1F and applies FNV-1a-64.
EqClass canonical_hash(FeatureList fl);

/// Feature list in construction order (unsorted). Throws UnknownSubject.
FeatureList feature_list(SummaryModel model, TermId s, const SubjectMap& m,
                         const TermDictionary& dict, const FeatureOptions& opts = {});

/// Class of a vertex's CC list; absent subjects hash the empty list.
EqClass type_set_signature(TermId s, const SubjectMap& m, const TermDictionary& dict);

struct SummaryResult {
  std::map<EqClass, std::uint64_t> histogram;
  std::size_t num_classes() const noexcept { return histogram.size(); }
};

/// Labels every subject of `m` with its equivalence class under `model`.
/// `threads` > 1 shards subjects across workers; the result does not
/// depend on the schedule.
SummaryResult summarize(SummaryModel model, SubjectMap& m, const TermDictionary& dict,
                        const FeatureOptions& opts = {}, unsigned threads = 1);

}  // namespace sumgraph

#endif  // SUMGRAPH_SUMMARIES_HPP_
