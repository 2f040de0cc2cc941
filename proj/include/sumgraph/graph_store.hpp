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

#ifndef SUMGRAPH_GRAPH_STORE_HPP_
#define SUMGRAPH_GRAPH_STORE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sumgraph/rdf.hpp"

namespace sumgraph {

/// 64-bit equivalence-class identifier.
struct EqClass {
  std::uint64_t value = 0;

  std::string hex() const;
  static EqClass from_hex(std::string_view s);

  friend auto operator<=>(const EqClass&, const EqClass&) = default;
};

struct EqClassHash {
  std::size_t operator()(EqClass c) const noexcept {
    return static_cast<std::size_t>(c.value);
  }
};

struct Edge {
  TermId predicate;
  TermId object;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct SubjectInformation {
  TermId subject = 0;
  std::vector<Edge> edges;  // file order, duplicates kept
  std::optional<EqClass> label;
  std::optional<std::uint8_t> fold;
};

class UnknownSubject : public std::out_of_range {
 public:
  explicit UnknownSubject(TermId id)
      : std::out_of_range("unknown subject id " + std::to_string(id)), id_(id) {}
  TermId id() const noexcept { return id_; }

 private:
  TermId id_;
};

/// Subject-indexed adjacency. Records are stored in first-appearance order.
class SubjectMap {
 public:
  SubjectMap() = default;
  explicit SubjectMap(TermId type_predicate) : type_predicate_(type_predicate) {}

  TermId type_predicate() const noexcept { return type_predicate_; }

  void add(const EncodedTriple& t);

  bool contains(TermId s) const { return slot_.count(s) != 0; }
  const SubjectInformation* find(TermId s) const;
  SubjectInformation* find(TermId s);
  /// Throws UnknownSubject.
  const SubjectInformation& at(TermId s) const;
  SubjectInformation& at(TermId s);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  std::uint64_t edge_count() const noexcept;

  std::span<const SubjectInformation> records() const noexcept { return records_; }
  std::span<SubjectInformation> records() noexcept { return records_; }

  /// Applies an id remap (old -> new, e.g. from TermDictionary::canonicalize),
  /// reorders records by new subject id and sorts each edge list by
  /// (predicate, object). Duplicate edges are kept.
  void canonicalize(std::span<const TermId> remap);

  /// Binary layout: magic "SGMAP\1", varint subject count, varint
  /// type_predicate, then per subject: varint id, flags byte (bit0 label,
  /// bit1 fold), [8-byte LE label], [1-byte fold], varint edge count,
  /// varint (predicate, object) pairs.
  void save(const std::string& path) const;
  static SubjectMap load(const std::string& path);

 private:
  TermId type_predicate_ = 0;
  std::vector<SubjectInformation> records_;
  std::unordered_map<TermId, std::size_t> slot_;
};

/// Interns rdf:type into `dict` and groups the triple stream by subject.
SubjectMap build_subject_map(std::span<const EncodedTriple> triples,
                             TermDictionary& dict);

/// Deduplicated non-type predicates of `s`, ordered by surface form.
std::vector<TermId> property_set(TermId s, const SubjectMap& m,
                                 const TermDictionary& dict);
/// Deduplicated rdf:type objects of `s`, ordered by surface form.
std::vector<TermId> type_set(TermId s, const SubjectMap& m,
                             const TermDictionary& dict);
/// Objects of non-type edges in edge order, duplicates kept.
std::vector<TermId> ac_neighbors(TermId s, const SubjectMap& m);

}  // namespace sumgraph

#endif  // SUMGRAPH_GRAPH_STORE_HPP_
