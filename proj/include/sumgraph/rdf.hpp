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

#ifndef SUMGRAPH_RDF_HPP_
#define SUMGRAPH_RDF_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sumgraph {

inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

enum class TermKind : std::uint8_t { Iri = 0, BlankNode = 1, Literal = 2 };

/// An RDF term. `lexical` holds the IRI without angle brackets, the blank
/// node label without the `_:` prefix, or the literal verbatim from the
/// opening quote through any `@lang` / `^^<datatype>` suffix.
struct Term {
  TermKind kind = TermKind::Iri;
  std::string lexical;

  static Term iri(std::string s) { return {TermKind::Iri, std::move(s)}; }
  static Term blank(std::string s) { return {TermKind::BlankNode, std::move(s)}; }
  static Term literal(std::string s) { return {TermKind::Literal, std::move(s)}; }

  /// N-Triples surface form (`<iri>`, `_:label`, or the literal as written).
  /// This is the byte string used for every ordering and feature string.
  std::string ntriples() const;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Inverse of Term::ntriples(). Throws std::invalid_argument.
Term term_from_ntriples(std::string_view surface);

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept {
    return std::hash<std::string_view>{}(t.lexical) ^
           (static_cast<std::size_t>(t.kind) * 0x9e3779b97f4a7c15ULL);
  }
};

using TermId = std::uint32_t;

template <typename T>
struct BasicTriple {
  T s;
  T p;
  T o;
  friend bool operator==(const BasicTriple&, const BasicTriple&) = default;
};

using TermTriple = BasicTriple<Term>;
using EncodedTriple = BasicTriple<TermId>;

class MalformedLine : public std::runtime_error {
 public:
  MalformedLine(std::size_t line_number, std::string reason);

  std::size_t line_number() const noexcept { return line_number_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_number_;
  std::string reason_;
};

class DictionaryFull : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses one physical N-Triples / N-Quads line. Blank and comment lines
/// yield nullopt; the optional graph label of N-Quads is dropped.
std::optional<TermTriple> parse_line(std::string_view line,
                                     std::size_t line_number = 0);

/// Bidirectional Term <-> TermId map with dense 0-based ids.
class TermDictionary {
 public:
  static constexpr std::uint64_t kMaxTerms =
      std::uint64_t{std::numeric_limits<TermId>::max()} + 1;

  TermDictionary() = default;
  /// Capacity below the 32-bit id space; used to exercise DictionaryFull.
  explicit TermDictionary(std::uint64_t capacity) : capacity_(capacity) {}

  TermId intern(const Term& term);
  std::optional<TermId> find(const Term& term) const;
  const Term& decode(TermId id) const { return terms_.at(id); }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  /// Renumbers ids in byte order of the N-Triples surface form. Returns
  /// old id -> new id. After this, numeric id order equals surface order.
  std::vector<TermId> canonicalize();

  /// Two-column TSV: id, escaped surface form.
  void save_tsv(const std::string& path) const;
  static TermDictionary load_tsv(const std::string& path);

 private:
  std::unordered_map<Term, TermId, TermHash> index_;
  std::vector<Term> terms_;
  std::uint64_t capacity_ = kMaxTerms;
};

struct IngestOptions {
  /// Abort on the first malformed line instead of skipping it.
  bool strict = false;
  /// Read chunk size for the decompressing reader.
  std::size_t buffer_bytes = 1 << 16;
};

struct IngestStats {
  std::uint64_t triples = 0;
  std::uint64_t skipped = 0;
  std::uint64_t lines = 0;
  std::uint64_t distinct_terms = 0;
  /// Largest line buffer the reader needed; bounded by the longest line.
  std::size_t peak_buffer_bytes = 0;
};

using TripleSink = std::function<void(const EncodedTriple&)>;

/// Streams `path` (plain or gzip, sniffed by magic bytes) line by line,
/// interning every term and handing each triple to `sink` in file order.
IngestStats ingest_file(const std::string& path, TermDictionary& dict,
                        const TripleSink& sink, const IngestOptions& opts = {});

/// Backslash-escapes tab, newline, carriage return and backslash.
std::string escape_tsv(std::string_view s);
std::string unescape_tsv(std::string_view s);

}  // namespace sumgraph

#endif  // SUMGRAPH_RDF_HPP_
