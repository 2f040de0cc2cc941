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

#include "sumgraph/rdf.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <system_error>

namespace sumgraph {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

void skip_ws(std::string_view line, std::size_t& pos) {
  while (pos < line.size() && is_ws(line[pos])) ++pos;
}

// Parses one term starting at `pos`; on failure returns nullopt and sets
// `reason`.
std::optional<Term> parse_term(std::string_view line, std::size_t& pos,
                               std::string& reason) {
  if (pos >= line.size()) {
    reason = "unexpected end of line";
    return std::nullopt;
  }
  const char c = line[pos];
  if (c == '<') {
    const auto close = line.find('>', pos + 1);
    if (close == std::string_view::npos) {
      reason = "unterminated IRI";
      return std::nullopt;
    }
    std::string_view body = line.substr(pos + 1, close - pos - 1);
    if (body.empty()) {
      reason = "empty IRI";
      return std::nullopt;
    }
    if (std::any_of(body.begin(), body.end(), is_ws)) {
      reason = "whitespace inside IRI";
      return std::nullopt;
    }
    pos = close + 1;
    return Term::iri(std::string(body));
  }
  if (c == '_') {
    if (pos + 1 >= line.size() || line[pos + 1] != ':') {
      reason = "bad blank node prefix";
      return std::nullopt;
    }
    std::size_t end = pos + 2;
    while (end < line.size() && !is_ws(line[end])) ++end;
    // Labels never end in '.', so a glued statement terminator is not ours.
    while (end > pos + 2 && line[end - 1] == '.') --end;
    if (end == pos + 2) {
      reason = "empty blank node label";
      return std::nullopt;
    }
    Term t = Term::blank(std::string(line.substr(pos + 2, end - pos - 2)));
    pos = end;
    return t;
  }
  if (c == '"') {
    std::size_t i = pos + 1;
    bool closed = false;
    while (i < line.size()) {
      if (line[i] == '\\') {
        i += 2;
        continue;
      }
      if (line[i] == '"') {
        closed = true;
        break;
      }
      ++i;
    }
    if (!closed) {
      reason = "unterminated literal";
      return std::nullopt;
    }
    std::size_t end = i + 1;
    if (end < line.size() && line[end] == '@') {
      ++end;
      const std::size_t tag_start = end;
      while (end < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[end])) || line[end] == '-'))
        ++end;
      if (end == tag_start) {
        reason = "empty language tag";
        return std::nullopt;
      }
    } else if (line.substr(end, 3) == "^^<") {
      const auto close = line.find('>', end + 3);
      if (close == std::string_view::npos) {
        reason = "unterminated datatype IRI";
        return std::nullopt;
      }
      end = close + 1;
    }
    Term t = Term::literal(std::string(line.substr(pos, end - pos)));
    pos = end;
    return t;
  }
  reason = std::string("unexpected character '") + c + "'";
  return std::nullopt;
}

// Reads a file in fixed-size chunks, transparently inflating gzip input.
class ChunkReader {
 public:
  ChunkReader(const std::string& path, std::size_t chunk) : chunk_(chunk) {
    std::FILE* probe = std::fopen(path.c_str(), "rb");
    if (probe == nullptr) {
      throw std::system_error(errno, std::generic_category(),
                              "cannot open " + path);
    }
    std::array<unsigned char, 2> magic{};
    const auto got = std::fread(magic.data(), 1, magic.size(), probe);
    std::fclose(probe);
    if (got == 2 && magic[0] == 0x1f && magic[1] == 0x8b) {
      gz_ = gzopen(path.c_str(), "rb");
      if (gz_ == nullptr) throw std::runtime_error("cannot open gzip " + path);
      gzbuffer(gz_, static_cast<unsigned>(std::max<std::size_t>(chunk, 8192)));
    } else {
      file_ = std::fopen(path.c_str(), "rb");
      if (file_ == nullptr) {
        throw std::system_error(errno, std::generic_category(),
                                "cannot open " + path);
      }
    }
  }
  ChunkReader(const ChunkReader&) = delete;
  ChunkReader& operator=(const ChunkReader&) = delete;
  ~ChunkReader() {
    if (gz_ != nullptr) gzclose(gz_);
    if (file_ != nullptr) std::fclose(file_);
  }

  // Appends up to one chunk to `out`; returns bytes read, 0 at EOF.
  std::size_t read(std::string& out) {
    const std::size_t old = out.size();
    out.resize(old + chunk_);
    std::size_t got = 0;
    if (gz_ != nullptr) {
      const int n = gzread(gz_, out.data() + old, static_cast<unsigned>(chunk_));
      if (n < 0) {
        int errnum = 0;
        throw std::runtime_error(std::string("gzip read error: ") +
                                 gzerror(gz_, &errnum));
      }
      got = static_cast<std::size_t>(n);
    } else {
      got = std::fread(out.data() + old, 1, chunk_, file_);
      if (got < chunk_ && std::ferror(file_)) {
        throw std::runtime_error("read error");
      }
    }
    out.resize(old + got);
    return got;
  }

 private:
  std::size_t chunk_;
  gzFile gz_ = nullptr;
  std::FILE* file_ = nullptr;
};

}  // namespace

std::string Term::ntriples() const {
  switch (kind) {
    case TermKind::Iri:
      return "<" + lexical + ">";
    case TermKind::BlankNode:
      return "_:" + lexical;
    case TermKind::Literal:
      return lexical;
  }
  return lexical;
}

Term term_from_ntriples(std::string_view surface) {
  if (surface.size() >= 2 && surface.front() == '<' && surface.back() == '>') {
    return Term::iri(std::string(surface.substr(1, surface.size() - 2)));
  }
  if (surface.size() > 2 && surface.substr(0, 2) == "_:") {
    return Term::blank(std::string(surface.substr(2)));
  }
  if (!surface.empty() && surface.front() == '"') {
    return Term::literal(std::string(surface));
  }
  throw std::invalid_argument("not an N-Triples term: " + std::string(surface));
}

MalformedLine::MalformedLine(std::size_t line_number, std::string reason)
    : std::runtime_error("line " + std::to_string(line_number) + ": " + reason),
      line_number_(line_number),
      reason_(std::move(reason)) {}

std::optional<TermTriple> parse_line(std::string_view line,
                                     std::size_t line_number) {
  std::size_t pos = 0;
  skip_ws(line, pos);
  if (pos == line.size() || line[pos] == '#') return std::nullopt;

  std::string reason;
  auto fail = [&](std::string why) -> MalformedLine {
    return MalformedLine(line_number, std::move(why));
  };

  auto s = parse_term(line, pos, reason);
  if (!s) throw fail("subject: " + reason);
  if (s->kind == TermKind::Literal) throw fail("literal in subject position");
  skip_ws(line, pos);
  auto p = parse_term(line, pos, reason);
  if (!p) throw fail("predicate: " + reason);
  if (p->kind == TermKind::Literal) throw fail("literal in predicate position");
  skip_ws(line, pos);
  auto o = parse_term(line, pos, reason);
  if (!o) throw fail("object: " + reason);
  skip_ws(line, pos);

  if (pos < line.size() && line[pos] != '.') {
    // N-Quads graph label; parsed for validity, then dropped.
    auto g = parse_term(line, pos, reason);
    if (!g) throw fail("graph: " + reason);
    if (g->kind == TermKind::Literal) throw fail("literal in graph position");
    skip_ws(line, pos);
  }
  if (pos >= line.size() || line[pos] != '.') throw fail("missing terminating '.'");
  ++pos;
  skip_ws(line, pos);
  if (pos < line.size() && line[pos] != '#') throw fail("trailing garbage");

  return TermTriple{std::move(*s), std::move(*p), std::move(*o)};
}

TermId TermDictionary::intern(const Term& term) {
  if (auto it = index_.find(term); it != index_.end()) return it->second;
  if (terms_.size() >= capacity_) {
    throw DictionaryFull("term dictionary exhausted at " +
                         std::to_string(terms_.size()) + " terms");
  }
  const auto id = static_cast<TermId>(terms_.size());
  terms_.push_back(term);
  index_.emplace(term, id);
  return id;
}

std::optional<TermId> TermDictionary::find(const Term& term) const {
  if (auto it = index_.find(term); it != index_.end()) return it->second;
  return std::nullopt;
}

std::vector<TermId> TermDictionary::canonicalize() {
  std::vector<std::string> surface;
  surface.reserve(terms_.size());
  for (const auto& t : terms_) surface.push_back(t.ntriples());

  std::vector<TermId> order(terms_.size());
  std::iota(order.begin(), order.end(), TermId{0});
  std::sort(order.begin(), order.end(),
            [&](TermId a, TermId b) { return surface[a] < surface[b]; });

  std::vector<TermId> remap(terms_.size());
  std::vector<Term> sorted;
  sorted.reserve(terms_.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    remap[order[i]] = static_cast<TermId>(i);
    sorted.push_back(std::move(terms_[order[i]]));
  }
  terms_ = std::move(sorted);
  index_.clear();
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    index_.emplace(terms_[i], static_cast<TermId>(i));
  }
  return remap;
}

void TermDictionary::save_tsv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    out << i << '\t' << escape_tsv(terms_[i].ntriples()) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

TermDictionary TermDictionary::load_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  TermDictionary dict;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing tab");
    }
    const auto id = std::stoull(line.substr(0, tab));
    if (id != dict.size()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": ids must be dense and ascending");
    }
    dict.intern(term_from_ntriples(unescape_tsv(std::string_view(line).substr(tab + 1))));
  }
  return dict;
}

IngestStats ingest_file(const std::string& path, TermDictionary& dict,
                        const TripleSink& sink, const IngestOptions& opts) {
  IngestStats stats;
  ChunkReader reader(path, std::max<std::size_t>(opts.buffer_bytes, 1));
  std::string buffer;
  std::size_t start = 0;

  auto handle_line = [&](std::string_view line) {
    ++stats.lines;
    std::optional<TermTriple> parsed;
    try {
      parsed = parse_line(line, stats.lines);
    } catch (const MalformedLine&) {
      if (opts.strict) throw;
      ++stats.skipped;
      return;
    }
    if (!parsed) return;
    EncodedTriple enc{dict.intern(parsed->s), dict.intern(parsed->p),
                      dict.intern(parsed->o)};
    ++stats.triples;
    sink(enc);
  };

  for (;;) {
    const std::size_t got = reader.read(buffer);
    stats.peak_buffer_bytes = std::max(stats.peak_buffer_bytes, buffer.size());
    std::size_t nl;
    while ((nl = buffer.find('\n', start)) != std::string::npos) {
      handle_line(std::string_view(buffer).substr(start, nl - start));
      start = nl + 1;
    }
    buffer.erase(0, start);
    start = 0;
    if (got == 0) break;
  }
  if (!buffer.empty()) handle_line(buffer);
  stats.distinct_terms = dict.size();
  return stats;
}

std::string escape_tsv(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_tsv(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    switch (s[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: out += s[i];
    }
  }
  return out;
}

}  // namespace sumgraph
