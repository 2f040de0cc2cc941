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

#include "sumgraph/graph_store.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iterator>

namespace sumgraph {

namespace {

constexpr std::array<char, 6> kMapMagic = {'S', 'G', 'M', 'A', 'P', '\1'};

void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

class ByteCursor {
 public:
  explicit ByteCursor(std::string_view data) : data_(data) {}

  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const auto b = static_cast<unsigned char>(byte());
      v |= std::uint64_t{b & 0x7fu} << shift;
      if ((b & 0x80u) == 0) return v;
    }
    throw std::runtime_error("subject map: varint overflow");
  }

  char byte() {
    if (pos_ >= data_.size()) throw std::runtime_error("subject map: truncated");
    return data_[pos_++];
  }

  bool done() const noexcept { return pos_ == data_.size(); }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

TermId checked_id(std::uint64_t v) {
  if (v > std::numeric_limits<TermId>::max()) {
    throw std::runtime_error("subject map: id out of range");
  }
  return static_cast<TermId>(v);
}

void sort_by_surface(std::vector<TermId>& ids, const TermDictionary& dict) {
  std::vector<std::pair<std::string, TermId>> keyed;
  keyed.reserve(ids.size());
  for (TermId id : ids) keyed.emplace_back(dict.decode(id).ntriples(), id);
  std::sort(keyed.begin(), keyed.end());
  keyed.erase(std::unique(keyed.begin(), keyed.end()), keyed.end());
  ids.clear();
  for (auto& [_, id] : keyed) ids.push_back(id);
}

}  // namespace

std::string EqClass::hex() const {
  std::array<char, 16> buf{};
  for (int i = 15; i >= 0; --i) {
    buf[static_cast<std::size_t>(i)] = "0123456789abcdef"[(value >> (4 * (15 - i))) & 0xf];
  }
  return std::string(buf.data(), buf.size());
}

EqClass EqClass::from_hex(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("bad class hash: " + std::string(s));
  }
  return EqClass{v};
}

void SubjectMap::add(const EncodedTriple& t) {
  auto [it, inserted] = slot_.try_emplace(t.s, records_.size());
  if (inserted) {
    records_.push_back(SubjectInformation{t.s, {}, std::nullopt, std::nullopt});
  }
  records_[it->second].edges.push_back(Edge{t.p, t.o});
}

const SubjectInformation* SubjectMap::find(TermId s) const {
  auto it = slot_.find(s);
  return it == slot_.end() ? nullptr : &records_[it->second];
}

SubjectInformation* SubjectMap::find(TermId s) {
  auto it = slot_.find(s);
  return it == slot_.end() ? nullptr : &records_[it->second];
}

const SubjectInformation& SubjectMap::at(TermId s) const {
  if (const auto* r = find(s)) return *r;
  throw UnknownSubject(s);
}

SubjectInformation& SubjectMap::at(TermId s) {
  if (auto* r = find(s)) return *r;
  throw UnknownSubject(s);
}

std::uint64_t SubjectMap::edge_count() const noexcept {
  std::uint64_t n = 0;
  for (const auto& r : records_) n += r.edges.size();
  return n;
}

void SubjectMap::canonicalize(std::span<const TermId> remap) {
  auto map_id = [&](TermId id) {
    if (id >= remap.size()) throw std::out_of_range("remap does not cover id");
    return remap[id];
  };
  type_predicate_ = map_id(type_predicate_);
  for (auto& r : records_) {
    r.subject = map_id(r.subject);
    for (auto& e : r.edges) e = Edge{map_id(e.predicate), map_id(e.object)};
    std::stable_sort(r.edges.begin(), r.edges.end(), [](const Edge& a, const Edge& b) {
      return a.predicate != b.predicate ? a.predicate < b.predicate : a.object < b.object;
    });
  }
  std::sort(records_.begin(), records_.end(),
            [](const auto& a, const auto& b) { return a.subject < b.subject; });
  slot_.clear();
  for (std::size_t i = 0; i < records_.size(); ++i) slot_.emplace(records_[i].subject, i);
}

void SubjectMap::save(const std::string& path) const {
  std::string out(kMapMagic.begin(), kMapMagic.end());
  put_varint(out, records_.size());
  put_varint(out, type_predicate_);
  for (const auto& r : records_) {
    put_varint(out, r.subject);
    const std::uint8_t flags = (r.label ? 1u : 0u) | (r.fold ? 2u : 0u);
    out.push_back(static_cast<char>(flags));
    if (r.label) {
      for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((r.label->value >> (8 * i)) & 0xff));
    }
    if (r.fold) out.push_back(static_cast<char>(*r.fold));
    put_varint(out, r.edges.size());
    for (const auto& e : r.edges) {
      put_varint(out, e.predicate);
      put_varint(out, e.object);
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

SubjectMap SubjectMap::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  const std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (data.size() < kMapMagic.size() ||
      !std::equal(kMapMagic.begin(), kMapMagic.end(), data.begin())) {
    throw std::runtime_error(path + ": not a subject map file");
  }
  ByteCursor in(std::string_view(data).substr(kMapMagic.size()));
  const auto count = in.varint();
  SubjectMap m(checked_id(in.varint()));
  m.records_.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    SubjectInformation r;
    r.subject = checked_id(in.varint());
    const auto flags = static_cast<std::uint8_t>(in.byte());
    if (flags & 1u) {
      std::uint64_t v = 0;
      for (int b = 0; b < 8; ++b) v |= std::uint64_t{static_cast<unsigned char>(in.byte())} << (8 * b);
      r.label = EqClass{v};
    }
    if (flags & 2u) r.fold = static_cast<std::uint8_t>(in.byte());
    const auto edges = in.varint();
    r.edges.reserve(edges);
    for (std::uint64_t e = 0; e < edges; ++e) {
      const TermId p = checked_id(in.varint());
      r.edges.push_back(Edge{p, checked_id(in.varint())});
    }
    if (!m.slot_.emplace(r.subject, m.records_.size()).second) {
      throw std::runtime_error(path + ": duplicate subject record");
    }
    m.records_.push_back(std::move(r));
  }
  if (!in.done()) throw std::runtime_error(path + ": trailing bytes");
  return m;
}

SubjectMap build_subject_map(std::span<const EncodedTriple> triples,
                             TermDictionary& dict) {
  SubjectMap m(dict.intern(Term::iri(std::string(kRdfType))));
  for (const auto& t : triples) m.add(t);
  return m;
}

std::vector<TermId> property_set(TermId s, const SubjectMap& m,
                                 const TermDictionary& dict) {
  std::vector<TermId> out;
  for (const auto& e : m.at(s).edges) {
    if (e.predicate != m.type_predicate()) out.push_back(e.predicate);
  }
  sort_by_surface(out, dict);
  return out;
}

std::vector<TermId> type_set(TermId s, const SubjectMap& m,
                             const TermDictionary& dict) {
  std::vector<TermId> out;
  for (const auto& e : m.at(s).edges) {
    if (e.predicate == m.type_predicate()) out.push_back(e.object);
  }
  sort_by_surface(out, dict);
  return out;
}

std::vector<TermId> ac_neighbors(TermId s, const SubjectMap& m) {
  std::vector<TermId> out;
  for (const auto& e : m.at(s).edges) {
    if (e.predicate != m.type_predicate()) out.push_back(e.object);
  }
  return out;
}

}  // namespace sumgraph
