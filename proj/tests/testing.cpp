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

#include "testing.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>
#include <tuple>

namespace sumgraph::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  std::random_device rd;
  const auto base = fs::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = base / ("sumgraph-test-" + std::to_string(rd()) + std::to_string(rd()));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create temp directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

const std::string kType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

Term subject_term(std::size_t i) {
  // Every fifth subject is a blank node.
  if (i % 5 == 4) return Term::blank("b" + std::to_string(i));
  return Term::iri("http://example.org/s" + std::to_string(i));
}

Term predicate_term(std::size_t i) { return Term::iri("http://example.org/p" + std::to_string(i)); }
Term type_term(std::size_t i) { return Term::iri("http://example.org/C" + std::to_string(i)); }
Term leaf_term(std::size_t i) { return Term::iri("http://example.org/leaf" + std::to_string(i)); }

Term literal_term(std::size_t i) {
  switch (i % 3) {
    case 0: return Term::literal("\"v" + std::to_string(i) + "\"");
    case 1: return Term::literal("\"v" + std::to_string(i) + "\"@en");
    default:
      return Term::literal("\"" + std::to_string(i) + "\"^^<http://www.w3.org/2001/XMLSchema#int>");
  }
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

Term random_object(const CorpusSpec& spec, std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < spec.literal_ratio) return literal_term(pick(rng, 50));
  if (spec.leaf_objects > 0 && u < spec.literal_ratio + (1.0 - spec.literal_ratio) / 3) {
    return leaf_term(pick(rng, spec.leaf_objects));
  }
  return subject_term(pick(rng, spec.subjects));
}

std::string surface(const Term& t) {
  switch (t.kind) {
    case TermKind::Iri: return "<" + t.lexical + ">";
    case TermKind::BlankNode: return "_:" + t.lexical;
    case TermKind::Literal: return t.lexical;
  }
  return t.lexical;
}

}  // namespace

std::vector<TermTriple> random_corpus(const CorpusSpec& spec, std::mt19937_64& rng) {
  std::vector<TermTriple> out;
  for (std::size_t s = 0; s < spec.subjects; ++s) {
    const Term subj = subject_term(s);
    const std::size_t types = spec.types == 0 ? 0 : pick(rng, spec.max_types + 1);
    const std::size_t edges = pick(rng, spec.max_edges + 1);
    // Guarantee every subject has at least one triple so it exists.
    const bool force = types == 0 && edges == 0;
    for (std::size_t t = 0; t < types; ++t) {
      out.push_back({subj, Term::iri(kType), type_term(pick(rng, spec.types))});
    }
    for (std::size_t e = 0; e < edges || (force && e == 0); ++e) {
      out.push_back({subj, predicate_term(pick(rng, spec.predicates)), random_object(spec, rng)});
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::vector<TermTriple> clustered_corpus(std::size_t subjects, std::size_t patterns,
                                         const CorpusSpec& spec, std::mt19937_64& rng) {
  struct Pattern {
    std::vector<std::size_t> predicates;
    std::vector<std::size_t> types;
  };
  std::vector<Pattern> templates(patterns);
  for (auto& t : templates) {
    const std::size_t np = 1 + pick(rng, spec.max_edges);
    for (std::size_t i = 0; i < np; ++i) t.predicates.push_back(pick(rng, spec.predicates));
    const std::size_t nt = pick(rng, spec.max_types + 1);
    for (std::size_t i = 0; i < nt; ++i) t.types.push_back(pick(rng, spec.types));
  }
  // Zipf-like weights over patterns.
  std::vector<double> w(patterns);
  for (std::size_t i = 0; i < patterns; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::size_t> choose(w.begin(), w.end());

  CorpusSpec obj_spec = spec;
  obj_spec.subjects = subjects;
  std::vector<TermTriple> out;
  for (std::size_t s = 0; s < subjects; ++s) {
    const Term subj = subject_term(s);
    const Pattern& t = templates[choose(rng)];
    for (auto ty : t.types) out.push_back({subj, Term::iri(kType), type_term(ty)});
    for (auto p : t.predicates) {
      out.push_back({subj, predicate_term(p), random_object(obj_spec, rng)});
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::string to_ntriples(const TermTriple& t) {
  return surface(t.s) + " " + surface(t.p) + " " + surface(t.o) + " .";
}

void write_ntriples(const std::string& path, const std::vector<TermTriple>& triples) {
  std::ofstream out(path, std::ios::binary);
  for (const auto& t : triples) out << to_ntriples(t) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path);
}

Workspace build_workspace(const std::vector<TermTriple>& triples) {
  Workspace w;
  w.map = SubjectMap(w.dict.intern(Term::iri(kType)));
  for (const auto& t : triples) {
    w.map.add({w.dict.intern(t.s), w.dict.intern(t.p), w.dict.intern(t.o)});
  }
  return w;
}

std::uint64_t reference_fnv1a64(const std::string& bytes, std::uint64_t basis) {
  std::uint64_t hash = basis;
  for (unsigned char byte : bytes) {
    hash = hash ^ byte;
    hash = hash * 1099511628211ULL;
  }
  return hash;
}

std::map<std::string, std::size_t> oracle_partition(SummaryModel model,
                                                    const std::vector<TermTriple>& triples) {
  using StringSet = std::set<std::string>;
  struct Info {
    StringSet properties;
    StringSet types;
    std::vector<std::string> neighbors;
  };
  std::map<std::string, Info> info;
  for (const auto& t : triples) {
    auto& i = info[surface(t.s)];
    if (t.p.kind == TermKind::Iri && t.p.lexical == kType) {
      i.types.insert(surface(t.o));
    } else {
      i.properties.insert(surface(t.p));
      i.neighbors.push_back(surface(t.o));
    }
  }

  using Key = std::tuple<StringSet, StringSet, std::set<StringSet>>;
  std::map<Key, std::size_t> blocks;
  std::map<std::string, std::size_t> out;
  for (const auto& [subject, i] : info) {
    Key key;
    switch (model) {
      case SummaryModel::AC: std::get<0>(key) = i.properties; break;
      case SummaryModel::CC: std::get<1>(key) = i.types; break;
      case SummaryModel::PTC:
        std::get<0>(key) = i.properties;
        std::get<1>(key) = i.types;
        break;
      case SummaryModel::SX:
        std::get<1>(key) = i.types;
        for (const auto& n : i.neighbors) {
          auto it = info.find(n);
          std::get<2>(key).insert(it == info.end() ? StringSet{} : it->second.types);
        }
        break;
    }
    auto [b, _] = blocks.emplace(std::move(key), blocks.size());
    out[subject] = b->second;
  }
  return out;
}

std::map<std::string, std::uint64_t> labels_by_surface(const Workspace& w) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& r : w.map.records()) {
    out[w.dict.decode(r.subject).ntriples()] = r.label.value().value;
  }
  return out;
}

}  // namespace sumgraph::testing
