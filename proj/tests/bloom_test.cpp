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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>

#include "sumgraph/bloom.hpp"
#include "testing.hpp"

using namespace sumgraph;
namespace t = sumgraph::testing;

namespace {
const Term kTypeTerm = Term::iri(std::string(kRdfType));
Term iri(const std::string& s) { return Term::iri("http://ex/" + s); }
}  // namespace

TEST_CASE("params_from reproduces the reference (k, m) table") {
  struct Row {
    std::uint64_t n;
    double p;
    std::uint32_t k;
    std::uint64_t m;
  };
  const Row rows[] = {{4, 1e-1, 3, 20},    {4, 1e-3, 10, 58},   {4, 1e-7, 23, 135},
                      {15, 1e-1, 3, 72},   {15, 1e-3, 10, 216}, {15, 1e-7, 23, 504},
                      {60, 1e-1, 3, 288},  {60, 1e-3, 10, 863}, {60, 1e-7, 23, 2013}};
  for (const auto& r : rows) {
    CAPTURE(r.n);
    CAPTURE(r.p);
    const auto got = params_from(r.n, r.p);
    CHECK(got.k == r.k);
    CHECK(got.m == r.m);
  }
}

TEST_CASE("params_from rejects bad input") {
  CHECK_THROWS_AS(params_from(0, 0.1), InvalidParams);
  CHECK_THROWS_AS(params_from(4, 0.0), InvalidParams);
  CHECK_THROWS_AS(params_from(4, 1.0), InvalidParams);
  CHECK(params_from(1, 0.9).k >= 1);
}

TEST_CASE("insert / contains") {
  BloomFilter f(params_from(4, 1e-1));
  CHECK_FALSE(f.contains("anything"));
  f.insert("P:p1");
  CHECK(f.contains("P:p1"));
  CHECK(f.popcount() <= 3);
  const std::vector<std::uint8_t> after_one(f.bytes().begin(), f.bytes().end());
  f.insert("P:p1");
  CHECK(std::equal(after_one.begin(), after_one.end(), f.bytes().begin()));
}

TEST_CASE("probe indices match an independent double-hash computation") {
  // Frozen from a standalone script: h1 = splitmix64(FNV-1a-64, standard
  // basis), h2 = splitmix64(FNV-1a-64, basis ^ 0x9e3779b97f4a7c15),
  // index = (h1 + i*h2 + (i^3 - i)/6) mod 2^64 mod m.
  BloomFilter small(params_from(4, 1e-1));
  CHECK(small.indices("P:p1") == std::vector<std::uint64_t>{15, 12, 10});
  BloomFilter mid(params_from(15, 1e-3));
  CHECK(mid.indices("P:p1") ==
        std::vector<std::uint64_t>{107, 4, 118, 18, 137, 44, 172, 90, 175, 108});
}

TEST_CASE("serialization is little-endian with zero padding") {
  BloomParams p = params_from(4, 1e-1);  // m = 20 -> 3 bytes
  BloomFilter f(p);
  REQUIRE(f.bytes().size() == 3);
  // Empty 20-bit array hashes as three zero bytes.
  CHECK(f.digest().value == t::reference_fnv1a64(std::string(3, '\0')));
  CHECK(f.digest().value == 0xd94d12186c0f2fb7ULL);
  f.insert("P:p1");  // bits 15, 12, 10
  CHECK(f.bytes()[0] == 0);
  CHECK(f.bytes()[1] == ((1u << 7) | (1u << 4) | (1u << 2)));
  CHECK(f.bytes()[2] == 0);
  CHECK(f.digest().value == 0xd7561a186a63dc03ULL);
}

TEST_CASE("no false negatives and bounded false positives") {
  const auto params = params_from(15, 1e-3);
  std::mt19937_64 rng(2024);
  std::uint64_t fp = 0, probes = 0;
  for (int filter_no = 0; filter_no < 10; ++filter_no) {
    BloomFilter f(params);
    std::vector<std::string> items;
    for (int i = 0; i < 15; ++i) items.push_back("in:" + std::to_string(rng()));
    for (const auto& it : items) f.insert(it);
    for (const auto& it : items) CHECK(f.contains(it));
    for (int i = 0; i < 1000; ++i) {
      fp += f.contains("out:" + std::to_string(rng())) ? 1 : 0;
      ++probes;
    }
  }
  CHECK(static_cast<double>(fp) / static_cast<double>(probes) <= 2e-3);
}

TEST_CASE("insert order does not change the bit array") {
  std::mt19937_64 rng(5);
  std::vector<std::string> items;
  for (int i = 0; i < 40; ++i) items.push_back("x" + std::to_string(rng() % 1000));
  BloomFilter a(params_from(15, 1e-3));
  for (const auto& it : items) a.insert(it);
  for (int round = 0; round < 20; ++round) {
    std::shuffle(items.begin(), items.end(), rng);
    BloomFilter b(params_from(15, 1e-3));
    for (const auto& it : items) b.insert(it);
    CHECK(a.digest() == b.digest());
  }
}

TEST_CASE("bloom_class") {
  auto w = t::build_workspace({
      {iri("a"), iri("p"), iri("o")},
      {iri("a"), iri("q"), iri("o")},
      {iri("b"), iri("q"), iri("z")},
      {iri("b"), iri("p"), iri("z")},
      {iri("e1"), kTypeTerm, iri("C")},
      {iri("e2"), kTypeTerm, iri("D")},
  });
  const auto params = params_from(4, 1e-1);
  auto cls = [&](const char* s) {
    return bloom_class(SummaryModel::AC, *w.dict.find(iri(s)), w.map, w.dict, params);
  };
  CHECK(cls("a") == cls("b"));
  // Empty AC lists: all-zero array, shared by every such subject.
  CHECK(cls("e1") == cls("e2"));
  CHECK(cls("e1").value == 0xd94d12186c0f2fb7ULL);
  CHECK_THROWS_AS(cls("o"), UnknownSubject);

  const auto flat = bloom_class(SummaryModel::SX, *w.dict.find(iri("a")), w.map, w.dict, params,
                                BloomOptions{{}, SxBloomFeatures::FlatNeighborTypes});
  CHECK(flat.value == 0xd94d12186c0f2fb7ULL);  // no types anywhere near a
}

TEST_CASE("bloom partition coarsens the ground truth") {
  std::mt19937_64 rng(8);
  t::CorpusSpec spec;
  spec.subjects = 500;
  spec.predicates = 20;
  spec.types = 10;
  auto w = t::build_workspace(t::random_corpus(spec, rng));
  for (auto model : kAllModels) {
    summarize(model, w.map, w.dict);
    for (auto n : kBloomPresetN) {
      for (auto p : kBloomPresetP) {
        const auto classes = bloom_classes(model, w.map, w.dict, params_from(n, p), {}, 3);
        std::map<EqClass, EqClass> truth_to_bloom;
        std::size_t i = 0;
        for (const auto& r : w.map.records()) {
          auto [it, fresh] = truth_to_bloom.emplace(*r.label, classes[i++]);
          CHECK((fresh || it->second == classes[i - 1]));
        }
      }
    }
  }
}
