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

#include "sumgraph/bloom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <thread>

namespace sumgraph {

BloomParams params_from(std::uint64_t n, double p) {
  if (n == 0) throw InvalidParams("bloom: n must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw InvalidParams("bloom: p must be in (0, 1)");
  const double ln2 = std::numbers::ln2;
  const double bits = std::ceil(-static_cast<double>(n) * std::log(p) / (ln2 * ln2));
  const auto m = static_cast<std::uint64_t>(bits);
  const double k = std::round(static_cast<double>(m) / static_cast<double>(n) * ln2);
  return BloomParams{n, p, static_cast<std::uint32_t>(std::max(1.0, k)), m};
}

BloomFilter::BloomFilter(const BloomParams& params)
    : params_(params), bytes_((params.m + 7) / 8, 0) {
  if (params.m == 0 || params.k == 0) throw InvalidParams("bloom: m and k must be positive");
}

namespace {

// Two seeded FNV-1a-64 hashes, each passed through the splitmix64 finalizer:
// raw FNV-1a leaves the low bits poorly mixed, and those are the bits a
// small modulus sees. Probes use enhanced double hashing,
// h1 + i*h2 + (i^3 - i)/6, which keeps the measured false-positive rate
// near the design p at the small m used here; plain h1 + i*h2 does not.
struct Probe {
  std::uint64_t h1;
  std::uint64_t h2;

  explicit Probe(std::string_view item)
      : h1(mix64(fnv1a64(item, kBloomSeed1))), h2(mix64(fnv1a64(item, kBloomSeed2))) {}

  std::uint64_t at(std::uint64_t i, std::uint64_t m) const noexcept {
    return (h1 + i * h2 + (i * i * i - i) / 6) % m;
  }
};

}  // namespace

std::vector<std::uint64_t> BloomFilter::indices(std::string_view item) const {
  const Probe probe(item);
  std::vector<std::uint64_t> out(params_.k);
  for (std::uint32_t i = 0; i < params_.k; ++i) out[i] = probe.at(i, params_.m);
  return out;
}

void BloomFilter::insert(std::string_view item) {
  const Probe probe(item);
  for (std::uint64_t i = 0; i < params_.k; ++i) {
    const std::uint64_t bit = probe.at(i, params_.m);
    bytes_[bit >> 3] |= static_cast<std::uint8_t>(1u << (bit & 7));
  }
}

bool BloomFilter::contains(std::string_view item) const {
  const Probe probe(item);
  for (std::uint64_t i = 0; i < params_.k; ++i) {
    if (!test(probe.at(i, params_.m))) return false;
  }
  return true;
}

std::uint64_t BloomFilter::popcount() const noexcept {
  std::uint64_t n = 0;
  for (auto b : bytes_) n += static_cast<std::uint64_t>(std::popcount(b));
  return n;
}

EqClass BloomFilter::digest() const noexcept {
  const std::string_view raw(reinterpret_cast<const char*>(bytes_.data()), bytes_.size());
  return EqClass{fnv1a64(raw)};
}

EqClass bloom_class(SummaryModel model, TermId s, const SubjectMap& m,
                    const TermDictionary& dict, const BloomParams& params,
                    const BloomOptions& opts) {
  BloomFilter filter(params);
  if (model == SummaryModel::SX && opts.sx == SxBloomFeatures::FlatNeighborTypes) {
    for (const auto& item : feature_list(SummaryModel::CC, s, m, dict).items) filter.insert(item);
    for (TermId n : ac_neighbors(s, m)) {
      if (!m.contains(n)) continue;
      for (TermId t : type_set(n, m, dict)) filter.insert("N:" + dict.decode(t).ntriples());
    }
    return filter.digest();
  }
  for (const auto& item : feature_list(model, s, m, dict, opts.features).items) {
    filter.insert(item);
  }
  return filter.digest();
}

std::vector<EqClass> bloom_classes(SummaryModel model, const SubjectMap& m,
                                   const TermDictionary& dict, const BloomParams& params,
                                   const BloomOptions& opts, unsigned threads) {
  const auto records = m.records();
  std::vector<EqClass> out(records.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = bloom_class(model, records[i].subject, m, dict, params, opts);
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1 || records.size() < 2 * threads) {
    work(0, records.size());
    return out;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (records.size() + threads - 1) / threads;
  for (std::size_t begin = 0; begin < records.size(); begin += chunk) {
    pool.emplace_back(work, begin, std::min(records.size(), begin + chunk));
  }
  pool.clear();
  return out;
}

}  // namespace sumgraph
