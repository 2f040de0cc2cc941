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

#ifndef SUMGRAPH_BLOOM_HPP_
#define SUMGRAPH_BLOOM_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "sumgraph/summaries.hpp"

namespace sumgraph {

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BloomParams {
  std::uint64_t n = 0;  // expected insertions
  double p = 0.0;       // target false-positive probability
  std::uint32_t k = 0;  // hash functions
  std::uint64_t m = 0;  // bits

  friend bool operator==(const BloomParams&, const BloomParams&) = default;
};

/// m = ceil(-n ln p / (ln 2)^2), k = max(1, round(m/n * ln 2)).
BloomParams params_from(std::uint64_t n, double p);

inline constexpr std::uint64_t kBloomPresetN[] = {4, 15, 60};
inline constexpr double kBloomPresetP[] = {1e-1, 1e-3, 1e-7};

/// Seeds (FNV offset bases) of the two base hashes used for double hashing.
inline constexpr std::uint64_t kBloomSeed1 = kFnvOffsetBasis;
inline constexpr std::uint64_t kBloomSeed2 = kFnvOffsetBasis ^ 0x9e3779b97f4a7c15ULL;

class BloomFilter {
 public:
  explicit BloomFilter(const BloomParams& params);

  const BloomParams& params() const noexcept { return params_; }

  /// Sets bits (h1 + i*h2 + (i^3 - i)/6) mod m for i in [0, k), with 64-bit
  /// wrapping arithmetic; h1, h2 are finalized seeded FNV-1a-64 hashes.
  void insert(std::string_view item);
  bool contains(std::string_view item) const;

  bool test(std::uint64_t bit) const { return (bytes_[bit >> 3] >> (bit & 7)) & 1u; }
  std::uint64_t popcount() const noexcept;

  /// Bit i lives in byte i/8 at position i%8; trailing bits are zero.
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

  /// FNV-1a-64 over bytes().
  EqClass digest() const noexcept;

  /// The k probe indices for `item`.
  std::vector<std::uint64_t> indices(std::string_view item) const;

 private:
  BloomParams params_;
  std::vector<std::uint8_t> bytes_;
};

/// How SX features enter the filter.
enum class SxBloomFeatures {
  /// The same "N:" neighbor signatures the exact summarizer uses.
  NeighborSignatures,
  /// Each neighbor's raw types inserted flat as "N:" + type IRI.
  FlatNeighborTypes,
};

struct BloomOptions {
  FeatureOptions features{};
  SxBloomFeatures sx = SxBloomFeatures::NeighborSignatures;
};

/// Inserts the vertex's (unsorted) features into a fresh filter and hashes
/// the bit array. Throws UnknownSubject.
EqClass bloom_class(SummaryModel model, TermId s, const SubjectMap& m,
                    const TermDictionary& dict, const BloomParams& params,
                    const BloomOptions& opts = {});

/// bloom_class for every record of `m`, in record order.
std::vector<EqClass> bloom_classes(SummaryModel model, const SubjectMap& m,
                                   const TermDictionary& dict, const BloomParams& params,
                                   const BloomOptions& opts = {}, unsigned threads = 1);

}  // namespace sumgraph

#endif  // SUMGRAPH_BLOOM_HPP_
