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

#include "sumgraph/summaries.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <thread>

namespace sumgraph {

std::string_view to_string(SummaryModel m) {
  switch (m) {
    case SummaryModel::AC: return "ac";
    case SummaryModel::CC: return "cc";
    case SummaryModel::PTC: return "ptc";
    case SummaryModel::SX: return "sx";
  }
  return "?";
}

SummaryModel parse_model(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto m : kAllModels) {
    if (lower == to_string(m)) return m;
  }
  if (lower == "schemex") return SummaryModel::SX;
  throw std::invalid_argument("unknown summary model '" + std::string(name) + "'");
}

EqClass canonical_hash(FeatureList fl) {
  std::sort(fl.items.begin(), fl.items.end());
  std::string joined;
  for (std::size_t i = 0; i < fl.items.size(); ++i) {
    if (i != 0) joined.push_back(kFeatureSeparator);
    joined += fl.items[i];
  }
  return EqClass{fnv1a64(joined)};
}

namespace {

void append_types(FeatureList& fl, TermId s, const SubjectMap& m,
                  const TermDictionary& dict) {
  for (TermId t : type_set(s, m, dict)) fl.items.push_back("T:" + dict.decode(t).ntriples());
}

void append_properties(FeatureList& fl, TermId s, const SubjectMap& m,
                       const TermDictionary& dict) {
  for (TermId p : property_set(s, m, dict)) fl.items.push_back("P:" + dict.decode(p).ntriples());
}

}  // namespace

EqClass type_set_signature(TermId s, const SubjectMap& m, const TermDictionary& dict) {
  FeatureList fl;
  if (m.contains(s)) append_types(fl, s, m, dict);
  return canonical_hash(std::move(fl));
}

FeatureList feature_list(SummaryModel model, TermId s, const SubjectMap& m,
                         const TermDictionary& dict, const FeatureOptions& opts) {
  FeatureList fl;
  switch (model) {
    case SummaryModel::AC:
      append_properties(fl, s, m, dict);
      break;
    case SummaryModel::CC:
      append_types(fl, s, m, dict);
      break;
    case SummaryModel::PTC:
      append_properties(fl, s, m, dict);
      append_types(fl, s, m, dict);
      break;
    case SummaryModel::SX: {
      append_types(fl, s, m, dict);
      std::vector<std::string> signatures;
      for (TermId n : ac_neighbors(s, m)) {
        signatures.push_back("N:" + type_set_signature(n, m, dict).hex());
      }
      if (opts.sx_dedup_neighbors) {
        std::sort(signatures.begin(), signatures.end());
        signatures.erase(std::unique(signatures.begin(), signatures.end()), signatures.end());
      }
      for (auto& sig : signatures) fl.items.push_back(std::move(sig));
      break;
    }
  }
  return fl;
}

SummaryResult summarize(SummaryModel model, SubjectMap& m, const TermDictionary& dict,
                        const FeatureOptions& opts, unsigned threads) {
  auto records = m.records();
  // Labels are computed into a side buffer so readers never observe a
  // half-written map.
  std::vector<EqClass> labels(records.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      labels[i] = canonical_hash(feature_list(model, records[i].subject, m, dict, opts));
    }
  };

  threads = std::max(1u, threads);
  if (threads == 1 || records.size() < 2 * threads) {
    work(0, records.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (records.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < records.size(); begin += chunk) {
      pool.emplace_back(work, begin, std::min(records.size(), begin + chunk));
    }
  }

  SummaryResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].label = labels[i];
    ++result.histogram[labels[i]];
  }
  return result;
}

}  // namespace sumgraph
