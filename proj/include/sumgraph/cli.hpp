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

#ifndef SUMGRAPH_CLI_HPP_
#define SUMGRAPH_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace sumgraph::cli {

// Work-directory artifact names.
inline constexpr const char* kDictionaryFile = "dictionary.tsv";
inline constexpr const char* kSubjectsFile = "subjects.bin";
inline constexpr const char* kStateFile = "state.json";
inline constexpr const char* kLabelsFile = "labels.tsv";
inline constexpr const char* kHistogramFile = "histogram.tsv";
inline constexpr const char* kFoldsFile = "folds.tsv";
inline constexpr const char* kSelectionFile = "selection.tsv";
inline constexpr const char* kBloomReportFile = "bloom_eval.tsv";

/// Runs one subcommand. `args` excludes the program name. Errors are
/// reported on `err` as a single tab-separated line
/// `error<TAB>code<TAB>message` and a non-zero return value.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sumgraph::cli

#endif  // SUMGRAPH_CLI_HPP_
