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

#include "sumgraph/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sumgraph/batching.hpp"
#include "sumgraph/bloom.hpp"
#include "sumgraph/metrics.hpp"
#include "sumgraph/rdf.hpp"
#include "sumgraph/summaries.hpp"

namespace sumgraph::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CliError : public std::runtime_error {
 public:
  CliError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Options shared by all subcommands; only the ones a subcommand registers
/// are meaningful for it.
struct RunConfig {
  std::vector<std::string> inputs;
  std::string work = "sumgraph-work";
  std::string model;
  std::uint64_t seed = 42;
  std::uint32_t guard = kDefaultGuard;
  std::uint32_t folds = kDefaultFolds;
  std::uint32_t test_fold = 0;
  std::string role = "train";
  std::string weights = "inverse";
  std::uint64_t count = 0;
  std::string out_dir;
  std::vector<std::uint64_t> bloom_n;
  std::vector<double> bloom_p;
  bool sx_flat = false;
  bool sx_multiset = false;
  std::uint64_t min_support = 1;
  std::size_t max_nodes = 0;
  double fraction = 1.0;
  bool strict = false;
  std::string format = "tsv";
  std::string series;
  bool selected = false;
  unsigned threads = 1;
};

std::string config_hash(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string joined;
  for (const auto& [k, v] : fields) {
    joined += k;
    joined += '=';
    joined += v;
    joined += kFeatureSeparator;
  }
  return EqClass{fnv1a64(joined)}.hex();
}

std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

fs::path work_path(const RunConfig& c, const char* name) { return fs::path(c.work) / name; }

void require(const fs::path& p, const std::string& hint) {
  if (!fs::exists(p)) {
    throw CliError("upstream_missing", p.string() + " not found; run '" + hint + "' first");
  }
}

json load_state(const RunConfig& c) {
  const auto path = work_path(c, kStateFile);
  require(path, "ingest");
  std::ifstream in(path);
  return json::parse(in);
}

void save_state(const RunConfig& c, const json& state) {
  std::ofstream out(work_path(c, kStateFile), std::ios::binary);
  out << state.dump(2) << '\n';
}

struct Workspace {
  TermDictionary dict;
  SubjectMap map;
  json state;
};

Workspace load_workspace(const RunConfig& c) {
  Workspace w;
  w.state = load_state(c);
  require(work_path(c, kDictionaryFile), "ingest");
  require(work_path(c, kSubjectsFile), "ingest");
  w.dict = TermDictionary::load_tsv(work_path(c, kDictionaryFile).string());
  w.map = SubjectMap::load(work_path(c, kSubjectsFile).string());
  return w;
}

void save_map(const RunConfig& c, const SubjectMap& m) {
  m.save(work_path(c, kSubjectsFile).string());
}

std::ofstream open_artifact(const fs::path& path, std::string_view command, const std::string& hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError("io", "cannot write " + path.string());
  out << "# sumgraph " << command << " config=" << hash << '\n';
  return out;
}

SummaryModel model_or_state(const RunConfig& c, const json& state) {
  if (!c.model.empty()) return parse_model(c.model);
  if (state.contains("model")) return parse_model(state["model"].get<std::string>());
  throw CliError("invalid_argument", "--model is required");
}

Selection load_selection(const RunConfig& c, const Workspace& w) {
  const auto path = work_path(c, kSelectionFile);
  if (!fs::exists(path)) return all_subjects(w.map);
  std::ifstream in(path, std::ios::binary);
  Selection out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto id = w.dict.find(term_from_ntriples(unescape_tsv(line)));
    if (!id || !w.map.contains(*id)) {
      throw CliError("malformed", path.string() + ": unknown subject " + line);
    }
    out.push_back(*id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- ingest

int cmd_ingest(const RunConfig& c, std::ostream& out) {
  if (c.inputs.empty()) throw CliError("missing_input", "--input is required");
  for (const auto& in : c.inputs) {
    if (!fs::exists(in)) throw CliError("missing_input", "input not found: " + in);
  }
  fs::create_directories(c.work);

  TermDictionary dict;
  SubjectMap map(dict.intern(Term::iri(std::string(kRdfType))));
  IngestOptions opts;
  opts.strict = c.strict;
  IngestStats total;
  for (const auto& in : c.inputs) {
    IngestStats s;
    try {
      s = ingest_file(in, dict, [&](const EncodedTriple& t) { map.add(t); }, opts);
    } catch (const MalformedLine& e) {
      throw CliError("malformed", in + ": " + e.what());
    }
    total.triples += s.triples;
    total.skipped += s.skipped;
    total.lines += s.lines;
  }
  total.distinct_terms = dict.size();

  map.canonicalize(dict.canonicalize());
  dict.save_tsv(work_path(c, kDictionaryFile).string());
  save_map(c, map);
  for (const char* stale : {kLabelsFile, kHistogramFile, kFoldsFile, kSelectionFile}) {
    fs::remove(work_path(c, stale));
  }

  json state;
  state["triples"] = total.triples;
  state["skipped"] = total.skipped;
  state["distinct_terms"] = total.distinct_terms;
  state["subjects"] = map.size();
  state["config_hash"] = config_hash({{"command", "ingest"}, {"strict", c.strict ? "1" : "0"}});
  save_state(c, state);

  out << "triples\tskipped\tdistinct_terms\tsubjects\n"
      << total.triples << '\t' << total.skipped << '\t' << total.distinct_terms << '\t'
      << map.size() << '\n';
  return 0;
}

// ------------------------------------------------------------- summarize

int cmd_summarize(const RunConfig& c, std::ostream& out) {
  if (c.model.empty()) throw CliError("invalid_argument", "--model is required");
  const SummaryModel model = parse_model(c.model);
  if (!c.inputs.empty()) {
    std::ostringstream sink;
    cmd_ingest(c, sink);
  }
  Workspace w = load_workspace(c);

  FeatureOptions fopts;
  fopts.sx_dedup_neighbors = !c.sx_multiset;
  const SummaryResult result = summarize(model, w.map, w.dict, fopts, c.threads);
  save_map(c, w.map);
  fs::remove(work_path(c, kSelectionFile));

  const std::string hash = config_hash({{"command", "summarize"},
                                        {"model", std::string(to_string(model))},
                                        {"sx_multiset", c.sx_multiset ? "1" : "0"}});
  {
    std::vector<std::pair<std::string, EqClass>> rows;
    rows.reserve(w.map.size());
    for (const auto& r : w.map.records()) {
      rows.emplace_back(escape_tsv(w.dict.decode(r.subject).ntriples()), *r.label);
    }
    std::sort(rows.begin(), rows.end());
    auto f = open_artifact(work_path(c, kLabelsFile), "summarize", hash);
    for (const auto& [subject, cls] : rows) f << subject << '\t' << cls.hex() << '\n';
  }
  {
    std::vector<std::pair<EqClass, std::uint64_t>> rows(result.histogram.begin(),
                                                        result.histogram.end());
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    auto f = open_artifact(work_path(c, kHistogramFile), "summarize", hash);
    for (const auto& [cls, count] : rows) f << cls.hex() << '\t' << count << '\n';
  }

  w.state["model"] = to_string(model);
  w.state["sx_multiset"] = c.sx_multiset;
  w.state["classes"] = result.num_classes();
  w.state.erase("selection");
  save_state(c, w.state);

  out << "model\tsubjects\tclasses\n"
      << to_string(model) << '\t' << w.map.size() << '\t' << result.num_classes() << '\n';
  return 0;
}

// ----------------------------------------------------------------- split

int cmd_split(const RunConfig& c, std::ostream& out) {
  Workspace w = load_workspace(c);
  const FoldAssignment folds = split_folds(w.map, w.dict, c.seed, c.folds);
  save_map(c, w.map);

  const std::string hash = config_hash({{"command", "split"},
                                        {"folds", std::to_string(c.folds)},
                                        {"seed", std::to_string(c.seed)}});
  std::vector<std::uint64_t> sizes(c.folds, 0);
  {
    std::vector<std::pair<std::string, std::uint8_t>> rows;
    for (const auto& r : w.map.records()) {
      rows.emplace_back(escape_tsv(w.dict.decode(r.subject).ntriples()), *r.fold);
      ++sizes[*r.fold];
    }
    std::sort(rows.begin(), rows.end());
    auto f = open_artifact(work_path(c, kFoldsFile), "split", hash);
    for (const auto& [subject, fold] : rows) f << subject << '\t' << int{fold} << '\n';
  }
  w.state["folds"] = c.folds;
  w.state["split_seed"] = c.seed;
  save_state(c, w.state);

  out << "fold\tsubjects\n";
  for (std::uint32_t i = 0; i < c.folds; ++i) out << i << '\t' << sizes[i] << '\n';
  return 0;
}

// ---------------------------------------------------------------- filter

void require_labels(const Workspace& w) {
  if (!w.state.contains("model")) {
    throw CliError("upstream_missing", "subjects are unlabelled; run 'summarize' first");
  }
}

void require_folds(const Workspace& w) {
  if (!w.state.contains("folds")) {
    throw CliError("upstream_missing", "subjects have no folds; run 'split' first");
  }
}

int cmd_filter(const RunConfig& c, std::ostream& out) {
  Workspace w = load_workspace(c);
  require_labels(w);
  const SummaryModel model = model_or_state(c, w.state);

  Selection sel = all_subjects(w.map);
  const FilterReport before = describe(w.map, sel);
  if (c.max_nodes > 0) sel = filter_subgraph_size(w.map, sel, model, c.max_nodes);
  if (c.fraction < 1.0) sel = subsample_fraction(w.map, w.dict, sel, c.fraction, c.seed);
  if (c.min_support > 1) sel = filter_min_support(w.map, sel, c.min_support);
  const FilterReport after = describe(w.map, sel);

  const std::string hash = config_hash({{"command", "filter"},
                                        {"model", std::string(to_string(model))},
                                        {"min_support", std::to_string(c.min_support)},
                                        {"max_nodes", std::to_string(c.max_nodes)},
                                        {"fraction", format_double(c.fraction)},
                                        {"seed", std::to_string(c.seed)}});
  {
    std::vector<std::string> rows;
    for (TermId s : sel) rows.push_back(escape_tsv(w.dict.decode(s).ntriples()));
    std::sort(rows.begin(), rows.end());
    auto f = open_artifact(work_path(c, kSelectionFile), "filter", hash);
    for (const auto& r : rows) f << r << '\n';
  }
  w.state["selection"] = {{"subjects", after.subjects}, {"classes", after.classes},
                          {"config_hash", hash}};
  save_state(c, w.state);

  out << "stage\tsubjects\tclasses\n"
      << "before\t" << before.subjects << '\t' << before.classes << '\n'
      << "after\t" << after.subjects << '\t' << after.classes << '\n';
  return 0;
}

// ---------------------------------------------------------------- sample

int cmd_sample(const RunConfig& c, std::ostream& out) {
  Workspace w = load_workspace(c);
  require_labels(w);
  require_folds(w);

  ExportSpec spec;
  spec.model = model_or_state(c, w.state);
  spec.guard = c.guard;
  spec.folds = w.state["folds"].get<std::uint32_t>();
  spec.test_fold = c.test_fold;
  spec.role = parse_fold_role(c.role);
  spec.weights = parse_weights(c.weights);
  spec.count = c.count;
  spec.seed = c.seed;
  spec.config_hash = config_hash({{"command", "sample"},
                                  {"model", std::string(to_string(spec.model))},
                                  {"guard", std::to_string(spec.guard)},
                                  {"folds", std::to_string(spec.folds)},
                                  {"test_fold", std::to_string(spec.test_fold)},
                                  {"role", c.role},
                                  {"weights", c.weights},
                                  {"count", std::to_string(spec.count)},
                                  {"seed", std::to_string(spec.seed)}});

  const Selection sel = load_selection(c, w);
  const std::string dir =
      c.out_dir.empty()
          ? (fs::path(c.work) / "batches" / (c.role + "-fold" + std::to_string(c.test_fold))).string()
          : c.out_dir;
  const ExportResult r = export_batches(w.map, sel, spec, dir);
  out << "role\tcandidates\tbatches\tmanifest\n"
      << c.role << '\t' << r.candidate_subgraphs << '\t' << r.files.size() << '\t'
      << r.manifest_path << '\n';
  return 0;
}

// ------------------------------------------------------------ bloom-eval

int cmd_bloom_eval(const RunConfig& c, std::ostream& out) {
  Workspace w = load_workspace(c);
  const SummaryModel model = model_or_state(c, w.state);

  std::vector<std::uint64_t> ns = c.bloom_n;
  std::vector<double> ps = c.bloom_p;
  if (ns.empty()) ns.assign(std::begin(kBloomPresetN), std::end(kBloomPresetN));
  if (ps.empty()) ps.assign(std::begin(kBloomPresetP), std::end(kBloomPresetP));

  FeatureOptions fopts;
  fopts.sx_dedup_neighbors = !c.sx_multiset;
  SubjectMap truth_map = w.map;
  summarize(model, truth_map, w.dict, fopts, c.threads);
  std::vector<std::uint64_t> truth;
  truth.reserve(truth_map.size());
  for (const auto& r : truth_map.records()) truth.push_back(r.label->value);

  BloomOptions bopts;
  bopts.features = fopts;
  bopts.sx = c.sx_flat ? SxBloomFeatures::FlatNeighborTypes : SxBloomFeatures::NeighborSignatures;

  std::ostringstream table;
  table << "n\tp\tk\tm\taccuracy\tgini_impurity\n";
  json rows = json::array();
  for (auto n : ns) {
    for (double p : ps) {
      const BloomParams params = params_from(n, p);
      const auto classes = bloom_classes(model, w.map, w.dict, params, bopts, c.threads);
      std::vector<std::uint64_t> pred;
      pred.reserve(classes.size());
      for (auto cls : classes) pred.push_back(cls.value);
      const ImpurityReport rep = evaluate(pred, truth);
      table << params.n << '\t' << format_p(params.p) << '\t' << params.k << '\t' << params.m
            << '\t' << format_double(rep.accuracy) << '\t' << format_double(rep.gini) << '\n';
      rows.push_back({{"n", params.n}, {"p", params.p}, {"k", params.k}, {"m", params.m},
                      {"accuracy", rep.accuracy}, {"gini_impurity", rep.gini}});
    }
  }

  std::vector<std::pair<std::string, std::string>> fields = {
      {"command", "bloom-eval"}, {"model", std::string(to_string(model))},
      {"sx_flat", c.sx_flat ? "1" : "0"}, {"sx_multiset", c.sx_multiset ? "1" : "0"}};
  for (auto n : ns) fields.emplace_back("n", std::to_string(n));
  for (double p : ps) fields.emplace_back("p", format_double(p));
  const std::string hash = config_hash(fields);
  {
    auto f = open_artifact(work_path(c, kBloomReportFile), "bloom-eval", hash);
    f << table.str();
  }
  if (c.format == "json") {
    out << json{{"model", to_string(model)}, {"config_hash", hash}, {"rows", rows}}.dump(2) << '\n';
  } else {
    out << table.str();
  }
  return 0;
}

// ----------------------------------------------------------------- stats

int cmd_stats(const RunConfig& c, std::ostream& out) {
  Workspace w = load_workspace(c);
  require_labels(w);
  const Selection sel = c.selected ? load_selection(c, w) : all_subjects(w.map);
  std::vector<std::uint64_t> labels;
  labels.reserve(sel.size());
  for (TermId s : sel) labels.push_back(w.map.at(s).label->value);
  const ClassStats stats = class_stats(labels);
  if (!c.series.empty()) {
    std::ofstream f(c.series, std::ios::binary);
    if (!f) throw CliError("io", "cannot write " + c.series);
    write_rank_series(f, stats);
  }
  if (c.format == "json") {
    write_json(out, stats);
  } else {
    write_tsv(out, stats);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"sumgraph: equivalence-class summaries of RDF graphs", "sumgraph"};
  app.require_subcommand(1);

  auto add_work = [&](CLI::App* sub) {
    sub->add_option("--work,-w", c.work, "Work directory holding intermediate artifacts");
  };
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"tsv", "json"}));
  };

  auto* ingest = app.add_subcommand("ingest", "Parse N-Triples/N-Quads into the work directory");
  add_work(ingest);
  ingest->add_option("--input,-i", c.inputs, "Input files (plain or gzip)")->required();
  ingest->add_flag("--strict", c.strict, "Abort on malformed lines");

  auto* summ = app.add_subcommand("summarize", "Compute ground-truth equivalence classes");
  add_work(summ);
  add_threads(summ);
  summ->add_option("--input,-i", c.inputs, "Ingest these files first");
  summ->add_flag("--strict", c.strict, "Abort on malformed lines");
  summ->add_option("--model,-m", c.model, "ac|cc|ptc|sx")->required();
  summ->add_flag("--sx-multiset", c.sx_multiset, "Keep repeated SX neighbor signatures");

  auto* split = app.add_subcommand("split", "Assign subjects to folds");
  add_work(split);
  split->add_option("--folds", c.folds, "Number of folds")->check(CLI::Range(3u, 256u));
  split->add_option("--seed", c.seed, "Random seed");

  auto* filter = app.add_subcommand("filter", "Select subjects by class support, size, fraction");
  add_work(filter);
  filter->add_option("--model,-m", c.model, "Model for subgraph size (default: summarized model)");
  filter->add_option("--min-support", c.min_support, "Minimum class occurrences");
  filter->add_option("--max-nodes", c.max_nodes, "Keep subgraphs with fewer nodes (0: off)");
  filter->add_option("--fraction", c.fraction, "Subsample fraction")->check(CLI::Range(0.0, 1.0));
  filter->add_option("--seed", c.seed, "Random seed");

  auto* sample = app.add_subcommand("sample", "Export fixed-size mini-batches");
  add_work(sample);
  sample->add_option("--fold-role", c.role, "train|val|test")
      ->check(CLI::IsMember({"train", "val", "test"}));
  sample->add_option("--test-fold", c.test_fold, "Fold used as test fold");
  sample->add_option("--count", c.count, "Number of batches");
  sample->add_option("--guard", c.guard, "Nodes per batch")->check(CLI::Range(1u, 1u << 24));
  sample->add_option("--weights", c.weights, "inverse|uniform")
      ->check(CLI::IsMember({"inverse", "uniform"}));
  sample->add_option("--seed", c.seed, "Random seed");
  sample->add_option("--out,-o", c.out_dir, "Output directory");

  auto* bloom = app.add_subcommand("bloom-eval", "Evaluate Bloom-filter classes against ground truth");
  add_work(bloom);
  add_threads(bloom);
  add_format(bloom);
  bloom->add_option("--model,-m", c.model, "ac|cc|ptc|sx (default: summarized model)");
  bloom->add_option("--n", c.bloom_n, "Expected insertions (repeatable)");
  bloom->add_option("--p", c.bloom_p, "False-positive probability (repeatable)");
  bloom->add_flag("--sx-flat", c.sx_flat, "Insert raw neighbor types for SX");
  bloom->add_flag("--sx-multiset", c.sx_multiset, "Keep repeated SX neighbor signatures");

  auto* stats = app.add_subcommand("stats", "Class distribution statistics");
  add_work(stats);
  add_format(stats);
  stats->add_option("--series", c.series, "Write (rank, probability) pairs to this file");
  stats->add_flag("--selected", c.selected, "Restrict to the filtered selection");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error\tusage\t" << e.what() << '\n';
    return 2;
  }

  try {
    if (*ingest) return cmd_ingest(c, out);
    if (*summ) return cmd_summarize(c, out);
    if (*split) return cmd_split(c, out);
    if (*filter) return cmd_filter(c, out);
    if (*sample) return cmd_sample(c, out);
    if (*bloom) return cmd_bloom_eval(c, out);
    if (*stats) return cmd_stats(c, out);
  } catch (const CliError& e) {
    err << "error\t" << e.code() << '\t' << e.what() << '\n';
    return 1;
  } catch (const MalformedLine& e) {
    err << "error\tmalformed\t" << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error\tinvalid_argument\t" << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error\tinternal\t" << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace sumgraph::cli
