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

#include <fstream>
#include <sstream>

#include "sumgraph/cli.hpp"
#include "testing.hpp"

namespace t = sumgraph::testing;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = sumgraph::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Artifact body without the '# sumgraph' provenance line.
std::string body(const std::string& path) {
  const auto all = slurp(path);
  REQUIRE(all.rfind("# sumgraph ", 0) == 0);
  return all.substr(all.find('\n') + 1);
}

}  // namespace

TEST_CASE("summarize --model cc on a three-triple file") {
  t::TempDir tmp;
  std::ofstream(tmp.file("in.nt"))
      << "<http://ex/a> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex/C1> .\n"
         "<http://ex/b> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex/C1> .\n"
         "<http://ex/c> <http://ex/p> <http://ex/x> .\n";
  const auto r = run({"summarize", "-w", tmp.file("w"), "--input", tmp.file("in.nt"), "--model", "cc"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "model\tsubjects\tclasses\ncc\t3\t2\n");
  CHECK(body(tmp.file("w/labels.tsv")) ==
        "<http://ex/a>\teff9a70b68d4f49f\n"
        "<http://ex/b>\teff9a70b68d4f49f\n"
        "<http://ex/c>\tcbf29ce484222325\n");
  CHECK(body(tmp.file("w/histogram.tsv")) == "eff9a70b68d4f49f\t2\ncbf29ce484222325\t1\n");

  const auto s = run({"stats", "-w", tmp.file("w")});
  CHECK(s.code == 0);
  CHECK(s.out == "vertices\tnum_classes\tsingleton_count\tsingleton_fraction\n3\t2\t1\t0.5\n");
}

TEST_CASE("stats on all-singleton classes") {
  t::TempDir tmp;
  std::ofstream(tmp.file("in.nt")) << "<http://ex/a> <http://ex/p> <http://ex/x> .\n"
                                      "<http://ex/b> <http://ex/q> <http://ex/x> .\n"
                                      "<http://ex/c> <http://ex/r> <http://ex/x> .\n";
  REQUIRE(run({"summarize", "-w", tmp.file("w"), "-i", tmp.file("in.nt"), "-m", "ac"}).code == 0);
  const auto s = run({"stats", "-w", tmp.file("w"), "--series", tmp.file("series.tsv")});
  CHECK(s.out == "vertices\tnum_classes\tsingleton_count\tsingleton_fraction\n3\t3\t3\t1\n");
  CHECK(slurp(tmp.file("series.tsv")).rfind("rank\tprobability\n1\t", 0) == 0);
}

TEST_CASE("bloom-eval echoes (k, m) for the chosen cell") {
  t::TempDir tmp;
  std::ofstream(tmp.file("in.nt")) << "<http://ex/a> <http://ex/p> <http://ex/x> .\n";
  REQUIRE(run({"ingest", "-w", tmp.file("w"), "-i", tmp.file("in.nt")}).code == 0);
  const auto r = run({"bloom-eval", "-w", tmp.file("w"), "-m", "ac", "--n", "4", "--p", "1e-1"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "n\tp\tk\tm\taccuracy\tgini_impurity\n4\t0.1\t3\t20\t1\t0\n");
  const auto grid = run({"bloom-eval", "-w", tmp.file("w"), "-m", "sx"});
  std::size_t rows = 0;
  for (char ch : grid.out) rows += ch == '\n';
  CHECK(rows == 10);
}

TEST_CASE("errors are one tab-separated line") {
  t::TempDir tmp;
  auto r = run({"summarize", "-w", tmp.file("nothing"), "-m", "ac"});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error\tupstream_missing\t", 0) == 0);

  r = run({"ingest", "-w", tmp.file("w"), "-i", tmp.file("missing.nt")});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error\tmissing_input\t", 0) == 0);

  r = run({"summarize", "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error\tusage\t", 0) == 0);

  std::ofstream(tmp.file("bad.nt")) << "<http://ex/a> <http://ex/p> .\n";
  r = run({"ingest", "-w", tmp.file("w"), "-i", tmp.file("bad.nt"), "--strict"});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error\tmalformed\t", 0) == 0);

  std::ofstream(tmp.file("ok.nt")) << "<http://ex/a> <http://ex/p> <http://ex/b> .\n";
  REQUIRE(run({"ingest", "-w", tmp.file("w"), "-i", tmp.file("ok.nt")}).code == 0);
  r = run({"filter", "-w", tmp.file("w")});
  CHECK(r.err.rfind("error\tupstream_missing\t", 0) == 0);
  r = run({"summarize", "-w", tmp.file("w"), "-m", "rgcn"});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error\tinvalid_argument\t", 0) == 0);
}

TEST_CASE("end-to-end pipeline on a generated corpus") {
  t::TempDir tmp;
  std::mt19937_64 rng(8);
  auto triples = t::clustered_corpus(250, 12, {}, rng);
  triples.resize(std::min<std::size_t>(triples.size(), 1000));
  t::write_ntriples(tmp.file("in.nt"), triples);
  const auto w = tmp.file("w");
  REQUIRE(run({"ingest", "-w", w, "-i", tmp.file("in.nt")}).code == 0);
  REQUIRE(run({"summarize", "-w", w, "-m", "ptc", "--threads", "3"}).code == 0);
  REQUIRE(run({"split", "-w", w, "--folds", "5", "--seed", "3"}).code == 0);
  const auto f = run({"filter", "-w", w, "--min-support", "2", "--max-nodes", "100"});
  REQUIRE(f.code == 0);
  const auto s = run({"sample", "-w", w, "--fold-role", "train", "--test-fold", "1", "--count", "20",
                      "--guard", "80"});
  REQUIRE(s.code == 0);
  CHECK(std::filesystem::exists(tmp.file("w/batches/train-fold1/manifest.json")));
  CHECK(run({"stats", "-w", w, "--selected", "--format", "json"}).code == 0);
  const auto b = run({"bloom-eval", "-w", w, "--format", "json"});
  CHECK(b.code == 0);
  CHECK(b.out.find("\"rows\"") != std::string::npos);

  // Provenance header carries the config hash only, so a second work dir
  // with the same config writes identical bytes.
  const auto w2 = tmp.file("w2");
  REQUIRE(run({"summarize", "-w", w2, "-i", tmp.file("in.nt"), "-m", "ptc"}).code == 0);
  CHECK(slurp(w + "/labels.tsv") == slurp(w2 + "/labels.tsv"));
}
