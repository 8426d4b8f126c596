/*
 * Copyright 2026 The nncui Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "nncui/errors.h"
#include "nncui/harness.h"
#include "nncui/io.h"
#include "test_support.h"

namespace nncui {
namespace {

using testing_support::ReadFile;
using testing_support::TempDir;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nncui");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const char kSmallCorpus[] =
    "{\"id\": \"q\", \"cuis\": [\"x\", \"y\"]}\n"
    "{\"id\": \"d1\", \"cuis\": [\"x\", \"y\"]}\n"
    "{\"id\": \"d2\", \"cuis\": [\"x\"]}\n"
    "{\"id\": \"d3\", \"cuis\": [\"z\"]}\n";

TEST(BuildIndexCli, DirectPair) {
  TempDir dir;
  const auto edges = dir.Write("edges.tsv", "C0042449\tC0005847\n");
  const auto corpus = dir.Write("corpus.jsonl",
                                "{\"id\": \"a\", \"cuis\": [\"C0042449\"]}\n"
                                "{\"id\": \"b\", \"cuis\": [\"C0005847\"]}\n");
  const auto r = Cli({"build-index", "--edges", edges, "--corpus", corpus, "--n", "1",
                      "--out", dir.Path("idx")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("nodes: 2"), std::string::npos);
  EXPECT_NE(r.out.find("edges: 1"), std::string::npos);
  EXPECT_NE(r.out.find("entries: 2"), std::string::npos);
  EXPECT_NE(r.out.find("build_seconds: "), std::string::npos);
  EXPECT_EQ(ReadFile(dir.Path("idx")),
            "#nnidx v1 radius=1 checksum=" + FileChecksum(edges) +
                "\nC0005847\tC0042449\nC0042449\tC0005847\n");
}

TEST(BuildIndexCli, RadiusZeroAndMissingConcept) {
  TempDir dir;
  const auto edges = dir.Write("edges.tsv", "C0042449\tC0005847\n");
  const auto corpus = dir.Write("corpus.jsonl",
                                "{\"id\": \"a\", \"cuis\": [\"C0042449\", \"C1111111\"]}\n"
                                "{\"id\": \"b\", \"cuis\": [\"C0005847\"]}\n");
  auto r = Cli({"build-index", "--edges", edges, "--corpus", corpus, "--n", "0", "--out",
                dir.Path("idx0")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto index0 = LoadIndex(dir.Path("idx0"));
  EXPECT_EQ(index0.size(), 3u);
  for (const auto& [id, n] : index0.entries()) EXPECT_TRUE(n.empty());

  r = Cli({"build-index", "--edges", edges, "--corpus", corpus, "--out", dir.Path("idx1")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("C1111111"), std::string::npos);
  const auto index = LoadIndex(dir.Path("idx1"));
  EXPECT_EQ(index.radius(), 1u);
  EXPECT_TRUE(index.Contains("C1111111"));
  EXPECT_TRUE(index.Neighbors("C1111111").empty());
  EXPECT_NE(ReadFile(dir.Path("idx1")).find("C1111111\t\n"), std::string::npos);
}

TEST(BuildIndexCli, ErrorsMapToExitCodes) {
  TempDir dir;
  const auto bad_edges = dir.Write("bad.tsv", "a\ta\n");
  const auto corpus = dir.Write("corpus.jsonl", "{\"id\": \"a\", \"cuis\": [\"a\"]}\n");
  auto r = Cli({"build-index", "--edges", bad_edges, "--corpus", corpus, "--out", dir.Path("i")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("self-loop"), std::string::npos);
  r = Cli({"build-index", "--corpus", corpus, "--out", dir.Path("i")});
  EXPECT_EQ(r.code, 1);
  r = Cli({"no-such-command"});
  EXPECT_EQ(r.code, 1);
  r = Cli({"build-index", "--edges", dir.Path("missing"), "--corpus", corpus, "--out",
           dir.Path("i")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(Cli({"--help"}).code, 0);
}

TEST(RelevanceCli, ListsWithEdgesOrIndex) {
  TempDir dir;
  const auto edges = dir.Write("edges.tsv", "x\tz\ny\tw\n");
  auto r = Cli({"relevance", "--a", "x,y", "--b", "y,z", "--edges", edges});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "iou\t0.333333\nnn-iou\t0.666667\n");

  const auto index = dir.Write("idx", "#nnidx v1 radius=1 checksum=00\nC0042449\tC0005847\n");
  r = Cli({"relevance", "--a", "C0042449", "--b", "C0005847", "--index", index, "--lambda", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "iou\t0.000000\nnn-iou\t0.500000\n");

  r = Cli({"relevance", "--a", "C0042449", "--b", "C0005847", "--index", index, "--n", "2"});
  EXPECT_EQ(r.code, 1);
  r = Cli({"relevance", "--a", "x", "--b", "y"});
  EXPECT_EQ(r.code, 1);
  r = Cli({"relevance", "--a", "x", "--b", "y", "--lambda", "0"});
  EXPECT_EQ(r.code, 0);
  r = Cli({"relevance", "--a", "x", "--b", "y", "--lambda", "1.5", "--edges", edges});
  EXPECT_EQ(r.code, 1);
}

TEST(RelevanceCli, DocumentIds) {
  TempDir dir;
  const auto corpus = dir.Write("corpus.jsonl", kSmallCorpus);
  const auto r = Cli({"relevance", "--doc-a", "q", "--doc-b", "d2", "--corpus", corpus,
                      "--lambda", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "iou\t0.500000\nnn-iou\t0.500000\n");
  EXPECT_EQ(Cli({"relevance", "--doc-a", "q", "--doc-b", "nope", "--corpus", corpus,
                 "--lambda", "0"}).code,
            2);
}

TEST(RetrieveCli, OrderingTruncationAndDegeneracy) {
  TempDir dir;
  const auto corpus = dir.Write("corpus.jsonl", kSmallCorpus);
  const auto edges = dir.Write("edges.tsv", "x\tparent\n");
  ASSERT_EQ(Cli({"build-index", "--edges", edges, "--corpus", corpus, "--out", dir.Path("idx")}).code, 0);

  auto r = Cli({"retrieve", "--corpus", corpus, "--measure", "iou", "--k", "10", "--out",
                dir.Path("iou.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto runs = LoadRuns(dir.Path("iou.jsonl"));
  ASSERT_EQ(runs.size(), 4u);
  EXPECT_EQ(runs[0], (RankingRun{"q", {"d1", "d2", "d3"}}));
  for (const auto& run : runs) EXPECT_EQ(run.ranked_ids.size(), 3u);

  r = Cli({"retrieve", "--corpus", corpus, "--index", dir.Path("idx"), "--measure", "nniou",
           "--lambda", "0", "--k", "10", "--out", dir.Path("nn.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadFile(dir.Path("nn.jsonl")), ReadFile(dir.Path("iou.jsonl")));

  r = Cli({"retrieve", "--corpus", corpus, "--k", "2"});
  EXPECT_EQ(r.code, 1);  // nniou, lambda 0.5, no index
  r = Cli({"retrieve", "--corpus", corpus, "--measure", "iou", "--k", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), R"({"query":"q","ranked":["d1","d2"]})");
  EXPECT_EQ(Cli({"retrieve", "--corpus", corpus, "--measure", "bm25"}).code, 1);
  EXPECT_EQ(Cli({"retrieve", "--corpus", corpus, "--measure", "iou", "--k", "0"}).code, 1);
}

TEST(EvalCli, ClosureAndReversedPair) {
  TempDir dir;
  const auto corpus = dir.Write("corpus.jsonl", kSmallCorpus);
  const auto edges = dir.Write("edges.tsv", "x\tparent\nz\tparent\n");
  ASSERT_EQ(Cli({"build-index", "--edges", edges, "--corpus", corpus, "--n", "2", "--out",
                 dir.Path("idx2")}).code,
            0);
  ASSERT_EQ(Cli({"retrieve", "--corpus", corpus, "--index", dir.Path("idx2"), "--k", "3",
                 "--out", dir.Path("runs.jsonl")}).code,
            0);
  // At n = 2, z is related to x, so every query has a relevant candidate.
  auto r = Cli({"eval", "--corpus", corpus, "--runs", dir.Path("runs.jsonl"), "--index",
                dir.Path("idx2"), "--k", "3", "--edges", edges});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.err.empty()) << r.err;
  auto report = nlohmann::json::parse(r.out);
  EXPECT_EQ(report["ranking"]["aggregate"], 1.0);
  EXPECT_EQ(report["ranking"]["metric"], "nn-CUI@3");
  EXPECT_EQ(report["ranking"]["config"]["n"], 2);

  // Under IoU, d3 = {z} has no relevant candidate: NDCG 0, still counted.
  ASSERT_EQ(Cli({"retrieve", "--corpus", corpus, "--measure", "iou", "--k", "3", "--out",
                 dir.Path("iou.jsonl")}).code,
            0);
  r = Cli({"eval", "--corpus", corpus, "--runs", dir.Path("iou.jsonl"), "--measure", "iou",
           "--k", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  report = nlohmann::json::parse(r.out);
  EXPECT_EQ(report["ranking"]["per_query"]["d3"], 0.0);
  EXPECT_EQ(report["ranking"]["aggregate"], 0.75);

  ASSERT_EQ(Cli({"build-index", "--edges", edges, "--corpus", corpus, "--out", dir.Path("idx")}).code, 0);

  const auto shuffled = dir.Write("shuffled.jsonl", "{\"query\": \"q\", \"ranked\": [\"d2\", \"d1\"]}\n");
  r = Cli({"eval", "--corpus", corpus, "--runs", shuffled, "--index", dir.Path("idx"), "--k",
           "2", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "query_id,nn-CUI@2\nq,0.859719\n");

  // Index checksum against a different edge file is only a warning.
  const auto other = dir.Write("other.tsv", "y\tparent\n");
  r = Cli({"eval", "--corpus", corpus, "--runs", shuffled, "--index", dir.Path("idx"), "--k",
           "2", "--edges", other});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("different edge file"), std::string::npos);

  const auto bad = dir.Write("bad.jsonl", "{\"query\": \"q\", \"ranked\": [\"ghost\"]}\n");
  r = Cli({"eval", "--corpus", corpus, "--runs", bad, "--index", dir.Path("idx")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("ghost"), std::string::npos);
}

TEST(EvalCli, PrecisionWithClassMapMatchesOracle) {
  TempDir dir;
  const auto fixture = testing_support::MakePlantedFixture(6);
  const auto edges = dir.Write("edges.tsv", testing_support::EdgeFileText(fixture.edges));
  const auto corpus = dir.Write("corpus.jsonl", testing_support::CorpusText(fixture.docs));
  const auto class_map = dir.Write("classes.json", testing_support::ClassMapText(fixture.class_map));
  ASSERT_EQ(Cli({"build-index", "--edges", edges, "--corpus", corpus, "--out", dir.Path("idx")}).code, 0);
  ASSERT_EQ(Cli({"retrieve", "--corpus", corpus, "--index", dir.Path("idx"), "--k", "5",
                 "--out", dir.Path("runs.jsonl")}).code,
            0);
  const auto r = Cli({"eval", "--corpus", corpus, "--runs", dir.Path("runs.jsonl"), "--index",
                      dir.Path("idx"), "--k", "5", "--class-map", class_map});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(r.out);
  ASSERT_EQ(report["precision"].size(), 1u);
  EXPECT_EQ(report["precision"][0]["config"]["label_categories"][0], "modality");

  const auto g = testing_support::GraphFromEdges(fixture.edges);
  const testing_support::FloydWarshall fw(g);
  const auto labels = testing_support::OracleLabels(fixture.docs, fixture.class_map.at("modality"));
  EXPECT_NEAR(report["precision"][0]["aggregate"].get<double>(),
              testing_support::OraclePrecisionAtK(fixture.docs, labels, fw, 1, 0.5, 5), 1e-12);

  EXPECT_EQ(Cli({"eval", "--corpus", corpus, "--runs", dir.Path("runs.jsonl"), "--index",
                 dir.Path("idx"), "--class-map", class_map, "--categories", "organ"})
                .code,
            1);
}

TEST(EvalCli, CorpusLabelsWithoutClassMap) {
  TempDir dir;
  const auto corpus = dir.Write(
      "corpus.jsonl",
      "{\"id\": \"a\", \"cuis\": [\"x\"], \"labels\": {\"modality\": \"CT\", \"organ\": \"head\"}}\n"
      "{\"id\": \"b\", \"cuis\": [\"x\"], \"labels\": {\"modality\": \"CT\", \"organ\": \"chest\"}}\n"
      "{\"id\": \"c\", \"cuis\": [\"y\"], \"labels\": {\"modality\": \"MR\", \"organ\": \"head\"}}\n");
  const auto runs = dir.Write("runs.jsonl",
                              "{\"query\": \"a\", \"ranked\": [\"b\", \"c\"]}\n"
                              "{\"query\": \"b\", \"ranked\": [\"a\", \"c\"]}\n"
                              "{\"query\": \"c\", \"ranked\": [\"a\", \"b\"]}\n");
  const auto r = Cli({"eval", "--corpus", corpus, "--runs", runs, "--measure", "iou", "--k", "2",
                      "--categories", "modality,organ", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "query_id,CUI@2,P@2[modality],P@2[organ],P@2[modality&organ]\n"
            "a,1.000000,0.500000,0.500000,0.000000\n"
            "b,1.000000,0.500000,0.000000,0.000000\n"
            "c,0.000000,0.000000,0.500000,0.000000\n");  // IDCG = 0 for c
}

TEST(AblateCli, ShapeAndCaching) {
  TempDir dir;
  const auto fixture = testing_support::MakePlantedFixture(10);
  const auto edges = dir.Write("edges.tsv", testing_support::EdgeFileText(fixture.edges));
  const auto corpus = dir.Write("corpus.jsonl", testing_support::CorpusText(fixture.docs));
  const auto class_map = dir.Write("classes.json", testing_support::ClassMapText(fixture.class_map));
  const std::vector<std::string> args = {"ablate", "--corpus", corpus, "--edges", edges,
                                         "--class-map", class_map, "--lambdas", "0,0.5,1",
                                         "--radii", "0,1", "--ks", "5,9", "--index-dir",
                                         dir.Path("cache")};
  const auto first = Cli(args);
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_TRUE(std::filesystem::exists(dir.Path("cache") + "/" + FileChecksum(edges) + "-n1.nnidx"));
  const auto second = Cli(args);
  EXPECT_EQ(second.out, first.out);

  std::istringstream lines(first.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "n,lambda,k,precision");
  std::map<std::tuple<int, std::string, int>, std::string> cell;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string n, lambda, k, p;
    std::getline(fields, n, ',');
    std::getline(fields, lambda, ',');
    std::getline(fields, k, ',');
    std::getline(fields, p, ',');
    cell[{std::stoi(n), lambda, std::stoi(k)}] = p;
  }
  ASSERT_EQ(cell.size(), 12u);
  auto at = [&](int n, const std::string& lambda, int k) {
    return cell.at(std::make_tuple(n, lambda, k));
  };
  for (int k : {5, 9}) {
    EXPECT_EQ(at(0, "0.000000", k), at(0, "0.500000", k));
    EXPECT_EQ(at(0, "0.000000", k), at(0, "1.000000", k));
    EXPECT_EQ(at(0, "0.500000", k), at(1, "0.000000", k));
    EXPECT_GE(std::stod(at(1, "0.500000", k)), std::stod(at(0, "0.500000", k)));
  }
}

TEST(AblateCli, GridValidation) {
  AblationGrid grid;
  EXPECT_THROW(grid.Validate(), ConfigError);
  grid = {{0.5}, {1}, {}};
  EXPECT_THROW(grid.Validate(), ConfigError);
  grid = {{1.5}, {1}, {3}};
  EXPECT_THROW(grid.Validate(), ConfigError);
  grid = {{0.5}, {1}, {0}};
  EXPECT_THROW(grid.Validate(), ConfigError);

  TempDir dir;
  const auto edges = dir.Write("edges.tsv", "a\tb\n");
  const auto corpus = dir.Write("corpus.jsonl", "{\"id\": \"a\", \"cuis\": [\"a\"]}\n");
  const auto classes = dir.Write("classes.json", "{\"m\": {\"A\": [\"a\"]}}\n");
  EXPECT_EQ(Cli({"ablate", "--corpus", corpus, "--edges", edges, "--class-map", classes,
                 "--radii", "1", "--ks", "3"}).code,
            1);
  EXPECT_EQ(Cli({"ablate", "--corpus", corpus, "--edges", edges, "--class-map", classes,
                 "--lambdas", "2", "--radii", "1", "--ks", "3"}).code,
            1);
}

TEST(Determinism, RepeatedCommandsAreByteIdentical) {
  TempDir dir;
  const auto fixture = testing_support::MakePlantedFixture(7);
  const auto edges = dir.Write("edges.tsv", testing_support::EdgeFileText(fixture.edges));
  const auto corpus = dir.Write("corpus.jsonl", testing_support::CorpusText(fixture.docs));
  ASSERT_EQ(Cli({"build-index", "--edges", edges, "--corpus", corpus, "--out", dir.Path("idx")}).code, 0);
  const auto r1 = Cli({"retrieve", "--corpus", corpus, "--index", dir.Path("idx"), "--k", "6"});
  const auto r2 = Cli({"retrieve", "--corpus", corpus, "--index", dir.Path("idx"), "--k", "6"});
  ASSERT_EQ(r1.code, 0);
  EXPECT_EQ(r1.out, r2.out);
  const auto runs = dir.Write("runs.jsonl", r1.out);
  const auto e1 = Cli({"eval", "--corpus", corpus, "--runs", runs, "--index", dir.Path("idx"), "--k", "6"});
  const auto e2 = Cli({"eval", "--corpus", corpus, "--runs", runs, "--index", dir.Path("idx"), "--k", "6"});
  ASSERT_EQ(e1.code, 0);
  EXPECT_EQ(e1.out, e2.out);
}

}  // namespace
}  // namespace nncui
