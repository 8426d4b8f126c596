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

#ifndef NNCUI_HARNESS_H_
#define NNCUI_HARNESS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nncui/neighbor_index.h"
#include "nncui/ranking_eval.h"
#include "nncui/relevance.h"

namespace nncui {

// Command implementations behind the `nncui` executable. Each one throws the
// library error types; RunCli turns them into exit statuses.

struct BuildIndexOptions {
  std::string edges;
  std::string corpus;
  std::string out;
  std::uint32_t radius = 1;
  bool strict_cui = false;
};

struct BuildIndexSummary {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t entries = 0;
  std::vector<std::string> missing_concepts;
  double seconds = 0.0;
};

BuildIndexSummary BuildIndexCommand(const BuildIndexOptions& opts,
                                    std::ostream& out, std::ostream& err);

struct RelevanceOptions {
  // Comma-separated concept lists, or document ids resolved in `corpus`.
  std::string a;
  std::string b;
  std::string doc_a;
  std::string doc_b;
  std::string corpus;
  // Either a prebuilt index or an edge file to compute neighbors from.
  std::string index;
  std::string edges;
  double lambda = 0.5;
  std::optional<std::uint32_t> radius;
  bool strict_cui = false;
};

struct RelevanceResult {
  double iou = 0.0;
  double nn_iou = 0.0;
};

RelevanceResult RelevanceCommand(const RelevanceOptions& opts,
                                 std::ostream& out, std::ostream& err);

struct RetrieveOptions {
  std::string corpus;
  std::string index;
  std::string edges;  // only used to check the index checksum
  std::string out;    // empty: write to `out` stream
  double lambda = 0.5;
  std::optional<std::uint32_t> radius;
  std::size_t k = 10;
  Measure measure = Measure::kNnIou;
};

std::vector<RankingRun> RetrieveCommand(const RetrieveOptions& opts,
                                        std::ostream& out, std::ostream& err);

enum class ReportFormat { kJson, kCsv };

struct EvalOptions {
  std::string corpus;
  std::string runs;
  std::string index;
  std::string edges;
  std::string class_map;
  std::vector<std::string> categories;
  std::string out;
  double lambda = 0.5;
  std::optional<std::uint32_t> radius;
  std::size_t k = 10;
  Measure measure = Measure::kNnIou;
  ReportFormat format = ReportFormat::kJson;
};

struct EvalResult {
  MetricReport ranking;
  std::vector<MetricReport> precision;
};

EvalResult EvalCommand(const EvalOptions& opts, std::ostream& out,
                       std::ostream& err);

struct AblationGrid {
  std::vector<double> lambdas;
  std::vector<std::uint32_t> radii;
  std::vector<std::size_t> k_values;

  // Throws ConfigError on an empty list or an out-of-range value.
  void Validate() const;
};

struct AblationRow {
  std::uint32_t radius;
  double lambda;
  std::size_t k;
  double precision;
};

struct AblateOptions {
  std::string corpus;
  std::string edges;
  std::string class_map;
  std::vector<std::string> categories;  // empty: every class-map category
  std::string index_dir;                // optional on-disk index cache
  std::string out;
  AblationGrid grid;
  bool strict_cui = false;
};

// Precision@k of nn-IoU retrieval for every (n, lambda, k) cell. Rows at
// n = 0 must not vary with lambda; a violation throws InternalError.
std::vector<AblationRow> RunAblation(const Corpus& corpus,
                                     const KnowledgeGraph& graph,
                                     const std::string& graph_checksum,
                                     const ClassMap& class_map,
                                     const std::vector<std::string>& categories,
                                     const AblationGrid& grid,
                                     const std::string& index_dir = "");

std::string AblationCsv(const std::vector<AblationRow>& rows);

std::vector<AblationRow> AblateCommand(const AblateOptions& opts,
                                       std::ostream& out, std::ostream& err);

// Parses argv and runs one subcommand. Returns 0 on success, 1 on usage or
// configuration errors, 2 on data errors, 3 on internal errors.
int RunCli(int argc, const char* const argv[], std::ostream& out,
           std::ostream& err);

}  // namespace nncui

#endif  // NNCUI_HARNESS_H_
