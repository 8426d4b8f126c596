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

#ifndef NNCUI_RANKING_EVAL_H_
#define NNCUI_RANKING_EVAL_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nncui/neighbor_index.h"
#include "nncui/relevance.h"

namespace nncui {

// One corpus item: an image (or any retrievable unit) described by its
// concept set and optional categorical labels such as modality or organ.
struct Document {
  std::string id;
  ConceptSet concepts;
  std::map<std::string, std::string> labels;
};

// Documents with unique ids, kept in input order.
class Corpus {
 public:
  Corpus() = default;
  // Throws DataError on a duplicate or empty id.
  explicit Corpus(std::vector<Document> docs);

  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  const Document& operator[](std::size_t i) const { return docs_[i]; }
  const std::vector<Document>& docs() const { return docs_; }

  std::optional<std::size_t> Find(std::string_view id) const;

  // Concept sets in document order.
  std::vector<ConceptSet> ConceptSets() const;
  // Sorted, unique union of all concepts.
  std::vector<std::string> Vocabulary() const;

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, std::size_t> positions_;
};

// A system's answer for one query, best first.
struct RankingRun {
  std::string query_id;
  std::vector<std::string> ranked_ids;

  friend bool operator==(const RankingRun&, const RankingRun&) = default;
};

struct EvalConfig {
  std::size_t k = 10;
  RelevanceParams relevance;
  Measure measure = Measure::kNnIou;

  // Throws ConfigError when k == 0.
  void Validate() const;
};

struct Exclusion {
  std::string doc_id;
  std::string reason;
};

struct MetricReport {
  std::string metric;
  std::map<std::string, double> per_query;
  double aggregate = 0.0;
  EvalConfig config;
  std::vector<std::string> label_categories;
  std::vector<Exclusion> exclusions;
  std::vector<std::string> notes;
};

struct ScoredDoc {
  std::size_t pos;
  double score;
};

// Candidates for corpus[query] (every other document) by descending score,
// ties by ascending id. Returns at most `limit` entries when given.
std::vector<ScoredDoc> RankCandidates(const Corpus& corpus,
                                      const SetScorer& scorer,
                                      std::size_t query,
                                      std::optional<std::size_t> limit = {});

// Full ideal ordering of the corpus for `query`, which is removed from the
// pool by id if present. `index` may be null for IoU. Throws
// EvaluationError when no candidate remains.
RankingRun GroundTruthRanking(const Document& query, const Corpus& corpus,
                              const EvalConfig& cfg, const NeighborIndex* index);

// Top-k run for every document of the corpus, in corpus order.
std::vector<RankingRun> RetrieveAll(const Corpus& corpus,
                                    const SetScorer& scorer, std::size_t k);

// sum_j rel_j / log2(j + 1), j starting at 1.
double Dcg(std::span<const double> relevances);

// DCG of the system list over DCG of the ideal list, both cut or zero-padded
// to k. Zero when the ideal DCG is zero.
double NdcgAtK(std::span<const double> system, std::span<const double> ideal,
               std::size_t k);

// Mean NDCG@k over the queries that have a run. Relevance of each returned
// document is the configured measure against the query; the ideal list is
// the ground-truth ranking over all other documents.
MetricReport NnCuiAtK(const Corpus& corpus, std::span<const RankingRun> runs,
                      const EvalConfig& cfg, const NeighborIndex* index);
// Same, with an explicit scorer over corpus.ConceptSets().
MetricReport NnCuiAtK(const Corpus& corpus, std::span<const RankingRun> runs,
                      const EvalConfig& cfg, const SetScorer& scorer);

// Fraction of the top-k results (denominator k) whose labels agree with the
// query on every listed category.
MetricReport PrecisionAtK(const Corpus& corpus, std::span<const RankingRun> runs,
                          std::size_t k,
                          std::span<const std::string> label_categories);

// category -> (class value -> concepts that signal it)
using ClassMap = std::map<std::string, std::map<std::string, ConceptSet>>;

struct LabelAssignment {
  std::optional<std::string> value;
  // Number of class values whose concepts intersect the document.
  std::size_t matches = 0;
};

// Picks the single class value whose concept set intersects the document.
// Zero or several matches leave the label unassigned.
LabelAssignment LabelFromConcepts(const Document& doc,
                                  const std::map<std::string, ConceptSet>& classes);

struct LabeledCorpus {
  Corpus corpus;
  std::vector<Exclusion> exclusions;
};

// Replaces each document's labels for the categories in `class_map` with
// the concept-derived ones. Throws ConfigError when two values of one
// category share a concept.
LabeledCorpus ApplyClassMap(const Corpus& corpus, const ClassMap& class_map);

}  // namespace nncui

#endif  // NNCUI_RANKING_EVAL_H_
