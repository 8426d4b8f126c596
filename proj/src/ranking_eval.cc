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

#include "nncui/ranking_eval.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "nncui/errors.h"
#include "nncui/parallel.h"

namespace nncui {

Corpus::Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
  positions_.reserve(docs_.size());
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    if (docs_[i].id.empty()) throw DataError("document with empty id");
    if (!positions_.emplace(docs_[i].id, i).second) {
      throw DataError("duplicate document id: " + docs_[i].id);
    }
  }
}

std::optional<std::size_t> Corpus::Find(std::string_view id) const {
  auto it = positions_.find(std::string(id));
  if (it == positions_.end()) return std::nullopt;
  return it->second;
}

std::vector<ConceptSet> Corpus::ConceptSets() const {
  std::vector<ConceptSet> sets;
  sets.reserve(docs_.size());
  for (const auto& d : docs_) sets.push_back(d.concepts);
  return sets;
}

std::vector<std::string> Corpus::Vocabulary() const {
  std::set<std::string> vocab;
  for (const auto& d : docs_) vocab.insert(d.concepts.begin(), d.concepts.end());
  return {vocab.begin(), vocab.end()};
}

void EvalConfig::Validate() const {
  if (k == 0) throw ConfigError("k must be a positive integer");
}

std::vector<ScoredDoc> RankCandidates(const Corpus& corpus,
                                      const SetScorer& scorer,
                                      std::size_t query,
                                      std::optional<std::size_t> limit) {
  std::vector<ScoredDoc> scored;
  scored.reserve(corpus.size());
  for (std::size_t j = 0; j < corpus.size(); ++j) {
    if (j == query) continue;
    scored.push_back({j, scorer.Score(j, query)});
  }
  auto better = [&](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return corpus[a.pos].id < corpus[b.pos].id;
  };
  const std::size_t keep = std::min(scored.size(), limit.value_or(scored.size()));
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), better);
  scored.resize(keep);
  return scored;
}

RankingRun GroundTruthRanking(const Document& query, const Corpus& corpus,
                              const EvalConfig& cfg, const NeighborIndex* index) {
  cfg.Validate();
  std::vector<Document> pool{query};
  for (const auto& d : corpus.docs()) {
    if (d.id != query.id) pool.push_back(d);
  }
  if (pool.size() == 1) {
    throw EvaluationError("no candidates to rank for query " + query.id);
  }
  const Corpus scoped(std::move(pool));
  const auto sets = scoped.ConceptSets();
  const IndexedScorer scorer(sets, cfg.measure, cfg.relevance, index);

  RankingRun run{query.id, {}};
  for (const auto& s : RankCandidates(scoped, scorer, 0)) {
    run.ranked_ids.push_back(scoped[s.pos].id);
  }
  return run;
}

std::vector<RankingRun> RetrieveAll(const Corpus& corpus,
                                    const SetScorer& scorer, std::size_t k) {
  if (k == 0) throw ConfigError("k must be a positive integer");
  std::vector<RankingRun> runs(corpus.size());
  ParallelFor(corpus.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      runs[q].query_id = corpus[q].id;
      for (const auto& s : RankCandidates(corpus, scorer, q, k)) {
        runs[q].ranked_ids.push_back(corpus[s.pos].id);
      }
    }
  });
  return runs;
}

double Dcg(std::span<const double> relevances) {
  double dcg = 0.0;
  for (std::size_t j = 1; j <= relevances.size(); ++j) {
    dcg += relevances[j - 1] / std::log2(static_cast<double>(j) + 1.0);
  }
  return dcg;
}

double NdcgAtK(std::span<const double> system, std::span<const double> ideal,
               std::size_t k) {
  std::vector<double> sys(k, 0.0);
  std::vector<double> best(k, 0.0);
  std::copy_n(system.begin(), std::min(k, system.size()), sys.begin());
  std::copy_n(ideal.begin(), std::min(k, ideal.size()), best.begin());
  const double idcg = Dcg(best);
  if (idcg == 0.0) return 0.0;
  return Dcg(sys) / idcg;
}

namespace {

// Checks every run against the corpus; returns, per corpus position, the
// index of its run or -1.
std::vector<std::ptrdiff_t> IndexRuns(const Corpus& corpus,
                                      std::span<const RankingRun> runs) {
  std::vector<std::ptrdiff_t> run_of(corpus.size(), -1);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& run = runs[r];
    const auto q = corpus.Find(run.query_id);
    if (!q) throw EvaluationError("run references unknown query id: " + run.query_id);
    if (run_of[*q] != -1) {
      throw EvaluationError("more than one run for query " + run.query_id);
    }
    std::set<std::string_view> seen;
    for (const auto& id : run.ranked_ids) {
      if (!corpus.Find(id)) {
        throw EvaluationError("run for " + run.query_id +
                              " references unknown document id: " + id);
      }
      if (id == run.query_id) {
        throw EvaluationError("run for " + run.query_id + " retrieves the query itself");
      }
      if (!seen.insert(id).second) {
        throw EvaluationError("run for " + run.query_id + " lists " + id + " twice");
      }
    }
    run_of[*q] = static_cast<std::ptrdiff_t>(r);
  }
  return run_of;
}

double Mean(const std::map<std::string, double>& scores) {
  double sum = 0.0;
  for (const auto& [id, s] : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

}  // namespace

MetricReport NnCuiAtK(const Corpus& corpus, std::span<const RankingRun> runs,
                      const EvalConfig& cfg, const NeighborIndex* index) {
  const auto sets = corpus.ConceptSets();
  const IndexedScorer scorer(sets, cfg.measure, cfg.relevance, index);
  return NnCuiAtK(corpus, runs, cfg, scorer);
}

MetricReport NnCuiAtK(const Corpus& corpus, std::span<const RankingRun> runs,
                      const EvalConfig& cfg, const SetScorer& scorer) {
  cfg.Validate();
  if (scorer.size() != corpus.size()) {
    throw std::logic_error("scorer does not cover the corpus");
  }
  if (corpus.size() < 2) {
    throw EvaluationError("corpus needs at least two documents");
  }
  const auto run_of = IndexRuns(corpus, runs);

  MetricReport report;
  report.metric = std::string(cfg.measure == Measure::kNnIou ? "nn-CUI@" : "CUI@") +
                  std::to_string(cfg.k);
  report.config = cfg;

  std::vector<std::size_t> queries;
  for (std::size_t q = 0; q < corpus.size(); ++q) {
    if (run_of[q] < 0) {
      report.exclusions.push_back({corpus[q].id, "no run for query"});
    } else {
      queries.push_back(q);
    }
  }
  if (queries.empty()) throw EvaluationError("no runs match the corpus");

  std::vector<double> ndcg(queries.size(), 0.0);
  std::vector<char> padded(queries.size(), 0);
  ParallelFor(queries.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> system;
    std::vector<double> ideal;
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t q = queries[i];
      const auto& ranked = runs[static_cast<std::size_t>(run_of[q])].ranked_ids;
      system.clear();
      for (std::size_t j = 0; j < std::min(cfg.k, ranked.size()); ++j) {
        system.push_back(scorer.Score(*corpus.Find(ranked[j]), q));
      }
      padded[i] = ranked.size() < cfg.k;
      ideal.clear();
      for (const auto& s : RankCandidates(corpus, scorer, q, cfg.k)) {
        ideal.push_back(s.score);
      }
      ndcg[i] = NdcgAtK(system, ideal, cfg.k);
    }
  });

  std::size_t padded_count = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    report.per_query.emplace(corpus[queries[i]].id, ndcg[i]);
    padded_count += padded[i] != 0;
  }
  report.aggregate = Mean(report.per_query);
  if (padded_count > 0) {
    report.notes.push_back(std::to_string(padded_count) +
                           " run(s) shorter than k were padded with zero relevance");
  }
  return report;
}

MetricReport PrecisionAtK(const Corpus& corpus, std::span<const RankingRun> runs,
                          std::size_t k,
                          std::span<const std::string> label_categories) {
  if (k == 0) throw ConfigError("k must be a positive integer");
  if (label_categories.empty()) throw ConfigError("no label categories requested");
  for (const auto& category : label_categories) {
    const bool known = std::any_of(corpus.docs().begin(), corpus.docs().end(),
                                   [&](const Document& d) {
                                     return d.labels.count(category) > 0;
                                   });
    if (!known) throw ConfigError("unknown label category: " + category);
  }
  const auto run_of = IndexRuns(corpus, runs);

  MetricReport report;
  report.metric = "P@" + std::to_string(k);
  report.config.k = k;
  report.label_categories.assign(label_categories.begin(), label_categories.end());

  auto has_all = [&](const Document& d) {
    return std::all_of(label_categories.begin(), label_categories.end(),
                       [&](const std::string& c) { return d.labels.count(c) > 0; });
  };
  auto agrees = [&](const Document& q, const Document& r) {
    return std::all_of(label_categories.begin(), label_categories.end(),
                       [&](const std::string& c) {
                         auto it = r.labels.find(c);
                         return it != r.labels.end() && it->second == q.labels.at(c);
                       });
  };

  for (std::size_t q = 0; q < corpus.size(); ++q) {
    const Document& query = corpus[q];
    if (run_of[q] < 0) {
      report.exclusions.push_back({query.id, "no run for query"});
      continue;
    }
    if (!has_all(query)) {
      report.exclusions.push_back({query.id, "query lacks a requested label"});
      continue;
    }
    const auto& ranked = runs[static_cast<std::size_t>(run_of[q])].ranked_ids;
    std::size_t hits = 0;
    for (std::size_t j = 0; j < std::min(k, ranked.size()); ++j) {
      hits += agrees(query, corpus[*corpus.Find(ranked[j])]);
    }
    report.per_query.emplace(query.id,
                             static_cast<double>(hits) / static_cast<double>(k));
  }
  if (report.per_query.empty()) {
    throw EvaluationError("no labeled queries with runs to evaluate");
  }
  report.aggregate = Mean(report.per_query);
  return report;
}

LabelAssignment LabelFromConcepts(const Document& doc,
                                  const std::map<std::string, ConceptSet>& classes) {
  LabelAssignment out;
  for (const auto& [value, concepts] : classes) {
    const bool hit = std::any_of(concepts.begin(), concepts.end(),
                                 [&](const std::string& c) { return doc.concepts.contains(c); });
    if (hit) {
      ++out.matches;
      out.value = value;
    }
  }
  if (out.matches != 1) out.value.reset();
  return out;
}

LabeledCorpus ApplyClassMap(const Corpus& corpus, const ClassMap& class_map) {
  for (const auto& [category, classes] : class_map) {
    std::map<std::string, std::string> owner;
    for (const auto& [value, concepts] : classes) {
      for (const auto& c : concepts) {
        auto [it, fresh] = owner.emplace(c, value);
        if (!fresh) {
          throw ConfigError("class map category '" + category + "': concept " + c +
                            " maps to both " + it->second + " and " + value);
        }
      }
    }
  }

  LabeledCorpus out;
  std::vector<Document> docs;
  docs.reserve(corpus.size());
  for (const auto& doc : corpus.docs()) {
    Document labeled = doc;
    for (const auto& [category, classes] : class_map) {
      const LabelAssignment a = LabelFromConcepts(doc, classes);
      if (a.value) {
        labeled.labels[category] = *a.value;
        continue;
      }
      labeled.labels.erase(category);
      out.exclusions.push_back(
          {doc.id, category + ": " +
                       (a.matches == 0 ? std::string("no class concept present")
                                       : "ambiguous, " + std::to_string(a.matches) +
                                             " classes match")});
    }
    docs.push_back(std::move(labeled));
  }
  out.corpus = Corpus(std::move(docs));
  return out;
}

}  // namespace nncui
