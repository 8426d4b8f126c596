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

#include "nncui/harness.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "nncui/errors.h"
#include "nncui/io.h"
#include "nncui/knowledge_graph.h"

namespace nncui {
namespace {

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void WriteFileOrStream(const std::string& path, const std::string& content,
                       std::ostream& fallback) {
  if (path.empty()) {
    fallback << content;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write " + path);
  f << content;
  if (!f) throw DataError("failed writing " + path);
}

void WarnGraph(const KnowledgeGraph& graph, std::ostream& err) {
  for (const auto& w : graph.warnings()) err << "warning: " << w << "\n";
}

struct LoadedIndex {
  std::optional<NeighborIndex> index;
  std::uint32_t radius = 1;
};

// Loads `path` when given and reconciles its radius with an explicit --n.
// With `edges` also given, a checksum mismatch is reported as a warning.
LoadedIndex ResolveIndex(const std::string& path, const std::string& edges,
                         std::optional<std::uint32_t> radius, std::ostream& err) {
  LoadedIndex out;
  if (path.empty()) {
    out.radius = radius.value_or(1);
    return out;
  }
  out.index = LoadIndex(path);
  if (radius && *radius != out.index->radius()) {
    throw ConfigError("--n " + std::to_string(*radius) + " conflicts with index radius " +
                      std::to_string(out.index->radius()));
  }
  out.radius = out.index->radius();
  if (!edges.empty()) {
    const std::string actual = FileChecksum(edges);
    if (actual != out.index->checksum()) {
      err << "warning: index " << path << " was built from a different edge file"
          << " (checksum " << out.index->checksum() << ", " << edges << " is "
          << actual << ")\n";
    }
  }
  return out;
}

}  // namespace

BuildIndexSummary BuildIndexCommand(const BuildIndexOptions& opts,
                                    std::ostream& out, std::ostream& err) {
  if (opts.edges.empty() || opts.corpus.empty() || opts.out.empty()) {
    throw ConfigError("build-index needs --edges, --corpus and --out");
  }
  const auto start = std::chrono::steady_clock::now();
  const KnowledgeGraph graph = ParseEdgeFile(opts.edges, opts.strict_cui);
  WarnGraph(graph, err);
  const Corpus corpus = LoadCorpus(opts.corpus);
  const auto vocab = corpus.Vocabulary();

  BuildIndexSummary summary;
  summary.missing_concepts = ConceptsMissingFrom(graph, vocab);
  for (const auto& c : summary.missing_concepts) {
    err << "warning: concept " << c << " is not in the graph; indexed without neighbors\n";
  }
  const NeighborIndex index =
      BuildIndex(graph, vocab, opts.radius, FileChecksum(opts.edges));
  SaveIndex(index, opts.out);
  summary.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start).count();
  summary.nodes = graph.num_nodes();
  summary.edges = graph.num_edges();
  summary.entries = index.size();

  out << "nodes: " << summary.nodes << "\n"
      << "edges: " << summary.edges << "\n"
      << "entries: " << summary.entries << "\n"
      << "radius: " << opts.radius << "\n"
      << "build_seconds: " << FormatFixed(summary.seconds) << "\n";
  return summary;
}

RelevanceResult RelevanceCommand(const RelevanceOptions& opts,
                                 std::ostream& out, std::ostream& err) {
  ConceptSet a;
  ConceptSet b;
  const bool by_doc = !opts.doc_a.empty() || !opts.doc_b.empty();
  const bool by_list = !opts.a.empty() || !opts.b.empty();
  if (by_doc == by_list) {
    throw ConfigError("give either --a/--b concept lists or --doc-a/--doc-b ids");
  }
  if (by_doc) {
    if (opts.doc_a.empty() || opts.doc_b.empty() || opts.corpus.empty()) {
      throw ConfigError("--doc-a and --doc-b need both ids and --corpus");
    }
    const Corpus corpus = LoadCorpus(opts.corpus);
    auto lookup = [&](const std::string& id) {
      const auto pos = corpus.Find(id);
      if (!pos) throw DataError("unknown document id: " + id);
      return corpus[*pos].concepts;
    };
    a = lookup(opts.doc_a);
    b = lookup(opts.doc_b);
  } else {
    a = ConceptSet(SplitList(opts.a));
    b = ConceptSet(SplitList(opts.b));
  }

  LoadedIndex loaded = ResolveIndex(opts.index, opts.edges, opts.radius, err);
  if (!loaded.index && !opts.edges.empty()) {
    const KnowledgeGraph graph = ParseEdgeFile(opts.edges, opts.strict_cui);
    WarnGraph(graph, err);
    std::vector<std::string> vocab(a.begin(), a.end());
    vocab.insert(vocab.end(), b.begin(), b.end());
    loaded.index = BuildIndex(graph, vocab, loaded.radius, FileChecksum(opts.edges));
  }
  const RelevanceParams params(opts.lambda, loaded.radius);
  if (!loaded.index && params.lambda() > 0.0 && params.radius() > 0) {
    throw ConfigError("nn-IoU needs --index or --edges");
  }

  RelevanceResult result;
  result.iou = Iou(a, b);
  result.nn_iou = loaded.index ? NnIou(a, b, params, *loaded.index) : result.iou;
  out << "iou\t" << FormatFixed(result.iou) << "\n"
      << "nn-iou\t" << FormatFixed(result.nn_iou) << "\n";
  return result;
}

std::vector<RankingRun> RetrieveCommand(const RetrieveOptions& opts,
                                        std::ostream& out, std::ostream& err) {
  if (opts.corpus.empty()) throw ConfigError("retrieve needs --corpus");
  if (opts.k == 0) throw ConfigError("k must be a positive integer");
  const LoadedIndex loaded = ResolveIndex(opts.index, opts.edges, opts.radius, err);
  const RelevanceParams params(opts.lambda, loaded.radius);
  if (opts.measure == Measure::kNnIou && !loaded.index && params.lambda() > 0.0 &&
      params.radius() > 0) {
    throw ConfigError("--measure nniou with lambda > 0 needs --index");
  }
  const Corpus corpus = LoadCorpus(opts.corpus);
  if (corpus.size() < 2) throw DataError("corpus needs at least two documents");

  const auto sets = corpus.ConceptSets();
  const IndexedScorer scorer(sets, opts.measure, params,
                             loaded.index ? &*loaded.index : nullptr);
  auto runs = RetrieveAll(corpus, scorer, opts.k);
  std::ostringstream buf;
  WriteRuns(buf, runs);
  WriteFileOrStream(opts.out, buf.str(), out);
  return runs;
}

namespace {

std::string EvalCsv(const EvalResult& result) {
  std::string csv = "query_id," + result.ranking.metric;
  for (const auto& p : result.precision) {
    std::string name = p.metric + "[";
    for (std::size_t i = 0; i < p.label_categories.size(); ++i) {
      if (i) name += "&";
      name += p.label_categories[i];
    }
    csv += "," + name + "]";
  }
  csv += "\n";
  for (const auto& [id, score] : result.ranking.per_query) {
    csv += id + "," + FormatFixed(score);
    for (const auto& p : result.precision) {
      csv += ",";
      if (auto it = p.per_query.find(id); it != p.per_query.end()) {
        csv += FormatFixed(it->second);
      }
    }
    csv += "\n";
  }
  return csv;
}

}  // namespace

EvalResult EvalCommand(const EvalOptions& opts, std::ostream& out,
                       std::ostream& err) {
  if (opts.corpus.empty() || opts.runs.empty()) {
    throw ConfigError("eval needs --corpus and --runs");
  }
  const LoadedIndex loaded = ResolveIndex(opts.index, opts.edges, opts.radius, err);
  EvalConfig cfg;
  cfg.k = opts.k;
  cfg.measure = opts.measure;
  cfg.relevance = RelevanceParams(opts.lambda, loaded.radius);
  cfg.Validate();

  const Corpus corpus = LoadCorpus(opts.corpus);
  const auto runs = LoadRuns(opts.runs);

  EvalResult result;
  result.ranking = NnCuiAtK(corpus, runs, cfg, loaded.index ? &*loaded.index : nullptr);

  if (!opts.class_map.empty() || !opts.categories.empty()) {
    Corpus labeled = corpus;
    std::vector<Exclusion> label_exclusions;
    std::vector<std::string> categories = opts.categories;
    if (!opts.class_map.empty()) {
      const ClassMap class_map = LoadClassMap(opts.class_map);
      for (const auto& c : categories) {
        if (!class_map.count(c)) throw ConfigError("unknown label category: " + c);
      }
      if (categories.empty()) {
        for (const auto& [c, classes] : class_map) categories.push_back(c);
      }
      LabeledCorpus lc = ApplyClassMap(corpus, class_map);
      labeled = std::move(lc.corpus);
      label_exclusions = std::move(lc.exclusions);
    }
    // Each category on its own, then their conjunction.
    std::vector<std::vector<std::string>> groups;
    for (const auto& c : categories) groups.push_back({c});
    if (categories.size() > 1) groups.push_back(categories);
    for (const auto& group : groups) {
      MetricReport p = PrecisionAtK(labeled, runs, opts.k, group);
      for (const auto& e : label_exclusions) {
        const auto colon = e.reason.find(':');
        const std::string category = e.reason.substr(0, colon);
        if (std::find(group.begin(), group.end(), category) != group.end()) {
          p.notes.push_back("label mapping for " + e.doc_id + ": " + e.reason);
        }
      }
      result.precision.push_back(std::move(p));
    }
  }

  std::string content;
  if (opts.format == ReportFormat::kCsv) {
    content = EvalCsv(result);
  } else {
    nlohmann::ordered_json j;
    j["ranking"] = ReportToJson(result.ranking);
    nlohmann::ordered_json precision = nlohmann::ordered_json::array();
    for (const auto& p : result.precision) precision.push_back(ReportToJson(p));
    j["precision"] = std::move(precision);
    content = j.dump(2) + "\n";
  }
  WriteFileOrStream(opts.out, content, out);
  return result;
}

void AblationGrid::Validate() const {
  if (lambdas.empty() || radii.empty() || k_values.empty()) {
    throw ConfigError("ablation grid needs at least one lambda, n and k");
  }
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) {
      throw ConfigError("ablation lambda out of [0, 1]: " + std::to_string(l));
    }
  }
  for (std::size_t k : k_values) {
    if (k == 0) throw ConfigError("ablation k must be positive");
  }
}

std::vector<AblationRow> RunAblation(const Corpus& corpus,
                                     const KnowledgeGraph& graph,
                                     const std::string& graph_checksum,
                                     const ClassMap& class_map,
                                     const std::vector<std::string>& categories,
                                     const AblationGrid& grid,
                                     const std::string& index_dir) {
  grid.Validate();
  if (corpus.size() < 2) throw DataError("corpus needs at least two documents");
  std::vector<std::string> cats = categories;
  if (cats.empty()) {
    for (const auto& [c, classes] : class_map) cats.push_back(c);
  }
  for (const auto& c : cats) {
    if (!class_map.count(c)) throw ConfigError("unknown label category: " + c);
  }
  const Corpus labeled = ApplyClassMap(corpus, class_map).corpus;
  const auto sets = corpus.ConceptSets();
  const auto vocab = corpus.Vocabulary();
  const std::size_t max_k = *std::max_element(grid.k_values.begin(), grid.k_values.end());

  // Indexes are reused per (edge-file checksum, radius).
  std::map<std::pair<std::string, std::uint32_t>, NeighborIndex> cache;
  auto index_for = [&](std::uint32_t radius) -> const NeighborIndex& {
    const auto key = std::make_pair(graph_checksum, radius);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::optional<NeighborIndex> index;
    std::filesystem::path file;
    if (!index_dir.empty()) {
      file = std::filesystem::path(index_dir) /
             (graph_checksum + "-n" + std::to_string(radius) + ".nnidx");
      if (std::filesystem::exists(file)) {
        NeighborIndex cached = LoadIndex(file.string());
        const bool covers = std::all_of(vocab.begin(), vocab.end(), [&](const std::string& c) {
          return cached.Contains(c);
        });
        if (cached.radius() == radius && cached.checksum() == graph_checksum && covers) {
          index = std::move(cached);
        }
      }
    }
    if (!index) {
      index = BuildIndex(graph, vocab, radius, graph_checksum);
      if (!file.empty()) {
        std::filesystem::create_directories(file.parent_path());
        SaveIndex(*index, file.string());
      }
    }
    return cache.emplace(key, std::move(*index)).first->second;
  };

  std::vector<AblationRow> rows;
  for (std::uint32_t radius : grid.radii) {
    const NeighborIndex& index = index_for(radius);
    for (double lambda : grid.lambdas) {
      const IndexedScorer scorer(sets, Measure::kNnIou, RelevanceParams(lambda, radius),
                                 &index);
      const auto runs = RetrieveAll(corpus, scorer, max_k);
      for (std::size_t k : grid.k_values) {
        std::vector<RankingRun> cut = runs;
        for (auto& r : cut) {
          if (r.ranked_ids.size() > k) r.ranked_ids.resize(k);
        }
        const MetricReport p = PrecisionAtK(labeled, cut, k, cats);
        rows.push_back({radius, lambda, k, p.aggregate});
      }
    }
  }

  // With n = 0 nothing is related, so lambda has no effect.
  for (const auto& row : rows) {
    if (row.radius != 0) continue;
    for (const auto& other : rows) {
      if (other.radius == 0 && other.k == row.k && other.precision != row.precision) {
        throw InternalError("n = 0 ablation rows differ across lambda at k = " +
                            std::to_string(row.k));
      }
    }
  }
  return rows;
}

std::string AblationCsv(const std::vector<AblationRow>& rows) {
  std::string csv = "n,lambda,k,precision\n";
  for (const auto& r : rows) {
    csv += std::to_string(r.radius) + "," + FormatFixed(r.lambda) + "," +
           std::to_string(r.k) + "," + FormatFixed(r.precision) + "\n";
  }
  return csv;
}

std::vector<AblationRow> AblateCommand(const AblateOptions& opts,
                                       std::ostream& out, std::ostream& err) {
  if (opts.corpus.empty() || opts.edges.empty() || opts.class_map.empty()) {
    throw ConfigError("ablate needs --corpus, --edges and --class-map");
  }
  opts.grid.Validate();
  const KnowledgeGraph graph = ParseEdgeFile(opts.edges, opts.strict_cui);
  WarnGraph(graph, err);
  const Corpus corpus = LoadCorpus(opts.corpus);
  const ClassMap class_map = LoadClassMap(opts.class_map);
  const auto rows = RunAblation(corpus, graph, FileChecksum(opts.edges), class_map,
                                opts.categories, opts.grid, opts.index_dir);
  WriteFileOrStream(opts.out, AblationCsv(rows), out);
  return rows;
}

}  // namespace nncui
