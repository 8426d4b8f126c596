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

#ifndef NNCUI_RELEVANCE_H_
#define NNCUI_RELEVANCE_H_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nncui/knowledge_graph.h"
#include "nncui/neighbor_index.h"

namespace nncui {

// Deduplicated, lexicographically sorted set of concept identifiers.
class ConceptSet {
 public:
  ConceptSet() = default;
  explicit ConceptSet(std::vector<std::string> members);
  ConceptSet(std::initializer_list<std::string> members)
      : ConceptSet(std::vector<std::string>(members)) {}

  const std::vector<std::string>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(std::string_view id) const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend bool operator==(const ConceptSet&, const ConceptSet&) = default;

 private:
  std::vector<std::string> members_;
};

// Weight of related-but-distinct concepts and the hop threshold for
// counting two concepts as related. Defaults: lambda 0.5, radius 1.
class RelevanceParams {
 public:
  RelevanceParams() = default;
  // Throws ConfigError unless 0 <= lambda <= 1.
  RelevanceParams(double lambda, std::uint32_t radius);

  double lambda() const { return lambda_; }
  std::uint32_t radius() const { return radius_; }

  friend bool operator==(const RelevanceParams&,
                         const RelevanceParams&) = default;

 private:
  double lambda_ = 0.5;
  std::uint32_t radius_ = 1;
};

enum class Measure { kIou, kNnIou };

// "iou" / "nniou"; throws ConfigError otherwise.
Measure ParseMeasure(std::string_view name);
std::string_view MeasureName(Measure m);

// |A n B| / |A u B|, and 0 when both sets are empty.
double Iou(const ConceptSet& a, const ConceptSet& b);

// Concepts outside A n B that take part in some (a in A, b in B) pair within
// the index radius. Unknown concepts only match exactly.
ConceptSet RelatedConcepts(const ConceptSet& a, const ConceptSet& b,
                           const NeighborIndex& index);

// (|A n B| + lambda * |rel(A, B)|) / |A u B|, 0 for an empty union. Throws
// ConfigError when the index radius differs from params.radius().
double NnIou(const ConceptSet& a, const ConceptSet& b,
             const RelevanceParams& params, const NeighborIndex& index);

// Same quantities computed straight from the graph: one shortest-path search
// per concept pair, following the pairwise loop literally. Concepts missing
// from the graph only match exactly.
ConceptSet RelatedConceptsByGraph(const ConceptSet& a, const ConceptSet& b,
                                  const KnowledgeGraph& graph,
                                  std::uint32_t radius);
double NnIouByGraph(const ConceptSet& a, const ConceptSet& b,
                    const RelevanceParams& params, const KnowledgeGraph& graph);

// Scores pairs drawn from a fixed list of concept sets (usually one per
// corpus document). Implementations are safe for concurrent Score calls.
class SetScorer {
 public:
  virtual ~SetScorer() = default;
  virtual std::size_t size() const = 0;
  virtual double Score(std::size_t i, std::size_t j) const = 0;
};

// Index-backed scorer. Sets are interned into the index's symbol space once
// so each Score is a pair of sorted-integer merges.
class IndexedScorer final : public SetScorer {
 public:
  // `index` may be null when the measure is IoU or the params make the
  // related term vanish (lambda 0 or radius 0); otherwise ConfigError.
  // The index must outlive the scorer.
  IndexedScorer(std::span<const ConceptSet> sets, Measure measure,
                const RelevanceParams& params, const NeighborIndex* index);

  std::size_t size() const override { return sets_.size(); }
  double Score(std::size_t i, std::size_t j) const override;

  // |rel| for the pair, for diagnostics and tests.
  std::size_t RelatedCount(std::size_t i, std::size_t j) const;

 private:
  bool HasNeighborIn(std::uint32_t id,
                     const std::vector<std::uint32_t>& other) const;

  Measure measure_;
  RelevanceParams params_;
  const NeighborIndex* index_;
  std::uint32_t index_symbols_ = 0;
  std::vector<std::vector<std::uint32_t>> sets_;
};

// Graph-backed scorer that recomputes distances for every concept pair.
// Slow by construction; kept as the no-precomputation baseline.
class GraphScorer final : public SetScorer {
 public:
  GraphScorer(std::span<const ConceptSet> sets, Measure measure,
              const RelevanceParams& params, const KnowledgeGraph& graph);

  std::size_t size() const override { return sets_.size(); }
  double Score(std::size_t i, std::size_t j) const override;

 private:
  Measure measure_;
  RelevanceParams params_;
  const KnowledgeGraph& graph_;
  std::vector<ConceptSet> sets_;
};

}  // namespace nncui

#endif  // NNCUI_RELEVANCE_H_
