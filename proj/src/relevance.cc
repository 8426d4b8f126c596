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

#include "nncui/relevance.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "nncui/distance.h"
#include "nncui/errors.h"

namespace nncui {

ConceptSet::ConceptSet(std::vector<std::string> members)
    : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool ConceptSet::contains(std::string_view id) const {
  return std::binary_search(members_.begin(), members_.end(), id,
                            [](std::string_view l, std::string_view r) { return l < r; });
}

RelevanceParams::RelevanceParams(double lambda, std::uint32_t radius)
    : lambda_(lambda), radius_(radius) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
}

Measure ParseMeasure(std::string_view name) {
  if (name == "iou") return Measure::kIou;
  if (name == "nniou") return Measure::kNnIou;
  throw ConfigError("unknown measure '" + std::string(name) +
                    "' (expected iou or nniou)");
}

std::string_view MeasureName(Measure m) {
  return m == Measure::kIou ? "iou" : "nniou";
}

namespace {

// Single place where the ratio is formed. With lambda == 0 or rel == 0 the
// numerator is exactly the intersection count, so nn-IoU and IoU agree
// bit for bit.
double Ratio(std::size_t intersection, std::size_t related, std::size_t uni,
             double lambda) {
  if (uni == 0) return 0.0;
  return (static_cast<double>(intersection) +
          lambda * static_cast<double>(related)) /
         static_cast<double>(uni);
}

std::size_t IntersectionSize(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

double Iou(const ConceptSet& a, const ConceptSet& b) {
  const std::size_t inter = IntersectionSize(a.members(), b.members());
  return Ratio(inter, 0, a.size() + b.size() - inter, 0.0);
}

ConceptSet RelatedConcepts(const ConceptSet& a, const ConceptSet& b,
                           const NeighborIndex& index) {
  std::vector<std::string> rel;
  auto collect = [&](const ConceptSet& from, const ConceptSet& other) {
    for (const auto& x : from) {
      if (other.contains(x)) continue;
      for (const auto& y : other) {
        if (index.AreNeighbors(x, y)) {
          rel.push_back(x);
          break;
        }
      }
    }
  };
  collect(a, b);
  collect(b, a);
  return ConceptSet(std::move(rel));
}

double NnIou(const ConceptSet& a, const ConceptSet& b,
             const RelevanceParams& params, const NeighborIndex& index) {
  if (index.radius() != params.radius()) {
    throw ConfigError("index radius " + std::to_string(index.radius()) +
                      " does not match n = " + std::to_string(params.radius()));
  }
  const std::size_t inter = IntersectionSize(a.members(), b.members());
  const std::size_t related = RelatedConcepts(a, b, index).size();
  return Ratio(inter, related, a.size() + b.size() - inter, params.lambda());
}

ConceptSet RelatedConceptsByGraph(const ConceptSet& a, const ConceptSet& b,
                                  const KnowledgeGraph& graph,
                                  std::uint32_t radius) {
  BfsWorkspace bfs(graph);
  std::vector<std::string> rel;
  auto in_rel = [&](const std::string& c) {
    return std::find(rel.begin(), rel.end(), c) != rel.end();
  };
  for (const auto& x : a) {
    const auto xid = graph.Find(x);
    for (const auto& y : b) {
      Distance d = Distance::Unreachable();
      if (x == y) {
        d = Distance::Hops(0);
      } else if (const auto yid = graph.Find(y); xid && yid) {
        d = bfs.ShortestPath(*xid, *yid);
      }
      if (!d.Within(radius)) continue;
      // No concept is counted twice, and shared concepts never count here.
      if (!b.contains(x) && !in_rel(x)) rel.push_back(x);
      if (!a.contains(y) && !in_rel(y)) rel.push_back(y);
    }
  }
  return ConceptSet(std::move(rel));
}

double NnIouByGraph(const ConceptSet& a, const ConceptSet& b,
                    const RelevanceParams& params, const KnowledgeGraph& graph) {
  const std::size_t inter = IntersectionSize(a.members(), b.members());
  const std::size_t related =
      RelatedConceptsByGraph(a, b, graph, params.radius()).size();
  return Ratio(inter, related, a.size() + b.size() - inter, params.lambda());
}

IndexedScorer::IndexedScorer(std::span<const ConceptSet> sets, Measure measure,
                             const RelevanceParams& params,
                             const NeighborIndex* index)
    : measure_(measure), params_(params), index_(index) {
  const bool needs_index = measure_ == Measure::kNnIou &&
                           params_.lambda() > 0.0 && params_.radius() > 0;
  if (needs_index && index_ == nullptr) {
    throw ConfigError("nn-IoU with lambda > 0 and n > 0 requires a neighbor index");
  }
  if (measure_ == Measure::kNnIou && index_ != nullptr &&
      index_->radius() != params_.radius()) {
    throw ConfigError("index radius " + std::to_string(index_->radius()) +
                      " does not match n = " + std::to_string(params_.radius()));
  }
  if (measure_ == Measure::kIou || !needs_index) index_ = nullptr;

  index_symbols_ =
      index_ ? static_cast<std::uint32_t>(index_->num_symbols()) : 0;
  std::unordered_map<std::string, std::uint32_t> extra;
  sets_.reserve(sets.size());
  for (const auto& set : sets) {
    std::vector<std::uint32_t> encoded;
    encoded.reserve(set.size());
    for (const auto& c : set) {
      std::optional<std::uint32_t> slot;
      if (index_) slot = index_->SlotOf(c);
      if (!slot) {
        slot = extra.try_emplace(c, index_symbols_ + static_cast<std::uint32_t>(extra.size()))
                   .first->second;
      }
      encoded.push_back(*slot);
    }
    std::sort(encoded.begin(), encoded.end());
    sets_.push_back(std::move(encoded));
  }
}

bool IndexedScorer::HasNeighborIn(std::uint32_t id,
                                  const std::vector<std::uint32_t>& other) const {
  if (id >= index_symbols_) return false;
  const auto neighbors = index_->SymmetricNeighbors(id);
  if (neighbors.size() <= other.size()) {
    for (std::uint32_t n : neighbors) {
      if (std::binary_search(other.begin(), other.end(), n)) return true;
    }
  } else {
    for (std::uint32_t o : other) {
      if (std::binary_search(neighbors.begin(), neighbors.end(), o)) return true;
    }
  }
  return false;
}

std::size_t IndexedScorer::RelatedCount(std::size_t i, std::size_t j) const {
  if (index_ == nullptr) return 0;
  const auto& a = sets_[i];
  const auto& b = sets_[j];
  std::size_t related = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && *ia < *ib)) {
      related += HasNeighborIn(*ia++, b);
    } else if (ia == a.end() || *ib < *ia) {
      related += HasNeighborIn(*ib++, a);
    } else {
      ++ia;
      ++ib;
    }
  }
  return related;
}

double IndexedScorer::Score(std::size_t i, std::size_t j) const {
  const auto& a = sets_[i];
  const auto& b = sets_[j];
  std::size_t inter = 0;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end() && ib != b.end();) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++inter;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  if (measure_ == Measure::kIou) return Ratio(inter, 0, uni, 0.0);
  return Ratio(inter, RelatedCount(i, j), uni, params_.lambda());
}

GraphScorer::GraphScorer(std::span<const ConceptSet> sets, Measure measure,
                         const RelevanceParams& params,
                         const KnowledgeGraph& graph)
    : measure_(measure), params_(params), graph_(graph),
      sets_(sets.begin(), sets.end()) {}

double GraphScorer::Score(std::size_t i, std::size_t j) const {
  if (measure_ == Measure::kIou) return Iou(sets_[i], sets_[j]);
  return NnIouByGraph(sets_[i], sets_[j], params_, graph_);
}

}  // namespace nncui
