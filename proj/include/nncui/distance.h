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

#ifndef NNCUI_DISTANCE_H_
#define NNCUI_DISTANCE_H_

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "nncui/knowledge_graph.h"

namespace nncui {

// Hop count between two concepts over the undirected is_a view, or
// Unreachable() when they sit in different components.
class Distance {
 public:
  static constexpr Distance Hops(std::uint32_t hops) { return Distance(hops); }
  static constexpr Distance Unreachable() { return Distance(kUnreachable); }

  constexpr bool reachable() const { return value_ != kUnreachable; }
  // Only meaningful when reachable().
  constexpr std::uint32_t hops() const { return value_; }

  // Threshold test used by approximate matching; never true for
  // unreachable pairs.
  constexpr bool Within(std::uint32_t radius) const {
    return reachable() && value_ <= radius;
  }

  friend constexpr bool operator==(Distance, Distance) = default;

  std::string ToString() const {
    return reachable() ? std::to_string(value_) : "unreachable";
  }

 private:
  static constexpr std::uint32_t kUnreachable =
      std::numeric_limits<std::uint32_t>::max();
  constexpr explicit Distance(std::uint32_t v) : value_(v) {}
  std::uint32_t value_;
};

// Breadth-first traversal state reusable across many searches on the same
// graph. A search stamps visited nodes with a generation counter so no
// per-call clearing of the bitmap is needed. Not thread-safe; use one per
// thread.
class BfsWorkspace {
 public:
  explicit BfsWorkspace(const KnowledgeGraph& graph);

  // Unbounded search from `source` stopping as soon as `target` is reached.
  Distance ShortestPath(NodeId source, NodeId target);

  // All nodes y with 0 < dist(source, y) <= radius, sorted by NodeId.
  // Never expands beyond depth `radius`.
  std::vector<NodeId> Neighborhood(NodeId source, std::uint32_t radius);

 private:
  void NextGeneration();

  const KnowledgeGraph& graph_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t generation_ = 0;
  std::vector<NodeId> frontier_;
  std::vector<NodeId> next_frontier_;
};

// Length of the shortest undirected path between two concepts. Throws
// LookupError for identifiers that are not graph nodes.
Distance ShortestPathLength(const KnowledgeGraph& graph, std::string_view x,
                            std::string_view y);
Distance ShortestPathLength(const KnowledgeGraph& graph, NodeId x, NodeId y);

// Concepts within `radius` hops of `x`, excluding `x`, sorted
// lexicographically.
std::vector<std::string> BoundedNeighborhood(const KnowledgeGraph& graph,
                                             std::string_view x,
                                             std::uint32_t radius);

}  // namespace nncui

#endif  // NNCUI_DISTANCE_H_
