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

#include "nncui/distance.h"

#include <algorithm>

namespace nncui {

BfsWorkspace::BfsWorkspace(const KnowledgeGraph& graph)
    : graph_(graph), stamp_(graph.num_nodes(), 0) {}

void BfsWorkspace::NextGeneration() {
  if (++generation_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    generation_ = 1;
  }
  frontier_.clear();
  next_frontier_.clear();
}

Distance BfsWorkspace::ShortestPath(NodeId source, NodeId target) {
  if (source == target) return Distance::Hops(0);
  NextGeneration();
  stamp_[source] = generation_;
  frontier_.push_back(source);
  for (std::uint32_t depth = 1; !frontier_.empty(); ++depth) {
    for (NodeId u : frontier_) {
      for (NodeId v : graph_.Neighbors(u)) {
        if (stamp_[v] == generation_) continue;
        if (v == target) return Distance::Hops(depth);
        stamp_[v] = generation_;
        next_frontier_.push_back(v);
      }
    }
    frontier_.swap(next_frontier_);
    next_frontier_.clear();
  }
  return Distance::Unreachable();
}

std::vector<NodeId> BfsWorkspace::Neighborhood(NodeId source,
                                               std::uint32_t radius) {
  std::vector<NodeId> found;
  if (radius == 0) return found;
  NextGeneration();
  stamp_[source] = generation_;
  frontier_.push_back(source);
  for (std::uint32_t depth = 1; depth <= radius && !frontier_.empty(); ++depth) {
    for (NodeId u : frontier_) {
      for (NodeId v : graph_.Neighbors(u)) {
        if (stamp_[v] == generation_) continue;
        stamp_[v] = generation_;
        found.push_back(v);
        next_frontier_.push_back(v);
      }
    }
    frontier_.swap(next_frontier_);
    next_frontier_.clear();
  }
  std::sort(found.begin(), found.end());
  return found;
}

Distance ShortestPathLength(const KnowledgeGraph& graph, NodeId x, NodeId y) {
  BfsWorkspace bfs(graph);
  return bfs.ShortestPath(x, y);
}

Distance ShortestPathLength(const KnowledgeGraph& graph, std::string_view x,
                            std::string_view y) {
  const NodeId a = graph.Require(x);
  const NodeId b = graph.Require(y);
  return ShortestPathLength(graph, a, b);
}

std::vector<std::string> BoundedNeighborhood(const KnowledgeGraph& graph,
                                             std::string_view x,
                                             std::uint32_t radius) {
  BfsWorkspace bfs(graph);
  std::vector<std::string> names;
  for (NodeId id : bfs.Neighborhood(graph.Require(x), radius)) {
    names.push_back(graph.name(id));
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace nncui
