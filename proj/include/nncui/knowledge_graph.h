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

#ifndef NNCUI_KNOWLEDGE_GRAPH_H_
#define NNCUI_KNOWLEDGE_GRAPH_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace nncui {

// Dense index of an interned concept inside one KnowledgeGraph.
using NodeId = std::uint32_t;

// Outcome of the directed-acyclicity check. When cyclic, `cycle` holds one
// closed witness walk along edge direction, e.g. {a, b, a}.
struct DagReport {
  bool acyclic = true;
  std::vector<std::string> cycle;
};

// Concept taxonomy restricted to is_a edges. Edges are stored directed
// (child -> parent) for the DAG check; traversal uses the undirected view
// held in a compressed adjacency array. Immutable once built.
class KnowledgeGraph {
 public:
  class Builder;

  KnowledgeGraph() = default;

  std::size_t num_nodes() const { return names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  // Directed (child, parent) pairs in insertion order.
  const std::vector<std::pair<NodeId, NodeId>>& edges() const {
    return edges_;
  }
  const std::string& name(NodeId id) const { return names_[id]; }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<NodeId> Find(std::string_view concept_id) const;
  // Throws LookupError when absent.
  NodeId Require(std::string_view concept_id) const;
  bool Contains(std::string_view concept_id) const {
    return Find(concept_id).has_value();
  }

  // Undirected neighbors, sorted by NodeId.
  std::span<const NodeId> Neighbors(NodeId id) const {
    return {adjacency_.data() + offsets_[id],
            adjacency_.data() + offsets_[id + 1]};
  }

  const DagReport& dag_report() const { return dag_; }
  bool acyclic() const { return dag_.acyclic; }

  // Non-fatal load diagnostics (e.g. a detected cycle).
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Structural identity: same names in the same interning order and the
  // same edge list.
  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    return a.names_ == b.names_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  DagReport dag_;
  std::vector<std::string> warnings_;
};

// Incremental construction. Duplicate edges are dropped; self-loops throw
// StructuralError.
class KnowledgeGraph::Builder {
 public:
  NodeId AddNode(std::string_view concept_id);
  // `child` is_a `parent`. Returns false if the edge was already present.
  bool AddEdge(std::string_view child, std::string_view parent);

  KnowledgeGraph Build() &&;

 private:
  KnowledgeGraph graph_;
  std::unordered_set<std::uint64_t> seen_edges_;
};

// Reads the edge-file format: `child<TAB>parent` or a bare `node` per line,
// `#` comment lines and blank lines ignored. `source` names the input in
// diagnostics.
KnowledgeGraph ParseEdgeStream(std::istream& in, bool strict_cui,
                               const std::string& source = "<stream>");
KnowledgeGraph ParseEdgeFile(const std::string& path, bool strict_cui);

// Checks the directed edge set for cycles.
DagReport ValidateDag(const KnowledgeGraph& graph);

}  // namespace nncui

#endif  // NNCUI_KNOWLEDGE_GRAPH_H_
