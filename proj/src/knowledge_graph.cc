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

#include "nncui/knowledge_graph.h"

#include <algorithm>
#include <fstream>

#include "nncui/concept_id.h"
#include "nncui/errors.h"

namespace nncui {

std::optional<NodeId> KnowledgeGraph::Find(std::string_view concept_id) const {
  auto it = ids_.find(std::string(concept_id));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

NodeId KnowledgeGraph::Require(std::string_view concept_id) const {
  if (auto id = Find(concept_id)) return *id;
  throw LookupError(std::string(concept_id));
}

NodeId KnowledgeGraph::Builder::AddNode(std::string_view concept_id) {
  auto [it, inserted] = graph_.ids_.try_emplace(
      std::string(concept_id), static_cast<NodeId>(graph_.names_.size()));
  if (inserted) graph_.names_.emplace_back(concept_id);
  return it->second;
}

bool KnowledgeGraph::Builder::AddEdge(std::string_view child,
                                      std::string_view parent) {
  if (child == parent) {
    throw StructuralError("self-loop on " + std::string(child));
  }
  const NodeId c = AddNode(child);
  const NodeId p = AddNode(parent);
  const std::uint64_t key = (static_cast<std::uint64_t>(c) << 32) | p;
  if (!seen_edges_.insert(key).second) return false;
  graph_.edges_.emplace_back(c, p);
  return true;
}

KnowledgeGraph KnowledgeGraph::Builder::Build() && {
  KnowledgeGraph g = std::move(graph_);
  const std::size_t n = g.names_.size();

  std::vector<std::size_t> degree(n, 0);
  for (const auto& [c, p] : g.edges_) {
    ++degree[c];
    ++degree[p];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [c, p] : g.edges_) {
    g.adjacency_[cursor[c]++] = p;
    g.adjacency_[cursor[p]++] = c;
  }

  // a->b plus b->a yields a repeated undirected neighbor; compact it away.
  std::vector<std::size_t> compact_offsets(n + 1, 0);
  std::size_t out = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
    auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    compact_offsets[i] = out;
    for (auto it = first; it != last; ++it) g.adjacency_[out++] = *it;
  }
  compact_offsets[n] = out;
  g.adjacency_.resize(out);
  g.adjacency_.shrink_to_fit();
  g.offsets_ = std::move(compact_offsets);

  g.dag_ = ValidateDag(g);
  if (!g.dag_.acyclic) {
    std::string walk;
    for (const auto& id : g.dag_.cycle) {
      if (!walk.empty()) walk += " -> ";
      walk += id;
    }
    g.warnings_.push_back("is_a edges contain a cycle: " + walk);
  }
  return g;
}

KnowledgeGraph ParseEdgeStream(std::istream& in, bool strict_cui,
                               const std::string& source) {
  KnowledgeGraph::Builder builder;
  std::string line;
  std::size_t line_no = 0;
  auto checked_id = [&](std::string_view raw) {
    const std::string_view id = NormalizeConceptId(raw, strict_cui);
    if (id.empty()) {
      throw ParseError(source, line_no,
                       "invalid concept identifier '" + std::string(raw) + "'" +
                           (strict_cui ? " (expected C + 7 digits)" : ""));
    }
    return id;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view trimmed = TrimWhitespace(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;

    const std::string_view view(line);
    const std::size_t tab = view.find('\t');
    if (tab == std::string_view::npos) {
      builder.AddNode(checked_id(view));
      continue;
    }
    if (view.find('\t', tab + 1) != std::string_view::npos) {
      throw ParseError(source, line_no,
                       "expected exactly two tab-separated fields");
    }
    const std::string_view child = checked_id(view.substr(0, tab));
    const std::string_view parent = checked_id(view.substr(tab + 1));
    if (child == parent) {
      throw StructuralError(source, line_no,
                            "self-loop on " + std::string(child));
    }
    builder.AddEdge(child, parent);
  }
  return std::move(builder).Build();
}

KnowledgeGraph ParseEdgeFile(const std::string& path, bool strict_cui) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open edge file: " + path);
  return ParseEdgeStream(in, strict_cui, path);
}

DagReport ValidateDag(const KnowledgeGraph& graph) {
  const std::size_t n = graph.num_nodes();
  std::vector<std::vector<NodeId>> out(n);
  for (const auto& [c, p] : graph.edges()) out[c].push_back(p);

  enum : std::uint8_t { kWhite, kGray, kBlack };
  std::vector<std::uint8_t> color(n, kWhite);
  // (node, index of next child to visit)
  std::vector<std::pair<NodeId, std::size_t>> stack;

  for (NodeId root = 0; root < n; ++root) {
    if (color[root] != kWhite) continue;
    stack.emplace_back(root, 0);
    color[root] = kGray;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next == out[node].size()) {
        color[node] = kBlack;
        stack.pop_back();
        continue;
      }
      const NodeId child = out[node][next++];
      if (color[child] == kGray) {
        DagReport report;
        report.acyclic = false;
        auto start = std::find_if(stack.begin(), stack.end(), [&](const auto& f) {
          return f.first == child;
        });
        for (auto it = start; it != stack.end(); ++it) {
          report.cycle.push_back(graph.name(it->first));
        }
        report.cycle.push_back(graph.name(child));
        return report;
      }
      if (color[child] == kWhite) {
        color[child] = kGray;
        stack.emplace_back(child, 0);
      }
    }
  }
  return {};
}

}  // namespace nncui
