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

#ifndef NNCUI_NEIGHBOR_INDEX_H_
#define NNCUI_NEIGHBOR_INDEX_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nncui/knowledge_graph.h"

namespace nncui {

// Precomputed within-radius neighbor sets for a concept vocabulary, so
// relevance can be scored without the graph.
//
// Entries are kept exactly as built or loaded. Lookups for approximate
// matching go through a symmetrized view: a pair qualifies when either side
// lists the other, which keeps hand-written one-sided index files usable.
class NeighborIndex {
 public:
  using Entries = std::map<std::string, std::vector<std::string>>;

  NeighborIndex() = default;
  // Neighbor lists are sorted and deduplicated; a concept listing itself is
  // rejected with IndexFormatError.
  NeighborIndex(std::uint32_t radius, std::string checksum, Entries entries);

  std::uint32_t radius() const { return radius_; }
  const std::string& checksum() const { return checksum_; }
  const Entries& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool Contains(std::string_view concept_id) const;
  // Stored neighbor list; empty for concepts that are not indexed.
  std::vector<std::string> Neighbors(std::string_view concept_id) const;
  // Symmetrized within-radius test for two distinct concepts.
  bool AreNeighbors(std::string_view a, std::string_view b) const;

  // Dense symbol table over every identifier mentioned by the index, in
  // lexicographic order, plus the symmetrized adjacency over it.
  std::size_t num_symbols() const { return symbols_.size(); }
  const std::string& symbol(std::uint32_t slot) const { return symbols_[slot]; }
  std::optional<std::uint32_t> SlotOf(std::string_view concept_id) const;
  std::span<const std::uint32_t> SymmetricNeighbors(std::uint32_t slot) const {
    return {adjacency_.data() + offsets_[slot],
            adjacency_.data() + offsets_[slot + 1]};
  }

  friend bool operator==(const NeighborIndex& a, const NeighborIndex& b) {
    return a.radius_ == b.radius_ && a.checksum_ == b.checksum_ &&
           a.entries_ == b.entries_;
  }

 private:
  std::uint32_t radius_ = 0;
  std::string checksum_;
  Entries entries_;

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::uint32_t> slots_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> adjacency_;
};

// entries[x] = { y in concepts : 0 < dist(x, y) <= radius } for every x in
// `concepts`. Concepts absent from the graph are indexed with no
// neighbors. Per-concept traversals run in parallel; the result does not
// depend on the order of `concepts`.
NeighborIndex BuildIndex(const KnowledgeGraph& graph,
                         std::span<const std::string> concepts,
                         std::uint32_t radius, std::string checksum = "");

// Members of `concepts` that are not nodes of `graph`, sorted and unique.
std::vector<std::string> ConceptsMissingFrom(
    const KnowledgeGraph& graph, std::span<const std::string> concepts);

// FNV-1a 64-bit digest of the file bytes as 16 lowercase hex digits.
std::string FileChecksum(const std::string& path);
std::string ContentChecksum(std::string_view bytes);

inline constexpr int kIndexFormatVersion = 1;

// Text format:
//   #nnidx v1 radius=<n> checksum=<hex>
//   <concept>\t<neighbor>,<neighbor>,...
std::string SerializeIndex(const NeighborIndex& index);
NeighborIndex ParseIndex(std::string_view text,
                         const std::string& source = "<index>");
void SaveIndex(const NeighborIndex& index, const std::string& path);
NeighborIndex LoadIndex(const std::string& path);

}  // namespace nncui

#endif  // NNCUI_NEIGHBOR_INDEX_H_
