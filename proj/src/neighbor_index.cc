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

#include "nncui/neighbor_index.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include "nncui/distance.h"
#include "nncui/errors.h"
#include "nncui/parallel.h"

namespace nncui {

NeighborIndex::NeighborIndex(std::uint32_t radius, std::string checksum,
                             Entries entries)
    : radius_(radius), checksum_(std::move(checksum)), entries_(std::move(entries)) {
  for (auto& [id, neighbors] : entries_) {
    std::sort(neighbors.begin(), neighbors.end());
    neighbors.erase(std::unique(neighbors.begin(), neighbors.end()),
                    neighbors.end());
    if (std::binary_search(neighbors.begin(), neighbors.end(), id)) {
      throw IndexFormatError("concept " + id + " lists itself as a neighbor");
    }
  }

  for (const auto& [id, neighbors] : entries_) {
    symbols_.push_back(id);
    symbols_.insert(symbols_.end(), neighbors.begin(), neighbors.end());
  }
  std::sort(symbols_.begin(), symbols_.end());
  symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
  slots_.reserve(symbols_.size());
  for (std::uint32_t i = 0; i < symbols_.size(); ++i) slots_.emplace(symbols_[i], i);

  std::vector<std::vector<std::uint32_t>> lists(symbols_.size());
  for (const auto& [id, neighbors] : entries_) {
    const std::uint32_t x = slots_.at(id);
    for (const auto& n : neighbors) {
      const std::uint32_t y = slots_.at(n);
      lists[x].push_back(y);
      lists[y].push_back(x);
    }
  }
  offsets_.assign(symbols_.size() + 1, 0);
  for (std::size_t i = 0; i < lists.size(); ++i) {
    auto& l = lists[i];
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    offsets_[i + 1] = offsets_[i] + l.size();
    adjacency_.insert(adjacency_.end(), l.begin(), l.end());
  }
}

bool NeighborIndex::Contains(std::string_view concept_id) const {
  return entries_.find(std::string(concept_id)) != entries_.end();
}

std::vector<std::string> NeighborIndex::Neighbors(
    std::string_view concept_id) const {
  auto it = entries_.find(std::string(concept_id));
  if (it == entries_.end()) return {};
  return it->second;
}

std::optional<std::uint32_t> NeighborIndex::SlotOf(
    std::string_view concept_id) const {
  auto it = slots_.find(std::string(concept_id));
  if (it == slots_.end()) return std::nullopt;
  return it->second;
}

bool NeighborIndex::AreNeighbors(std::string_view a, std::string_view b) const {
  const auto sa = SlotOf(a);
  const auto sb = SlotOf(b);
  if (!sa || !sb) return false;
  const auto adj = SymmetricNeighbors(*sa);
  return std::binary_search(adj.begin(), adj.end(), *sb);
}

namespace {

std::vector<std::string> SortedUnique(std::span<const std::string> values) {
  std::vector<std::string> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string GraphChecksum(const KnowledgeGraph& graph) {
  std::string canonical;
  for (const auto& name : graph.names()) canonical += name + "\n";
  for (const auto& [c, p] : graph.edges()) {
    canonical += graph.name(c) + "\t" + graph.name(p) + "\n";
  }
  return ContentChecksum(canonical);
}

}  // namespace

NeighborIndex BuildIndex(const KnowledgeGraph& graph,
                         std::span<const std::string> concepts,
                         std::uint32_t radius, std::string checksum) {
  const std::vector<std::string> vocab = SortedUnique(concepts);

  // Graph node -> position in vocab, or -1 when the node is not a corpus
  // concept.
  constexpr std::int64_t kAbsent = -1;
  std::vector<std::int64_t> vocab_pos(graph.num_nodes(), kAbsent);
  std::vector<std::optional<NodeId>> node_of(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    node_of[i] = graph.Find(vocab[i]);
    if (node_of[i]) vocab_pos[*node_of[i]] = static_cast<std::int64_t>(i);
  }

  std::vector<std::vector<std::string>> lists(vocab.size());
  ParallelFor(vocab.size(), [&](std::size_t begin, std::size_t end) {
    BfsWorkspace bfs(graph);
    for (std::size_t i = begin; i < end; ++i) {
      if (!node_of[i] || radius == 0) continue;
      for (NodeId y : bfs.Neighborhood(*node_of[i], radius)) {
        if (vocab_pos[y] != kAbsent) {
          lists[i].push_back(vocab[static_cast<std::size_t>(vocab_pos[y])]);
        }
      }
    }
  });

  NeighborIndex::Entries entries;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    entries.emplace_hint(entries.end(), vocab[i], std::move(lists[i]));
  }
  if (checksum.empty()) checksum = GraphChecksum(graph);
  return NeighborIndex(radius, std::move(checksum), std::move(entries));
}

std::vector<std::string> ConceptsMissingFrom(
    const KnowledgeGraph& graph, std::span<const std::string> concepts) {
  std::vector<std::string> missing;
  for (const auto& c : SortedUnique(concepts)) {
    if (!graph.Contains(c)) missing.push_back(c);
  }
  return missing;
}

std::string ContentChecksum(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string FileChecksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for checksum: " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return ContentChecksum(bytes);
}

std::string SerializeIndex(const NeighborIndex& index) {
  std::string out = "#nnidx v" + std::to_string(kIndexFormatVersion) +
                    " radius=" + std::to_string(index.radius()) +
                    " checksum=" + index.checksum() + "\n";
  for (const auto& [id, neighbors] : index.entries()) {
    out += id;
    out += '\t';
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
      if (i) out += ',';
      out += neighbors[i];
    }
    out += '\n';
  }
  return out;
}

namespace {

bool IsHex(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
           (c >= 'A' && c <= 'F');
  });
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

NeighborIndex ParseIndex(std::string_view text, const std::string& source) {
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> IndexFormatError {
    return IndexFormatError(source + ":" + std::to_string(line_no) + ": " + what);
  };

  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) {
    ++line_no;
    throw fail("empty index file");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = Split(line, ' ');
  if (header.empty() || header[0] != "#nnidx") {
    throw fail("missing '#nnidx' header");
  }
  const std::string expected = "v" + std::to_string(kIndexFormatVersion);
  if (header.size() < 2 || header[1] != expected) {
    const std::string found = header.size() < 2 ? "<none>" : std::string(header[1]);
    throw fail("unsupported index version " + found + " (expected " +
               expected + ")");
  }
  std::optional<std::uint32_t> radius;
  std::optional<std::string> checksum;
  for (std::size_t i = 2; i < header.size(); ++i) {
    const std::string_view field = header[i];
    if (field.empty()) continue;
    const std::size_t eq = field.find('=');
    if (eq == std::string_view::npos) throw fail("malformed header field '" + std::string(field) + "'");
    const std::string_view key = field.substr(0, eq);
    const std::string_view value = field.substr(eq + 1);
    if (key == "radius") {
      std::uint32_t r = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), r);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw fail("invalid radius '" + std::string(value) + "'");
      }
      radius = r;
    } else if (key == "checksum") {
      if (!IsHex(value)) throw fail("invalid checksum '" + std::string(value) + "'");
      checksum = std::string(value);
    } else {
      throw fail("unknown header field '" + std::string(key) + "'");
    }
  }
  if (!radius) throw fail("header lacks radius field");
  if (!checksum) throw fail("header lacks checksum field");

  NeighborIndex::Entries entries;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = Split(line, '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw fail("expected '<concept>\\t<neighbors>'");
    }
    std::vector<std::string> neighbors;
    if (!fields[1].empty()) {
      for (auto n : Split(fields[1], ',')) {
        if (n.empty()) throw fail("empty neighbor identifier");
        neighbors.emplace_back(n);
      }
    }
    if (!entries.emplace(std::string(fields[0]), std::move(neighbors)).second) {
      throw fail("duplicate entry for " + std::string(fields[0]));
    }
  }
  try {
    return NeighborIndex(*radius, std::move(*checksum), std::move(entries));
  } catch (const IndexFormatError& e) {
    throw IndexFormatError(source + ": " + e.what());
  }
}

void SaveIndex(const NeighborIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write index file: " + path);
  out << SerializeIndex(index);
  if (!out) throw DataError("failed writing index file: " + path);
}

NeighborIndex LoadIndex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open index file: " + path);
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return ParseIndex(text, path);
}

}  // namespace nncui
