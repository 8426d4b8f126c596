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

#include "nncui/io.h"

#include <charconv>
#include <cmath>
#include <fstream>

#include "nncui/concept_id.h"
#include "nncui/errors.h"

namespace nncui {
namespace {

using nlohmann::json;

std::ifstream OpenOrThrow(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(std::string("cannot open ") + what + ": " + path);
  return in;
}

// Calls `fn(json, line_no)` for every non-blank line.
template <typename Fn>
void ForEachJsonLine(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (TrimWhitespace(line).empty()) continue;
    json value;
    try {
      value = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!value.is_object()) throw ParseError(source, line_no, "expected a JSON object");
    try {
      fn(value, line_no);
    } catch (const json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
}

std::string RequireString(const json& obj, const char* key,
                          const std::string& source, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(source, line_no, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> RequireStringArray(const json& obj, const char* key,
                                            const std::string& source,
                                            std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    throw ParseError(source, line_no, std::string("field '") + key + "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw ParseError(source, line_no, std::string("field '") + key +
                                            "' must contain only strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Corpus ParseCorpus(std::istream& in, const std::string& source) {
  std::vector<Document> docs;
  ForEachJsonLine(in, source, [&](const json& obj, std::size_t line_no) {
    Document doc;
    doc.id = RequireString(obj, "id", source, line_no);
    std::vector<std::string> cuis;
    for (const auto& raw : RequireStringArray(obj, "cuis", source, line_no)) {
      const std::string_view id = NormalizeConceptId(raw, false);
      if (id.empty()) {
        throw ParseError(source, line_no, "invalid concept identifier '" + raw + "'");
      }
      cuis.emplace_back(id);
    }
    doc.concepts = ConceptSet(std::move(cuis));
    if (auto it = obj.find("labels"); it != obj.end() && !it->is_null()) {
      if (!it->is_object()) throw ParseError(source, line_no, "'labels' must be an object");
      for (const auto& [category, value] : it->items()) {
        if (!value.is_string()) {
          throw ParseError(source, line_no, "label '" + category + "' must be a string");
        }
        doc.labels.emplace(category, value.get<std::string>());
      }
    }
    docs.push_back(std::move(doc));
  });
  try {
    return Corpus(std::move(docs));
  } catch (const DataError& e) {
    throw DataError(source + ": " + e.what());
  }
}

Corpus LoadCorpus(const std::string& path) {
  auto in = OpenOrThrow(path, "corpus file");
  return ParseCorpus(in, path);
}

std::vector<RankingRun> ParseRuns(std::istream& in, const std::string& source) {
  std::vector<RankingRun> runs;
  ForEachJsonLine(in, source, [&](const json& obj, std::size_t line_no) {
    runs.push_back({RequireString(obj, "query", source, line_no),
                    RequireStringArray(obj, "ranked", source, line_no)});
  });
  return runs;
}

std::vector<RankingRun> LoadRuns(const std::string& path) {
  auto in = OpenOrThrow(path, "runs file");
  return ParseRuns(in, path);
}

void WriteRuns(std::ostream& out, std::span<const RankingRun> runs) {
  for (const auto& run : runs) {
    nlohmann::ordered_json line;
    line["query"] = run.query_id;
    line["ranked"] = run.ranked_ids;
    out << line.dump() << '\n';
  }
}

ClassMap ParseClassMap(std::istream& in, const std::string& source) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": invalid JSON: " + e.what());
  }
  auto bad = [&](const std::string& what) {
    return ParseError(source + ": " + what);
  };
  if (!root.is_object()) throw bad("expected an object of categories");
  ClassMap map;
  for (const auto& [category, classes] : root.items()) {
    if (!classes.is_object()) throw bad("category '" + category + "' must be an object");
    auto& out = map[category];
    for (const auto& [value, cuis] : classes.items()) {
      if (!cuis.is_array()) {
        throw bad("class '" + category + "/" + value + "' must list concepts");
      }
      std::vector<std::string> ids;
      for (const auto& c : cuis) {
        if (!c.is_string()) throw bad("class '" + category + "/" + value + "' has a non-string concept");
        ids.push_back(std::string(TrimWhitespace(c.get<std::string>())));
      }
      out.emplace(value, ConceptSet(std::move(ids)));
    }
  }
  return map;
}

ClassMap LoadClassMap(const std::string& path) {
  auto in = OpenOrThrow(path, "class map");
  return ParseClassMap(in, path);
}

std::string FormatFixed(double value, int digits) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::fixed, digits);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

nlohmann::ordered_json ReportToJson(const MetricReport& report) {
  nlohmann::ordered_json j;
  j["metric"] = report.metric;
  auto& cfg = j["config"];
  cfg["k"] = report.config.k;
  if (report.label_categories.empty()) {
    cfg["measure"] = MeasureName(report.config.measure);
    cfg["lambda"] = report.config.relevance.lambda();
    cfg["n"] = report.config.relevance.radius();
  } else {
    cfg["label_categories"] = report.label_categories;
  }
  j["aggregate"] = report.aggregate;
  j["num_queries"] = report.per_query.size();
  nlohmann::ordered_json per_query = nlohmann::ordered_json::object();
  for (const auto& [id, score] : report.per_query) per_query[id] = score;
  j["per_query"] = std::move(per_query);
  nlohmann::ordered_json exclusions = nlohmann::ordered_json::array();
  for (const auto& e : report.exclusions) {
    exclusions.push_back({{"id", e.doc_id}, {"reason", e.reason}});
  }
  j["exclusions"] = std::move(exclusions);
  j["notes"] = report.notes;
  return j;
}

std::string ReportToCsv(const MetricReport& report) {
  std::string out = "query_id,score\n";
  for (const auto& [id, score] : report.per_query) {
    out += id + "," + FormatFixed(score) + "\n";
  }
  return out;
}

}  // namespace nncui
