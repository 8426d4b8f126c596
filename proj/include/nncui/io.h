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

#ifndef NNCUI_IO_H_
#define NNCUI_IO_H_

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nncui/ranking_eval.h"

namespace nncui {

// JSON Lines: {"id": "...", "cuis": ["C...", ...], "labels": {...}}.
// `labels` is optional. Blank lines are skipped.
Corpus ParseCorpus(std::istream& in, const std::string& source = "<corpus>");
Corpus LoadCorpus(const std::string& path);

// JSON Lines: {"query": "...", "ranked": ["id1", ...]}.
std::vector<RankingRun> ParseRuns(std::istream& in,
                                  const std::string& source = "<runs>");
std::vector<RankingRun> LoadRuns(const std::string& path);
void WriteRuns(std::ostream& out, std::span<const RankingRun> runs);

// {"modality": {"CT": ["C...", ...], ...}, "organ": {...}}
ClassMap ParseClassMap(std::istream& in, const std::string& source = "<class map>");
ClassMap LoadClassMap(const std::string& path);

// Fixed-point decimal with `digits` fractional digits and '.' separator,
// independent of the global locale.
std::string FormatFixed(double value, int digits = 6);

nlohmann::ordered_json ReportToJson(const MetricReport& report);
// "query_id,score" header then one row per query, sorted by id.
std::string ReportToCsv(const MetricReport& report);

}  // namespace nncui

#endif  // NNCUI_IO_H_
