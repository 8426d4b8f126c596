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

#ifndef NNCUI_CONCEPT_ID_H_
#define NNCUI_CONCEPT_ID_H_

#include <string>
#include <string_view>

namespace nncui {

// Strips ASCII whitespace from both ends.
std::string_view TrimWhitespace(std::string_view s);

// True for the UMLS CUI shape: 'C' followed by exactly seven digits.
bool IsStrictCui(std::string_view id);

// Returns the trimmed identifier, or an empty string view when the input is
// not acceptable as a concept identifier (empty after trimming, contains a
// tab, or fails the CUI shape in strict mode).
std::string_view NormalizeConceptId(std::string_view raw, bool strict_cui);

}  // namespace nncui

#endif  // NNCUI_CONCEPT_ID_H_
