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

#ifndef NNCUI_ERRORS_H_
#define NNCUI_ERRORS_H_

#include <stdexcept>
#include <string>

namespace nncui {

// Errors caused by malformed or inconsistent input data. The CLI maps these
// to exit status 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax problem in an input file. Carries the 1-based line when known.
class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  explicit ParseError(const std::string& what) : DataError(what) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

// Well-formed input that violates a structural rule (e.g. a self-loop).
class StructuralError : public ParseError {
 public:
  using ParseError::ParseError;
};

// A concept identifier that is not a node of the graph.
class LookupError : public DataError {
 public:
  explicit LookupError(const std::string& concept_id)
      : DataError("unknown concept: " + concept_id), concept_id_(concept_id) {}

  const std::string& concept_id() const { return concept_id_; }

 private:
  std::string concept_id_;
};

// Problem reading a persisted neighbor index.
class IndexFormatError : public DataError {
 public:
  using DataError::DataError;
};

// Runs or corpus inconsistent with each other at evaluation time.
class EvaluationError : public DataError {
 public:
  using DataError::DataError;
};

// Invalid parameters or flag combinations. The CLI maps these to exit
// status 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Broken internal consistency check. The CLI maps these to exit status 3.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace nncui

#endif  // NNCUI_ERRORS_H_
