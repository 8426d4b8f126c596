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

#include <iostream>

#include "CLI11.hpp"
#include "nncui/errors.h"
#include "nncui/harness.h"

namespace nncui {

int RunCli(int argc, const char* const argv[], std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Concept-set relevance and ranking evaluation toolkit", "nncui"};
  app.require_subcommand(1);

  // Shared by several subcommands; --n is optional so an index file can
  // supply the radius.
  std::uint32_t n_value = 1;
  auto add_n = [&](CLI::App* cmd) {
    return cmd->add_option("--n", n_value, "distance threshold (default 1)")
        ->check(CLI::NonNegativeNumber);
  };
  auto measure_opt = [](CLI::App* cmd, std::string& measure) {
    cmd->add_option("--measure", measure, "iou or nniou")
        ->check(CLI::IsMember({"iou", "nniou"}));
  };

  BuildIndexOptions build;
  auto* build_cmd = app.add_subcommand("build-index", "precompute neighbor sets");
  build_cmd->add_option("--edges", build.edges, "is_a edge file")->required();
  build_cmd->add_option("--corpus", build.corpus, "corpus JSONL")->required();
  build_cmd->add_option("--out", build.out, "index output path")->required();
  auto* build_n = add_n(build_cmd);
  build_cmd->add_flag("--strict-cui", build.strict_cui, "require C+7-digit identifiers");

  RelevanceOptions rel;
  auto* rel_cmd = app.add_subcommand("relevance", "IoU and nn-IoU of two concept sets");
  rel_cmd->add_option("--a", rel.a, "comma-separated concepts");
  rel_cmd->add_option("--b", rel.b, "comma-separated concepts");
  rel_cmd->add_option("--doc-a", rel.doc_a, "document id in --corpus");
  rel_cmd->add_option("--doc-b", rel.doc_b, "document id in --corpus");
  rel_cmd->add_option("--corpus", rel.corpus, "corpus JSONL");
  rel_cmd->add_option("--index", rel.index, "neighbor index");
  rel_cmd->add_option("--edges", rel.edges, "is_a edge file");
  rel_cmd->add_option("--lambda", rel.lambda, "weight of related concepts")
      ->check(CLI::Range(0.0, 1.0));
  auto* rel_n = add_n(rel_cmd);
  rel_cmd->add_flag("--strict-cui", rel.strict_cui, "require C+7-digit identifiers");

  RetrieveOptions retrieve;
  std::string retrieve_measure = "nniou";
  auto* ret_cmd = app.add_subcommand("retrieve", "brute-force top-k retrieval");
  ret_cmd->add_option("--corpus", retrieve.corpus, "corpus JSONL")->required();
  ret_cmd->add_option("--index", retrieve.index, "neighbor index");
  ret_cmd->add_option("--edges", retrieve.edges, "edge file to verify the index against");
  ret_cmd->add_option("--lambda", retrieve.lambda, "weight of related concepts")
      ->check(CLI::Range(0.0, 1.0));
  ret_cmd->add_option("--k", retrieve.k, "results per query")->check(CLI::PositiveNumber);
  measure_opt(ret_cmd, retrieve_measure);
  ret_cmd->add_option("--out", retrieve.out, "runs output (default stdout)");
  auto* ret_n = add_n(ret_cmd);

  EvalOptions eval;
  std::string eval_measure = "nniou";
  std::string eval_format = "json";
  auto* eval_cmd = app.add_subcommand("eval", "nn-CUI@K and Precision@K of a runs file");
  eval_cmd->add_option("--corpus", eval.corpus, "corpus JSONL")->required();
  eval_cmd->add_option("--runs", eval.runs, "runs JSONL")->required();
  eval_cmd->add_option("--index", eval.index, "neighbor index");
  eval_cmd->add_option("--edges", eval.edges, "edge file to verify the index against");
  eval_cmd->add_option("--class-map", eval.class_map, "label class map JSON");
  eval_cmd->add_option("--categories", eval.categories, "label categories")
      ->delimiter(',');
  eval_cmd->add_option("--lambda", eval.lambda, "weight of related concepts")
      ->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--k", eval.k, "cutoff")->check(CLI::PositiveNumber);
  measure_opt(eval_cmd, eval_measure);
  eval_cmd->add_option("--format", eval_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  eval_cmd->add_option("--out", eval.out, "report output (default stdout)");
  auto* eval_n = add_n(eval_cmd);

  AblateOptions ablate;
  auto* abl_cmd = app.add_subcommand("ablate", "precision sweep over lambda, n and k");
  abl_cmd->add_option("--corpus", ablate.corpus, "corpus JSONL")->required();
  abl_cmd->add_option("--edges", ablate.edges, "is_a edge file")->required();
  abl_cmd->add_option("--class-map", ablate.class_map, "label class map JSON")->required();
  abl_cmd->add_option("--categories", ablate.categories, "label categories")->delimiter(',');
  abl_cmd->add_option("--lambdas", ablate.grid.lambdas, "comma-separated lambdas")
      ->delimiter(',')->required();
  abl_cmd->add_option("--radii", ablate.grid.radii, "comma-separated n values")
      ->delimiter(',')->required();
  abl_cmd->add_option("--ks", ablate.grid.k_values, "comma-separated cutoffs")
      ->delimiter(',')->required();
  abl_cmd->add_option("--index-dir", ablate.index_dir, "directory caching built indexes");
  abl_cmd->add_option("--out", ablate.out, "CSV output (default stdout)");
  abl_cmd->add_flag("--strict-cui", ablate.strict_cui, "require C+7-digit identifiers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*build_cmd) {
      if (build_n->count()) build.radius = n_value;
      BuildIndexCommand(build, out, err);
    } else if (*rel_cmd) {
      if (rel_n->count()) rel.radius = n_value;
      RelevanceCommand(rel, out, err);
    } else if (*ret_cmd) {
      if (ret_n->count()) retrieve.radius = n_value;
      retrieve.measure = ParseMeasure(retrieve_measure);
      RetrieveCommand(retrieve, out, err);
    } else if (*eval_cmd) {
      if (eval_n->count()) eval.radius = n_value;
      eval.measure = ParseMeasure(eval_measure);
      eval.format = eval_format == "csv" ? ReportFormat::kCsv : ReportFormat::kJson;
      EvalCommand(eval, out, err);
    } else if (*abl_cmd) {
      AblateCommand(ablate, out, err);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace nncui
