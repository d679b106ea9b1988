// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_EXPERIMENT_HPP
#define EMOXLING_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "emoxling/metrics.hpp"
#include "emoxling/mlp.hpp"
#include "emoxling/model_io.hpp"
#include "emoxling/pipeline.hpp"
#include "emoxling/projection.hpp"
#include "emoxling/svm.hpp"

namespace emoxling {

/// Cross-lingual training-data strategies: M trains on source-language data
/// with multilingual sentence embeddings, T on a machine-translated training
/// file, P on labels projected across a parallel corpus.
enum class Approach { M, T, P };

const char* approach_name(Approach approach);
Approach approach_from_name(const std::string& name);

struct DataPaths {
  std::string train;  // target-language training set
  std::string dev;
  std::string test;
  std::string source_train;        // approach M
  std::string translated_train;    // approach T
  std::string parallel;            // approach P
  std::string source_predictions;  // approach P: tagger output for the source side
};

struct ExperimentConfig {
  std::string run_name = "run";
  std::string language = "target";
  std::uint64_t seed = 0;
  std::string model = "svm";  // "svm" or "mlp"
  SvmConfig svm;
  MlpConfig mlp;  // input_dim is resolved from the fitted pipeline
  PipelineSpec pipeline;
  std::vector<Approach> approaches;
  bool combined_with_target = false;
  DataPaths data;
  ProjectionConfig projection;
};

/// Parses and validates; throws ConfigInvalid with the offending key.
/// data.test may be absent here (train-only use); run_experiment requires it.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);
std::string serialize_experiment_config(const ExperimentConfig& config);

using Manifest = std::vector<std::pair<std::string, std::string>>;

std::string render_manifest(const Manifest& manifest);

struct RunResult {
  EvalReport report;
  Manifest manifest;
  std::size_t n_train = 0;
};

/// Training half of a run: assembles the training set, fits features, trains,
/// and writes model.json / manifest.kv / resolved_config.json (plus the
/// projection artifacts for approach P) under out_dir. No test set needed.
ModelArtifact train_model(const ExperimentConfig& config, const std::string& out_dir,
                          Manifest* manifest = nullptr);

/// Assembles the training set per the approach flags (fixed order: M, T, P,
/// then the target train set when combined or when no approach is set), fits
/// the feature pipeline on exactly that set, trains, predicts the test set,
/// and writes report.txt / report.kv / predictions.tsv / manifest.kv /
/// resolved_config.json / model.json (plus projected.tsv and
/// filter_report.txt for approach P) under out_dir.
RunResult run_experiment(const ExperimentConfig& config, const std::string& out_dir);

/// Aligned J/F/A table, percentages with one decimal; the best value in each
/// column is starred, ties all starred.
std::string emit_result_table(const std::vector<std::pair<std::string, EvalReport>>& rows);

}  // namespace emoxling

#endif  // EMOXLING_EXPERIMENT_HPP
