// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_DATASET_HPP
#define EMOXLING_DATASET_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "emoxling/labels.hpp"

namespace emoxling {

struct Example {
  std::string id;
  std::string text;
  std::optional<LabelVector> labels;
};

enum class Split { train, dev, test, projected, translated };

const char* split_name(Split split);

/// A split-tagged, ordered collection of examples. Either every example is
/// labeled or none is; iteration order is file order.
struct Dataset {
  std::string language;
  Split split = Split::train;
  std::vector<Example> examples;

  std::size_t size() const { return examples.size(); }
  bool labeled() const { return !examples.empty() && examples.front().labels.has_value(); }
};

struct ParallelPair {
  std::string pair_id;
  std::string source_text;
  std::string target_text;
};

/// Per-example probabilities over the 11 labels plus the decisions derived
/// from them: decision[i][k] holds iff probabilities(i,k) > threshold.
struct PredictionMatrix {
  std::vector<std::string> example_ids;
  Eigen::MatrixXd probabilities;  // rows x 11
  std::vector<LabelVector> decisions;
  double threshold = 0.5;

  std::size_t size() const { return example_ids.size(); }
};

/// Builds a matrix from raw probabilities, deriving decisions at `threshold`.
/// Throws ProbabilityOutOfRange when a value falls outside [0, 1].
PredictionMatrix make_prediction_matrix(std::vector<std::string> ids,
                                        Eigen::MatrixXd probabilities,
                                        double threshold = 0.5);

// -- Dataset TSV ------------------------------------------------------------
// Header: ID<TAB>Tweet[<TAB>anger<TAB>...<TAB>trust]; label cells in {0,1}.
// Header names are matched case-insensitively; emotion columns may appear in
// any order in the input but are always written canonically. A UTF-8 BOM is
// tolerated and stripped.

Dataset parse_dataset(const std::string& path, bool expect_labels);
Dataset parse_dataset_text(const std::string& content, bool expect_labels);
std::string serialize_dataset(const Dataset& dataset);
void write_dataset(const Dataset& dataset, const std::string& path);

// -- Parallel TSV -----------------------------------------------------------
// Header: pair_id<TAB>source_text<TAB>target_text.

std::vector<ParallelPair> parse_parallel(const std::string& path);
std::vector<ParallelPair> parse_parallel_text(const std::string& content);
std::string serialize_parallel(const std::vector<ParallelPair>& pairs);

// -- Prediction TSV ---------------------------------------------------------
// Optional first line `# threshold=<real>` (default 0.5), then a header
// ID<TAB>anger<TAB>...<TAB>trust and one row of 11 reals per example.

PredictionMatrix parse_predictions(const std::string& path);
PredictionMatrix parse_predictions_text(const std::string& content);
std::string serialize_predictions(const PredictionMatrix& matrix);
void write_predictions(const PredictionMatrix& matrix, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace emoxling

#endif  // EMOXLING_DATASET_HPP
