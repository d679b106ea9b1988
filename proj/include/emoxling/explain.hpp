// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_EXPLAIN_HPP
#define EMOXLING_EXPLAIN_HPP

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "emoxling/dataset.hpp"
#include "emoxling/feature_vector.hpp"
#include "emoxling/labels.hpp"
#include "emoxling/metrics.hpp"

namespace emoxling {

struct ExplainConfig {
  int n_variants = 1000;          // sampled mode only
  double keep_probability = 0.5;  // per-word keep chance in sampled mode
  int exhaustive_max_words = 12;  // up to this many words, enumerate every subset
  std::uint64_t seed = 0;
  bool include_empty_variant = false;
};

/// Black-box text scorer: 11 probabilities in canonical label order.
using Predictor = std::function<std::array<double, kNumLabels>(const std::string&)>;

/// Per word occurrence (position-indexed, duplicates kept apart) and label:
/// the mean over variants containing the word of weight * probability, where
/// weight is the kept fraction of the sentence's words.
struct Attribution {
  std::vector<std::string> words;
  Eigen::MatrixXd scores;  // words.size() x kNumLabels
  bool exhaustive = false;
  std::size_t n_variants = 0;  // variants actually evaluated
};

Attribution explain(const Predictor& predictor, const std::string& text,
                    const ExplainConfig& config);

/// Mean score per distinct word (occurrences averaged), for report layers
/// that want type-level rather than position-level attribution.
struct TypeAttribution {
  std::vector<std::string> words;  // distinct, first-occurrence order
  Eigen::MatrixXd scores;
};
TypeAttribution aggregate_by_type(const Attribution& attribution);

/// The k strongest words for one label, strongest first; ties by position.
std::vector<std::pair<std::string, double>> top_words(const Attribution& attribution,
                                                      std::size_t label, std::size_t k);

struct ComparisonEntry {
  std::string id;
  std::string text;
  LabelVector gold;
  LabelVector decisions_a;
  LabelVector decisions_b;
  double jaccard_a = 0.0;
  double jaccard_b = 0.0;
  double difference = 0.0;  // jaccard_a - jaccard_b
  Attribution attribution_a;
  Attribution attribution_b;
};

struct ComparisonReport {
  std::string name_a;
  std::string name_b;
  EvalReport eval_a;
  EvalReport eval_b;
  std::size_t n_a_better = 0;  // over all aligned examples, not just the top k
  std::size_t n_b_better = 0;
  std::size_t n_tied = 0;
  std::vector<ComparisonEntry> entries;  // top-k by |difference|, ties by id
};

/// Ranks examples by absolute Jaccard difference between the two models and
/// explains both models on the top k.
ComparisonReport compare_models(const PredictionMatrix& preds_a, const PredictionMatrix& preds_b,
                                const Dataset& gold, const Predictor& predictor_a,
                                const Predictor& predictor_b, const std::string& name_a,
                                const std::string& name_b, std::size_t top_k,
                                const ExplainConfig& config);

std::string render_attribution_text(const Attribution& attribution, std::size_t words_per_label);
std::string render_comparison_text(const ComparisonReport& report, std::size_t words_per_label);
std::string render_comparison_json(const ComparisonReport& report, std::size_t words_per_label);

}  // namespace emoxling

#endif  // EMOXLING_EXPLAIN_HPP
