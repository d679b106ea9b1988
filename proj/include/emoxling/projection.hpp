// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_PROJECTION_HPP
#define EMOXLING_PROJECTION_HPP

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "emoxling/dataset.hpp"
#include "emoxling/feature_vector.hpp"
#include "emoxling/labels.hpp"

namespace emoxling {

struct ProjectionConfig {
  enum class Comparison { at_least, more_than };

  int min_emotions = 3;
  Comparison comparison = Comparison::at_least;
  double source_threshold = 0.5;  // decisions are recomputed from probabilities at this cut
};

/// How many pairs carried each positive-label count, plus what survived the
/// min_emotions filter.
struct FilterReport {
  std::array<std::size_t, kNumLabels + 1> histogram{};
  std::size_t total = 0;
  std::size_t retained = 0;

  double retention() const {
    return total == 0 ? 0.0 : static_cast<double>(retained) / static_cast<double>(total);
  }
};

const char* comparison_name(ProjectionConfig::Comparison comparison);
ProjectionConfig::Comparison comparison_from_name(const std::string& name);

/// Copies each source prediction onto the paired target sentence, keeping only
/// pairs whose recomputed decision count passes the filter. Predictions are
/// matched to pairs by id; a pair without a prediction row is an error. Output
/// order follows the pair list.
Dataset project_labels(const std::vector<ParallelPair>& pairs,
                       const PredictionMatrix& source_predictions, const ProjectionConfig& config,
                       const std::string& target_language, FilterReport* report = nullptr);

/// The histogram/retention summary alone.
FilterReport filter_report(const std::vector<ParallelPair>& pairs,
                           const PredictionMatrix& source_predictions,
                           const ProjectionConfig& config);

std::string render_filter_report(const FilterReport& report, const ProjectionConfig& config);

}  // namespace emoxling

#endif  // EMOXLING_PROJECTION_HPP
