// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/projection.hpp"

#include <cstdio>
#include <unordered_map>

#include "emoxling/error.hpp"
#include "emoxling/numfmt.hpp"

namespace emoxling {

const char* comparison_name(ProjectionConfig::Comparison comparison) {
  return comparison == ProjectionConfig::Comparison::at_least ? "at_least" : "more_than";
}

ProjectionConfig::Comparison comparison_from_name(const std::string& name) {
  std::string canon = name;
  for (char& c : canon) {
    if (c == '-') c = '_';
  }
  if (canon == "at_least") return ProjectionConfig::Comparison::at_least;
  if (canon == "more_than") return ProjectionConfig::Comparison::more_than;
  throw Error(Errc::config_invalid, "unknown comparison '" + name + "'");
}

Dataset project_labels(const std::vector<ParallelPair>& pairs,
                       const PredictionMatrix& source_predictions, const ProjectionConfig& config,
                       const std::string& target_language, FilterReport* report) {
  if (config.min_emotions < 0 || config.min_emotions > static_cast<int>(kNumLabels)) {
    throw Error(Errc::config_invalid, "min_emotions must lie in [0, 11]");
  }
  if (!(config.source_threshold >= 0.0 && config.source_threshold <= 1.0)) {
    throw Error(Errc::config_invalid, "source_threshold must lie in [0, 1]");
  }

  std::unordered_map<std::string, Index> row_by_id;
  row_by_id.reserve(source_predictions.size());
  for (std::size_t i = 0; i < source_predictions.size(); ++i) {
    row_by_id.emplace(source_predictions.example_ids[i], static_cast<Index>(i));
  }

  FilterReport local;
  Dataset projected;
  projected.language = target_language;
  projected.split = Split::projected;
  projected.examples.reserve(pairs.size());

  for (const ParallelPair& pair : pairs) {
    const auto it = row_by_id.find(pair.pair_id);
    if (it == row_by_id.end()) {
      throw Error(Errc::id_mismatch, "no prediction row for pair '" + pair.pair_id + "'");
    }
    LabelVector labels;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      if (source_predictions.probabilities(it->second, static_cast<Index>(k)) >
          config.source_threshold) {
        labels.set(k, true);
      }
    }
    const std::size_t count = labels.count();
    ++local.histogram[count];
    ++local.total;

    const bool keep = config.comparison == ProjectionConfig::Comparison::at_least
                          ? static_cast<int>(count) >= config.min_emotions
                          : static_cast<int>(count) > config.min_emotions;
    if (!keep) continue;
    ++local.retained;
    projected.examples.push_back(Example{pair.pair_id, pair.target_text, labels});
  }

  if (report != nullptr) *report = local;
  return projected;
}

FilterReport filter_report(const std::vector<ParallelPair>& pairs,
                           const PredictionMatrix& source_predictions,
                           const ProjectionConfig& config) {
  FilterReport report;
  project_labels(pairs, source_predictions, config, "target", &report);
  return report;
}

std::string render_filter_report(const FilterReport& report, const ProjectionConfig& config) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "pairs           %zu\n", report.total);
  out += line;
  std::snprintf(line, sizeof(line), "retained        %zu (%s%%)\n", report.retained,
                fmt_pct1(report.retention()).c_str());
  out += line;
  std::snprintf(line, sizeof(line), "filter          count %s %d at threshold %s\n",
                comparison_name(config.comparison), config.min_emotions,
                fmt_g17(config.source_threshold).c_str());
  out += line;
  out += "labels  pairs\n";
  for (std::size_t k = 0; k <= kNumLabels; ++k) {
    std::snprintf(line, sizeof(line), "%6zu  %zu\n", k, report.histogram[k]);
    out += line;
  }
  return out;
}

}  // namespace emoxling
