// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_METRICS_HPP
#define EMOXLING_METRICS_HPP

#include <array>
#include <string>
#include <vector>

#include "emoxling/dataset.hpp"
#include "emoxling/labels.hpp"

namespace emoxling {

struct EvalReport {
  double jaccard = 0.0;       // sample-averaged Jaccard similarity
  double macro_f1 = 0.0;      // unweighted mean of per-label F1
  double avg_accuracy = 0.0;  // mean of per-label binary accuracy
  double exact_match = 0.0;   // auxiliary: fraction of exactly matched label sets
  std::array<double, kNumLabels> per_class_f1{};
  std::size_t n_examples = 0;
};

/// |P ∩ G| / |P ∪ G|; 1.0 when both sets are empty.
double jaccard_sample(const LabelVector& pred, const LabelVector& gold);

/// Scores predictions against a labeled dataset. Rows align by id; the two
/// id sets must match exactly. Per-label F1 uses the zero-denominator
/// convention P = R = F1 = 0.
EvalReport evaluate(const PredictionMatrix& preds, const Dataset& gold);

/// Per example, jaccard(A, gold) - jaccard(B, gold), in predsA row order.
std::vector<double> jaccard_difference(const PredictionMatrix& preds_a,
                                       const PredictionMatrix& preds_b, const Dataset& gold);

/// Plain-text report: headline scores as percentages with one decimal plus a
/// per-class F1 table.
std::string render_report_text(const EvalReport& report, const std::string& row_label);

/// Machine-readable key=value lines, full precision.
std::string render_report_kv(const EvalReport& report);

/// Inverse of render_report_kv (used by the table subcommand).
EvalReport parse_report_kv(const std::string& content);

}  // namespace emoxling

#endif  // EMOXLING_METRICS_HPP
