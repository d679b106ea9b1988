// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/metrics.hpp"

#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "emoxling/error.hpp"
#include "emoxling/numfmt.hpp"

namespace emoxling {

double jaccard_sample(const LabelVector& pred, const LabelVector& gold) {
  int intersection = 0, uni = 0;
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    const bool p = pred.get(k), g = gold.get(k);
    intersection += (p && g) ? 1 : 0;
    uni += (p || g) ? 1 : 0;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(intersection) / static_cast<double>(uni);
}

namespace {

/// Gold label vector for each prediction row, aligned by id. Throws
/// IdMismatch unless the id sets match exactly.
std::vector<LabelVector> align_gold(const PredictionMatrix& preds, const Dataset& gold) {
  if (!gold.labeled()) throw Error(Errc::config_invalid, "gold dataset has no labels");
  if (preds.size() != gold.size()) {
    throw Error(Errc::id_mismatch, "prediction rows (" + std::to_string(preds.size()) +
                                       ") != gold examples (" + std::to_string(gold.size()) + ")");
  }
  std::unordered_map<std::string, const Example*> by_id;
  for (const Example& example : gold.examples) by_id.emplace(example.id, &example);
  std::vector<LabelVector> aligned;
  aligned.reserve(preds.size());
  for (const std::string& id : preds.example_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(Errc::id_mismatch, "prediction id '" + id + "' missing from gold");
    }
    aligned.push_back(*it->second->labels);
  }
  return aligned;
}

}  // namespace

EvalReport evaluate(const PredictionMatrix& preds, const Dataset& gold) {
  const std::vector<LabelVector> gold_rows = align_gold(preds, gold);
  const std::size_t n = preds.size();

  EvalReport report;
  report.n_examples = n;
  if (n == 0) return report;

  double jaccard_sum = 0.0;
  std::size_t exact = 0;
  std::array<long, kNumLabels> tp{}, fp{}, fn{}, correct{};
  for (std::size_t i = 0; i < n; ++i) {
    const LabelVector& p = preds.decisions[i];
    const LabelVector& g = gold_rows[i];
    jaccard_sum += jaccard_sample(p, g);
    if (p == g) ++exact;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      const bool pk = p.get(k), gk = g.get(k);
      if (pk && gk) ++tp[k];
      if (pk && !gk) ++fp[k];
      if (!pk && gk) ++fn[k];
      if (pk == gk) ++correct[k];
    }
  }

  double f1_sum = 0.0, acc_sum = 0.0;
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    const long denom = 2 * tp[k] + fp[k] + fn[k];
    report.per_class_f1[k] = denom == 0 ? 0.0 : 2.0 * tp[k] / static_cast<double>(denom);
    f1_sum += report.per_class_f1[k];
    acc_sum += static_cast<double>(correct[k]) / static_cast<double>(n);
  }

  report.jaccard = jaccard_sum / static_cast<double>(n);
  report.macro_f1 = f1_sum / static_cast<double>(kNumLabels);
  report.avg_accuracy = acc_sum / static_cast<double>(kNumLabels);
  report.exact_match = static_cast<double>(exact) / static_cast<double>(n);
  return report;
}

std::vector<double> jaccard_difference(const PredictionMatrix& preds_a,
                                       const PredictionMatrix& preds_b, const Dataset& gold) {
  const std::vector<LabelVector> gold_a = align_gold(preds_a, gold);
  if (preds_b.size() != preds_a.size()) {
    throw Error(Errc::id_mismatch, "the two prediction matrices differ in size");
  }
  std::unordered_map<std::string, std::size_t> b_rows;
  for (std::size_t i = 0; i < preds_b.size(); ++i) b_rows.emplace(preds_b.example_ids[i], i);

  std::vector<double> diffs;
  diffs.reserve(preds_a.size());
  for (std::size_t i = 0; i < preds_a.size(); ++i) {
    auto it = b_rows.find(preds_a.example_ids[i]);
    if (it == b_rows.end()) {
      throw Error(Errc::id_mismatch,
                  "id '" + preds_a.example_ids[i] + "' missing from the second matrix");
    }
    diffs.push_back(jaccard_sample(preds_a.decisions[i], gold_a[i]) -
                    jaccard_sample(preds_b.decisions[it->second], gold_a[i]));
  }
  return diffs;
}

std::string render_report_text(const EvalReport& report, const std::string& row_label) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-24s %6s %6s %6s %6s\n", "", "J", "F", "A", "EM");
  out << line;
  std::snprintf(line, sizeof(line), "%-24s %6s %6s %6s %6s\n", row_label.c_str(),
                fmt_pct1(report.jaccard).c_str(), fmt_pct1(report.macro_f1).c_str(),
                fmt_pct1(report.avg_accuracy).c_str(), fmt_pct1(report.exact_match).c_str());
  out << line;
  out << "\nper-class F1 (x100)\n";
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    std::snprintf(line, sizeof(line), "  %-14s %6s\n", label_names()[k].c_str(),
                  fmt_pct1(report.per_class_f1[k]).c_str());
    out << line;
  }
  std::snprintf(line, sizeof(line), "\nexamples: %zu\n", report.n_examples);
  out << line;
  return out.str();
}

std::string render_report_kv(const EvalReport& report) {
  std::ostringstream out;
  out << "n_examples=" << report.n_examples << '\n';
  out << "jaccard=" << fmt_g17(report.jaccard) << '\n';
  out << "macro_f1=" << fmt_g17(report.macro_f1) << '\n';
  out << "avg_accuracy=" << fmt_g17(report.avg_accuracy) << '\n';
  out << "exact_match=" << fmt_g17(report.exact_match) << '\n';
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    out << "f1_" << label_names()[k] << '=' << fmt_g17(report.per_class_f1[k]) << '\n';
  }
  return out.str();
}

EvalReport parse_report_kv(const std::string& content) {
  EvalReport report;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "n_examples") {
      report.n_examples = static_cast<std::size_t>(std::strtoull(value.c_str(), nullptr, 10));
    } else if (key == "jaccard") {
      report.jaccard = std::strtod(value.c_str(), nullptr);
    } else if (key == "macro_f1") {
      report.macro_f1 = std::strtod(value.c_str(), nullptr);
    } else if (key == "avg_accuracy") {
      report.avg_accuracy = std::strtod(value.c_str(), nullptr);
    } else if (key == "exact_match") {
      report.exact_match = std::strtod(value.c_str(), nullptr);
    } else if (key.rfind("f1_", 0) == 0) {
      report.per_class_f1[static_cast<std::size_t>(label_from_name(key.substr(3)))] =
          std::strtod(value.c_str(), nullptr);
    }
  }
  return report;
}

}  // namespace emoxling
