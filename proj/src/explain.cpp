// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include <json.hpp>

#include "emoxling/error.hpp"
#include "emoxling/numfmt.hpp"
#include "emoxling/rng.hpp"
#include "emoxling/text.hpp"

namespace emoxling {

namespace {

void check_config(const ExplainConfig& config) {
  if (config.n_variants < 1) throw Error(Errc::config_invalid, "n_variants must be >= 1");
  if (!(config.keep_probability > 0.0 && config.keep_probability < 1.0)) {
    throw Error(Errc::config_invalid, "keep_probability must lie strictly in (0, 1)");
  }
  if (config.exhaustive_max_words < 0 || config.exhaustive_max_words > 62) {
    throw Error(Errc::config_invalid, "exhaustive_max_words must lie in [0, 62]");
  }
}

std::string join_kept(const std::vector<std::string>& words, std::uint64_t mask) {
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if ((mask >> i & 1u) == 0) continue;
    if (!text.empty()) text += ' ';
    text += words[i];
  }
  return text;
}

std::array<double, kNumLabels> call_predictor(const Predictor& predictor,
                                              const std::string& variant) {
  std::array<double, kNumLabels> probs;
  try {
    probs = predictor(variant);
  } catch (const std::exception& e) {
    throw Error(Errc::predictor_failure,
                std::string("predictor failed on variant '") + variant + "': " + e.what());
  }
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(Errc::probability_out_of_range,
                  "predictor returned " + fmt_g17(p) + " on variant '" + variant + "'");
    }
  }
  return probs;
}

}  // namespace

Attribution explain(const Predictor& predictor, const std::string& text,
                    const ExplainConfig& config) {
  check_config(config);
  std::vector<std::string> words = whitespace_words(text);
  if (words.empty()) throw Error(Errc::empty_text, "nothing to explain: text has no words");

  const std::size_t n = words.size();
  Attribution attribution;
  attribution.words = std::move(words);
  attribution.scores.setZero(static_cast<Index>(n), kNumLabels);
  std::vector<std::size_t> hits(n, 0);

  auto accumulate = [&](std::uint64_t mask) {
    const double weight =
        static_cast<double>(std::popcount(mask)) / static_cast<double>(n);
    const std::array<double, kNumLabels> probs =
        call_predictor(predictor, join_kept(attribution.words, mask));
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i & 1u) == 0) continue;
      ++hits[i];
      for (std::size_t k = 0; k < kNumLabels; ++k) {
        attribution.scores(static_cast<Index>(i), static_cast<Index>(k)) += weight * probs[k];
      }
    }
  };

  const std::uint64_t full = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  if (n <= static_cast<std::size_t>(config.exhaustive_max_words)) {
    attribution.exhaustive = true;
    for (std::uint64_t mask = 1; mask <= full; ++mask) accumulate(mask);
    attribution.n_variants = full;
  } else {
    if (n > 64) {
      throw Error(Errc::config_invalid,
                  "sampled explanation supports at most 64 words, got " + std::to_string(n));
    }
    SplitMix64 rng(config.seed);
    accumulate(full);  // the full sentence is always one of the variants
    attribution.n_variants = 1;
    while (attribution.n_variants < static_cast<std::size_t>(config.n_variants)) {
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.next_double() < config.keep_probability) mask |= std::uint64_t{1} << i;
      }
      if (mask == 0 && !config.include_empty_variant) continue;
      // An empty variant has weight 0 and keeps no word, so it adds nothing
      // to any score; it only consumes one slot of the variant budget.
      if (mask != 0) accumulate(mask);
      ++attribution.n_variants;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    attribution.scores.row(static_cast<Index>(i)) /= static_cast<double>(hits[i]);
  }
  return attribution;
}

TypeAttribution aggregate_by_type(const Attribution& attribution) {
  TypeAttribution out;
  std::unordered_map<std::string, Index> row_of;
  std::vector<std::size_t> occurrences;
  for (const std::string& word : attribution.words) {
    if (row_of.emplace(word, static_cast<Index>(out.words.size())).second) {
      out.words.push_back(word);
      occurrences.push_back(0);
    }
  }
  out.scores.setZero(static_cast<Index>(out.words.size()), kNumLabels);
  for (std::size_t i = 0; i < attribution.words.size(); ++i) {
    const Index row = row_of.at(attribution.words[i]);
    out.scores.row(row) += attribution.scores.row(static_cast<Index>(i));
    ++occurrences[static_cast<std::size_t>(row)];
  }
  for (Index r = 0; r < out.scores.rows(); ++r) {
    out.scores.row(r) /= static_cast<double>(occurrences[static_cast<std::size_t>(r)]);
  }
  return out;
}

std::vector<std::pair<std::string, double>> top_words(const Attribution& attribution,
                                                      std::size_t label, std::size_t k) {
  std::vector<std::size_t> order(attribution.words.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return attribution.scores(static_cast<Index>(a), static_cast<Index>(label)) >
           attribution.scores(static_cast<Index>(b), static_cast<Index>(label));
  });
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < order.size() && i < k; ++i) {
    out.emplace_back(attribution.words[order[i]],
                     attribution.scores(static_cast<Index>(order[i]),
                                        static_cast<Index>(label)));
  }
  return out;
}

ComparisonReport compare_models(const PredictionMatrix& preds_a, const PredictionMatrix& preds_b,
                                const Dataset& gold, const Predictor& predictor_a,
                                const Predictor& predictor_b, const std::string& name_a,
                                const std::string& name_b, std::size_t top_k,
                                const ExplainConfig& config) {
  if (top_k > gold.size()) {
    throw Error(Errc::config_invalid, "top_k exceeds the number of evaluated examples");
  }
  ComparisonReport report;
  report.name_a = name_a;
  report.name_b = name_b;
  report.eval_a = evaluate(preds_a, gold);
  report.eval_b = evaluate(preds_b, gold);

  std::unordered_map<std::string, const Example*> example_by_id;
  for (const Example& example : gold.examples) example_by_id.emplace(example.id, &example);
  std::unordered_map<std::string, std::size_t> b_row_by_id;
  for (std::size_t i = 0; i < preds_b.size(); ++i) {
    b_row_by_id.emplace(preds_b.example_ids[i], i);
  }

  const std::vector<double> diffs = jaccard_difference(preds_a, preds_b, gold);
  for (double d : diffs) {
    if (d > 0.0) {
      ++report.n_a_better;
    } else if (d < 0.0) {
      ++report.n_b_better;
    } else {
      ++report.n_tied;
    }
  }

  std::vector<std::size_t> order(diffs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = std::abs(diffs[a]);
    const double db = std::abs(diffs[b]);
    if (da != db) return da > db;
    return preds_a.example_ids[a] < preds_a.example_ids[b];
  });

  for (std::size_t rank = 0; rank < top_k; ++rank) {
    const std::size_t row = order[rank];
    const Example& example = *example_by_id.at(preds_a.example_ids[row]);
    ComparisonEntry entry;
    entry.id = example.id;
    entry.text = example.text;
    entry.gold = *example.labels;
    entry.decisions_a = preds_a.decisions[row];
    entry.decisions_b = preds_b.decisions[b_row_by_id.at(example.id)];
    entry.jaccard_a = jaccard_sample(entry.decisions_a, entry.gold);
    entry.jaccard_b = jaccard_sample(entry.decisions_b, entry.gold);
    entry.difference = diffs[row];
    entry.attribution_a = explain(predictor_a, example.text, config);
    entry.attribution_b = explain(predictor_b, example.text, config);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

namespace {

std::string format_word_list(const Attribution& attribution, std::size_t label, std::size_t k) {
  std::string out;
  for (const auto& [word, score] : top_words(attribution, label, k)) {
    if (!out.empty()) out += ", ";
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.3f", score);
    out += word + " (" + buffer + ")";
  }
  return out;
}

std::string label_set_names(const LabelVector& labels) {
  std::string out;
  for (const std::string& name : labels.names()) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out.empty() ? "-" : out;
}

}  // namespace

std::string render_attribution_text(const Attribution& attribution, std::size_t words_per_label) {
  std::string out;
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    char line[64];
    std::snprintf(line, sizeof(line), "%-12s ", label_names()[k].c_str());
    out += line;
    out += format_word_list(attribution, k, words_per_label);
    out += '\n';
  }
  return out;
}

std::string render_comparison_text(const ComparisonReport& report, std::size_t words_per_label) {
  std::string out;
  out += "comparison: " + report.name_a + " vs " + report.name_b + "\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-16s J %s  F %s  A %s\n", report.name_a.c_str(),
                fmt_pct1(report.eval_a.jaccard).c_str(), fmt_pct1(report.eval_a.macro_f1).c_str(),
                fmt_pct1(report.eval_a.avg_accuracy).c_str());
  out += line;
  std::snprintf(line, sizeof(line), "%-16s J %s  F %s  A %s\n", report.name_b.c_str(),
                fmt_pct1(report.eval_b.jaccard).c_str(), fmt_pct1(report.eval_b.macro_f1).c_str(),
                fmt_pct1(report.eval_b.avg_accuracy).c_str());
  out += line;
  std::snprintf(line, sizeof(line), "per-example wins: %s %zu, %s %zu, tied %zu\n\n",
                report.name_a.c_str(), report.n_a_better, report.name_b.c_str(),
                report.n_b_better, report.n_tied);
  out += line;

  for (const ComparisonEntry& entry : report.entries) {
    std::snprintf(line, sizeof(line), "== %s  (J %s %.3f, %s %.3f, diff %+.3f)\n",
                  entry.id.c_str(), report.name_a.c_str(), entry.jaccard_a,
                  report.name_b.c_str(), entry.jaccard_b, entry.difference);
    out += line;
    out += "text: " + entry.text + "\n";
    out += "gold: " + label_set_names(entry.gold) + "\n";
    out += report.name_a + ": " + label_set_names(entry.decisions_a) + "\n";
    out += report.name_b + ": " + label_set_names(entry.decisions_b) + "\n";
    out += "top words, " + report.name_a + ":\n";
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      std::snprintf(line, sizeof(line), "  %-12s ", label_names()[k].c_str());
      out += line;
      out += format_word_list(entry.attribution_a, k, words_per_label);
      out += '\n';
    }
    out += "top words, " + report.name_b + ":\n";
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      std::snprintf(line, sizeof(line), "  %-12s ", label_names()[k].c_str());
      out += line;
      out += format_word_list(entry.attribution_b, k, words_per_label);
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

std::string render_comparison_json(const ComparisonReport& report, std::size_t words_per_label) {
  nlohmann::ordered_json doc;
  doc["model_a"] = report.name_a;
  doc["model_b"] = report.name_b;
  auto eval_to_json = [](const EvalReport& eval) {
    nlohmann::ordered_json j;
    j["jaccard"] = eval.jaccard;
    j["macro_f1"] = eval.macro_f1;
    j["avg_accuracy"] = eval.avg_accuracy;
    j["exact_match"] = eval.exact_match;
    j["n_examples"] = eval.n_examples;
    return j;
  };
  doc["eval_a"] = eval_to_json(report.eval_a);
  doc["eval_b"] = eval_to_json(report.eval_b);
  doc["wins_a"] = report.n_a_better;
  doc["wins_b"] = report.n_b_better;
  doc["tied"] = report.n_tied;

  doc["examples"] = nlohmann::ordered_json::array();
  auto words_to_json = [&](const Attribution& attribution) {
    nlohmann::ordered_json j;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      nlohmann::ordered_json list = nlohmann::ordered_json::array();
      for (const auto& [word, score] : top_words(attribution, k, words_per_label)) {
        list.push_back({{"word", word}, {"score", score}});
      }
      j[label_names()[k]] = std::move(list);
    }
    return j;
  };
  for (const ComparisonEntry& entry : report.entries) {
    nlohmann::ordered_json j;
    j["id"] = entry.id;
    j["text"] = entry.text;
    j["gold"] = entry.gold.names();
    j["decisions_a"] = entry.decisions_a.names();
    j["decisions_b"] = entry.decisions_b.names();
    j["jaccard_a"] = entry.jaccard_a;
    j["jaccard_b"] = entry.jaccard_b;
    j["difference"] = entry.difference;
    j["top_words_a"] = words_to_json(entry.attribution_a);
    j["top_words_b"] = words_to_json(entry.attribution_b);
    doc["examples"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace emoxling
