// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/tfidf.hpp"

#include <algorithm>
#include <cmath>

#include "emoxling/error.hpp"

namespace emoxling {

double TfidfModel::idf(Index column) const {
  return std::log((1.0 + n_documents) /
                  (1.0 + document_frequency[static_cast<std::size_t>(column)])) +
         1.0;
}

TfidfModel fit_tfidf(const std::vector<std::string>& documents, const NgramConfig& config,
                     const NormalizationConfig& norm) {
  if (documents.empty()) throw Error(Errc::empty_corpus, "tf-idf fitting needs a non-empty corpus");

  TfidfModel model;
  model.config = config;
  model.norm = norm;
  model.n_documents = static_cast<int>(documents.size());

  // First pass: document frequencies, vocabulary in first-occurrence order.
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<std::string> terms;
  std::vector<int> df;
  for (const std::string& doc : documents) {
    for (const auto& [term, count] : extract_ngrams(doc, config, norm)) {
      auto [it, inserted] = slot.try_emplace(term, terms.size());
      if (inserted) {
        terms.push_back(term);
        df.push_back(1);
      } else {
        ++df[it->second];
      }
    }
  }

  // Keep terms meeting min_df, preserving first-occurrence order.
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (df[i] >= config.min_df) {
      model.vocabulary.emplace(terms[i], model.dimension());
      model.terms.push_back(terms[i]);
      model.document_frequency.push_back(df[i]);
    }
  }
  return model;
}

TfidfModel fit_tfidf(const Dataset& corpus, const NgramConfig& config,
                     const NormalizationConfig& norm) {
  std::vector<std::string> documents;
  documents.reserve(corpus.size());
  for (const Example& example : corpus.examples) documents.push_back(example.text);
  return fit_tfidf(documents, config, norm);
}

FeatureVector transform_tfidf(const TfidfModel& model, const std::string& text) {
  FeatureVector v;
  v.dimension = model.dimension();
  for (const auto& [term, count] : extract_ngrams(text, model.config, model.norm)) {
    auto it = model.vocabulary.find(term);
    if (it == model.vocabulary.end()) continue;
    v.entries.emplace_back(it->second, count * model.idf(it->second));
  }
  std::sort(v.entries.begin(), v.entries.end());
  l2_normalize(v);
  return v;
}

}  // namespace emoxling
