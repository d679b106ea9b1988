// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_TFIDF_HPP
#define EMOXLING_TFIDF_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "emoxling/dataset.hpp"
#include "emoxling/feature_vector.hpp"
#include "emoxling/ngrams.hpp"
#include "emoxling/text.hpp"

namespace emoxling {

/// Fitted tf-idf space. Column order is first-occurrence order over the
/// fitting corpus; idf(t) = ln((1 + n) / (1 + df(t))) + 1.
struct TfidfModel {
  std::unordered_map<std::string, Index> vocabulary;
  std::vector<std::string> terms;  // column order, terms[i] maps to column i
  std::vector<int> document_frequency;
  int n_documents = 0;
  NgramConfig config;
  NormalizationConfig norm;

  Index dimension() const { return static_cast<Index>(terms.size()); }
  double idf(Index column) const;
};

TfidfModel fit_tfidf(const std::vector<std::string>& documents, const NgramConfig& config,
                     const NormalizationConfig& norm = {});
TfidfModel fit_tfidf(const Dataset& corpus, const NgramConfig& config,
                     const NormalizationConfig& norm = {});

/// tf(t) * idf(t) over in-vocabulary terms, L2-normalized. Out-of-vocabulary
/// terms are ignored; a text with none in vocabulary maps to the zero vector.
FeatureVector transform_tfidf(const TfidfModel& model, const std::string& text);

}  // namespace emoxling

#endif  // EMOXLING_TFIDF_HPP
