// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_PIPELINE_HPP
#define EMOXLING_PIPELINE_HPP

#include <string>
#include <vector>

#include "emoxling/dataset.hpp"
#include "emoxling/embeddings.hpp"
#include "emoxling/feature_vector.hpp"
#include "emoxling/ngrams.hpp"
#include "emoxling/text.hpp"
#include "emoxling/tfidf.hpp"

namespace emoxling {

enum class FeatureKind { word_unigram, char_ngram, word_embed, sentence_embed };

const char* feature_kind_name(FeatureKind kind);
FeatureKind feature_kind_from_name(const std::string& name);

/// One requested feature block. The n-gram fields apply to the tf-idf kinds;
/// the path to the embedding kinds (sentence_embed tables are keyed by
/// example id, word_embed tables by token).
struct FeatureBlockSpec {
  FeatureKind kind = FeatureKind::char_ngram;
  NgramConfig ngram = char_ngram_config();
  std::string embedding_path;
};

struct PipelineSpec {
  NormalizationConfig normalization;
  std::vector<FeatureBlockSpec> blocks;
};

/// A fitted block: tf-idf kinds carry their model, embedding kinds the loaded
/// table plus the path and content fingerprint it came from.
struct FittedBlock {
  FeatureKind kind = FeatureKind::char_ngram;
  TfidfModel tfidf;
  EmbeddingTable table;
  std::string embedding_path;
  std::string embedding_fingerprint;

  Index dimension() const;
};

/// Fitted feature extractor: transforms one example into the concatenation of
/// its blocks, each L2-normalized. Pipelines with a sentence_embed block can
/// only transform examples whose id appears in the table.
struct FeaturePipeline {
  NormalizationConfig normalization;
  std::vector<FittedBlock> blocks;

  Index dimension() const;
  bool has_sentence_embed() const;
  FeatureVector transform(const std::string& id, const std::string& text) const;
  std::vector<FeatureVector> transform_all(const std::vector<Example>& examples) const;
};

/// Fits tf-idf statistics on the training texts and loads the referenced
/// embedding tables.
FeaturePipeline fit_pipeline(const PipelineSpec& spec, const std::vector<Example>& train);

/// Compact one-line description, e.g. "char_ngram[1-6]+word_embed".
std::string describe_pipeline(const PipelineSpec& spec);

}  // namespace emoxling

#endif  // EMOXLING_PIPELINE_HPP
