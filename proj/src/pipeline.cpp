// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/pipeline.hpp"

#include <cstdio>

#include "emoxling/error.hpp"
#include "emoxling/fingerprint.hpp"

namespace emoxling {

const char* feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::word_unigram: return "word_unigram";
    case FeatureKind::char_ngram: return "char_ngram";
    case FeatureKind::word_embed: return "word_embed";
    case FeatureKind::sentence_embed: return "sentence_embed";
  }
  return "?";
}

FeatureKind feature_kind_from_name(const std::string& name) {
  if (name == "word_unigram") return FeatureKind::word_unigram;
  if (name == "char_ngram") return FeatureKind::char_ngram;
  if (name == "word_embed") return FeatureKind::word_embed;
  if (name == "sentence_embed") return FeatureKind::sentence_embed;
  throw Error(Errc::config_invalid, "unknown feature kind '" + name + "'");
}

Index FittedBlock::dimension() const {
  switch (kind) {
    case FeatureKind::word_unigram:
    case FeatureKind::char_ngram:
      return tfidf.dimension();
    case FeatureKind::word_embed:
    case FeatureKind::sentence_embed:
      return table.dimension;
  }
  return 0;
}

Index FeaturePipeline::dimension() const {
  Index total = 0;
  for (const FittedBlock& block : blocks) total += block.dimension();
  return total;
}

bool FeaturePipeline::has_sentence_embed() const {
  for (const FittedBlock& block : blocks) {
    if (block.kind == FeatureKind::sentence_embed) return true;
  }
  return false;
}

FeatureVector FeaturePipeline::transform(const std::string& id, const std::string& text) const {
  std::vector<FeatureVector> parts;
  parts.reserve(blocks.size());
  std::vector<std::string> tokens;
  bool tokenized = false;
  for (const FittedBlock& block : blocks) {
    switch (block.kind) {
      case FeatureKind::word_unigram:
      case FeatureKind::char_ngram:
        parts.push_back(transform_tfidf(block.tfidf, text));
        break;
      case FeatureKind::word_embed:
        if (!tokenized) {
          tokens = tokenize(text, normalization);
          tokenized = true;
        }
        parts.push_back(embed_average(tokens, block.table));
        break;
      case FeatureKind::sentence_embed: {
        const Eigen::VectorXd* vec = block.table.find(id);
        if (vec == nullptr) {
          throw Error(Errc::id_mismatch,
                      "no sentence embedding for id '" + id + "' in " + block.embedding_path);
        }
        parts.push_back(from_dense(*vec));
        break;
      }
    }
  }
  return concat_blocks(parts);
}

std::vector<FeatureVector> FeaturePipeline::transform_all(
    const std::vector<Example>& examples) const {
  std::vector<FeatureVector> out;
  out.reserve(examples.size());
  for (const Example& example : examples) out.push_back(transform(example.id, example.text));
  return out;
}

FeaturePipeline fit_pipeline(const PipelineSpec& spec, const std::vector<Example>& train) {
  if (spec.blocks.empty()) {
    throw Error(Errc::config_invalid, "feature pipeline needs at least one block");
  }
  if (train.empty()) throw Error(Errc::empty_corpus, "cannot fit features on an empty corpus");

  std::vector<std::string> texts;
  texts.reserve(train.size());
  for (const Example& example : train) texts.push_back(example.text);

  FeaturePipeline pipeline;
  pipeline.normalization = spec.normalization;
  for (const FeatureBlockSpec& block_spec : spec.blocks) {
    FittedBlock block;
    block.kind = block_spec.kind;
    switch (block_spec.kind) {
      case FeatureKind::word_unigram:
      case FeatureKind::char_ngram: {
        NgramConfig config = block_spec.ngram;
        config.unit = block_spec.kind == FeatureKind::word_unigram ? NgramConfig::Unit::word
                                                                   : NgramConfig::Unit::character;
        block.tfidf = fit_tfidf(texts, config, spec.normalization);
        break;
      }
      case FeatureKind::word_embed:
      case FeatureKind::sentence_embed:
        if (block_spec.embedding_path.empty()) {
          throw Error(Errc::config_invalid,
                      std::string(feature_kind_name(block_spec.kind)) +
                          " block needs an embedding path");
        }
        block.embedding_path = block_spec.embedding_path;
        block.embedding_fingerprint = fingerprint_file(block_spec.embedding_path);
        block.table = load_embedding_table(block_spec.embedding_path);
        break;
    }
    pipeline.blocks.push_back(std::move(block));
  }
  return pipeline;
}

std::string describe_pipeline(const PipelineSpec& spec) {
  std::string out;
  for (const FeatureBlockSpec& block : spec.blocks) {
    if (!out.empty()) out += '+';
    if (block.kind == FeatureKind::word_unigram || block.kind == FeatureKind::char_ngram) {
      char buffer[48];
      std::snprintf(buffer, sizeof(buffer), "%s[%d-%d]", feature_kind_name(block.kind),
                    block.ngram.n_min, block.ngram.n_max);
      out += buffer;
    } else {
      out += feature_kind_name(block.kind);
    }
  }
  return out;
}

}  // namespace emoxling
