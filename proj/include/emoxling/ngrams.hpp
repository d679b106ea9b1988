// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_NGRAMS_HPP
#define EMOXLING_NGRAMS_HPP

#include <string>
#include <utility>
#include <vector>

#include "emoxling/text.hpp"

namespace emoxling {

struct NgramConfig {
  enum class Unit { word, character };
  Unit unit = Unit::character;
  int n_min = 1;
  int n_max = 6;
  int min_df = 1;
};

inline NgramConfig word_unigram_config(int min_df = 1) {
  return {NgramConfig::Unit::word, 1, 1, min_df};
}

inline NgramConfig char_ngram_config(int n_min = 1, int n_max = 6, int min_df = 1) {
  return {NgramConfig::Unit::character, n_min, n_max, min_df};
}

/// Term counts in first-occurrence order.
using TermCounts = std::vector<std::pair<std::string, int>>;

/// Character n-grams slide over the whole string, spaces included, counted in
/// UTF-8 codepoints so multi-byte scripts are never split mid-character.
TermCounts char_ngrams(const std::string& text, int n_min, int n_max);

/// Token n-grams; terms of n > 1 join their tokens with single spaces.
TermCounts word_ngrams(const std::vector<std::string>& tokens, int n_min, int n_max);

/// Full extraction for one raw text: word mode tokenizes, char mode slides
/// over the normalized string.
TermCounts extract_ngrams(const std::string& text, const NgramConfig& config,
                          const NormalizationConfig& norm);

}  // namespace emoxling

#endif  // EMOXLING_NGRAMS_HPP
