// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_TEXT_HPP
#define EMOXLING_TEXT_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace emoxling {

struct NormalizationConfig {
  bool lowercase = true;
  std::string url_token = "<url>";
  std::string user_token = "<user>";
  bool strip_control = true;
};

/// Tokenizes a tweet: URLs collapse to url_token, @-mentions to user_token,
/// then the text splits on whitespace and punctuation boundaries with
/// punctuation runs kept as tokens. Lowercasing is ASCII-only so multi-byte
/// sequences pass through untouched. Empty input gives an empty list.
std::vector<std::string> tokenize(const std::string& text, const NormalizationConfig& config);

/// The string character n-grams slide over: URL/user replacement and
/// lowercasing applied, runs of whitespace collapsed to single spaces,
/// leading/trailing whitespace dropped.
std::string normalize_text(const std::string& text, const NormalizationConfig& config);

/// Plain whitespace split of the raw text, no normalization. This is the word
/// identity the explainer perturbs, so it works for any black-box predictor.
std::vector<std::string> whitespace_words(const std::string& text);

/// Byte offsets of UTF-8 codepoint starts, with a final entry at text.size().
/// Invalid lead bytes are treated as single-byte codepoints.
std::vector<std::size_t> utf8_offsets(const std::string& text);

}  // namespace emoxling

#endif  // EMOXLING_TEXT_HPP
