// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/ngrams.hpp"

#include <unordered_map>

#include "emoxling/error.hpp"

namespace emoxling {

namespace {

class OrderedCounter {
 public:
  void add(std::string term) {
    auto [it, inserted] = index_.try_emplace(std::move(term), counts_.size());
    if (inserted) {
      counts_.push_back({it->first, 1});
    } else {
      ++counts_[it->second].second;
    }
  }

  TermCounts take() { return std::move(counts_); }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  TermCounts counts_;
};

void check_range(int n_min, int n_max) {
  if (n_min < 1 || n_min > n_max) {
    throw Error(Errc::config_invalid, "n-gram range [" + std::to_string(n_min) + ", " +
                                          std::to_string(n_max) + "] must satisfy 1 <= min <= max");
  }
}

}  // namespace

TermCounts char_ngrams(const std::string& text, int n_min, int n_max) {
  check_range(n_min, n_max);
  OrderedCounter counter;
  const std::vector<std::size_t> offsets = utf8_offsets(text);
  const int n_codepoints = static_cast<int>(offsets.size()) - 1;
  for (int start = 0; start < n_codepoints; ++start) {
    for (int n = n_min; n <= n_max && start + n <= n_codepoints; ++n) {
      const std::size_t begin = offsets[static_cast<std::size_t>(start)];
      const std::size_t end = offsets[static_cast<std::size_t>(start + n)];
      counter.add(text.substr(begin, end - begin));
    }
  }
  return counter.take();
}

TermCounts word_ngrams(const std::vector<std::string>& tokens, int n_min, int n_max) {
  check_range(n_min, n_max);
  OrderedCounter counter;
  const int n_tokens = static_cast<int>(tokens.size());
  for (int start = 0; start < n_tokens; ++start) {
    for (int n = n_min; n <= n_max && start + n <= n_tokens; ++n) {
      std::string term = tokens[static_cast<std::size_t>(start)];
      for (int j = 1; j < n; ++j) {
        term += ' ';
        term += tokens[static_cast<std::size_t>(start + j)];
      }
      counter.add(std::move(term));
    }
  }
  return counter.take();
}

TermCounts extract_ngrams(const std::string& text, const NgramConfig& config,
                          const NormalizationConfig& norm) {
  if (config.unit == NgramConfig::Unit::word) {
    return word_ngrams(tokenize(text, norm), config.n_min, config.n_max);
  }
  return char_ngrams(normalize_text(text, norm), config.n_min, config.n_max);
}

}  // namespace emoxling
