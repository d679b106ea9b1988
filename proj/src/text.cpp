// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/text.hpp"

#include <cctype>

namespace emoxling {

namespace {

bool is_space_byte(unsigned char c) { return c < 0x80 && std::isspace(c); }

bool is_control_byte(unsigned char c) { return c < 0x20 || c == 0x7F; }

// ASCII alnum, underscore, or any multi-byte UTF-8 unit counts as a word byte.
bool is_word_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c) || c == '_'; }

bool matches_ci(const std::string& text, std::size_t pos, const char* literal) {
  for (std::size_t i = 0; literal[i] != '\0'; ++i) {
    if (pos + i >= text.size()) return false;
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) != literal[i]) return false;
  }
  return true;
}

bool url_starts_at(const std::string& text, std::size_t pos) {
  return matches_ci(text, pos, "http://") || matches_ci(text, pos, "https://") ||
         matches_ci(text, pos, "www.");
}

struct Piece {
  enum class Kind { word, punct, space, replacement };
  Kind kind;
  std::string value;
};

std::vector<Piece> segment(const std::string& text, const NormalizationConfig& config) {
  std::vector<Piece> pieces;
  const std::size_t n = text.size();
  std::size_t i = 0;
  bool prev_word = false;  // whether the byte before position i is a word byte
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (is_space_byte(c) || (config.strip_control && is_control_byte(c))) {
      if (pieces.empty() || pieces.back().kind != Piece::Kind::space) {
        pieces.push_back({Piece::Kind::space, " "});
      }
      ++i;
      prev_word = false;
      continue;
    }
    if (!prev_word && url_starts_at(text, i)) {
      while (i < n && !is_space_byte(static_cast<unsigned char>(text[i])) &&
             !(config.strip_control && is_control_byte(static_cast<unsigned char>(text[i])))) {
        ++i;
      }
      pieces.push_back({Piece::Kind::replacement, config.url_token});
      prev_word = false;
      continue;
    }
    if (!prev_word && c == '@' && i + 1 < n &&
        is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
      ++i;
      while (i < n && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
      pieces.push_back({Piece::Kind::replacement, config.user_token});
      prev_word = false;
      continue;
    }
    if (is_word_byte(c)) {
      std::string word;
      while (i < n && is_word_byte(static_cast<unsigned char>(text[i]))) {
        char b = text[i];
        if (config.lowercase && static_cast<unsigned char>(b) < 0x80) {
          b = static_cast<char>(std::tolower(static_cast<unsigned char>(b)));
        }
        word.push_back(b);
        ++i;
      }
      pieces.push_back({Piece::Kind::word, std::move(word)});
      prev_word = true;
      continue;
    }
    // Punctuation/symbol run.
    std::string punct;
    while (i < n) {
      unsigned char b = static_cast<unsigned char>(text[i]);
      if (is_word_byte(b) || is_space_byte(b) ||
          (config.strip_control && is_control_byte(b)) || b == '@' ||
          url_starts_at(text, i)) {
        break;
      }
      punct.push_back(text[i]);
      ++i;
    }
    if (!punct.empty()) pieces.push_back({Piece::Kind::punct, std::move(punct)});
    prev_word = false;
  }
  return pieces;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text, const NormalizationConfig& config) {
  std::vector<std::string> tokens;
  for (auto& piece : segment(text, config)) {
    if (piece.kind != Piece::Kind::space) tokens.push_back(std::move(piece.value));
  }
  return tokens;
}

std::string normalize_text(const std::string& text, const NormalizationConfig& config) {
  std::vector<Piece> pieces = segment(text, config);
  // Trim leading/trailing whitespace pieces; interior runs are already
  // collapsed to single spaces by segment().
  std::size_t begin = 0, end = pieces.size();
  while (begin < end && pieces[begin].kind == Piece::Kind::space) ++begin;
  while (end > begin && pieces[end - 1].kind == Piece::Kind::space) --end;
  std::string out;
  for (std::size_t i = begin; i < end; ++i) out += pieces[i].value;
  return out;
}

std::vector<std::string> whitespace_words(const std::string& text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (is_space_byte(static_cast<unsigned char>(c))) {
      if (!current.empty()) {
        words.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::vector<std::size_t> utf8_offsets(const std::string& text) {
  std::vector<std::size_t> offsets;
  std::size_t i = 0;
  while (i < text.size()) {
    offsets.push_back(i);
    unsigned char lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if ((lead & 0xE0) == 0xC0) len = 2;
    else if ((lead & 0xF0) == 0xE0) len = 3;
    else if ((lead & 0xF8) == 0xF0) len = 4;
    // Clip sequences that would run past the end (malformed input).
    if (i + len > text.size()) len = 1;
    i += len;
  }
  offsets.push_back(text.size());
  return offsets;
}

}  // namespace emoxling
