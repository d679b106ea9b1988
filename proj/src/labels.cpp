// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/labels.hpp"

#include <algorithm>
#include <cctype>

#include "emoxling/error.hpp"

namespace emoxling {

const std::array<std::string, kNumLabels>& label_names() {
  static const std::array<std::string, kNumLabels> names = {
      "anger",    "anticipation", "disgust", "fear",     "joy",      "love",
      "optimism", "pessimism",    "sadness", "surprise", "trust"};
  return names;
}

const std::string& to_string(EmotionLabel label) {
  return label_names()[static_cast<std::size_t>(label)];
}

EmotionLabel label_from_name(const std::string& name) {
  std::string lowered(name.size(), '\0');
  std::transform(name.begin(), name.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const auto& names = label_names();
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (names[i] == lowered) return static_cast<EmotionLabel>(i);
  }
  throw Error(Errc::unknown_label, "'" + name + "' is not one of the 11 emotion labels");
}

std::vector<std::string> LabelVector::names() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (bits_[i]) out.push_back(label_names()[i]);
  }
  return out;
}

LabelVector label_vector_from_names(const std::vector<std::string>& names) {
  LabelVector v;
  for (const auto& name : names) v.set(label_from_name(name));
  return v;
}

}  // namespace emoxling
