// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_LABELS_HPP
#define EMOXLING_LABELS_HPP

#include <array>
#include <bitset>
#include <cstddef>
#include <string>
#include <vector>

namespace emoxling {

/// The 11 emotion classes, in canonical order. Every binary encoding in the
/// toolkit (label vectors, prediction columns, report rows) uses this order.
enum class EmotionLabel : int {
  anger = 0,
  anticipation,
  disgust,
  fear,
  joy,
  love,
  optimism,
  pessimism,
  sadness,
  surprise,
  trust,
};

inline constexpr std::size_t kNumLabels = 11;

const std::array<std::string, kNumLabels>& label_names();

/// Case-insensitive name lookup. Throws Error(unknown_label) for any other name.
EmotionLabel label_from_name(const std::string& name);

const std::string& to_string(EmotionLabel label);

/// Presence/absence of each of the 11 emotions for one example.
class LabelVector {
 public:
  LabelVector() = default;

  bool get(EmotionLabel label) const { return bits_[static_cast<std::size_t>(label)]; }
  bool get(std::size_t index) const { return bits_[index]; }
  void set(EmotionLabel label, bool value = true) { bits_[static_cast<std::size_t>(label)] = value; }
  void set(std::size_t index, bool value = true) { bits_[index] = value; }

  std::size_t count() const { return bits_.count(); }
  bool any() const { return bits_.any(); }

  bool operator==(const LabelVector& other) const { return bits_ == other.bits_; }
  bool operator!=(const LabelVector& other) const { return bits_ != other.bits_; }

  std::vector<std::string> names() const;

 private:
  std::bitset<kNumLabels> bits_;
};

/// Bits set exactly for the named emotions; empty input gives the zero vector.
LabelVector label_vector_from_names(const std::vector<std::string>& names);

}  // namespace emoxling

#endif  // EMOXLING_LABELS_HPP
