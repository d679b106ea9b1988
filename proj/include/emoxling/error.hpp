// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_ERROR_HPP
#define EMOXLING_ERROR_HPP

#include <stdexcept>
#include <string>

namespace emoxling {

enum class Errc {
  io_error,
  missing_column,
  malformed_label,
  duplicate_id,
  empty_text,
  empty_side,
  probability_out_of_range,
  row_width_mismatch,
  unknown_label,
  dimension_mismatch,
  malformed_line,
  empty_corpus,
  empty_training_set,
  non_finite_loss,
  id_mismatch,
  config_invalid,
  predictor_failure,
};

const char* errc_name(Errc code);

/// Exception carrying a machine-checkable error code next to the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace emoxling

#endif  // EMOXLING_ERROR_HPP
