// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/error.hpp"

namespace emoxling {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::io_error: return "IoError";
    case Errc::missing_column: return "MissingColumn";
    case Errc::malformed_label: return "MalformedLabel";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::empty_text: return "EmptyText";
    case Errc::empty_side: return "EmptySide";
    case Errc::probability_out_of_range: return "ProbabilityOutOfRange";
    case Errc::row_width_mismatch: return "RowWidthMismatch";
    case Errc::unknown_label: return "UnknownLabel";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::malformed_line: return "MalformedLine";
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::empty_training_set: return "EmptyTrainingSet";
    case Errc::non_finite_loss: return "NonFiniteLoss";
    case Errc::id_mismatch: return "IdMismatch";
    case Errc::config_invalid: return "ConfigInvalid";
    case Errc::predictor_failure: return "PredictorFailure";
  }
  return "UnknownError";
}

}  // namespace emoxling
