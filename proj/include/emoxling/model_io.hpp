// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_MODEL_IO_HPP
#define EMOXLING_MODEL_IO_HPP

#include <optional>
#include <string>

#include "emoxling/mlp.hpp"
#include "emoxling/pipeline.hpp"
#include "emoxling/svm.hpp"

namespace emoxling {

/// A trained model plus the feature pipeline that feeds it, as one loadable
/// unit. Exactly one of svm/mlp is set. Embedding tables are stored by path
/// and content fingerprint, not inlined; loading re-reads them and refuses a
/// file whose bytes changed, which keeps reloaded predictions bit-identical.
struct ModelArtifact {
  std::string model_type;  // "svm" or "mlp"
  FeaturePipeline pipeline;
  std::optional<MultiLabelLinearModel> svm;
  std::optional<MlpModel> mlp;
};

std::string serialize_model(const ModelArtifact& artifact);
ModelArtifact parse_model(const std::string& json_text);

void save_model(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_model(const std::string& path);

/// Runs whichever model the artifact holds on the given examples.
PredictionMatrix predict_with_artifact(const ModelArtifact& artifact,
                                       const std::vector<Example>& examples);

}  // namespace emoxling

#endif  // EMOXLING_MODEL_IO_HPP
