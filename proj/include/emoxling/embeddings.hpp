// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_EMBEDDINGS_HPP
#define EMOXLING_EMBEDDINGS_HPP

#include <Eigen/Core>
#include <string>
#include <unordered_map>
#include <vector>

#include "emoxling/feature_vector.hpp"

namespace emoxling {

/// Term-keyed vectors of one fixed dimension. Sentence-level tables use the
/// same format with example ids as the keys.
struct EmbeddingTable {
  Index dimension = 0;
  std::unordered_map<std::string, Eigen::VectorXd> vectors;

  const Eigen::VectorXd* find(const std::string& term) const;
};

/// Textual format: first line `<count> <dim>`, then `term v1 ... vD` per
/// line. Duplicate terms keep the last row (a warning goes to stderr).
EmbeddingTable load_embedding_table(const std::string& path);
EmbeddingTable parse_embedding_table(const std::string& content);

/// Arithmetic mean of in-vocabulary token vectors; empty or all-OOV input
/// gives the zero vector of the table's dimension.
FeatureVector embed_average(const std::vector<std::string>& tokens, const EmbeddingTable& table);

}  // namespace emoxling

#endif  // EMOXLING_EMBEDDINGS_HPP
