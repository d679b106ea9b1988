// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/feature_vector.hpp"

#include <cmath>

#include "emoxling/error.hpp"

namespace emoxling {

double l2_norm(const FeatureVector& v) {
  double sum = 0.0;
  for (const auto& [index, value] : v.entries) sum += value * value;
  return std::sqrt(sum);
}

void l2_normalize(FeatureVector& v) {
  double norm = l2_norm(v);
  if (norm == 0.0) return;
  for (auto& [index, value] : v.entries) value /= norm;
}

double dot(const FeatureVector& v, const Eigen::VectorXd& dense) {
  double sum = 0.0;
  for (const auto& [index, value] : v.entries) sum += value * dense[index];
  return sum;
}

Eigen::VectorXd to_dense(const FeatureVector& v) {
  Eigen::VectorXd dense = Eigen::VectorXd::Zero(v.dimension);
  for (const auto& [index, value] : v.entries) dense[index] = value;
  return dense;
}

FeatureVector from_dense(const Eigen::VectorXd& dense) {
  FeatureVector v;
  v.dimension = dense.size();
  for (Index i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) v.entries.emplace_back(i, dense[i]);
  }
  return v;
}

FeatureVector concat_blocks(const std::vector<FeatureVector>& blocks) {
  FeatureVector out;
  Index offset = 0;
  for (const FeatureVector& block : blocks) {
    FeatureVector scaled = block;
    l2_normalize(scaled);
    for (const auto& [index, value] : scaled.entries) {
      out.entries.emplace_back(offset + index, value);
    }
    offset += block.dimension;
  }
  out.dimension = offset;
  return out;
}

}  // namespace emoxling
