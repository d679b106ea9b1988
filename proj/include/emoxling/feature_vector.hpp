// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_FEATURE_VECTOR_HPP
#define EMOXLING_FEATURE_VECTOR_HPP

#include <Eigen/Core>
#include <utility>
#include <vector>

namespace emoxling {

using Index = Eigen::Index;

/// Sparse vector over a fitted feature space: entries sorted by strictly
/// increasing index, zero values never stored.
struct FeatureVector {
  Index dimension = 0;
  std::vector<std::pair<Index, double>> entries;

  std::size_t nnz() const { return entries.size(); }
};

double l2_norm(const FeatureVector& v);

/// Scales v to unit L2 norm; the zero vector stays zero.
void l2_normalize(FeatureVector& v);

double dot(const FeatureVector& v, const Eigen::VectorXd& dense);

Eigen::VectorXd to_dense(const FeatureVector& v);

/// Drops zero entries; keeps dense order.
FeatureVector from_dense(const Eigen::VectorXd& dense);

/// L2-normalizes each block independently (zero blocks stay zero), then
/// shifts indices so block i occupies [offset_i, offset_i + dim_i) and
/// concatenates left to right.
FeatureVector concat_blocks(const std::vector<FeatureVector>& blocks);

}  // namespace emoxling

#endif  // EMOXLING_FEATURE_VECTOR_HPP
