// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_SVM_HPP
#define EMOXLING_SVM_HPP

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "emoxling/dataset.hpp"
#include "emoxling/feature_vector.hpp"
#include "emoxling/labels.hpp"

namespace emoxling {

struct SvmConfig {
  double C = 1.0;
  double tolerance = 1e-3;  // stop when the max projected-gradient violation falls below this
  int max_sweeps = 1000;
  std::uint64_t seed = 0;
  bool shuffle_each_sweep = true;
  double positive_weight = 1.0;  // cost multiplier for positive examples (class imbalance knob)
  double sigmoid_scale = 1.0;    // 'a' in p = 1 / (1 + exp(-a * margin))
};

/// One linear binary classifier per label, canonical label order. The bias
/// is trained as an appended constant-1 feature (regularized) and stored
/// separately for prediction.
struct MultiLabelLinearModel {
  Index feature_dimension = 0;
  Eigen::MatrixXd weights;  // kNumLabels x feature_dimension
  Eigen::VectorXd biases;   // kNumLabels
  double sigmoid_scale = 1.0;
};

struct SvmLabelLog {
  std::vector<double> dual_objective;  // value after each full sweep
  std::vector<double> alpha;           // final dual variables, one per example
  int sweeps = 0;
  double final_violation = 0.0;
  bool converged = false;
};

struct SvmTrainLog {
  std::array<SvmLabelLog, kNumLabels> labels;
};

/// Trains the 11 one-vs-rest L2-regularized hinge-loss SVMs by dual
/// coordinate descent (alpha in [0, C], w maintained incrementally).
/// Deterministic given the seed; label k's problem draws from its own RNG
/// stream so other label columns never influence it.
MultiLabelLinearModel train_svm_ovr(const std::vector<FeatureVector>& X,
                                    const std::vector<LabelVector>& Y, const SvmConfig& config,
                                    SvmTrainLog* log = nullptr);

/// Margins w_k . x + b_k, one row per input.
Eigen::MatrixXd decision_margins(const MultiLabelLinearModel& model,
                                 const std::vector<FeatureVector>& X);

/// Probabilities via the logistic on the margin; decision = margin > 0
/// (equivalently probability > 0.5).
PredictionMatrix predict(const MultiLabelLinearModel& model, const std::vector<FeatureVector>& X,
                         const std::vector<std::string>& ids);
PredictionMatrix predict(const MultiLabelLinearModel& model, const std::vector<FeatureVector>& X);

}  // namespace emoxling

#endif  // EMOXLING_SVM_HPP
