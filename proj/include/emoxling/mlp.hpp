// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_MLP_HPP
#define EMOXLING_MLP_HPP

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "emoxling/dataset.hpp"
#include "emoxling/feature_vector.hpp"
#include "emoxling/labels.hpp"

namespace emoxling {

struct MlpConfig {
  Index input_dim = 512;
  std::vector<Index> hidden_dims = {256, 128};  // output layer is always kNumLabels wide
  double learning_rate = 1e-3;
  int batch_size = 32;
  int max_epochs = 50;
  int patience = 3;  // stop after this many consecutive epochs without val improvement
  std::uint64_t seed = 0;
};

struct EpochLosses {
  double train = 0.0;
  double validation = 0.0;
};

/// Fully-connected net: ReLU hidden layers, 11 logistic outputs, trained with
/// Adam on binary cross-entropy summed over outputs and averaged over examples.
struct MlpModel {
  MlpConfig config;
  std::vector<Eigen::MatrixXd> weights;  // layer l maps dims[l] -> dims[l+1]
  std::vector<Eigen::VectorXd> biases;
  std::vector<EpochLosses> history;  // one entry per completed epoch
  int best_epoch = 0;                // 1-based epoch whose parameters were kept

  std::size_t n_layers() const { return weights.size(); }
};

struct MlpGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

/// Tracks the best validation loss seen so far; signals a stop once the run
/// of non-improving epochs reaches the patience.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}

  /// Feed one epoch's validation loss; returns true if it improved the best.
  bool observe(double validation_loss) {
    ++epoch_;
    if (validation_loss < best_) {
      best_ = validation_loss;
      best_epoch_ = epoch_;
      bad_streak_ = 0;
      return true;
    }
    ++bad_streak_;
    return false;
  }

  bool should_stop() const { return bad_streak_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_; }

 private:
  int patience_ = 0;
  int epoch_ = 0;
  int best_epoch_ = 0;
  int bad_streak_ = 0;
  double best_ = std::numeric_limits<double>::infinity();
};

Eigen::MatrixXd labels_to_matrix(const std::vector<LabelVector>& labels);

/// Deterministic random initialization (no training).
MlpModel init_mlp(const MlpConfig& config);

/// Output probabilities, one row per input row.
Eigen::MatrixXd mlp_forward(const MlpModel& model, const Eigen::MatrixXd& X);

/// Mean-over-rows binary cross-entropy, summed over the 11 outputs, computed
/// from logits for numerical stability.
double mlp_loss(const MlpModel& model, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

double mlp_loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& X,
                              const Eigen::MatrixXd& Y, MlpGradients& gradients);

MlpModel train_mlp(const Eigen::MatrixXd& X, const std::vector<LabelVector>& Y,
                   const Eigen::MatrixXd& val_X, const std::vector<LabelVector>& val_Y,
                   const MlpConfig& config);

PredictionMatrix predict_mlp(const MlpModel& model, const Eigen::MatrixXd& X,
                             const std::vector<std::string>& ids);

}  // namespace emoxling

#endif  // EMOXLING_MLP_HPP
