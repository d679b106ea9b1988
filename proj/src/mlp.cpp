// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/mlp.hpp"

#include <cmath>
#include <numeric>

#include "emoxling/error.hpp"
#include "emoxling/rng.hpp"

namespace emoxling {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

std::vector<Index> layer_dims(const MlpConfig& config) {
  std::vector<Index> dims;
  dims.push_back(config.input_dim);
  dims.insert(dims.end(), config.hidden_dims.begin(), config.hidden_dims.end());
  dims.push_back(static_cast<Index>(kNumLabels));
  return dims;
}

void check_config(const MlpConfig& config) {
  if (config.input_dim < 1) throw Error(Errc::config_invalid, "mlp input_dim must be positive");
  for (Index d : config.hidden_dims) {
    if (d < 1) throw Error(Errc::config_invalid, "mlp hidden layer width must be positive");
  }
  if (config.learning_rate <= 0.0 || config.batch_size < 1 || config.max_epochs < 1 ||
      config.patience < 1) {
    throw Error(Errc::config_invalid,
                "mlp config requires positive learning_rate, batch_size, max_epochs, patience");
  }
}

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

// Activations fed into each layer plus the final logits.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> inputs;  // inputs[l] enters layer l; inputs[0] = X
  Eigen::MatrixXd logits;
};

void forward_pass(const MlpModel& model, const Eigen::MatrixXd& X, ForwardCache& cache) {
  cache.inputs.clear();
  cache.inputs.push_back(X);
  for (std::size_t l = 0; l + 1 < model.n_layers(); ++l) {
    Eigen::MatrixXd z = cache.inputs[l] * model.weights[l].transpose();
    z.rowwise() += model.biases[l].transpose();
    cache.inputs.push_back(z.cwiseMax(0.0));
  }
  const std::size_t last = model.n_layers() - 1;
  cache.logits = cache.inputs[last] * model.weights[last].transpose();
  cache.logits.rowwise() += model.biases[last].transpose();
}

double loss_from_logits(const Eigen::MatrixXd& logits, const Eigen::MatrixXd& Y) {
  const auto z = logits.array();
  const auto y = Y.array();
  const double total = (z.max(0.0) - z * y + (-z.abs()).exp().log1p()).sum();
  return total / static_cast<double>(logits.rows());
}

}  // namespace

Eigen::MatrixXd labels_to_matrix(const std::vector<LabelVector>& labels) {
  Eigen::MatrixXd Y(static_cast<Index>(labels.size()), kNumLabels);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      Y(static_cast<Index>(i), static_cast<Index>(k)) = labels[i].get(k) ? 1.0 : 0.0;
    }
  }
  return Y;
}

MlpModel init_mlp(const MlpConfig& config) {
  check_config(config);
  const std::vector<Index> dims = layer_dims(config);
  MlpModel model;
  model.config = config;
  SplitMix64 rng(config.seed);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const double scale = std::sqrt(2.0 / static_cast<double>(dims[l]));
    Eigen::MatrixXd w(dims[l + 1], dims[l]);
    for (Index r = 0; r < w.rows(); ++r) {
      for (Index c = 0; c < w.cols(); ++c) w(r, c) = scale * rng.next_gaussian();
    }
    model.weights.push_back(std::move(w));
    model.biases.push_back(Eigen::VectorXd::Zero(dims[l + 1]));
  }
  return model;
}

Eigen::MatrixXd mlp_forward(const MlpModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.config.input_dim) {
    throw Error(Errc::dimension_mismatch, "mlp input has " + std::to_string(X.cols()) +
                                              " columns, expected " +
                                              std::to_string(model.config.input_dim));
  }
  ForwardCache cache;
  forward_pass(model, X, cache);
  return sigmoid(cache.logits);
}

double mlp_loss(const MlpModel& model, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  ForwardCache cache;
  forward_pass(model, X, cache);
  return loss_from_logits(cache.logits, Y);
}

double mlp_loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& X,
                              const Eigen::MatrixXd& Y, MlpGradients& gradients) {
  ForwardCache cache;
  forward_pass(model, X, cache);
  const double loss = loss_from_logits(cache.logits, Y);

  const std::size_t layers = model.n_layers();
  gradients.weights.resize(layers);
  gradients.biases.resize(layers);

  // d(loss)/d(logits); the mean over rows folds in here.
  Eigen::MatrixXd dz = (sigmoid(cache.logits) - Y) / static_cast<double>(X.rows());
  for (std::size_t l = layers; l-- > 0;) {
    gradients.weights[l] = dz.transpose() * cache.inputs[l];
    gradients.biases[l] = dz.colwise().sum().transpose();
    if (l > 0) {
      Eigen::MatrixXd da = dz * model.weights[l];
      dz = ((cache.inputs[l].array() > 0.0).cast<double>() * da.array()).matrix();
    }
  }
  return loss;
}

MlpModel train_mlp(const Eigen::MatrixXd& X, const std::vector<LabelVector>& Y,
                   const Eigen::MatrixXd& val_X, const std::vector<LabelVector>& val_Y,
                   const MlpConfig& config) {
  check_config(config);
  if (X.rows() == 0) throw Error(Errc::empty_training_set, "no training examples");
  if (static_cast<std::size_t>(X.rows()) != Y.size() ||
      static_cast<std::size_t>(val_X.rows()) != val_Y.size()) {
    throw Error(Errc::dimension_mismatch, "feature/label count mismatch");
  }
  if (X.cols() != config.input_dim || val_X.cols() != config.input_dim) {
    throw Error(Errc::dimension_mismatch, "input width does not match config input_dim");
  }
  if (val_X.rows() == 0) {
    throw Error(Errc::config_invalid, "early stopping requires a non-empty validation set");
  }

  const Eigen::MatrixXd Ym = labels_to_matrix(Y);
  const Eigen::MatrixXd val_Ym = labels_to_matrix(val_Y);
  const Index n = X.rows();

  MlpModel model = init_mlp(config);
  SplitMix64 rng(config.seed ^ 0xD1B54A32D192ED03ULL);

  MlpGradients grad;
  std::vector<Eigen::MatrixXd> mw, vw;
  std::vector<Eigen::VectorXd> mb, vb;
  for (std::size_t l = 0; l < model.n_layers(); ++l) {
    mw.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols()));
    vw.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols()));
    mb.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
    vb.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
  }
  long step = 0;

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<Eigen::MatrixXd> best_weights = model.weights;
  std::vector<Eigen::VectorXd> best_biases = model.biases;
  EarlyStopping stopper(config.patience);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double train_loss_sum = 0.0;
    for (Index start = 0; start < n; start += config.batch_size) {
      const Index bn = std::min<Index>(config.batch_size, n - start);
      Eigen::MatrixXd Xb(bn, X.cols());
      Eigen::MatrixXd Yb(bn, kNumLabels);
      for (Index r = 0; r < bn; ++r) {
        const auto row = static_cast<Index>(order[static_cast<std::size_t>(start + r)]);
        Xb.row(r) = X.row(row);
        Yb.row(r) = Ym.row(row);
      }

      const double batch_loss = mlp_loss_and_gradients(model, Xb, Yb, grad);
      if (!std::isfinite(batch_loss)) {
        throw Error(Errc::non_finite_loss,
                    "training loss became non-finite at epoch " + std::to_string(epoch));
      }
      train_loss_sum += batch_loss * static_cast<double>(bn);

      ++step;
      const double bias1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
      const double bias2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
      for (std::size_t l = 0; l < model.n_layers(); ++l) {
        mw[l] = kAdamBeta1 * mw[l] + (1.0 - kAdamBeta1) * grad.weights[l];
        vw[l].array() =
            kAdamBeta2 * vw[l].array() + (1.0 - kAdamBeta2) * grad.weights[l].array().square();
        model.weights[l].array() -= config.learning_rate * (mw[l].array() / bias1) /
                                    ((vw[l].array() / bias2).sqrt() + kAdamEpsilon);

        mb[l] = kAdamBeta1 * mb[l] + (1.0 - kAdamBeta1) * grad.biases[l];
        vb[l].array() =
            kAdamBeta2 * vb[l].array() + (1.0 - kAdamBeta2) * grad.biases[l].array().square();
        model.biases[l].array() -= config.learning_rate * (mb[l].array() / bias1) /
                                   ((vb[l].array() / bias2).sqrt() + kAdamEpsilon);
      }
    }

    EpochLosses losses;
    losses.train = train_loss_sum / static_cast<double>(n);
    losses.validation = mlp_loss(model, val_X, val_Ym);
    if (!std::isfinite(losses.validation)) {
      throw Error(Errc::non_finite_loss,
                  "validation loss became non-finite at epoch " + std::to_string(epoch));
    }
    model.history.push_back(losses);

    if (stopper.observe(losses.validation)) {
      best_weights = model.weights;
      best_biases = model.biases;
    }
    if (stopper.should_stop()) break;
  }

  model.weights = std::move(best_weights);
  model.biases = std::move(best_biases);
  model.best_epoch = stopper.best_epoch();
  return model;
}

PredictionMatrix predict_mlp(const MlpModel& model, const Eigen::MatrixXd& X,
                             const std::vector<std::string>& ids) {
  if (static_cast<std::size_t>(X.rows()) != ids.size()) {
    throw Error(Errc::dimension_mismatch, "id/input count mismatch");
  }
  return make_prediction_matrix(ids, mlp_forward(model, X), 0.5);
}

}  // namespace emoxling
