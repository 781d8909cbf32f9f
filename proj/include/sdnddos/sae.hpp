/*
 * Copyright 2026 The sdnddos Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Stacked sparse autoencoder classifier.
//
// Each sparse autoencoder layer maps M inputs to N sigmoid hidden units and
// back. It is trained on
//
//   J = 1/(2r) sum_i |x_i - xhat_i|^2
//     + lambda/2 (|U|^2 + |U'|^2 + |b|^2 + |b'|^2)
//     + beta sum_j KL(rho || rhohat_j)
//
// where rhohat_j is the mean activation of hidden unit j over the batch and
// KL uses the natural log. Layers are pretrained greedily (each on the codes
// of the previous one), a soft-max head is trained on the last codes, and
// the whole stack is then fine-tuned on cross-entropy plus weight decay.
//
// Records are matrix columns throughout (features x records). Optimisation
// is plain full-batch gradient descent; all randomness comes from the seed.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdnddos/errors.hpp"
#include "sdnddos/random.hpp"

namespace sdnddos::sae {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kRhoHatClamp = 1e-10;

struct Hyperparams {
  std::vector<std::size_t> layer_sizes{68, 34, 17};
  std::size_t num_classes = 8;
  double lambda = 1e-4;
  double beta = 3.0;
  double rho = 0.05;
  double learning_rate = 0.3;           // autoencoder pretraining
  double finetune_learning_rate = 1.0;  // soft-max head and fine-tuning
  int epochs_pretrain = 400;
  int epochs_finetune = 1000;
  std::uint64_t seed = 1;
  bool decay_biases = true;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// ---------------------------------------------------------------- activations

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline Matrix sigmoid(const Matrix& z) { return z.unaryExpr([](double v) { return sigmoid(v); }); }

// Column-wise soft-max, shifted by the column max.
inline Matrix softmax(const Matrix& z) {
  Matrix out(z.rows(), z.cols());
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    const double shift = z.col(c).maxCoeff();
    out.col(c) = (z.col(c).array() - shift).exp();
    out.col(c) /= out.col(c).sum();
  }
  return out;
}

inline double kl_divergence(double rho, double rho_hat) {
  rho_hat = std::clamp(rho_hat, kRhoHatClamp, 1.0 - kRhoHatClamp);
  return rho * std::log(rho / rho_hat) + (1.0 - rho) * std::log((1.0 - rho) / (1.0 - rho_hat));
}

// ---------------------------------------------------------------- parameters

struct Encoder {
  Matrix weights;  // hidden x input
  Vector bias;     // hidden

  Eigen::Index input_dim() const { return weights.cols(); }
  Eigen::Index output_dim() const { return weights.rows(); }

  friend bool operator==(const Encoder& a, const Encoder& b) {
    return a.weights == b.weights && a.bias == b.bias;
  }
};

struct AutoencoderLayer {
  Matrix U;        // N x M, encoder
  Matrix U_prime;  // M x N, decoder
  Vector b1;       // N
  Vector b1_prime; // M

  Eigen::Index input_dim() const { return U.cols(); }
  Eigen::Index hidden_dim() const { return U.rows(); }
  Encoder encoder() const { return Encoder{U, b1}; }
};

struct SoftmaxHead {
  Matrix W;  // K x N
  Vector b;  // K

  friend bool operator==(const SoftmaxHead& a, const SoftmaxHead& b) {
    return a.W == b.W && a.b == b.b;
  }
};

// Encoders plus head. With no encoders this is a plain soft-max regression.
struct SaeModel {
  std::vector<Encoder> encoders;
  SoftmaxHead head;
  Hyperparams hyper;
  std::vector<std::string> class_names;

  Eigen::Index input_dim() const {
    return encoders.empty() ? head.W.cols() : encoders.front().input_dim();
  }
  std::size_t num_classes() const { return static_cast<std::size_t>(head.W.rows()); }

  friend bool operator==(const SaeModel&, const SaeModel&) = default;
};

// ---------------------------------------------------------------- randomness

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.uniform(-bound, bound);
  }
  return m;
}

inline AutoencoderLayer init_autoencoder(Eigen::Index inputs, Eigen::Index hidden, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(inputs + hidden));
  AutoencoderLayer layer;
  layer.U = random_matrix(hidden, inputs, bound, rng);
  layer.U_prime = random_matrix(inputs, hidden, bound, rng);
  layer.b1 = Vector::Zero(hidden);
  layer.b1_prime = Vector::Zero(inputs);
  return layer;
}

inline SoftmaxHead init_head(Eigen::Index inputs, Eigen::Index classes, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(inputs + classes));
  return SoftmaxHead{random_matrix(classes, inputs, bound, rng), Vector::Zero(classes)};
}

// ---------------------------------------------------------------- encoding

inline Matrix encode(const Encoder& enc, const Matrix& X) {
  if (X.rows() != enc.input_dim()) {
    throw ValidationError("encode: input has " + std::to_string(X.rows()) +
                          " rows, layer expects " + std::to_string(enc.input_dim()));
  }
  return sigmoid((enc.weights * X).colwise() + enc.bias);
}

inline Matrix encode(const AutoencoderLayer& layer, const Matrix& X) {
  return encode(layer.encoder(), X);
}

inline Matrix encode_stack(std::span<const Encoder> encoders, Matrix X) {
  for (const Encoder& e : encoders) X = encode(e, X);
  return X;
}

// ---------------------------------------------------------------- training log

struct TrainingLog {
  std::vector<std::vector<std::pair<int, double>>> pretrain;  // per layer
  std::vector<std::pair<int, double>> head;
  std::vector<std::pair<int, double>> finetune;
  int checkpoint_every = 50;

  void record(std::vector<std::pair<int, double>>& series, int epoch, int last, double cost) const {
    if (epoch % checkpoint_every == 0 || epoch == last) series.emplace_back(epoch, cost);
  }
};

inline void require_finite(double cost, const std::string& stage, int epoch) {
  if (!std::isfinite(cost)) {
    throw NumericError(stage + ": non-finite cost at epoch " + std::to_string(epoch) +
                       " (try a smaller learning rate)");
  }
}

// ---------------------------------------------------------------- sparse AE cost

struct SparsityParams {
  double lambda = 1e-4;
  double beta = 3.0;
  double rho = 0.05;
  bool decay_biases = true;
};

struct AutoencoderCostGrad {
  double cost = 0.0;
  AutoencoderLayer grad;
};

inline AutoencoderCostGrad sae_cost_grad(const AutoencoderLayer& layer, const Matrix& X,
                                         const SparsityParams& sp) {
  const Eigen::Index M = layer.input_dim();
  const Eigen::Index N = layer.hidden_dim();
  if (X.rows() != M || layer.U_prime.rows() != M || layer.U_prime.cols() != N ||
      layer.b1.size() != N || layer.b1_prime.size() != M) {
    throw ValidationError("sae_cost_grad: dimension mismatch");
  }
  if (X.cols() < 1) throw ValidationError("sae_cost_grad: empty batch");
  const double r = static_cast<double>(X.cols());

  const Matrix A = sigmoid((layer.U * X).colwise() + layer.b1);
  const Matrix Xhat = sigmoid((layer.U_prime * A).colwise() + layer.b1_prime);
  const Matrix diff = Xhat - X;
  const Vector rho_hat = A.rowwise().mean();

  double decay = layer.U.squaredNorm() + layer.U_prime.squaredNorm();
  if (sp.decay_biases) decay += layer.b1.squaredNorm() + layer.b1_prime.squaredNorm();
  double kl = 0.0;
  for (Eigen::Index j = 0; j < N; ++j) kl += kl_divergence(sp.rho, rho_hat(j));

  AutoencoderCostGrad out;
  out.cost = diff.squaredNorm() / (2.0 * r) + 0.5 * sp.lambda * decay + sp.beta * kl;

  const Matrix delta_out = (diff.array() * Xhat.array() * (1.0 - Xhat.array())).matrix() / r;
  Vector sparse_term(N);
  for (Eigen::Index j = 0; j < N; ++j) {
    const double q = rho_hat(j);
    // Clamped estimates have zero derivative.
    sparse_term(j) = (q < kRhoHatClamp || q > 1.0 - kRhoHatClamp)
                         ? 0.0
                         : sp.beta * (-sp.rho / q + (1.0 - sp.rho) / (1.0 - q)) / r;
  }
  const Matrix delta_hidden =
      (((layer.U_prime.transpose() * delta_out).colwise() + sparse_term).array() * A.array() *
       (1.0 - A.array()))
          .matrix();

  out.grad.U_prime = delta_out * A.transpose() + sp.lambda * layer.U_prime;
  out.grad.b1_prime = delta_out.rowwise().sum();
  out.grad.U = delta_hidden * X.transpose() + sp.lambda * layer.U;
  out.grad.b1 = delta_hidden.rowwise().sum();
  if (sp.decay_biases) {
    out.grad.b1_prime += sp.lambda * layer.b1_prime;
    out.grad.b1 += sp.lambda * layer.b1;
  }
  return out;
}

inline double reconstruction_error(const AutoencoderLayer& layer, const Matrix& X) {
  const Matrix A = encode(layer, X);
  const Matrix Xhat = sigmoid((layer.U_prime * A).colwise() + layer.b1_prime);
  return (Xhat - X).squaredNorm() / (2.0 * static_cast<double>(X.cols()));
}

inline void train_autoencoder(AutoencoderLayer& layer, const Matrix& X, const Hyperparams& h,
                              std::vector<std::pair<int, double>>* history,
                              const TrainingLog* log) {
  const SparsityParams sp{h.lambda, h.beta, h.rho, h.decay_biases};
  for (int epoch = 0; epoch < h.epochs_pretrain; ++epoch) {
    AutoencoderCostGrad cg = sae_cost_grad(layer, X, sp);
    require_finite(cg.cost, "pretrain", epoch);
    if (history && log) log->record(*history, epoch, h.epochs_pretrain, cg.cost);
    layer.U -= h.learning_rate * cg.grad.U;
    layer.U_prime -= h.learning_rate * cg.grad.U_prime;
    layer.b1 -= h.learning_rate * cg.grad.b1;
    layer.b1_prime -= h.learning_rate * cg.grad.b1_prime;
  }
  if (history && log && h.epochs_pretrain > 0) {
    const double final_cost = sae_cost_grad(layer, X, sp).cost;
    require_finite(final_cost, "pretrain", h.epochs_pretrain);
    log->record(*history, h.epochs_pretrain, h.epochs_pretrain, final_cost);
  }
}

// Greedy layer-wise pretraining. Draws initial parameters for every layer
// from `rng` in order; returns the trained autoencoders (decoders included).
inline std::vector<AutoencoderLayer> pretrain(std::span<const std::size_t> stack_sizes,
                                              const Matrix& X, const Hyperparams& h, Rng& rng,
                                              TrainingLog* log = nullptr) {
  if (stack_sizes.size() < 1 || static_cast<Eigen::Index>(stack_sizes[0]) != X.rows()) {
    throw ValidationError("pretrain: first layer size must equal the input dimension (" +
                          std::to_string(X.rows()) + ")");
  }
  std::vector<AutoencoderLayer> layers;
  Matrix input = X;
  if (log) log->pretrain.assign(stack_sizes.size() - 1, {});
  for (std::size_t l = 1; l < stack_sizes.size(); ++l) {
    AutoencoderLayer layer = init_autoencoder(static_cast<Eigen::Index>(stack_sizes[l - 1]),
                                              static_cast<Eigen::Index>(stack_sizes[l]), rng);
    train_autoencoder(layer, input, h, log ? &log->pretrain[l - 1] : nullptr, log);
    input = encode(layer, input);
    layers.push_back(std::move(layer));
  }
  return layers;
}

inline std::vector<AutoencoderLayer> pretrain(std::span<const std::size_t> stack_sizes,
                                              const Matrix& X, const Hyperparams& h,
                                              TrainingLog* log = nullptr) {
  Rng rng(h.seed);
  return pretrain(stack_sizes, X, h, rng, log);
}

// ---------------------------------------------------------------- soft-max head

inline Matrix one_hot(std::span<const int> labels, Eigen::Index classes) {
  Matrix Y = Matrix::Zero(classes, static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= classes) {
      throw ValidationError("label " + std::to_string(labels[i]) + " outside 0.." +
                            std::to_string(classes - 1));
    }
    Y(labels[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  return Y;
}

struct HeadCostGrad {
  double cost = 0.0;
  SoftmaxHead grad;
};

// Mean cross-entropy (natural log) plus lambda/2 |W|^2.
inline HeadCostGrad softmax_cost_grad(const SoftmaxHead& head, const Matrix& codes,
                                      std::span<const int> labels, double lambda) {
  if (codes.rows() != head.W.cols() || codes.cols() != static_cast<Eigen::Index>(labels.size()) ||
      codes.cols() < 1) {
    throw ValidationError("softmax_cost_grad: dimension mismatch");
  }
  const double r = static_cast<double>(codes.cols());
  const Matrix Y = one_hot(labels, head.W.rows());
  const Matrix P = softmax((head.W * codes).colwise() + head.b);
  double ce = 0.0;
  for (Eigen::Index i = 0; i < P.cols(); ++i) ce -= std::log(P(labels[i], i));
  HeadCostGrad out;
  out.cost = ce / r + 0.5 * lambda * head.W.squaredNorm();
  const Matrix delta = (P - Y) / r;
  out.grad.W = delta * codes.transpose() + lambda * head.W;
  out.grad.b = delta.rowwise().sum();
  return out;
}

inline void require_all_classes(std::span<const int> labels, std::size_t classes) {
  std::vector<bool> seen(classes, false);
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw ValidationError("label " + std::to_string(y) + " outside the class range");
    }
    seen[static_cast<std::size_t>(y)] = true;
  }
  for (std::size_t k = 0; k < classes; ++k) {
    if (!seen[k]) {
      throw ValidationError("class " + std::to_string(k) + " has no training records");
    }
  }
}

inline void train_head(SoftmaxHead& head, const Matrix& codes, std::span<const int> labels,
                       double lambda, double learning_rate, int epochs,
                       std::vector<std::pair<int, double>>* history = nullptr,
                       const TrainingLog* log = nullptr) {
  for (int epoch = 0; epoch < epochs; ++epoch) {
    HeadCostGrad cg = softmax_cost_grad(head, codes, labels, lambda);
    require_finite(cg.cost, "softmax", epoch);
    if (history && log) log->record(*history, epoch, epochs, cg.cost);
    head.W -= learning_rate * cg.grad.W;
    head.b -= learning_rate * cg.grad.b;
  }
  if (history && log && epochs > 0) {
    const double final_cost = softmax_cost_grad(head, codes, labels, lambda).cost;
    require_finite(final_cost, "softmax", epochs);
    log->record(*history, epochs, epochs, final_cost);
  }
}

inline SoftmaxHead train_softmax(const Matrix& codes, std::span<const int> labels,
                                 std::size_t classes, const Hyperparams& h, int epochs, Rng& rng,
                                 TrainingLog* log = nullptr) {
  require_all_classes(labels, classes);
  SoftmaxHead head = init_head(codes.rows(), static_cast<Eigen::Index>(classes), rng);
  train_head(head, codes, labels, h.lambda, h.finetune_learning_rate, epochs,
             log ? &log->head : nullptr, log);
  return head;
}

inline SoftmaxHead train_softmax(const Matrix& codes, std::span<const int> labels,
                                 std::size_t classes, const Hyperparams& h) {
  Rng rng(h.seed);
  return train_softmax(codes, labels, classes, h, h.epochs_pretrain, rng);
}

// ---------------------------------------------------------------- fine-tuning

struct StackCostGrad {
  double cost = 0.0;
  std::vector<Encoder> encoder_grads;
  SoftmaxHead head_grad;
};

// Cross-entropy of the whole stack plus lambda/2 over every weight matrix.
inline StackCostGrad finetune_cost_grad(const SaeModel& model, const Matrix& X,
                                        std::span<const int> labels) {
  if (X.rows() != model.input_dim() || X.cols() != static_cast<Eigen::Index>(labels.size()) ||
      X.cols() < 1) {
    throw ValidationError("finetune_cost_grad: dimension mismatch");
  }
  const double lambda = model.hyper.lambda;
  const double r = static_cast<double>(X.cols());
  std::vector<Matrix> activations;
  activations.reserve(model.encoders.size() + 1);
  activations.push_back(X);
  for (const Encoder& e : model.encoders) activations.push_back(encode(e, activations.back()));

  const Matrix& top = activations.back();
  const Matrix P = softmax((model.head.W * top).colwise() + model.head.b);
  const Matrix Y = one_hot(labels, model.head.W.rows());

  double ce = 0.0;
  for (Eigen::Index i = 0; i < P.cols(); ++i) ce -= std::log(P(labels[i], i));
  double decay = model.head.W.squaredNorm();
  for (const Encoder& e : model.encoders) decay += e.weights.squaredNorm();

  StackCostGrad out;
  out.cost = ce / r + 0.5 * lambda * decay;
  Matrix delta = (P - Y) / r;
  out.head_grad.W = delta * top.transpose() + lambda * model.head.W;
  out.head_grad.b = delta.rowwise().sum();

  out.encoder_grads.resize(model.encoders.size());
  Matrix upstream = model.head.W.transpose() * delta;
  for (std::size_t l = model.encoders.size(); l-- > 0;) {
    const Matrix& H = activations[l + 1];
    delta = (upstream.array() * H.array() * (1.0 - H.array())).matrix();
    out.encoder_grads[l].weights =
        delta * activations[l].transpose() + lambda * model.encoders[l].weights;
    out.encoder_grads[l].bias = delta.rowwise().sum();
    if (l > 0) upstream = model.encoders[l].weights.transpose() * delta;
  }
  return out;
}

inline SaeModel fine_tune(SaeModel model, const Matrix& X, std::span<const int> labels,
                          int epochs, TrainingLog* log = nullptr) {
  const double lr = model.hyper.finetune_learning_rate;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    StackCostGrad cg = finetune_cost_grad(model, X, labels);
    require_finite(cg.cost, "fine-tune", epoch);
    if (log) log->record(log->finetune, epoch, epochs, cg.cost);
    model.head.W -= lr * cg.head_grad.W;
    model.head.b -= lr * cg.head_grad.b;
    for (std::size_t l = 0; l < model.encoders.size(); ++l) {
      model.encoders[l].weights -= lr * cg.encoder_grads[l].weights;
      model.encoders[l].bias -= lr * cg.encoder_grads[l].bias;
    }
  }
  if (log && epochs > 0) {
    const double final_cost = finetune_cost_grad(model, X, labels).cost;
    require_finite(final_cost, "fine-tune", epochs);
    log->record(log->finetune, epochs, epochs, final_cost);
  }
  return model;
}

inline SaeModel fine_tune(SaeModel model, const Matrix& X, std::span<const int> labels) {
  const int epochs = model.hyper.epochs_finetune;
  return fine_tune(std::move(model), X, labels, epochs);
}

// ---------------------------------------------------------------- prediction

struct Prediction {
  int class_id = 0;
  Vector probabilities;
};

inline Matrix predict_proba(const SaeModel& model, const Matrix& X) {
  if (X.rows() != model.input_dim()) {
    throw ValidationError("predict: input has " + std::to_string(X.rows()) +
                          " features, model expects " + std::to_string(model.input_dim()));
  }
  const Matrix codes = encode_stack(model.encoders, X);
  return softmax((model.head.W * codes).colwise() + model.head.b);
}

inline Prediction predict(const SaeModel& model, const Vector& x) {
  Matrix P = predict_proba(model, x);
  Prediction out;
  out.probabilities = P.col(0);
  Eigen::Index best = 0;
  out.probabilities.maxCoeff(&best);
  out.class_id = static_cast<int>(best);
  return out;
}

inline std::vector<int> argmax_columns(const Matrix& P) {
  std::vector<int> out(static_cast<std::size_t>(P.cols()));
  for (Eigen::Index c = 0; c < P.cols(); ++c) {
    Eigen::Index best = 0;
    P.col(c).maxCoeff(&best);
    out[static_cast<std::size_t>(c)] = static_cast<int>(best);
  }
  return out;
}

// ---------------------------------------------------------------- whole models

inline void check_architecture(const Hyperparams& h, Eigen::Index input_dim) {
  if (h.layer_sizes.empty() || static_cast<Eigen::Index>(h.layer_sizes.front()) != input_dim) {
    throw ValidationError("layer_sizes must start with the input dimension " +
                          std::to_string(input_dim));
  }
  for (std::size_t s : h.layer_sizes) {
    if (s == 0) throw ValidationError("layer sizes must be positive");
  }
  if (h.num_classes < 2) throw ValidationError("need at least two classes");
  if (!(h.rho > 0.0 && h.rho < 1.0)) throw ValidationError("rho must lie in (0,1)");
  if (h.lambda < 0.0 || h.beta < 0.0) throw ValidationError("lambda and beta must be >= 0");
  if (!(h.learning_rate > 0.0) || !(h.finetune_learning_rate > 0.0)) {
    throw ValidationError("learning rates must be positive");
  }
  if (h.epochs_pretrain < 0 || h.epochs_finetune < 0) {
    throw ValidationError("epoch counts must be >= 0");
  }
}

// The parameters a stack starts from before any training: every
// autoencoder's encoder half, then the head, drawn from one seeded stream.
inline SaeModel initial_model(const Hyperparams& h, std::vector<std::string> class_names = {}) {
  Rng rng(h.seed);
  SaeModel model;
  model.hyper = h;
  model.class_names = std::move(class_names);
  for (std::size_t l = 1; l < h.layer_sizes.size(); ++l) {
    model.encoders.push_back(init_autoencoder(static_cast<Eigen::Index>(h.layer_sizes[l - 1]),
                                              static_cast<Eigen::Index>(h.layer_sizes[l]), rng)
                                 .encoder());
  }
  model.head = init_head(static_cast<Eigen::Index>(h.layer_sizes.back()),
                         static_cast<Eigen::Index>(h.num_classes), rng);
  return model;
}

// Greedy pretraining, head training on the final codes (epochs_pretrain
// epochs, it is the last greedy stage) and fine-tuning.
inline SaeModel train_sae(const Matrix& X, std::span<const int> labels, const Hyperparams& h,
                          std::vector<std::string> class_names = {},
                          TrainingLog* log = nullptr) {
  check_architecture(h, X.rows());
  require_all_classes(labels, h.num_classes);
  Rng rng(h.seed);
  std::vector<AutoencoderLayer> layers = pretrain(h.layer_sizes, X, h, rng, log);
  SaeModel model;
  model.hyper = h;
  model.class_names = std::move(class_names);
  for (const auto& layer : layers) model.encoders.push_back(layer.encoder());
  const Matrix codes = encode_stack(model.encoders, X);
  model.head = train_softmax(codes, labels, h.num_classes, h, h.epochs_pretrain, rng, log);
  return fine_tune(std::move(model), X, labels, h.epochs_finetune, log);
}

// Same architecture and initial draws as train_sae, without autoencoder
// pretraining.
inline SaeModel train_plain_network(const Matrix& X, std::span<const int> labels,
                                    const Hyperparams& h,
                                    std::vector<std::string> class_names = {},
                                    TrainingLog* log = nullptr) {
  check_architecture(h, X.rows());
  require_all_classes(labels, h.num_classes);
  SaeModel model = initial_model(h, std::move(class_names));
  const Matrix codes = encode_stack(model.encoders, X);
  train_head(model.head, codes, labels, h.lambda, h.finetune_learning_rate, h.epochs_pretrain,
             log ? &log->head : nullptr, log);
  return fine_tune(std::move(model), X, labels, h.epochs_finetune, log);
}

// Soft-max regression on the raw features for the same total number of
// supervised epochs as the stacked model.
inline SaeModel train_softmax_only(const Matrix& X, std::span<const int> labels,
                                   const Hyperparams& h,
                                   std::vector<std::string> class_names = {},
                                   TrainingLog* log = nullptr) {
  Hyperparams flat = h;
  flat.layer_sizes = {static_cast<std::size_t>(X.rows())};
  check_architecture(flat, X.rows());
  Rng rng(h.seed);
  SaeModel model;
  model.hyper = flat;
  model.class_names = std::move(class_names);
  model.head = train_softmax(X, labels, h.num_classes, h, h.epochs_pretrain + h.epochs_finetune,
                             rng, log);
  return model;
}

}  // namespace sdnddos::sae
