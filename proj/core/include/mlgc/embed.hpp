#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mlgc/spd.hpp"

namespace mlgc {

// Fully connected network  X -> Y  with one PReLU per hidden layer and a
// linear output layer.  layer_sizes lists every width including input and
// output, e.g. {M, 400, 200, 100, K}.
//
// Parameters flatten to one vector in a fixed order: for each dense layer l,
// W_l in column-major storage followed by b_l; after all layers come the
// per-hidden-layer PReLU slopes.  Initialization draws weights from
// U(-1/sqrt(fan_in), 1/sqrt(fan_in)), sets biases to zero and slopes to 0.25.
class EmbedderModel {
 public:
  EmbedderModel(std::vector<int> layer_sizes, std::uint64_t seed);
  EmbedderModel(std::vector<int> layer_sizes,
                std::vector<Eigen::MatrixXd> weights,
                std::vector<Eigen::VectorXd> biases,
                std::vector<double> prelu_slopes);

  // The reference architecture: {input_dim, 400, 200, 100, output_dim}.
  static std::vector<int> default_layer_sizes(int input_dim, int output_dim);

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  int input_dim() const { return layer_sizes_.front(); }
  int output_dim() const { return layer_sizes_.back(); }
  int num_dense_layers() const { return static_cast<int>(weights_.size()); }

  const Eigen::MatrixXd& weight(int l) const { return weights_.at(static_cast<std::size_t>(l)); }
  const Eigen::VectorXd& bias(int l) const { return biases_.at(static_cast<std::size_t>(l)); }
  double prelu_slope(int l) const { return prelu_slopes_.at(static_cast<std::size_t>(l)); }

  Eigen::Index num_parameters() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);

 private:
  void validate_shapes() const;

  std::vector<int> layer_sizes_;
  std::vector<Eigen::MatrixXd> weights_;  // W_l is (n_l x n_{l+1})
  std::vector<Eigen::VectorXd> biases_;
  std::vector<double> prelu_slopes_;      // one per hidden layer
};

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;  // AmsGrad denominator guard
  int max_steps = 2000;
  // Stop when the relative loss change across plateau_window steps falls
  // below plateau_tol.  A window <= 0 disables plateau stopping.
  double plateau_tol = 1e-7;
  int plateau_window = 50;
  // Relative jitter scale for the Gram Cholesky retry ladder; the actual
  // shift at attempt a >= 1 is  jitter * 10^(a-1) * trace(Y^T Y)/K.
  double cholesky_jitter = 1e-10;
  // Seeds the model initialization in pipelines that construct the model;
  // the training loop itself is deterministic (full batch, no dropout).
  std::uint64_t seed = 0;
};

struct LossValue {
  double value;
  Eigen::MatrixXd cholesky_factor;  // lower-triangular R with Y^T Y = R R^T
};

struct EmbeddingResult {
  Eigen::MatrixXd output;           // Y: one embedding row per node
  Eigen::MatrixXd cholesky_factor;  // R from the final loss evaluation
  Eigen::MatrixXd whitened;         // Q = Y R^{-T}; satisfies Q^T Q = I
  double final_loss = 0.0;
  int steps_run = 0;
  std::vector<double> loss_history;  // loss before each step, then final
};

// Network forward pass; x has one sample per row with input_dim columns.
Eigen::MatrixXd forward(const EmbedderModel& model, const Eigen::MatrixXd& x);

// The implicitly orthogonality-constrained spectral objective
//   J = Tr( R^{-1} Y^T L Y R^{-T} ),   R = chol(Y^T Y) lower,
// equal to Tr((Y^T Y)^{-1} Y^T L Y).  It never falls below the sum of the
// K smallest eigenvalues of L, with equality exactly when span(Y) is the
// corresponding invariant subspace.  When the Gram matrix is numerically
// rank deficient the factorization is retried with escalating diagonal
// jitter (3 retries); RankDeficiencyError is thrown if all fail.
LossValue spectral_loss(const Eigen::MatrixXd& y, const SpdMatrix& lap,
                        double jitter = 1e-10);

// Closed-form dJ/dY:
//   2 ( L Y Dbar - Y Dbar Y^T L Y Dbar ),   Dbar = R^{-T} R^{-1}.
// `cholesky_factor` must be the R returned by spectral_loss for this Y.
Eigen::MatrixXd loss_jacobian(const Eigen::MatrixXd& y, const SpdMatrix& lap,
                              const Eigen::MatrixXd& cholesky_factor);

// Backpropagate an upstream gradient dJ/dY through the network, returning
// the flat parameter gradient in the EmbedderModel parameter order.
Eigen::VectorXd backprop(const EmbedderModel& model, const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& upstream);

// Full-batch AmsGrad descent of spectral_loss(forward(model, x), lap).
// Mutates `model` in place and returns the final embedding (with whitened
// coordinates) plus the loss trace.  Throws TrainingError if the loss or
// gradient becomes non-finite, ArgumentError on shape/config errors.
// progress, when set, is invoked as progress(step, loss) once per step.
EmbeddingResult train(EmbedderModel& model, const Eigen::MatrixXd& x,
                      const SpdMatrix& lap, const TrainConfig& config,
                      const std::function<void(int, double)>& progress = {});

// JSON (de)serialization of a trained model together with the Cholesky
// factor of its training Gram matrix (needed to whiten unseen points).
void save_model(const EmbedderModel& model, const Eigen::MatrixXd& cholesky_factor,
                const std::string& path);

struct LoadedModel {
  EmbedderModel model;
  Eigen::MatrixXd cholesky_factor;
};
LoadedModel load_model(const std::string& path);

// Whitened embedding of arbitrary feature rows under a trained model:
// forward(x) R^{-T}.  Rows of the result are comparable to cluster centers
// produced by the training pipeline.
Eigen::MatrixXd embed_points(const EmbedderModel& model,
                             const Eigen::MatrixXd& cholesky_factor,
                             const Eigen::MatrixXd& x);

}  // namespace mlgc
