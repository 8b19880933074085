#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mrgnn/graph.hpp"
#include "mrgnn/qubo.hpp"

namespace mrgnn {

/// Node-feature matrix; row v belongs to node v.
using FeatureMatrix = Eigen::MatrixXd;
using Adjacency = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Weighted adjacency without self-loops (the self term has its own weights).
Adjacency adjacency(const Graph& g);

/// GraphConv: h' = ReLU(h W_self + A h W_neigh + bias).
struct GraphConvLayer {
  Eigen::MatrixXd w_self;
  Eigen::MatrixXd w_neigh;
  Eigen::RowVectorXd bias;
};

struct GnnParams {
  GraphConvLayer layer1;
  GraphConvLayer layer2;
  Eigen::VectorXd w_out;
  double b_out = 0.0;

  /// Glorot-uniform weights, zero biases.
  static GnnParams glorot(std::size_t d_in, std::size_t d_hidden, std::size_t d_out, std::uint64_t seed);
  static GnnParams zeros(std::size_t d_in, std::size_t d_hidden, std::size_t d_out);

  std::size_t d_in() const { return static_cast<std::size_t>(layer1.w_self.rows()); }
  std::size_t d_hidden() const { return static_cast<std::size_t>(layer1.w_self.cols()); }
  std::size_t d_out() const { return static_cast<std::size_t>(layer2.w_self.cols()); }

  std::size_t num_values() const;
  Eigen::VectorXd flatten() const;
  /// Overwrites every parameter from `flat`, which must have num_values() entries.
  void assign(const Eigen::VectorXd& flat);
};

/// Input dimension convention: clamp(floor(sqrt(n)), 2, 64).
std::size_t auto_feature_dim(std::size_t n);

/// Uniform in [-1/sqrt(d0), 1/sqrt(d0)]. d0 == 0 selects auto_feature_dim(n).
FeatureMatrix init_features(std::size_t n, std::size_t d0, std::uint64_t seed);

struct ForwardResult {
  FeatureMatrix embeddings;  ///< n x d_K, output of the second GraphConv layer
  Eigen::VectorXd p;         ///< soft assignment in [0, 1]
};

ForwardResult forward(const Graph& g, const FeatureMatrix& f, const GnnParams& params);
ForwardResult forward(const Adjacency& a, const FeatureMatrix& f, const GnnParams& params);

struct LossGrad {
  double loss = 0.0;
  GnnParams grad;
  FeatureMatrix grad_features;  ///< d loss / d input features
  Eigen::VectorXd p;  ///< soft assignment the loss was evaluated at
};

/// relaxed(q, p) + lambda * ||p - target||^2 (the second term only when a target is given).
LossGrad loss_and_grad(const Graph& g, const FeatureMatrix& f, const GnnParams& params,
                       const QuboMatrix& q, std::optional<std::span<const std::uint8_t>> target,
                       double lambda);
LossGrad loss_and_grad(const Adjacency& a, const FeatureMatrix& f, const GnnParams& params,
                       const QuboMatrix& q, std::optional<std::span<const std::uint8_t>> target,
                       double lambda);

/// x_i = 1 iff p_i >= tau.
Binary binarize(std::span<const double> p, double tau = 0.5);
Binary binarize(const Eigen::VectorXd& p, double tau = 0.5);

struct TrainConfig {
  double lr = 1e-3;
  std::size_t max_epochs = 10000;
  double tol = 1e-5;
  std::size_t patience = 200;
  double mse_weight = 1.0;
  /// 0 selects max(1, max_epochs / 300).
  std::size_t snapshot_every = 0;
  std::uint64_t seed = 0;
  /// 0 selects the input dimension.
  std::size_t d_hidden = 0;
  std::size_t d_out = 16;
  /// Input feature dimension for freshly drawn features; 0 selects auto_feature_dim.
  std::size_t d_in = 0;
  /// Treat the input node vectors as trainable (they are only the starting point).
  bool learn_features = true;

  void validate() const;
  std::size_t snapshot_stride() const;

  static TrainConfig main_defaults();
  static TrainConfig local_defaults();
};

struct TrainTrace {
  std::vector<double> losses;               ///< one per epoch run
  std::vector<std::size_t> snapshot_epochs;
  std::vector<Eigen::VectorXd> snapshots;   ///< soft assignments
  std::size_t epochs_run = 0;
  double elapsed = 0.0;
};

struct TrainOutcome {
  GnnParams params;
  FeatureMatrix features;  ///< input node vectors after training
  FeatureMatrix embeddings;
  Eigen::VectorXd p;
  Binary x;
  TrainTrace trace;
};

/// Adam on the (optionally supervised) relaxed Hamiltonian until the loss stops
/// improving by more than tol for `patience` epochs or max_epochs is reached.
TrainOutcome train(const Graph& g, const QuboMatrix& q, const FeatureMatrix& features,
                   std::optional<std::span<const std::uint8_t>> target, double lambda,
                   const TrainConfig& cfg);

struct LocalResult {
  FeatureMatrix embeddings;
  Binary x_local;
  TrainTrace trace;
};

/// Guided local solver. With x_am empty (or mse_weight 0) it is purely unsupervised.
LocalResult train_local(const Graph& g, const QuboMatrix& q, std::span<const std::uint8_t> x_am,
                        const TrainConfig& cfg);

struct MainResult {
  Binary x;
  Eigen::VectorXd p;
  TrainTrace trace;
};

/// Unsupervised main solver. Without r_init, fresh random features are drawn.
MainResult train_main(const Graph& g, const QuboMatrix& q, const std::optional<FeatureMatrix>& r_init,
                      const TrainConfig& cfg);

}  // namespace mrgnn
