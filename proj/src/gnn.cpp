#include "mrgnn/gnn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "mrgnn/error.hpp"
#include "mrgnn/rng.hpp"

namespace mrgnn {

Adjacency adjacency(const Graph& g) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * g.num_edges());
  for (const auto& e : g.edges()) {
    if (e.u == e.v) continue;
    t.emplace_back(e.u, e.v, e.w);
    t.emplace_back(e.v, e.u, e.w);
  }
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Adjacency a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

namespace {

Eigen::MatrixXd glorot_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = (2.0 * uniform01(rng) - 1.0) * limit;
  return m;
}

GraphConvLayer zero_layer(std::size_t d_in, std::size_t d_out) {
  return {Eigen::MatrixXd::Zero(d_in, d_out), Eigen::MatrixXd::Zero(d_in, d_out),
          Eigen::RowVectorXd::Zero(d_out)};
}

}  // namespace

GnnParams GnnParams::zeros(std::size_t d_in, std::size_t d_hidden, std::size_t d_out) {
  GnnParams p;
  p.layer1 = zero_layer(d_in, d_hidden);
  p.layer2 = zero_layer(d_hidden, d_out);
  p.w_out = Eigen::VectorXd::Zero(d_out);
  return p;
}

GnnParams GnnParams::glorot(std::size_t d_in, std::size_t d_hidden, std::size_t d_out,
                            std::uint64_t seed) {
  Rng rng(mix_seed(seed));
  GnnParams p = zeros(d_in, d_hidden, d_out);
  p.layer1.w_self = glorot_matrix(d_in, d_hidden, rng);
  p.layer1.w_neigh = glorot_matrix(d_in, d_hidden, rng);
  p.layer2.w_self = glorot_matrix(d_hidden, d_out, rng);
  p.layer2.w_neigh = glorot_matrix(d_hidden, d_out, rng);
  p.w_out = glorot_matrix(d_out, 1, rng).col(0);
  return p;
}

std::size_t GnnParams::num_values() const {
  auto layer = [](const GraphConvLayer& l) {
    return static_cast<std::size_t>(l.w_self.size() + l.w_neigh.size() + l.bias.size());
  };
  return layer(layer1) + layer(layer2) + static_cast<std::size_t>(w_out.size()) + 1;
}

Eigen::VectorXd GnnParams::flatten() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(num_values()));
  Eigen::Index at = 0;
  auto put = [&](const auto& m) {
    flat.segment(at, m.size()) = m.reshaped();
    at += m.size();
  };
  for (const auto* l : {&layer1, &layer2}) {
    put(l->w_self);
    put(l->w_neigh);
    put(l->bias);
  }
  put(w_out);
  flat(at) = b_out;
  return flat;
}

void GnnParams::assign(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != num_values())
    throw InvalidInput("flat parameter vector has the wrong length");
  Eigen::Index at = 0;
  auto take = [&](auto& m) {
    m.reshaped() = flat.segment(at, m.size());
    at += m.size();
  };
  for (auto* l : {&layer1, &layer2}) {
    take(l->w_self);
    take(l->w_neigh);
    take(l->bias);
  }
  take(w_out);
  b_out = flat(at);
}

std::size_t auto_feature_dim(std::size_t n) {
  auto d = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  return std::clamp<std::size_t>(d, 2, 64);
}

FeatureMatrix init_features(std::size_t n, std::size_t d0, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("feature matrix needs at least one row");
  if (d0 == 0) d0 = auto_feature_dim(n);
  Rng rng(mix_seed(seed));
  const double bound = 1.0 / std::sqrt(static_cast<double>(d0));
  FeatureMatrix f(n, d0);
  for (Eigen::Index i = 0; i < f.rows(); ++i)
    for (Eigen::Index j = 0; j < f.cols(); ++j) f(i, j) = (2.0 * uniform01(rng) - 1.0) * bound;
  return f;
}

namespace {

struct Cache {
  Eigen::MatrixXd agg0, z1, h1, agg1, z2, h2;
  Eigen::VectorXd p;
};

void check_shapes(const Adjacency& a, const FeatureMatrix& f, const GnnParams& params) {
  if (f.rows() != a.rows())
    throw InvalidInput("feature rows (" + std::to_string(f.rows()) + ") do not match node count (" +
                       std::to_string(a.rows()) + ")");
  if (static_cast<std::size_t>(f.cols()) != params.d_in())
    throw InvalidInput("feature dimension " + std::to_string(f.cols()) +
                       " does not match model input dimension " + std::to_string(params.d_in()));
}

Cache run_forward(const Adjacency& a, const FeatureMatrix& f, const GnnParams& w) {
  check_shapes(a, f, w);
  Cache c;
  c.agg0 = a * f;
  c.z1 = f * w.layer1.w_self + c.agg0 * w.layer1.w_neigh;
  c.z1.rowwise() += w.layer1.bias;
  c.h1 = c.z1.cwiseMax(0.0);
  c.agg1 = a * c.h1;
  c.z2 = c.h1 * w.layer2.w_self + c.agg1 * w.layer2.w_neigh;
  c.z2.rowwise() += w.layer2.bias;
  c.h2 = c.z2.cwiseMax(0.0);
  Eigen::VectorXd s = c.h2 * w.w_out;
  s.array() += w.b_out;
  c.p = s.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  return c;
}

}  // namespace

ForwardResult forward(const Adjacency& a, const FeatureMatrix& f, const GnnParams& params) {
  Cache c = run_forward(a, f, params);
  return {std::move(c.h2), std::move(c.p)};
}

ForwardResult forward(const Graph& g, const FeatureMatrix& f, const GnnParams& params) {
  return forward(adjacency(g), f, params);
}

LossGrad loss_and_grad(const Adjacency& a, const FeatureMatrix& f, const GnnParams& w,
                       const QuboMatrix& q, std::optional<std::span<const std::uint8_t>> target,
                       double lambda) {
  Cache c = run_forward(a, f, w);
  const auto n = static_cast<std::size_t>(c.p.size());
  if (q.size() != n) throw InvalidInput("QUBO size does not match node count");
  if (target && target->size() != n) throw InvalidInput("target length does not match node count");

  std::span<const double> p(c.p.data(), n);
  LossGrad out;
  out.loss = relaxed(q, p);
  std::vector<double> dp = relaxed_gradient(q, p);
  if (target && lambda != 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = p[i] - static_cast<double>((*target)[i]);
      out.loss += lambda * r * r;
      dp[i] += 2.0 * lambda * r;
    }
  }

  Eigen::VectorXd ds(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) ds(static_cast<Eigen::Index>(i)) = dp[i] * p[i] * (1.0 - p[i]);

  GnnParams& g = out.grad;
  g.w_out = c.h2.transpose() * ds;
  g.b_out = ds.sum();
  Eigen::MatrixXd dz2 = (ds * w.w_out.transpose()).cwiseProduct((c.z2.array() > 0.0).cast<double>().matrix());
  g.layer2.w_self = c.h1.transpose() * dz2;
  g.layer2.w_neigh = c.agg1.transpose() * dz2;
  g.layer2.bias = dz2.colwise().sum();
  // A is symmetric, so A^T (dz2 W_neigh^T) == A (dz2 W_neigh^T).
  Eigen::MatrixXd dh1 = dz2 * w.layer2.w_self.transpose() + a * (dz2 * w.layer2.w_neigh.transpose());
  Eigen::MatrixXd dz1 = dh1.cwiseProduct((c.z1.array() > 0.0).cast<double>().matrix());
  g.layer1.w_self = f.transpose() * dz1;
  g.layer1.w_neigh = c.agg0.transpose() * dz1;
  g.layer1.bias = dz1.colwise().sum();
  out.grad_features = dz1 * w.layer1.w_self.transpose() + a * (dz1 * w.layer1.w_neigh.transpose());
  out.p = std::move(c.p);
  return out;
}

LossGrad loss_and_grad(const Graph& g, const FeatureMatrix& f, const GnnParams& params,
                       const QuboMatrix& q, std::optional<std::span<const std::uint8_t>> target,
                       double lambda) {
  return loss_and_grad(adjacency(g), f, params, q, target, lambda);
}

Binary binarize(std::span<const double> p, double tau) {
  Binary x(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) x[i] = p[i] >= tau ? 1 : 0;
  return x;
}

Binary binarize(const Eigen::VectorXd& p, double tau) {
  return binarize(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())), tau);
}

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw InvalidInput("learning rate must be positive");
  if (!(tol >= 0.0)) throw InvalidInput("tolerance must be non-negative");
  if (max_epochs < 1) throw InvalidInput("max_epochs must be >= 1");
  if (d_out < 1) throw InvalidInput("output dimension must be >= 1");
  if (mse_weight < 0.0) throw InvalidInput("mse weight must be non-negative");
}

std::size_t TrainConfig::snapshot_stride() const {
  return snapshot_every ? snapshot_every : std::max<std::size_t>(1, max_epochs / 300);
}

TrainConfig TrainConfig::main_defaults() { return {}; }

TrainConfig TrainConfig::local_defaults() {
  TrainConfig c;
  c.max_epochs = 1000;
  c.patience = 50;
  return c;
}

namespace {

struct Adam {
  double lr, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  Eigen::VectorXd m, v;
  std::size_t t = 0;

  Adam(double lr_, Eigen::Index size) : lr(lr_), m(Eigen::VectorXd::Zero(size)), v(Eigen::VectorXd::Zero(size)) {}

  template <typename Theta, typename Grad>
  void step(Theta&& theta, const Grad& grad) {
    ++t;
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    theta.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  }
};

}  // namespace

TrainOutcome train(const Graph& graph, const QuboMatrix& q, const FeatureMatrix& features,
                   std::optional<std::span<const std::uint8_t>> target, double lambda,
                   const TrainConfig& cfg) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();
  const Adjacency a = adjacency(graph);
  const auto d_in = static_cast<std::size_t>(features.cols());
  const std::size_t d_hidden = cfg.d_hidden ? cfg.d_hidden : d_in;
  TrainOutcome out;
  out.params = GnnParams::glorot(d_in, d_hidden, cfg.d_out, derive_seed(cfg.seed, 1));
  Eigen::VectorXd theta = out.params.flatten();
  Adam adam(cfg.lr, theta.size());
  const std::size_t stride = cfg.snapshot_stride();
  // Input node vectors are trained alongside the weights when learn_features is set.
  FeatureMatrix feat = features;
  Adam fadam(cfg.lr, cfg.learn_features ? feat.size() : 0);

  double best = std::numeric_limits<double>::infinity();
  std::size_t stall = 0;
  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    LossGrad lg = loss_and_grad(a, feat, out.params, q, target, lambda);
    if (!std::isfinite(lg.loss))
      throw NumericError("non-finite loss at epoch " + std::to_string(epoch));
    out.trace.losses.push_back(lg.loss);
    if (epoch % stride == 0) {
      out.trace.snapshot_epochs.push_back(epoch);
      out.trace.snapshots.push_back(lg.p);
    }
    adam.step(theta, lg.grad.flatten());
    out.params.assign(theta);
    if (cfg.learn_features) {
      Eigen::Map<Eigen::VectorXd> fv(feat.data(), feat.size());
      fadam.step(fv, Eigen::Map<const Eigen::VectorXd>(lg.grad_features.data(), lg.grad_features.size()));
    }
    out.trace.epochs_run = epoch + 1;

    if (lg.loss < best - cfg.tol) {
      best = lg.loss;
      stall = 0;
    } else if (++stall >= cfg.patience) {
      break;
    }
  }
  ForwardResult fr = forward(a, feat, out.params);
  if (out.trace.snapshot_epochs.empty() || out.trace.snapshot_epochs.back() != out.trace.epochs_run) {
    out.trace.snapshot_epochs.push_back(out.trace.epochs_run);
    out.trace.snapshots.push_back(fr.p);
  }
  out.features = std::move(feat);
  out.embeddings = std::move(fr.embeddings);
  out.p = std::move(fr.p);
  out.x = binarize(out.p);
  out.trace.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

LocalResult train_local(const Graph& g, const QuboMatrix& q, std::span<const std::uint8_t> x_am,
                        const TrainConfig& cfg) {
  if (!x_am.empty() && x_am.size() != g.num_nodes())
    throw InvalidInput("annealer solution length does not match the compressed graph");
  FeatureMatrix f = init_features(g.num_nodes(), cfg.d_in, derive_seed(cfg.seed, 0));
  std::optional<std::span<const std::uint8_t>> target;
  if (!x_am.empty() && cfg.mse_weight > 0.0) target = x_am;
  TrainOutcome o = train(g, q, f, target, cfg.mse_weight, cfg);
  return {std::move(o.embeddings), std::move(o.x), std::move(o.trace)};
}

MainResult train_main(const Graph& g, const QuboMatrix& q, const std::optional<FeatureMatrix>& r_init,
                      const TrainConfig& cfg) {
  FeatureMatrix f = r_init ? *r_init : init_features(g.num_nodes(), cfg.d_in, derive_seed(cfg.seed, 0));
  TrainOutcome o = train(g, q, f, std::nullopt, 0.0, cfg);
  return {std::move(o.x), std::move(o.p), std::move(o.trace)};
}

}  // namespace mrgnn
