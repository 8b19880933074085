#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "mrgnn/error.hpp"
#include "mrgnn/gnn.hpp"

using namespace mrgnn;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

Binary random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Binary x(n);
  for (auto& v : x) v = rng() & 1;
  return x;
}

}  // namespace

TEST_CASE("feature dimension and initialisation") {
  CHECK(auto_feature_dim(1) == 2);
  CHECK(auto_feature_dim(9) == 3);
  CHECK(auto_feature_dim(2000) == 44);
  CHECK(auto_feature_dim(1000000) == 64);

  FeatureMatrix f = init_features(50, 0, 7);
  CHECK(f.rows() == 50);
  CHECK(f.cols() == 7);
  CHECK(f.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(7.0));
  CHECK(f == init_features(50, 0, 7));
  CHECK(f != init_features(50, 0, 8));
}

TEST_CASE("parameter flatten and assign round trip") {
  GnnParams p = GnnParams::glorot(5, 6, 4, 1);
  CHECK(p.d_in() == 5);
  CHECK(p.d_hidden() == 6);
  CHECK(p.d_out() == 4);
  CHECK(p.num_values() == static_cast<std::size_t>(5 * 6 * 2 + 6 + 6 * 4 * 2 + 4 + 4 + 1));
  Eigen::VectorXd flat = p.flatten();
  GnnParams z = GnnParams::zeros(5, 6, 4);
  z.assign(flat);
  CHECK(z.flatten() == flat);
  CHECK_THROWS_AS(z.assign(Eigen::VectorXd::Zero(3)), InvalidInput);
}

TEST_CASE("zero parameters give one half everywhere") {
  Graph g = fixtures::petersen();
  FeatureMatrix f = init_features(10, 4, 2);
  ForwardResult fr = forward(g, f, GnnParams::zeros(4, 4, 3));
  for (double v : fr.p) CHECK(v == 0.5);
  CHECK(fr.embeddings.isZero());
}

TEST_CASE("forward is permutation equivariant") {
  Graph g = fixtures::random_graph(12, 0.35, 4);
  std::vector<NodeId> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(9);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Edge> pe;
  for (const auto& e : g.edges()) pe.push_back({perm[e.u], perm[e.v], e.w});
  Graph h(12, pe);

  FeatureMatrix f = init_features(12, 5, 3);
  FeatureMatrix fp(12, 5);
  for (std::size_t v = 0; v < 12; ++v) fp.row(perm[v]) = f.row(static_cast<Eigen::Index>(v));
  GnnParams params = GnnParams::glorot(5, 7, 3, 11);
  ForwardResult a = forward(g, f, params);
  ForwardResult b = forward(h, fp, params);
  for (std::size_t v = 0; v < 12; ++v)
    CHECK(a.p[static_cast<Eigen::Index>(v)] == doctest::Approx(b.p[perm[v]]).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central differences") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Graph g = fixtures::random_graph(8, 0.4, seed);
    Problem prob = static_cast<Problem>(seed % 3);
    QuboMatrix q = build_qubo(prob, g, default_penalty(prob));
    FeatureMatrix f = init_features(8, 3, seed);
    GnnParams params = GnnParams::glorot(3, 4, 3, seed + 100);
    Binary target = random_bits(8, seed);
    for (double lambda : {0.0, 1.0}) {
      std::optional<std::span<const std::uint8_t>> tgt;
      if (lambda > 0) tgt = std::span<const std::uint8_t>(target);
      LossGrad lg = loss_and_grad(g, f, params, q, tgt, lambda);
      Eigen::VectorXd theta = params.flatten();
      Eigen::VectorXd grad = lg.grad.flatten();
      const double h = 1e-6;
      for (Eigen::Index k = 0; k < theta.size(); ++k) {
        GnnParams pp = params, pm = params;
        Eigen::VectorXd tp = theta, tm = theta;
        tp[k] += h;
        tm[k] -= h;
        pp.assign(tp);
        pm.assign(tm);
        double fd = (loss_and_grad(g, f, pp, q, tgt, lambda).loss - loss_and_grad(g, f, pm, q, tgt, lambda).loss) / (2 * h);
        CHECK(rel_err(fd, grad[k]) < 1e-4);
      }
      for (Eigen::Index k = 0; k < f.size(); ++k) {
        FeatureMatrix fp = f, fm = f;
        fp.data()[k] += h;
        fm.data()[k] -= h;
        double fd = (loss_and_grad(g, fp, params, q, tgt, lambda).loss - loss_and_grad(g, fm, params, q, tgt, lambda).loss) / (2 * h);
        CHECK(rel_err(fd, lg.grad_features.data()[k]) < 1e-4);
      }
    }
  }
}

TEST_CASE("loss is the relaxed Hamiltonian plus the weighted squared error") {
  Graph g = fixtures::cycle(6);
  QuboMatrix q = build_qubo(Problem::MaxCut, g, 0);
  FeatureMatrix f = init_features(6, 3, 1);
  GnnParams params = GnnParams::glorot(3, 3, 2, 5);
  Binary target{1, 0, 1, 0, 1, 0};
  LossGrad plain = loss_and_grad(g, f, params, q, std::nullopt, 0.0);
  CHECK(plain.loss == doctest::Approx(relaxed(q, std::span<const double>(plain.p.data(), 6))));
  LossGrad sup = loss_and_grad(g, f, params, q, std::span<const std::uint8_t>(target), 2.0);
  double mse = 0.0;
  for (int i = 0; i < 6; ++i) mse += std::pow(sup.p[i] - target[static_cast<std::size_t>(i)], 2);
  CHECK(sup.loss == doctest::Approx(plain.loss + 2.0 * mse));
}

TEST_CASE("binarize threshold is inclusive") {
  std::vector<double> p{0.49, 0.5, 0.51, 0.0, 1.0};
  CHECK(binarize(p) == Binary{0, 1, 1, 0, 1});
  CHECK(binarize(p, 0.6) == Binary{0, 0, 0, 0, 1});
}

TEST_CASE("train config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.lr = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = TrainConfig{};
  c.max_epochs = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = TrainConfig{};
  c.max_epochs = 3000;
  CHECK(c.snapshot_stride() == 10);
  c.snapshot_every = 4;
  CHECK(c.snapshot_stride() == 4);
}

TEST_CASE("training lowers the loss and records a consistent trace") {
  Graph g = fixtures::random_graph(30, 0.2, 3);
  QuboMatrix q = build_qubo(Problem::MaxCut, g, 0);
  TrainConfig cfg;
  cfg.lr = 0.01;
  cfg.max_epochs = 400;
  cfg.seed = 4;
  MainResult r = train_main(g, q, std::nullopt, cfg);
  const auto& tr = r.trace;
  REQUIRE(tr.epochs_run >= 1);
  CHECK(tr.losses.size() == tr.epochs_run);
  CHECK(tr.losses.back() < tr.losses.front());
  CHECK(tr.snapshots.size() == tr.snapshot_epochs.size());
  CHECK(tr.snapshot_epochs.front() == 0);
  CHECK(tr.snapshot_epochs.back() == tr.epochs_run);
  CHECK(std::is_sorted(tr.snapshot_epochs.begin(), tr.snapshot_epochs.end()));
  CHECK(r.x == binarize(r.p));
  CHECK(hamiltonian(q, r.x) < 0.0);

  MainResult again = train_main(g, q, std::nullopt, cfg);
  CHECK(again.x == r.x);
  CHECK(again.trace.losses == r.trace.losses);
}

TEST_CASE("early stopping honours patience") {
  Graph g = fixtures::path(5);
  QuboMatrix q = build_qubo(Problem::MaxCut, g, 0);
  TrainConfig cfg;
  cfg.lr = 0.05;
  cfg.max_epochs = 100000;
  cfg.tol = 1.0;  // nothing counts as progress after the first epoch
  cfg.patience = 7;
  MainResult r = train_main(g, q, std::nullopt, cfg);
  CHECK(r.trace.epochs_run == 8);
}

TEST_CASE("strong supervision reproduces the target") {
  Graph g = fixtures::random_graph(20, 0.25, 6);
  QuboMatrix q = build_qubo(Problem::MIS, g, 2.0);
  Binary target = random_bits(20, 6);
  TrainConfig cfg = TrainConfig::local_defaults();
  cfg.lr = 0.02;
  cfg.mse_weight = 100.0;
  cfg.seed = 1;
  LocalResult r = train_local(g, q, target, cfg);
  CHECK(r.x_local == target);
  CHECK(r.embeddings.rows() == 20);
  CHECK(r.embeddings.cols() == 16);
  CHECK_THROWS_AS(train_local(g, q, Binary(3, 0), cfg), InvalidInput);
}

TEST_CASE("main solver accepts initial features of any width") {
  Graph g = fixtures::cycle(8);
  QuboMatrix q = build_qubo(Problem::MaxCut, g, 0);
  TrainConfig cfg;
  cfg.max_epochs = 20;
  FeatureMatrix r = FeatureMatrix::Constant(8, 16, 0.1);
  MainResult m = train_main(g, q, r, cfg);
  CHECK(m.p.size() == 8);
}

TEST_CASE("input vectors move only when they are trainable") {
  Graph g = fixtures::cycle(6);
  QuboMatrix q = build_qubo(Problem::MaxCut, g, 0);
  FeatureMatrix f = init_features(6, 3, 2);
  TrainConfig cfg;
  cfg.max_epochs = 10;
  cfg.lr = 0.01;
  CHECK(train(g, q, f, std::nullopt, 0.0, cfg).features != f);
  cfg.learn_features = false;
  CHECK(train(g, q, f, std::nullopt, 0.0, cfg).features == f);
}
