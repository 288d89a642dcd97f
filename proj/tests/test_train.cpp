#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kanbench/data/datasets.hpp"
#include "kanbench/train/adam.hpp"
#include "kanbench/train/fit.hpp"
#include "kanbench/train/losses.hpp"
#include "oracles.hpp"

using namespace kanbench;

namespace {

SampleSet square_samples() {
  const RegressionDataset ds = gen_square(15);
  return SampleSet{ds.inputs, ds.targets, {}};
}

SampleSet blobs(Rng& rng, std::size_t n) {
  SampleSet s{Matrix(n, 2), Matrix(), {}};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % 3;
    s.inputs(i, 0) = 0.6 * std::cos(2.1 * c) + rng.uniform(-0.1, 0.1);
    s.inputs(i, 1) = 0.6 * std::sin(2.1 * c) + rng.uniform(-0.1, 0.1);
    s.labels.push_back(c);
  }
  return s;
}

}  // namespace

TEST_CASE("mse") {
  const std::vector<double> a{1, 2, 3};
  CHECK(mse(a, a) == 0.0);
  CHECK(mse(std::vector<double>{0}, std::vector<double>{2}) == 4.0);
  CHECK(mse(a, std::vector<double>{2, 2, 5}) == doctest::Approx(5.0 / 3.0));
  CHECK_THROWS_AS(mse(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(mse(a, std::vector<double>{1}), std::invalid_argument);
}

TEST_CASE("cross entropy with softmax") {
  const auto uniform = cross_entropy_softmax(std::vector<double>{0.5, 0.5, 0.5}, 1);
  CHECK(uniform.loss == doctest::Approx(std::log(3.0)));
  const auto big = cross_entropy_softmax(std::vector<double>{1e6, 0, 0}, 0);
  CHECK(std::isfinite(big.loss));
  CHECK(big.loss == doctest::Approx(0.0).epsilon(1e-12));
  const auto wrong = cross_entropy_softmax(std::vector<double>{1e6, 0, 0}, 2);
  CHECK(wrong.loss == doctest::Approx(1e6));
  CHECK_THROWS_AS(cross_entropy_softmax(std::vector<double>{1, 2}, 2), std::invalid_argument);
  CHECK_THROWS_AS(cross_entropy_softmax(std::vector<double>{1}, 0), std::invalid_argument);
}

TEST_CASE("cross entropy gradient sums to zero and matches finite differences") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> z(2 + rng.below(5));
    for (auto& v : z) v = rng.uniform(-10, 10);
    const std::size_t label = rng.below(z.size());
    const auto ce = cross_entropy_softmax(z, label);
    double sum = 0;
    for (double g : ce.grad) sum += g;
    CHECK(std::fabs(sum) <= 1e-12);
    const std::function<double()> f = [&] { return cross_entropy_softmax(z, label).loss; };
    for (std::size_t i = 0; i < z.size(); ++i) {
      CHECK(std::fabs(ce.grad[i] - oracle::central_difference(f, z, i, 1e-6)) <= 1e-6);
    }
  }
}

TEST_CASE("softmax is shift invariant") {
  const auto a = softmax(std::vector<double>{1, 2, 3});
  const auto b = softmax(std::vector<double>{101, 102, 103});
  for (int i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]));
}

TEST_CASE("accuracy") {
  const std::vector<std::size_t> t{0, 1, 2, 1};
  CHECK(accuracy(t, t) == 100.0);
  CHECK(accuracy(std::vector<std::size_t>{1, 2, 0, 0}, t) == 0.0);
  std::vector<std::size_t> truth(129, 1), pred(129, 1);
  pred[0] = pred[1] = 0;
  CHECK(std::round(accuracy(pred, truth) * 100) / 100 == 98.45);
  CHECK_THROWS_AS(accuracy(std::vector<std::size_t>{}, std::vector<std::size_t>{}), std::invalid_argument);
  CHECK(argmax(std::vector<double>{1, 5, 5, 2}) == 1);
}

TEST_CASE("adam: zero gradient leaves parameters and counts the step") {
  std::vector<double> p{1.0, -2.0};
  AdamState s(2);
  adam_step(p, std::vector<double>{0, 0}, s, 0.01);
  CHECK(p == std::vector<double>{1.0, -2.0});
  CHECK(s.t == 1);
}

TEST_CASE("adam: first step moves by lr") {
  std::vector<double> p{0.0};
  AdamState s(1);
  adam_step(p, std::vector<double>{1.0}, s, 0.01);
  // m_hat = 1, v_hat = 1: step = lr / (1 + eps).
  CHECK(p[0] == doctest::Approx(-0.01 / (1 + 1e-8)).epsilon(1e-12));
  std::vector<double> q{0.0};
  AdamState s2(1);
  adam_step(q, std::vector<double>{-250.0}, s2, 0.01);
  CHECK(q[0] == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("adam: parameter blocks update independently") {
  std::vector<double> joint{0, 0};
  AdamState sj(2);
  std::vector<double> a{0}, b{0};
  AdamState sa(1), sb(1);
  for (int i = 0; i < 5; ++i) {
    const double ga = 0.3 * i - 0.4, gb = 2.0 - i;
    adam_step(joint, std::vector<double>{ga, gb}, sj, 0.05);
    adam_step(a, std::vector<double>{ga}, sa, 0.05);
    adam_step(b, std::vector<double>{gb}, sb, 0.05);
  }
  CHECK(joint[0] == a[0]);
  CHECK(joint[1] == b[0]);
}

TEST_CASE("adam: bad input") {
  std::vector<double> p{0.0};
  AdamState s(1);
  CHECK_THROWS_AS(adam_step(p, std::vector<double>{NAN}, s, 0.01), std::domain_error);
  CHECK_THROWS_AS(adam_step(p, std::vector<double>{1, 2}, s, 0.01), std::invalid_argument);
}

TEST_CASE("train config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.epochs = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.epochs = 1;
  c.lr = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.lr = 0.01;
  c.lr_decay = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.lr_decay = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("fit with lr = 0 is a pure evaluation") {
  Rng rng(2);
  Model m = init_kan(std::vector<std::size_t>{1, 1}, 5, 3, -1, 1, rng);
  const Model before = m;
  const SampleSet s = square_samples();
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.lr = 0;
  cfg.grid_update = true;
  const FitResult r = fit(m, s, &s, cfg);
  CHECK(std::get<KanNetwork>(m) == std::get<KanNetwork>(before));
  CHECK(r.final_train_loss == r.initial_train_loss);
  CHECK(r.epochs_run == 1);
  CHECK(r.grid_extensions == 0);
}

TEST_CASE("fit descends on the square dataset") {
  Rng rng(3);
  Model m = init_kan(std::vector<std::size_t>{1, 1}, 5, 3, -1, 1, rng);
  TrainConfig cfg;
  cfg.epochs = 2000;
  cfg.lr = 0.01;
  const FitResult r = fit(m, square_samples(), nullptr, cfg);
  CHECK(r.final_train_loss < r.initial_train_loss);
  CHECK(r.final_train_loss < 0.01 * r.initial_train_loss);
  CHECK(r.history.size() == 2000);
  CHECK(std::isnan(r.history.back().test_loss));
  CHECK(!r.final_test_loss);
}

TEST_CASE("fit decays the learning rate every epoch") {
  Rng rng(4);
  Model m = init_mlp(std::vector<std::size_t>{1, 4, 1}, Activation::tanh, rng);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.lr = 0.1;
  cfg.lr_decay = 0.5;
  const FitResult r = fit(m, square_samples(), nullptr, cfg);
  for (std::size_t e = 0; e < 5; ++e) CHECK(r.history[e].lr == doctest::Approx(0.1 * std::pow(0.5, e)));
}

TEST_CASE("fit is deterministic for a seed, including shuffled mini-batches") {
  Rng data_rng(5);
  const SampleSet s = blobs(data_rng, 60);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.batch_size = 8;
  cfg.loss = LossKind::cross_entropy;
  cfg.seed = 99;
  const auto run = [&](std::uint64_t seed) {
    Rng rng(7);
    Model m = init_kan(std::vector<std::size_t>{2, 3}, 3, 3, -1, 1, rng);
    TrainConfig c = cfg;
    c.seed = seed;
    c.grid_update = true;
    const FitResult r = fit(m, s, &s, c);
    return std::pair{std::get<KanNetwork>(m).parameters(), r.final_train_loss};
  };
  const auto a = run(99), b = run(99), c = run(100);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(a.first != c.first);
}

TEST_CASE("fit learns a separable classification task") {
  Rng data_rng(6);
  const SampleSet s = blobs(data_rng, 90);
  Rng rng(8);
  Model m = init_mlp(std::vector<std::size_t>{2, 8, 3}, Activation::relu, rng);
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.batch_size = 16;
  cfg.loss = LossKind::cross_entropy;
  const FitResult r = fit(m, s, nullptr, cfg);
  CHECK(r.final_train_loss < 0.1);
  std::vector<std::size_t> pred;
  for (std::size_t i = 0; i < s.size(); ++i) pred.push_back(argmax(predict(m, s.inputs.row(i))));
  CHECK(accuracy(pred, s.labels) == 100.0);
}

TEST_CASE("fit widens KAN grids when activations leave the range") {
  Rng rng(9);
  // Inputs deliberately outside [-1, 1].
  SampleSet s{Matrix(20, 1), Matrix(20, 1), {}};
  for (std::size_t i = 0; i < 20; ++i) {
    s.inputs(i, 0) = -2.0 + 4.0 * static_cast<double>(i) / 19;
    s.targets(i, 0) = std::sin(s.inputs(i, 0));
  }
  Model m = init_kan(std::vector<std::size_t>{1, 1}, 5, 3, -1, 1, rng);
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.lr = 0.02;
  cfg.grid_update = true;
  const FitResult r = fit(m, s, nullptr, cfg);
  CHECK(r.grid_extensions >= 1);
  const KnotGrid& g = std::get<KanNetwork>(m).layer(0).edge(0, 0).spline.grid();
  CHECK(g.lo() <= -2.0);
  CHECK(g.hi() >= 2.0);
  CHECK(r.final_train_loss < 0.01);

  Model fixed = init_kan(std::vector<std::size_t>{1, 1}, 5, 3, -1, 1, rng);
  cfg.grid_update = false;
  CHECK(fit(fixed, s, nullptr, cfg).grid_extensions == 0);
}

TEST_CASE("fit reports divergence") {
  Rng rng(10);
  Model m = init_mlp(std::vector<std::size_t>{1, 4, 1}, Activation::identity, rng);
  SampleSet s = square_samples();
  for (auto& v : s.targets.data()) v *= 1e300;
  TrainConfig cfg;
  cfg.epochs = 50;
  CHECK_THROWS_AS(fit(m, s, nullptr, cfg), DivergenceError);
}

TEST_CASE("fit validates its inputs") {
  Rng rng(11);
  Model m = init_mlp(std::vector<std::size_t>{2, 3, 1}, Activation::relu, rng);
  TrainConfig cfg;
  cfg.epochs = 1;
  CHECK_THROWS_AS(fit(m, square_samples(), nullptr, cfg), std::invalid_argument);
  CHECK_THROWS_AS(fit(m, SampleSet{}, nullptr, cfg), std::invalid_argument);
  cfg.loss = LossKind::cross_entropy;
  SampleSet s{Matrix(3, 2), Matrix(), {}};
  CHECK_THROWS_AS(fit(m, s, nullptr, cfg), std::invalid_argument);
}

TEST_CASE("loss log CSV") {
  FitResult r;
  r.history = {{1, 0.5, NAN, 0.01}, {2, 0.25, 0.3, 0.0099}};
  std::ostringstream out;
  write_loss_csv(r, out);
  CHECK(out.str() == "epoch,train_loss,test_loss,lr\n1,0.5,,0.01\n2,0.25,0.3,0.0099\n");
}
