#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gradcheck.hpp"
#include "multigrasp/error.hpp"
#include "multigrasp/losses.hpp"
#include "multigrasp/mlp.hpp"
#include "multigrasp/pcgrad.hpp"
#include "multigrasp/scene.hpp"
#include "multigrasp/train.hpp"

using namespace multigrasp;

TEST_CASE("objectness loss") {
  const std::vector<double> zeros(6, 0.0), labels{1, 0, 1, 1, 0, 0};
  CHECK(loss_objectness(zeros, labels).value == doctest::Approx(std::log(2.0)));
  const std::vector<double> confident{10, -10, 10, 10, -10, -10};
  CHECK(loss_objectness(confident, labels).value < 1e-3);
}

TEST_CASE("vacuum loss") {
  CHECK(loss_vacuum(std::vector<double>{0.0}, std::vector<double>{0.5}).value == doctest::Approx(std::log(2.0)));
  const std::vector<double> logits{-2.0, 0.3, 1.7, 4.0};
  std::vector<double> targets;
  for (double z : logits) targets.push_back(1.0 / (1.0 + std::exp(-z)));
  for (double g : loss_vacuum(logits, targets).grad) CHECK(std::abs(g) < 1e-15);
}

TEST_CASE("weighted parallel loss") {
  const std::vector<double> z{0.0, 0.0}, y{0.7, 0.0};
  CHECK(loss_parallel_graspness(z, y, 10.0).value == doctest::Approx((10 * std::log(2.0) + std::log(2.0)) / 2));
  const std::vector<double> logits{-1.5, 0.2, 2.5, -0.3}, binary{1, 0, 1, 0};
  const auto a = loss_parallel_graspness(logits, binary, 1.0);
  const auto b = loss_vacuum(logits, binary);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-14));
  for (std::size_t i = 0; i < logits.size(); ++i) CHECK(a.grad[i] == doctest::Approx(b.grad[i]).epsilon(1e-14));
}

TEST_CASE("smooth l1 and cross entropy") {
  CHECK(smooth_l1(std::vector<double>{0.5}, std::vector<double>{0.0}).value == 0.125);
  CHECK(smooth_l1(std::vector<double>{3.0}, std::vector<double>{1.0}).value == 1.5);
  const std::vector<double> same{0.1, 0.4, 0.9};
  CHECK(smooth_l1(same, same).value == 0.0);
  CHECK(cross_entropy(std::vector<double>(4, 0.0), 2).value == doctest::Approx(std::log(4.0)));
  CHECK_THROWS(cross_entropy(std::vector<double>(4, 0.0), 4));
}

TEST_CASE("refiner loss is zero on matching regression targets") {
  const int views = 5, angles = 3, depths = 2, scores = 4;
  RefinerTarget t;
  t.view_scores = {0.1, 0.2, 0.9, 0.0, 0.3};
  t.width = 0.45;
  t.angle_bin = 1;
  t.depth_bin = 0;
  t.score_bin = 3;
  std::vector<double> out(views + angles + depths + 1 + scores, 0.0);
  for (int v = 0; v < views; ++v) out[v] = t.view_scores[v];
  out[views + angles + depths] = t.width;
  RefinerWeights only_regression;
  only_regression.angle = only_regression.depth = only_regression.score = 0.0;
  CHECK(loss_refiner(out, t, views, angles, depths, scores, only_regression).value == 0.0);
}

TEST_CASE("every loss matches central differences") {
  std::mt19937_64 rng(21);
  for (const auto& check : gradcheck::loss_checks()) {
    CAPTURE(check.name);
    const auto worst = gradcheck::worst_relative_error(check, rng, 100);
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("network gradient matches central differences") {
  std::mt19937_64 rng(22);
  CHECK(gradcheck::worst_network_error(rng, 100) < 1e-4);
}

TEST_CASE("pcgrad leaves non-conflicting gradients alone") {
  const GradientSet g{{1.0, 0.0}, {0.0, 1.0}};
  const auto out = pcgrad(g, {{1}, {0}});
  CHECK(out == std::vector<double>{0.5, 0.5});
}

TEST_CASE("pcgrad on the worked conflict example") {
  const GradientSet g{{1.0, 0.0}, {-1.0, 1.0}};
  const auto out = pcgrad(g, {{1}, {0}});
  CHECK(out[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("pcgrad annihilates antiparallel pairs") {
  const GradientSet g{{0.3, -1.2, 2.0}, {-0.3, 1.2, -2.0}};
  for (double v : pcgrad(g, {{1}, {0}})) CHECK(v == 0.0);
}

TEST_CASE("pcgrad is positively homogeneous and respects the last projection") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    GradientSet g(3, std::vector<double>(8));
    for (auto& t : g)
      for (auto& x : t) x = n(rng);
    const std::vector<std::vector<std::size_t>> orders{{1, 2}, {2, 0}, {0, 1}};
    const auto base = pcgrad(g, orders);
    const double c = std::exp(n(rng));
    GradientSet scaled = g;
    for (auto& t : scaled)
      for (auto& x : t) x *= c;
    const auto out = pcgrad(scaled, orders);
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(std::abs(out[i] - c * base[i]) <= 1e-12 * std::max(1.0, std::abs(c * base[i])));

    std::mt19937_64 a(trial), b(trial);
    CHECK(pcgrad(g, a) == pcgrad(g, b));
  }
  CHECK_THROWS(pcgrad(GradientSet{{1.0}, {1.0, 2.0}}, {{1}, {0}}));
}

TEST_CASE("zero network predicts one half everywhere") {
  MlpModel m;
  PointFeatures f;
  f.rows = 3;
  f.values.assign(3 * kFeatureCount, 0.0);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = 0.1 * static_cast<double>(i);
  const auto z = m.map_logits(f);
  for (Eigen::Index i = 0; i < z.size(); ++i) CHECK(1.0 / (1.0 + std::exp(-z(i))) == 0.5);
}

TEST_CASE("one hidden unit by hand") {
  MlpConfig cfg;
  cfg.hidden = {1};
  cfg.refiner = false;
  MlpModel m(cfg);
  auto& p = m.params();
  const auto& l = m.trunk()[0];
  for (std::size_t j = 0; j < kFeatureCount; ++j) p[l.offset + j] = 0.1 * static_cast<double>(j + 1);
  p[l.offset + kFeatureCount] = -0.2;
  const auto& h = m.map_head();
  p[h.offset + 0] = 1.5;
  p[h.offset + 1] = -2.0;
  p[h.offset + 2] = 0.5;
  p[h.offset + 3] = 0.1;
  p[h.offset + 4] = 0.2;
  p[h.offset + 5] = 0.3;
  PointFeatures f;
  f.rows = 1;
  f.values = {1.0, 0.5, -0.5, 0.25, 0.0, 2.0, -1.0};
  double pre = -0.2;
  for (std::size_t j = 0; j < kFeatureCount; ++j) pre += 0.1 * static_cast<double>(j + 1) * f.values[j];
  const double a = std::tanh(pre);
  const auto z = m.map_logits(f);
  CHECK(z(0, 0) == doctest::Approx(1.5 * a + 0.1).epsilon(1e-14));
  CHECK(z(1, 0) == doctest::Approx(-2.0 * a + 0.2).epsilon(1e-14));
  CHECK(z(2, 0) == doctest::Approx(0.5 * a + 0.3).epsilon(1e-14));
}

TEST_CASE("batched forward equals single-point calls") {
  const auto m = MlpModel::initialized({}, 4);
  auto model = m;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (auto& x : model.params()) x += 0.1 * n(rng);
  PointFeatures f;
  f.rows = 600;
  for (std::size_t i = 0; i < f.rows * kFeatureCount; ++i) f.values.push_back(n(rng));
  const auto all = model.map_logits(f);
  std::vector<std::size_t> rows{5, 300, 599};
  const auto ref = model.refiner_outputs(f, rows);
  for (std::size_t i = 0; i < f.rows; i += 37) {
    PointFeatures one;
    one.rows = 1;
    const auto r = f.row(i);
    one.values.assign(r.begin(), r.end());
    const auto z = model.map_logits(one);
    for (int c = 0; c < kMapChannels; ++c) CHECK(z(c, 0) == doctest::Approx(all(c, i)).epsilon(1e-13));
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::vector<std::size_t> one{rows[k]};
    const auto z = model.refiner_outputs(f, one);
    for (Eigen::Index c = 0; c < z.rows(); ++c) CHECK(z(c, 0) == doctest::Approx(ref(c, k)).epsilon(1e-13));
  }
}

TEST_CASE("serial and parallel gradients are bit identical") {
  auto model = MlpModel::initialized({}, 9);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (auto& x : model.params()) x += 0.05 * n(rng);
  PointFeatures f;
  f.rows = 1000;
  for (std::size_t i = 0; i < f.rows * kFeatureCount; ++i) f.values.push_back(n(rng));
  Eigen::MatrixXd d_map(kMapChannels, f.rows);
  for (Eigen::Index i = 0; i < d_map.size(); ++i) d_map(i) = n(rng);
  const std::vector<std::size_t> rows{1, 2, 500, 999};
  Eigen::MatrixXd d_ref(model.config().refiner_outputs(), rows.size());
  for (Eigen::Index i = 0; i < d_ref.size(); ++i) d_ref(i) = n(rng);
  std::vector<double> a(model.param_count(), 0.0), b(model.param_count(), 0.0);
  model.accumulate_gradient(f, d_map, rows, d_ref, a, Execution::serial);
  model.accumulate_gradient(f, d_map, rows, d_ref, b, Execution::parallel);
  CHECK(a == b);
}

TEST_CASE("cosine schedule") {
  CHECK(cosine_lr(5e-4, 0, 22) == 5e-4);
  CHECK(cosine_lr(5e-4, 21, 22) == doctest::Approx(5e-4 * 0.5 * (1 + std::cos(kPi * 21 / 22))));
  CHECK(cosine_lr(5e-4, 11, 22) == doctest::Approx(2.5e-4));
}

namespace {

const std::vector<TrainingScene>& two_scenes() {
  static const std::vector<TrainingScene> scenes = [] {
    std::vector<TrainingScene> s;
    for (std::uint64_t seed : {101u, 202u}) {
      const auto [cloud, scene] = generate_scene(seed, 3, {});
      s.push_back(prepare_training_scene(cloud, scene));
    }
    return s;
  }();
  return scenes;
}

}  // namespace

TEST_CASE("training reduces the loss and is reproducible") {
  TrainConfig cfg;
  cfg.seed = 3;
  const auto a = train(two_scenes(), cfg);
  REQUIRE(a.history.size() == 22);
  for (int e = 1; e < 5; ++e) CHECK(a.history[e].total() < a.history[e - 1].total());
  const auto b = train(two_scenes(), cfg);
  CHECK(a.model.params() == b.model.params());
  CHECK(a.history.back().lr == cosine_lr(cfg.lr, 21, 22));

  std::ostringstream log;
  write_training_log(log, a.history, false);
  CHECK(log.str().rfind("# variant=w/o PCGrad\n", 0) == 0);
}

TEST_CASE("surgery is the identity when the tasks cannot conflict") {
  TrainConfig cfg;
  cfg.epochs = 4;
  cfg.w_vacuum = 0.0;
  cfg.w_objectness = 0.0;
  cfg.pcgrad = true;
  const auto on = train(two_scenes(), cfg);
  cfg.pcgrad = false;
  const auto off = train(two_scenes(), cfg);
  CHECK(on.model.params() == off.model.params());
}

TEST_CASE("non-finite losses abort training") {
  auto scenes = two_scenes();
  scenes[1].labels.vacuum[0] = std::nan("");
  TrainConfig cfg;
  cfg.epochs = 1;
  CHECK_THROWS_AS(train(scenes, cfg), NonFiniteLoss);
}
