#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <set>

#include "placement/boosting.hpp"
#include "placement/error.hpp"

using namespace placement;

namespace {

double mse(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

double variance(const Eigen::VectorXd& y) {
  return (y.array() - y.mean()).square().mean();
}

Eigen::MatrixXd discrete_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, int levels) {
  Eigen::MatrixXd X(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) X(i, j) = static_cast<double>(rng() % static_cast<unsigned>(levels)) * 0.37;
  return X;
}

}  // namespace

TEST_CASE("zero iterations give the mean predictor") {
  std::mt19937_64 rng(50);
  const Eigen::MatrixXd X = testing::random_matrix(rng, 40, 3);
  const Eigen::VectorXd y = testing::random_matrix(rng, 40, 1).col(0);
  BoostParams p;
  p.n_iterations = 0;
  const auto g = fit_gbr(X, y, p);
  CHECK(g.trees.empty());
  CHECK(predict_ensemble(g, X).isConstant(y.mean(), 0.0));
  const auto h = fit_hist_gbdt(build_histograms(X, 255), y, p);
  CHECK(predict_ensemble(h, X).isConstant(y.mean(), 0.0));
}

TEST_CASE("one full-depth iteration at lr 1 interpolates") {
  std::mt19937_64 rng(51);
  const Eigen::MatrixXd X = testing::random_matrix(rng, 64, 2);
  const Eigen::VectorXd y = testing::random_matrix(rng, 64, 1).col(0);
  BoostParams p;
  p.n_iterations = 1;
  p.learning_rate = 1.0;
  p.max_depth = 64;
  const auto g = fit_gbr(X, y, p);
  CHECK((predict_ensemble(g, X) - y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("four-point hand case at lr 0.5") {
  Eigen::MatrixXd X(4, 1);
  X << 0, 1, 2, 3;
  Eigen::VectorXd y(4);
  y << 0, 0, 1, 1;
  BoostParams p;
  p.n_iterations = 1;
  p.learning_rate = 0.5;
  p.max_depth = 1;
  const auto g = fit_gbr(X, y, p);
  // mean 0.5, residuals -0.5/+0.5 split at 1.5, leaves -0.5 and 0.5
  Eigen::VectorXd want(4);
  want << 0.25, 0.25, 0.75, 0.75;
  CHECK((predict_ensemble(g, X) - want).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("staged training MSE never increases") {
  std::mt19937_64 rng(52);
  const Eigen::MatrixXd X = testing::random_matrix(rng, 500, 3);
  const Eigen::VectorXd y = (X.col(0).array() * 2).sin() + X.col(1).array() * X.col(2).array() +
                            0.5 * testing::random_matrix(rng, 500, 1).col(0).array();
  for (double lr : {0.05, 0.1, 0.5, 1.0}) {
    BoostParams p;
    p.learning_rate = lr;
    const auto g = fit_gbr(X, y, p);
    const Eigen::MatrixXd stages = staged_predict(g, X);
    REQUIRE(stages.cols() == 101);
    CHECK(stages.col(0).isConstant(y.mean(), 0.0));
    double prev = mse(stages.col(0), y);
    for (Eigen::Index s = 1; s < stages.cols(); ++s) {
      const double cur = mse(stages.col(s), y);
      CHECK(cur <= prev * (1 + 1e-12));
      prev = cur;
    }
    CHECK((stages.col(100) - predict_ensemble(g, X)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(mse(predict_ensemble(g, X), y) <= variance(y));
  }
}

TEST_CASE("hist GBDT fits no worse than the mean") {
  std::mt19937_64 rng(53);
  const Eigen::MatrixXd X = testing::random_matrix(rng, 800, 4);
  const Eigen::VectorXd y = X.col(0) + 0.3 * testing::random_matrix(rng, 800, 1).col(0);
  const auto h = fit_hist_gbdt(build_histograms(X, 255), y);
  CHECK(mse(predict_ensemble(h, X), y) <= variance(y));
  for (const auto& t : h.trees) CHECK(t.leaf_count() <= 31);
}

TEST_CASE("constant features give degenerate trees") {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Constant(30, 2, 4.0);
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(30, 0, 1);
  const auto h = fit_hist_gbdt(build_histograms(X, 255), y);
  for (const auto& t : h.trees) CHECK(t.nodes.size() == 1);
  CHECK((predict_ensemble(h, X).array() - y.mean()).abs().maxCoeff() < 1e-12);
}

TEST_CASE("ensemble composition") {
  BoostedEnsemble empty;
  empty.base_prediction = 2.5;
  empty.n_features = 3;
  CHECK(predict_ensemble(empty, Eigen::MatrixXd::Zero(4, 3)).isConstant(2.5, 0.0));
  CHECK_THROWS_AS(predict_ensemble(empty, Eigen::MatrixXd::Zero(4, 2)), ShapeError);

  std::mt19937_64 rng(54);
  const Eigen::MatrixXd X = testing::random_matrix(rng, 50, 2);
  const Eigen::VectorXd y = testing::random_matrix(rng, 50, 1).col(0);
  BoostParams p;
  p.n_iterations = 1;
  const auto g = fit_gbr(X, y, p);
  const Eigen::VectorXd want = (g.base_prediction + g.learning_rate * predict_tree(g.trees[0], X).array()).matrix();
  CHECK((predict_ensemble(g, X) - want).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("binning") {
  Eigen::MatrixXd X(6, 2);
  X << 1, 5, 2, 5, 3, 5, 1, 5, 2, 5, 3, 5;
  const auto b = build_histograms(X, 255);
  CHECK(b.n_bins[0] == 3);
  CHECK(b.bin_edges[0] == std::vector<double>{1.5, 2.5});
  CHECK(b.n_bins[1] == 1);
  for (Eigen::Index i = 0; i < 6; ++i) {
    CHECK(b.code(i, 0) == static_cast<int>(X(i, 0)) - 1);
    CHECK(b.code(i, 1) == 0);
  }
  CHECK_THROWS_AS(build_histograms(X, 1), DomainError);
  CHECK_THROWS_AS(build_histograms(X, 256), DomainError);
}

TEST_CASE("quantile bins of 1000 uniform values") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::MatrixXd X(1000, 1);
  for (Eigen::Index i = 0; i < 1000; ++i) X(i, 0) = u(rng);
  const auto b = build_histograms(X, 10);
  REQUIRE(b.n_bins[0] == 10);
  std::vector<int> pop(10, 0);
  for (Eigen::Index i = 0; i < 1000; ++i) ++pop[b.code(i, 0)];
  for (int c : pop) CHECK(std::abs(c - 100) <= 1);
}

TEST_CASE("lossless binning makes hist stumps equal exact stumps") {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index rows = 100 + static_cast<Eigen::Index>(rng() % 400);
    const Eigen::MatrixXd X = discrete_matrix(rng, rows, 4, 2 + static_cast<int>(rng() % 200));
    const Eigen::VectorXd y = X.col(0).array().square() - X.col(2).array() +
                              testing::random_matrix(rng, rows, 1).col(0).array();
    BoostParams p;
    p.n_iterations = 30;
    p.min_samples_leaf = 1;
    p.max_depth = 1;
    p.max_leaves = 2;
    const auto exact = fit_gbr(X, y, p);
    const auto hist = fit_hist_gbdt(build_histograms(X, 255), y, p);
    CHECK((predict_ensemble(exact, X) - predict_ensemble(hist, X)).cwiseAbs().maxCoeff() < 1e-9);
    const Eigen::MatrixXd q = testing::random_matrix(rng, 50, 4);
    CHECK((predict_ensemble(exact, q) - predict_ensemble(hist, q)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("histogram subtraction identity") {
  std::mt19937_64 rng(57);
  const Eigen::MatrixXd X = testing::random_matrix(rng, 3000, 5);
  const Eigen::VectorXd y = X.col(0) - 2 * X.col(1).array().abs().matrix() +
                            0.3 * testing::random_matrix(rng, 3000, 1).col(0);
  BoostParams p = BoostParams::hist_defaults();
  p.n_iterations = 50;
  std::size_t events = 0, count_errors = 0, subtracted = 0;
  double max_grad_err = 0;
  const auto observer = [&](const HistogramSplitEvent& e) {
    ++events;
    if (e.left_by_subtraction) ++subtracted;
    for (std::size_t b = 0; b < e.parent.size(); ++b) {
      if (e.parent[b].count != e.left[b].count + e.right[b].count) ++count_errors;
      if (e.left[b].count != e.direct_left[b].count) ++count_errors;
      if (e.right[b].count != e.direct_right[b].count) ++count_errors;
      max_grad_err = std::max(max_grad_err, std::abs(e.parent[b].grad - e.left[b].grad - e.right[b].grad));
      max_grad_err = std::max(max_grad_err, std::abs(e.left[b].grad - e.direct_left[b].grad));
      max_grad_err = std::max(max_grad_err, std::abs(e.right[b].grad - e.direct_right[b].grad));
    }
  };
  const auto h = fit_hist_gbdt(build_histograms(X, 255), y, p, observer);
  CHECK(h.trees.size() == 50);
  CHECK(events > 50);
  CHECK(subtracted > 0);
  CHECK(subtracted < events);
  CHECK(count_errors == 0);
  CHECK(max_grad_err < 1e-9);
}

TEST_CASE("parameter validation") {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Zero(3, 1);
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(3);
  BoostParams p;
  p.learning_rate = 0;
  CHECK_THROWS_AS(fit_gbr(X, y, p), DomainError);
  CHECK_THROWS_AS(fit_gbr(Eigen::MatrixXd(0, 1), Eigen::VectorXd(0)), DomainError);
  CHECK_THROWS_AS(fit_hist_gbdt(build_histograms(X, 255), Eigen::VectorXd::Zero(4)), ShapeError);
}
