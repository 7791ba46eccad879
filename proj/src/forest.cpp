#include "placement/forest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "placement/error.hpp"
#include "placement/parallel.hpp"

namespace placement {

std::uint64_t tree_stream_seed(std::uint64_t seed, std::size_t tree_index) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(tree_index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ForestModel fit_random_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              const ForestParams& params) {
  if (params.n_trees < 1) throw DomainError("forest needs at least one tree");
  if (!(params.feature_subsample > 0.0 && params.feature_subsample <= 1.0))
    throw DomainError("feature_subsample must be in (0, 1]");
  if (X.rows() != y.size()) throw ShapeError("forest: X and y disagree on row count");
  if (X.rows() == 0) throw DomainError("forest: cannot fit on zero rows");

  const PresortedColumns presorted(X);
  const auto n = static_cast<std::size_t>(X.rows());
  const auto per_split = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(params.feature_subsample * static_cast<double>(X.cols()))));
  const std::span<const double> targets(y.data(), n);

  ForestModel model;
  model.n_trees = params.n_trees;
  model.feature_subsample = params.feature_subsample;
  model.bootstrap = params.bootstrap;
  model.seed = params.seed;
  model.trees.resize(params.n_trees);

  parallel_for(0, params.n_trees, [&](std::size_t t) {
    std::mt19937_64 rng(tree_stream_seed(params.seed, t));
    std::vector<double> weight;
    if (params.bootstrap) {
      weight.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) weight[rng() % n] += 1.0;
    }
    GrowOptions options;
    options.presorted = &presorted;
    options.sample_weight = weight;
    options.features_per_split = per_split;
    options.seed = rng();
    model.trees[t] = grow_tree(X, targets, params.tree, options);
  });
  return model;
}

Eigen::VectorXd predict_forest(const ForestModel& m, const Eigen::MatrixXd& X) {
  if (m.trees.empty()) throw DomainError("forest has no trees");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(X.rows());
  for (const auto& t : m.trees) sum += predict_tree(t, X);
  return sum / static_cast<double>(m.trees.size());
}

}  // namespace placement
