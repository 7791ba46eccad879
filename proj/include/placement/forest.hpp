#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "placement/tree.hpp"

namespace placement {

struct ForestParams {
  TreeParams tree;
  std::size_t n_trees = 100;
  double feature_subsample = 1.0 / 3.0;  // fraction of columns tried per split
  bool bootstrap = true;
  std::uint64_t seed = 42;
};

struct ForestModel {
  std::vector<Tree> trees;
  std::size_t n_trees = 0;
  double feature_subsample = 1.0;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

/// Per-tree random stream derived from (seed, tree_index) only, so the forest
/// does not depend on how trees are scheduled across threads.
std::uint64_t tree_stream_seed(std::uint64_t seed, std::size_t tree_index);

ForestModel fit_random_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              const ForestParams& params);

/// Unweighted mean over trees.
Eigen::VectorXd predict_forest(const ForestModel& m, const Eigen::MatrixXd& X);

}  // namespace placement
