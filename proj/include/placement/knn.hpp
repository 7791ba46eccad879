#pragma once

#include <Eigen/Dense>
#include <cstddef>

namespace placement {

struct KnnModel {
  std::size_t k = 5;
  Eigen::MatrixXd points;  // training rows
  Eigen::VectorXd targets;
};

KnnModel fit_knn(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t k);

/// Mean target of the k nearest training rows by Euclidean distance. Equal
/// distances resolve to the lower training index.
Eigen::VectorXd predict_knn(const KnnModel& m, const Eigen::MatrixXd& X);

}  // namespace placement
