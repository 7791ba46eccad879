#include "placement/knn.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "placement/error.hpp"
#include "placement/parallel.hpp"

namespace placement {

KnnModel fit_knn(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t k) {
  if (X.rows() != y.size()) throw ShapeError("knn: X and y disagree on row count");
  if (k < 1 || k > static_cast<std::size_t>(X.rows()))
    throw SpecError("knn: k = " + std::to_string(k) + " outside [1, " + std::to_string(X.rows()) +
                    "]");
  return {k, X, y};
}

Eigen::VectorXd predict_knn(const KnnModel& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.points.cols())
    throw ShapeError("knn: model expects " + std::to_string(m.points.cols()) + " columns, got " +
                     std::to_string(X.cols()));
  const auto n_train = static_cast<std::size_t>(m.points.rows());
  // row-major copy keeps each training point contiguous in the inner loop
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> train = m.points;
  Eigen::VectorXd out(X.rows());

  constexpr std::size_t kBlock = 64;
  const std::size_t n_query = static_cast<std::size_t>(X.rows());
  const std::size_t n_blocks = (n_query + kBlock - 1) / kBlock;
  parallel_for(0, n_blocks, [&](std::size_t b) {
    std::vector<std::pair<double, std::size_t>> dist(n_train);
    for (std::size_t q = b * kBlock; q < std::min(n_query, (b + 1) * kBlock); ++q) {
      const Eigen::RowVectorXd query = X.row(static_cast<Eigen::Index>(q));
      for (std::size_t i = 0; i < n_train; ++i)
        dist[i] = {(train.row(static_cast<Eigen::Index>(i)) - query).squaredNorm(), i};
      const auto kth = dist.begin() + static_cast<long>(m.k);
      std::nth_element(dist.begin(), kth - 1, dist.end());
      // sum in index order so the result does not depend on nth_element's layout
      std::sort(dist.begin(), kth, [](const auto& a, const auto& c) { return a.second < c.second; });
      double sum = 0;
      for (auto it = dist.begin(); it != kth; ++it) sum += m.targets(static_cast<Eigen::Index>(it->second));
      out(static_cast<Eigen::Index>(q)) = sum / static_cast<double>(m.k);
    }
  });
  return out;
}

}  // namespace placement
