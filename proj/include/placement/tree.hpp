#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace placement {

/// Node of a fitted regression tree. Internal nodes send x[feature] <= threshold
/// to `left`; leaves have feature == -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0;
  int left = -1;
  int right = -1;
  double value = 0;      // mean target of the training samples that reached the node
  double n_samples = 0;  // weighted sample count

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

/// Flat pre-order node array; nodes[0] is the root.
struct Tree {
  std::vector<TreeNode> nodes;

  template <class Derived>
  double predict_row(const Eigen::DenseBase<Derived>& x) const {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
      const auto& n = nodes[static_cast<std::size_t>(i)];
      i = x(n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
  }

  std::size_t leaf_count() const noexcept;
  std::size_t depth() const;
  bool operator==(const Tree&) const = default;
};

inline constexpr std::size_t kUnlimitedDepth = std::numeric_limits<std::size_t>::max();

/// Relative to the node's weighted sum of y^2. Split gains within this margin
/// are treated as equal.
inline constexpr double kGainTolerance = 1e-12;

struct TreeParams {
  std::size_t max_depth = kUnlimitedDepth;
  std::size_t min_samples_leaf = 1;
  std::size_t min_samples_split = 2;
};

struct SplitCandidate {
  Eigen::Index feature = -1;
  double threshold = 0;
  double gain = 0;  // decrease in weighted sum of squared errors

  bool found() const noexcept { return feature >= 0; }
};

/// Threshold between two consecutive distinct sorted values. Always in [lo, hi).
inline double split_midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) * 0.5;
  return mid < hi ? mid : lo;
}

/// Row indices sorted by value for every column (ties by row index). Built once
/// and shared by every tree grown on the same design matrix.
class PresortedColumns {
 public:
  explicit PresortedColumns(const Eigen::MatrixXd& X);
  const std::vector<std::uint32_t>& order(Eigen::Index column) const {
    return order_[static_cast<std::size_t>(column)];
  }
  Eigen::Index cols() const noexcept { return static_cast<Eigen::Index>(order_.size()); }

 private:
  std::vector<std::vector<std::uint32_t>> order_;
};

struct GrowOptions {
  const PresortedColumns* presorted = nullptr;  // built on demand when null
  std::span<const double> sample_weight;        // empty means unit weights
  std::size_t features_per_split = 0;           // 0 or >= cols: every feature
  std::uint64_t seed = 0;                       // drives feature subsampling only
};

/// Greedy variance-reduction growth. Candidate thresholds are midpoints between
/// consecutive distinct values within the node; the first best split wins in
/// (feature, threshold) order. Splits need strictly positive gain.
Tree grow_tree(const Eigen::MatrixXd& X, std::span<const double> y, const TreeParams& params,
               const GrowOptions& options = {});

Tree fit_cart(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const TreeParams& params = {});

/// The split fit_cart would choose at the root.
SplitCandidate best_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const TreeParams& params = {});

Eigen::VectorXd predict_tree(const Tree& tree, const Eigen::MatrixXd& X);

}  // namespace placement
