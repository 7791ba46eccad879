#include "placement/tree.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>

#include "placement/error.hpp"

namespace placement {

std::size_t Tree::leaf_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

PresortedColumns::PresortedColumns(const Eigen::MatrixXd& X) {
  const auto n = static_cast<std::uint32_t>(X.rows());
  order_.resize(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    auto& idx = order_[static_cast<std::size_t>(j)];
    idx.resize(n);
    std::iota(idx.begin(), idx.end(), 0u);
    const double* col = X.col(j).data();
    std::stable_sort(idx.begin(), idx.end(),
                     [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
  }
}

namespace {

class Grower {
 public:
  Grower(const Eigen::MatrixXd& X, std::span<const double> y, const TreeParams& params,
         const GrowOptions& options)
      : X_(X), y_(y), params_(params), features_per_split_(options.features_per_split),
        rng_(options.seed) {
    const auto n = static_cast<std::size_t>(X.rows());
    if (y.size() != n) throw ShapeError("tree: X and y disagree on row count");
    if (n == 0) throw DomainError("tree: cannot fit on zero rows");
    if (!options.sample_weight.empty() && options.sample_weight.size() != n)
      throw ShapeError("tree: sample_weight length mismatch");

    weight_.assign(n, 1.0);
    if (!options.sample_weight.empty())
      std::copy(options.sample_weight.begin(), options.sample_weight.end(), weight_.begin());

    const PresortedColumns* presorted = options.presorted;
    if (presorted == nullptr) {
      local_.emplace(X);
      presorted = &*local_;
    }

    const auto f = static_cast<std::size_t>(X.cols());
    sorted_.resize(f);
    for (std::size_t j = 0; j < f; ++j) {
      const auto& order = presorted->order(static_cast<Eigen::Index>(j));
      sorted_[j].reserve(n);
      for (auto r : order)
        if (weight_[r] > 0) sorted_[j].push_back(r);
    }
    for (std::uint32_t r = 0; r < n; ++r)
      if (weight_[r] > 0) members_.push_back(r);
    if (members_.empty()) throw DomainError("tree: every sample weight is zero");

    scratch_.resize(members_.size());
    goes_left_.assign(n, 0);
    pool_.resize(f);
    std::iota(pool_.begin(), pool_.end(), Eigen::Index{0});
  }

  Tree grow() {
    Tree tree;
    tree.nodes.emplace_back();
    struct Pending {
      int node;
      std::size_t begin, end, depth;
    };
    std::vector<Pending> stack{{0, 0, members_.size(), 0}};
    while (!stack.empty()) {
      const Pending p = stack.back();
      stack.pop_back();

      double w_sum = 0, y_sum = 0;
      double y_min = y_[members_[p.begin]], y_max = y_min;
      for (std::size_t i = p.begin; i < p.end; ++i) {
        const auto r = members_[i];
        w_sum += weight_[r];
        y_sum += weight_[r] * y_[r];
        y_min = std::min(y_min, y_[r]);
        y_max = std::max(y_max, y_[r]);
      }
      auto& node = tree.nodes[static_cast<std::size_t>(p.node)];
      node.value = y_sum / w_sum;
      node.n_samples = w_sum;

      const auto min_leaf = static_cast<double>(std::max<std::size_t>(params_.min_samples_leaf, 1));
      if (p.depth >= params_.max_depth || y_min == y_max ||
          w_sum < static_cast<double>(params_.min_samples_split) || w_sum < 2 * min_leaf)
        continue;

      const SplitCandidate split = find_split(p.begin, p.end, w_sum, y_sum);
      if (!split.found()) continue;

      const std::size_t mid = partition(p.begin, p.end, split);
      const int left = static_cast<int>(tree.nodes.size());
      node.feature = static_cast<int>(split.feature);
      node.threshold = split.threshold;
      node.left = left;
      node.right = left + 1;
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      stack.push_back({left + 1, mid, p.end, p.depth + 1});
      stack.push_back({left, p.begin, mid, p.depth + 1});
    }
    return tree;
  }

  SplitCandidate root_split() {
    double w_sum = 0, y_sum = 0;
    for (auto r : members_) {
      w_sum += weight_[r];
      y_sum += weight_[r] * y_[r];
    }
    return find_split(0, members_.size(), w_sum, y_sum);
  }

 private:
  SplitCandidate find_split(std::size_t begin, std::size_t end, double w_sum, double y_sum) {
    const std::size_t f = sorted_.size();
    const bool sample = features_per_split_ > 0 && features_per_split_ < f;
    if (sample) {
      // fresh permutation per node; constant features do not use up the budget
      for (std::size_t i = f; i > 1; --i) std::swap(pool_[i - 1], pool_[rng_() % i]);
    }
    const auto min_leaf = static_cast<double>(std::max<std::size_t>(params_.min_samples_leaf, 1));
    const double parent_term = y_sum * y_sum / w_sum;
    // gains closer than this are rounding noise: they count as ties, which the
    // earlier candidate wins, and a "gain" below it is no gain at all
    double sq_sum = 0;
    for (std::size_t pos = begin; pos < end; ++pos) {
      const auto r = sorted_[0][pos];
      sq_sum += weight_[r] * y_[r] * y_[r];
    }
    const double tie = kGainTolerance * sq_sum;

    SplitCandidate best;
    std::size_t visited = 0;
    for (std::size_t k = 0; k < f; ++k) {
      const Eigen::Index j = sample ? pool_[k] : static_cast<Eigen::Index>(k);
      const auto& idx = sorted_[static_cast<std::size_t>(j)];
      const double* col = X_.col(j).data();
      if (col[idx[begin]] == col[idx[end - 1]]) continue;

      double wl = 0, sl = 0;
      for (std::size_t pos = begin; pos + 1 < end; ++pos) {
        const auto r = idx[pos];
        wl += weight_[r];
        sl += weight_[r] * y_[r];
        const double x_here = col[r];
        const double x_next = col[idx[pos + 1]];
        if (!(x_here < x_next)) continue;
        const double wr = w_sum - wl;
        if (wl < min_leaf) continue;
        if (wr < min_leaf) break;
        const double sr = y_sum - sl;
        const double gain = sl * sl / wl + sr * sr / wr - parent_term;
        if (gain > tie && gain > best.gain + tie) best = {j, split_midpoint(x_here, x_next), gain};
      }
      if (sample && ++visited >= features_per_split_) break;
    }
    return best;
  }

  // Stable partition of every index array over [begin, end); returns the split point.
  std::size_t partition(std::size_t begin, std::size_t end, const SplitCandidate& split) {
    const double* col = X_.col(split.feature).data();
    for (std::size_t i = begin; i < end; ++i) {
      const auto r = members_[i];
      goes_left_[r] = col[r] <= split.threshold;
    }
    const auto apply = [&](std::vector<std::uint32_t>& a) {
      std::size_t out = begin, spill = 0;
      for (std::size_t i = begin; i < end; ++i) {
        const auto r = a[i];
        if (goes_left_[r]) a[out++] = r;
        else scratch_[spill++] = r;
      }
      std::copy(scratch_.begin(), scratch_.begin() + static_cast<long>(spill),
                a.begin() + static_cast<long>(out));
      return out;
    };
    const std::size_t mid = apply(members_);
    for (auto& s : sorted_) apply(s);
    return mid;
  }

  const Eigen::MatrixXd& X_;
  std::span<const double> y_;
  TreeParams params_;
  std::size_t features_per_split_;
  std::mt19937_64 rng_;
  std::optional<PresortedColumns> local_;
  std::vector<double> weight_;
  std::vector<std::vector<std::uint32_t>> sorted_;
  std::vector<std::uint32_t> members_;
  std::vector<std::uint32_t> scratch_;
  std::vector<std::uint8_t> goes_left_;
  std::vector<Eigen::Index> pool_;
};

}  // namespace

Tree grow_tree(const Eigen::MatrixXd& X, std::span<const double> y, const TreeParams& params,
               const GrowOptions& options) {
  if (params.min_samples_split < 2) throw DomainError("min_samples_split must be >= 2");
  if (params.min_samples_leaf < 1) throw DomainError("min_samples_leaf must be >= 1");
  return Grower(X, y, params, options).grow();
}

Tree fit_cart(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const TreeParams& params) {
  return grow_tree(X, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())), params);
}

SplitCandidate best_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const TreeParams& params) {
  return Grower(X, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())), params, {})
      .root_split();
}

Eigen::VectorXd predict_tree(const Tree& tree, const Eigen::MatrixXd& X) {
  int max_feature = -1;
  for (const auto& n : tree.nodes) max_feature = std::max(max_feature, n.feature);
  if (tree.nodes.empty()) throw DomainError("tree has no nodes");
  if (max_feature >= X.cols())
    throw ShapeError("tree uses feature " + std::to_string(max_feature) + " but X has " +
                     std::to_string(X.cols()) + " columns");
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) = tree.predict_row(X.row(i));
  return out;
}

}  // namespace placement
