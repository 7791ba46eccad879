#include "placement/boosting.hpp"

#include <algorithm>
#include <numeric>

#include "placement/error.hpp"
#include "placement/parallel.hpp"

namespace placement {

// ---------------------------------------------------------------------------
// Binning

namespace {

std::vector<double> feature_edges(const Eigen::Ref<const Eigen::VectorXd>& column,
                                  std::size_t max_bins) {
  std::vector<double> sorted(column.data(), column.data() + column.size());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> uniq;
  std::vector<std::size_t> cum;  // rows <= uniq[u]
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (uniq.empty() || sorted[i] != uniq.back()) {
      uniq.push_back(sorted[i]);
      cum.push_back(0);
    }
    cum.back() = i + 1;
  }

  std::vector<double> edges;
  if (uniq.size() <= max_bins) {
    for (std::size_t u = 0; u + 1 < uniq.size(); ++u)
      edges.push_back(split_midpoint(uniq[u], uniq[u + 1]));
  } else {
    const double n = static_cast<double>(sorted.size());
    std::size_t last = std::numeric_limits<std::size_t>::max();
    for (std::size_t b = 1; b < max_bins; ++b) {
      const double target = static_cast<double>(b) * n / static_cast<double>(max_bins);
      // boundary after unique u closest to the target population
      auto it = std::lower_bound(cum.begin(), cum.end() - 1, target,
                                 [](std::size_t c, double t) { return static_cast<double>(c) < t; });
      std::size_t u = static_cast<std::size_t>(it - cum.begin());
      if (u > 0 && target - static_cast<double>(cum[u - 1]) <= static_cast<double>(cum[u]) - target)
        --u;
      if (u + 1 >= uniq.size() || (last != std::numeric_limits<std::size_t>::max() && u <= last))
        continue;
      edges.push_back(split_midpoint(uniq[u], uniq[u + 1]));
      last = u;
    }
  }
  // midpoints of adjacent doubles can coincide; keep edges strictly increasing
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

BinnedMatrix build_histograms(const Eigen::MatrixXd& X, std::size_t max_bins) {
  if (max_bins < 2 || max_bins > 255) throw DomainError("max_bins must be in [2, 255]");
  BinnedMatrix b;
  b.rows = X.rows();
  b.cols = X.cols();
  b.codes.resize(static_cast<std::size_t>(X.rows() * X.cols()));
  b.bin_edges.resize(static_cast<std::size_t>(X.cols()));
  b.n_bins.resize(static_cast<std::size_t>(X.cols()));

  parallel_for(0, static_cast<std::size_t>(X.cols()), [&](std::size_t j) {
    const auto col = static_cast<Eigen::Index>(j);
    auto& edges = b.bin_edges[j];
    edges = feature_edges(X.col(col), max_bins);
    b.n_bins[j] = static_cast<int>(edges.size()) + 1;
    auto* out = b.codes.data() + j * static_cast<std::size_t>(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double v = X(i, col);
      out[i] = static_cast<std::uint8_t>(std::lower_bound(edges.begin(), edges.end(), v) - edges.begin());
    }
  });
  return b;
}

// ---------------------------------------------------------------------------
// Exact gradient boosting

BoostedEnsemble fit_gbr(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const BoostParams& params) {
  if (X.rows() != y.size()) throw ShapeError("gbr: X and y disagree on row count");
  if (X.rows() == 0) throw DomainError("gbr: cannot fit on zero rows");
  if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0))
    throw DomainError("learning_rate must be in (0, 1]");

  BoostedEnsemble m;
  m.kind = BoostKind::gbr;
  m.learning_rate = params.learning_rate;
  m.n_features = X.cols();
  m.base_prediction = y.mean();

  const PresortedColumns presorted(X);
  const TreeParams tree_params{params.max_depth, params.min_samples_leaf, 2};
  GrowOptions options;
  options.presorted = &presorted;

  Eigen::VectorXd current = Eigen::VectorXd::Constant(y.size(), m.base_prediction);
  Eigen::VectorXd residual(y.size());
  for (std::size_t it = 0; it < params.n_iterations; ++it) {
    residual = y - current;
    Tree tree = grow_tree(X, std::span<const double>(residual.data(), static_cast<std::size_t>(residual.size())),
                          tree_params, options);
    current += params.learning_rate * predict_tree(tree, X);
    m.trees.push_back(std::move(tree));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Histogram GBDT

namespace {

struct BinSplit {
  Eigen::Index feature = -1;
  int bin = -1;
  double gain = 0;
};

struct Leaf {
  int node;
  std::size_t begin, end;
  std::vector<HistogramBin> hist;
  double grad = 0;
  double grad_sq = 0;
  std::uint32_t count = 0;
  BinSplit best;
};

class HistTreeBuilder {
 public:
  HistTreeBuilder(const BinnedMatrix& binned, const BoostParams& params,
                  const HistogramObserver& observer)
      : binned_(binned), params_(params), observer_(observer) {
    offsets_.resize(static_cast<std::size_t>(binned.cols) + 1, 0);
    for (std::size_t j = 0; j < binned.n_bins.size(); ++j)
      offsets_[j + 1] = offsets_[j] + static_cast<std::size_t>(binned.n_bins[j]);
    rows_.resize(static_cast<std::size_t>(binned.rows));
    scratch_.resize(rows_.size());
  }

  // Grows one tree on the residuals and adds lr * leaf value to `current`.
  Tree grow(const std::vector<double>& grad, std::vector<double>& current) {
    grad_ = &grad;
    std::iota(rows_.begin(), rows_.end(), 0u);

    Tree tree;
    tree.nodes.emplace_back();
    std::vector<Leaf> leaves;
    leaves.push_back(Leaf{0, 0, rows_.size(), {}, 0, 0, 0, {}});
    build_hist(leaves[0].begin, leaves[0].end, leaves[0].hist);
    finish_leaf(leaves[0]);

    while (leaves.size() < params_.max_leaves) {
      std::size_t pick = leaves.size();
      double best_gain = 0;
      for (std::size_t l = 0; l < leaves.size(); ++l) {
        if (leaves[l].best.gain > best_gain) {
          best_gain = leaves[l].best.gain;
          pick = l;
        }
      }
      if (pick == leaves.size()) break;
      split_leaf(tree, leaves, pick);
    }

    for (auto& leaf : leaves) {
      const double value = leaf.grad / static_cast<double>(leaf.count);
      auto& node = tree.nodes[static_cast<std::size_t>(leaf.node)];
      node.value = value;
      for (std::size_t i = leaf.begin; i < leaf.end; ++i)
        current[rows_[i]] += params_.learning_rate * value;
    }
    return tree;
  }

 private:
  void build_hist(std::size_t begin, std::size_t end, std::vector<HistogramBin>& hist) const {
    hist.assign(offsets_.back(), HistogramBin{});
    const auto& g = *grad_;
    const auto n = static_cast<std::size_t>(binned_.rows);
    const auto per_feature = [&](std::size_t j) {
      const std::uint8_t* codes = binned_.codes.data() + j * n;
      HistogramBin* h = hist.data() + offsets_[j];
      for (std::size_t i = begin; i < end; ++i) {
        const auto r = rows_[i];
        auto& bin = h[codes[r]];
        bin.grad += g[r];
        ++bin.count;
      }
    };
    const auto f = static_cast<std::size_t>(binned_.cols);
    if ((end - begin) * f >= 65536) {
      parallel_for(0, f, per_feature);
    } else {
      for (std::size_t j = 0; j < f; ++j) per_feature(j);
    }
  }

  void finish_leaf(Leaf& leaf) const {
    leaf.grad = 0;
    leaf.grad_sq = 0;
    leaf.count = 0;
    // totals from feature 0 (every feature's bins sum to the same rows)
    if (binned_.cols > 0) {
      for (std::size_t b = offsets_[0]; b < offsets_[1]; ++b) leaf.count += leaf.hist[b].count;
    } else {
      leaf.count = static_cast<std::uint32_t>(leaf.end - leaf.begin);
    }
    for (std::size_t i = leaf.begin; i < leaf.end; ++i) {
      const double g = (*grad_)[rows_[i]];
      leaf.grad += g;
      leaf.grad_sq += g * g;
    }
    leaf.best = find_split(leaf);
  }

  BinSplit find_split(const Leaf& leaf) const {
    BinSplit best;
    const auto min_leaf = static_cast<double>(std::max<std::size_t>(params_.min_samples_leaf, 1));
    const double total_c = leaf.count;
    const double total_g = leaf.grad;
    if (total_c < 2 * min_leaf) return best;
    const double parent_term = total_g * total_g / total_c;
    const double tie = kGainTolerance * leaf.grad_sq;  // same rule as the exact trees
    for (Eigen::Index j = 0; j < binned_.cols; ++j) {
      const HistogramBin* h = leaf.hist.data() + offsets_[static_cast<std::size_t>(j)];
      const int nb = binned_.n_bins[static_cast<std::size_t>(j)];
      double cl = 0, gl = 0;
      for (int b = 0; b + 1 < nb; ++b) {
        if (h[b].count == 0) continue;
        cl += h[b].count;
        gl += h[b].grad;
        if (cl < min_leaf) continue;
        const double cr = total_c - cl;
        if (cr < min_leaf) break;
        const double gr = total_g - gl;
        const double gain = gl * gl / cl + gr * gr / cr - parent_term;
        if (gain > tie && gain > best.gain + tie) best = {j, b, gain};
      }
    }
    return best;
  }

  void split_leaf(Tree& tree, std::vector<Leaf>& leaves, std::size_t index) {
    Leaf parent = std::move(leaves[index]);
    const auto feature = parent.best.feature;
    const int bin = parent.best.bin;
    const std::uint8_t* codes = binned_.codes.data() + static_cast<std::size_t>(feature * binned_.rows);

    std::size_t out = parent.begin, spill = 0;
    for (std::size_t i = parent.begin; i < parent.end; ++i) {
      const auto r = rows_[i];
      if (codes[r] <= bin) rows_[out++] = r;
      else scratch_[spill++] = r;
    }
    std::copy(scratch_.begin(), scratch_.begin() + static_cast<long>(spill),
              rows_.begin() + static_cast<long>(out));

    const int left_node = static_cast<int>(tree.nodes.size());
    {
      auto& node = tree.nodes[static_cast<std::size_t>(parent.node)];
      node.feature = static_cast<int>(feature);
      node.threshold = binned_.bin_edges[static_cast<std::size_t>(feature)][static_cast<std::size_t>(bin)];
      node.left = left_node;
      node.right = left_node + 1;
      node.value = parent.grad / static_cast<double>(parent.count);
      node.n_samples = parent.count;
    }
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();

    Leaf left{left_node, parent.begin, out, {}, 0, 0, 0, {}};
    Leaf right{left_node + 1, out, parent.end, {}, 0, 0, 0, {}};
    const bool left_smaller = (left.end - left.begin) <= (right.end - right.begin);
    Leaf& small = left_smaller ? left : right;
    Leaf& large = left_smaller ? right : left;
    build_hist(small.begin, small.end, small.hist);
    large.hist.resize(parent.hist.size());
    for (std::size_t b = 0; b < parent.hist.size(); ++b) {
      large.hist[b].grad = parent.hist[b].grad - small.hist[b].grad;
      large.hist[b].count = parent.hist[b].count - small.hist[b].count;
    }

    if (observer_) {
      std::vector<HistogramBin> direct_left, direct_right;
      build_hist(left.begin, left.end, direct_left);
      build_hist(right.begin, right.end, direct_right);
      observer_(HistogramSplitEvent{parent.hist, left.hist, right.hist, direct_left, direct_right,
                                    !left_smaller});
    }

    finish_leaf(left);
    finish_leaf(right);
    tree.nodes[static_cast<std::size_t>(left.node)].n_samples = left.count;
    tree.nodes[static_cast<std::size_t>(right.node)].n_samples = right.count;
    leaves[index] = std::move(left);
    leaves.push_back(std::move(right));
  }

  const BinnedMatrix& binned_;
  const BoostParams& params_;
  const HistogramObserver& observer_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> rows_;
  std::vector<std::uint32_t> scratch_;
  const std::vector<double>* grad_ = nullptr;
};

}  // namespace

BoostedEnsemble fit_hist_gbdt(const BinnedMatrix& binned, const Eigen::VectorXd& y,
                              const BoostParams& params, const HistogramObserver& observer) {
  if (binned.rows != y.size()) throw ShapeError("hist gbdt: binned rows and y disagree");
  if (binned.rows == 0) throw DomainError("hist gbdt: cannot fit on zero rows");
  if (params.max_leaves < 2) throw DomainError("max_leaves must be >= 2");
  if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0))
    throw DomainError("learning_rate must be in (0, 1]");

  BoostedEnsemble m;
  m.kind = BoostKind::hist_gbdt;
  m.learning_rate = params.learning_rate;
  m.n_features = binned.cols;
  m.base_prediction = y.mean();
  m.bin_edges = binned.bin_edges;

  const auto n = static_cast<std::size_t>(y.size());
  std::vector<double> current(n, m.base_prediction);
  std::vector<double> grad(n);
  HistTreeBuilder builder(binned, params, observer);
  for (std::size_t it = 0; it < params.n_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) grad[i] = y(static_cast<Eigen::Index>(i)) - current[i];
    m.trees.push_back(builder.grow(grad, current));
  }
  return m;
}

Eigen::VectorXd predict_ensemble(const BoostedEnsemble& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.n_features)
    throw ShapeError("ensemble expects " + std::to_string(m.n_features) + " columns, got " +
                     std::to_string(X.cols()));
  Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), m.base_prediction);
  parallel_for(0, static_cast<std::size_t>(X.rows()), [&](std::size_t i) {
    const auto row = X.row(static_cast<Eigen::Index>(i));
    double sum = 0;
    for (const auto& t : m.trees) sum += t.predict_row(row);
    out(static_cast<Eigen::Index>(i)) += m.learning_rate * sum;
  });
  return out;
}

Eigen::MatrixXd staged_predict(const BoostedEnsemble& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.n_features) throw ShapeError("staged_predict: column count mismatch");
  const auto stages = static_cast<Eigen::Index>(m.trees.size()) + 1;
  Eigen::MatrixXd out(X.rows(), stages);
  out.col(0).setConstant(m.base_prediction);
  for (Eigen::Index s = 1; s < stages; ++s)
    out.col(s) = out.col(s - 1) + m.learning_rate * predict_tree(m.trees[static_cast<std::size_t>(s - 1)], X);
  return out;
}

}  // namespace placement
