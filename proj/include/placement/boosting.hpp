#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "placement/tree.hpp"

namespace placement {

struct BoostParams {
  std::size_t n_iterations = 100;
  double learning_rate = 0.1;
  std::size_t max_depth = 3;       // exact GBR
  std::size_t max_leaves = 31;     // histogram GBDT
  std::size_t min_samples_leaf = 1;
  std::size_t max_bins = 255;      // histogram GBDT
  std::uint64_t seed = 42;

  static BoostParams gbr_defaults() { return {}; }
  static BoostParams hist_defaults() {
    BoostParams p;
    p.min_samples_leaf = 20;
    return p;
  }
};

enum class BoostKind { gbr, hist_gbdt };

struct BoostedEnsemble {
  BoostKind kind = BoostKind::gbr;
  double base_prediction = 0;
  double learning_rate = 0.1;
  Eigen::Index n_features = 0;
  std::vector<Tree> trees;
  std::vector<std::vector<double>> bin_edges;  // hist_gbdt only
};

/// Quantile-binned copy of a design matrix. Bin b of feature j holds values in
/// (edges[b-1], edges[b]]; the last bin is unbounded above.
struct BinnedMatrix {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<std::uint8_t> codes;  // column-major
  std::vector<std::vector<double>> bin_edges;
  std::vector<int> n_bins;

  std::uint8_t code(Eigen::Index row, Eigen::Index col) const {
    return codes[static_cast<std::size_t>(col * rows + row)];
  }
};

/// Features with at most max_bins distinct values get one bin per value, with
/// edges at the midpoints between neighbours; others are cut at the distinct
/// value boundaries nearest to equal-population quantiles.
BinnedMatrix build_histograms(const Eigen::MatrixXd& X, std::size_t max_bins);

/// Squared-error gradient boosting with depth-limited exact CART trees.
BoostedEnsemble fit_gbr(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const BoostParams& params = BoostParams::gbr_defaults());

struct HistogramBin {
  double grad = 0;  // sum of residuals
  std::uint32_t count = 0;
};

/// Emitted for every split of a histogram tree when an observer is installed.
/// `left`/`right` are the histograms the fit used (one of them derived by
/// subtraction); the `direct_*` ones are rebuilt from the child's rows.
struct HistogramSplitEvent {
  std::span<const HistogramBin> parent;
  std::span<const HistogramBin> left;
  std::span<const HistogramBin> right;
  std::span<const HistogramBin> direct_left;
  std::span<const HistogramBin> direct_right;
  bool left_by_subtraction = false;
};

using HistogramObserver = std::function<void(const HistogramSplitEvent&)>;

/// Leaf-wise (best-first) boosting on binned features. Each tree keeps
/// splitting the leaf with the largest gain until max_leaves or no positive
/// gain. The smaller child's histogram is built, the larger is parent - smaller.
BoostedEnsemble fit_hist_gbdt(const BinnedMatrix& binned, const Eigen::VectorXd& y,
                              const BoostParams& params = BoostParams::hist_defaults(),
                              const HistogramObserver& observer = {});

Eigen::VectorXd predict_ensemble(const BoostedEnsemble& m, const Eigen::MatrixXd& X);

/// Column s holds predictions using the first s trees, s = 0..trees.size().
Eigen::MatrixXd staged_predict(const BoostedEnsemble& m, const Eigen::MatrixXd& X);

}  // namespace placement
