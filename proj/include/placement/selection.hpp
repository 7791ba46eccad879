#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "placement/error.hpp"
#include "placement/features.hpp"

namespace placement {

struct PearsonResult {
  double value = 0;
  bool constant_input = false;  // one side had zero variance; value is 0
};

/// Pearson product-moment correlation, two-pass for numerical stability.
template <class DerivedX, class DerivedY>
PearsonResult pearson(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  static_assert(DerivedX::IsVectorAtCompileTime && DerivedY::IsVectorAtCompileTime);
  if (x.size() != y.size())
    throw ShapeError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  if (x.size() < 2) throw DomainError("pearson: need at least 2 observations");

  const auto xc = (x.array().template cast<double>() - x.template cast<double>().mean()).eval();
  const auto yc = (y.array().template cast<double>() - y.template cast<double>().mean()).eval();
  const double sxx = xc.square().sum();
  const double syy = yc.square().sum();
  if (!(sxx > 0.0) || !(syy > 0.0)) return {0.0, true};
  const double r = (xc * yc).sum() / (std::sqrt(sxx) * std::sqrt(syy));
  return {std::clamp(r, -1.0, 1.0), false};
}

struct CorrelationMatrix {
  std::vector<std::string> labels;  // features, then the target last
  Eigen::MatrixXd values;
  std::vector<std::string> constant_columns;
};

/// Pairwise correlations over every feature column plus the target.
CorrelationMatrix correlation_matrix(const FeatureMatrix& fm);

/// Feature names ordered by |corr with target| descending, ties by name, first k.
std::vector<std::string> top_k_by_target_corr(const CorrelationMatrix& cm, std::size_t k);

/// Writes <base>.csv (labelled matrix, 6 decimals) and <base>.svg.
void emit_heatmap(const CorrelationMatrix& cm, const std::filesystem::path& base);

CorrelationMatrix read_heatmap_csv(const std::filesystem::path& path);

}  // namespace placement
