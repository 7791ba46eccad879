#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "placement/error.hpp"

namespace placement {

template <class DerivedA, class DerivedB>
double mae(const Eigen::MatrixBase<DerivedA>& y, const Eigen::MatrixBase<DerivedB>& y_hat) {
  if (y.size() != y_hat.size())
    throw ShapeError("mae: length mismatch (" + std::to_string(y.size()) + " vs " +
                     std::to_string(y_hat.size()) + ")");
  if (y.size() < 1) throw DomainError("mae: empty input");
  return (y.template cast<double>() - y_hat.template cast<double>()).cwiseAbs().mean();
}

/// Coefficient of determination as a percentage: 100 * (1 - SS_res / SS_tot).
template <class DerivedA, class DerivedB>
double accuracy_pct(const Eigen::MatrixBase<DerivedA>& y, const Eigen::MatrixBase<DerivedB>& y_hat) {
  if (y.size() != y_hat.size())
    throw ShapeError("accuracy: length mismatch (" + std::to_string(y.size()) + " vs " +
                     std::to_string(y_hat.size()) + ")");
  if (y.size() < 2) throw DomainError("accuracy: need at least 2 observations");
  const auto yd = y.template cast<double>().eval();
  const double ss_tot = (yd.array() - yd.mean()).square().sum();
  if (!(ss_tot > 0.0)) throw DomainError("accuracy: R^2 is undefined for a constant target");
  const double ss_res = (yd - y_hat.template cast<double>()).squaredNorm();
  return 100.0 * (1.0 - ss_res / ss_tot);
}

double median(std::vector<double> values);

/// Median wall-clock seconds of `repeats` runs after one untimed warm-up.
double time_fit(const std::function<void()>& fit, std::size_t repeats);

}  // namespace placement
