#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "placement/error.hpp"

namespace placement {

enum class LinearKind { ols, ridge, lasso };

struct LinearModel {
  Eigen::VectorXd weights;
  double intercept = 0;
  LinearKind kind = LinearKind::ols;
  double alpha = 0;
};

/// Rank-deficient design. dependent_columns lists the columns that are linear
/// combinations of earlier ones (after centering, so constants count too).
class SingularityError : public Error {
 public:
  SingularityError(std::vector<Eigen::Index> dependent, const std::string& what)
      : Error(what), dependent_(std::move(dependent)) {}
  const std::vector<Eigen::Index>& dependent_columns() const noexcept { return dependent_; }

 private:
  std::vector<Eigen::Index> dependent_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(LinearModel last, const std::string& what)
      : Error(what), last_(std::move(last)) {}
  const LinearModel& last_iterate() const noexcept { return last_; }

 private:
  LinearModel last_;
};

/// Least squares with an unpenalized intercept via the centred normal equations.
LinearModel fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Minimizes ||y - Xw - b||^2 + alpha ||w||^2 on the raw feature scale.
LinearModel fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha);

struct LassoOptions {
  double alpha = 1e-3;
  double tol = 1e-6;
  std::size_t max_iter = 10000;
};

/// Cyclic coordinate descent on (1/2n)||y - Xw - b||^2 + alpha ||w||_1 with X
/// standardized internally; alpha therefore acts on unit-variance columns.
/// Returned weights are on the original scale.
LinearModel fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const LassoOptions& options = {});

/// Smallest alpha for which every standardized lasso weight is zero.
double lasso_alpha_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

inline double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

Eigen::VectorXd predict_linear(const LinearModel& m, const Eigen::MatrixXd& X);

}  // namespace placement
