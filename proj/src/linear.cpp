#include "placement/linear.hpp"

#include <cmath>
#include <sstream>

namespace placement {
namespace {

void check_xy(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size())
    throw ShapeError("design has " + std::to_string(X.rows()) + " rows but target has " +
                     std::to_string(y.size()));
  if (X.rows() == 0) throw DomainError("cannot fit on zero rows");
}

// Column scales used to compare pivots independently of feature units.
Eigen::VectorXd column_norms(const Eigen::MatrixXd& centered) {
  return centered.colwise().norm().transpose();
}

std::vector<Eigen::Index> dependent_columns(const Eigen::MatrixXd& centered) {
  // greedy forward pass on unit-norm columns: keep a column if it adds rank
  const Eigen::VectorXd norms = column_norms(centered);
  std::vector<Eigen::Index> kept;
  std::vector<Eigen::Index> dependent;
  for (Eigen::Index j = 0; j < centered.cols(); ++j) {
    if (!(norms(j) > 0)) {
      dependent.push_back(j);
      continue;
    }
    kept.push_back(j);
    Eigen::MatrixXd sub(centered.rows(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c)
      sub.col(static_cast<Eigen::Index>(c)) = centered.col(kept[c]) / norms(kept[c]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    qr.setThreshold(1e-7);
    if (qr.rank() < static_cast<Eigen::Index>(kept.size())) {
      kept.pop_back();
      dependent.push_back(j);
    }
  }
  return dependent;
}

}  // namespace

LinearModel fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  check_xy(X, y);
  if (X.rows() <= X.cols())
    throw DomainError("OLS needs more rows (" + std::to_string(X.rows()) + ") than columns (" +
                      std::to_string(X.cols()) + ")");

  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;

  LinearModel m;
  m.kind = LinearKind::ols;
  if (X.cols() == 0) {
    m.weights.resize(0);
    m.intercept = y_mean;
    return m;
  }

  // solve on unit-norm columns so the pivot test is scale free
  const Eigen::VectorXd norms = column_norms(Xc);
  bool singular = (norms.array() <= 0).any();
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!singular) {
    const Eigen::MatrixXd Xs = Xc * norms.cwiseInverse().asDiagonal();
    llt.compute(Xs.transpose() * Xs);
    singular = llt.info() != Eigen::Success;
    if (!singular) {
      // squared pivot = 1 - R^2 of the column on the ones before it
      const Eigen::VectorXd pivots = Eigen::MatrixXd(llt.matrixL()).diagonal();
      singular = (pivots.array().square() < 1e-12).any();
    }
    if (!singular) m.weights = llt.solve(Xs.transpose() * yc).cwiseQuotient(norms);
  }
  if (singular) {
    auto dependent = dependent_columns(Xc);
    std::ostringstream msg;
    msg << "design matrix is rank deficient; dependent columns:";
    for (auto j : dependent) msg << ' ' << j;
    if (dependent.empty()) msg << " (ill-conditioned)";
    throw SingularityError(std::move(dependent), msg.str());
  }
  m.intercept = y_mean - x_mean.dot(m.weights);
  return m;
}

LinearModel fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha) {
  check_xy(X, y);
  if (!(alpha >= 0.0)) throw DomainError("ridge alpha must be non-negative");
  if (alpha == 0.0) {
    auto m = fit_ols(X, y);
    m.kind = LinearKind::ridge;
    return m;
  }
  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
  Eigen::MatrixXd system = Xc.transpose() * Xc;
  system.diagonal().array() += alpha;

  LinearModel m;
  m.kind = LinearKind::ridge;
  m.alpha = alpha;
  m.weights = system.ldlt().solve(Xc.transpose() * (y.array() - y_mean).matrix());
  m.intercept = y_mean - x_mean.dot(m.weights);
  return m;
}

namespace {

struct Standardized {
  Eigen::MatrixXd Z;
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;  // population sd, 0 for constant columns
};

Standardized standardize(const Eigen::MatrixXd& X) {
  Standardized s;
  s.mean = X.colwise().mean();
  s.Z = X.rowwise() - s.mean;
  const double n = static_cast<double>(X.rows());
  s.scale = (s.Z.colwise().squaredNorm() / n).cwiseSqrt();
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if (s.scale(j) > 0) s.Z.col(j) /= s.scale(j);
    else s.Z.col(j).setZero();
  }
  return s;
}

}  // namespace

double lasso_alpha_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  check_xy(X, y);
  const auto s = standardize(X);
  const Eigen::VectorXd yc = y.array() - y.mean();
  return (s.Z.transpose() * yc).cwiseAbs().maxCoeff() / static_cast<double>(X.rows());
}

LinearModel fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const LassoOptions& options) {
  check_xy(X, y);
  if (!(options.alpha >= 0.0)) throw DomainError("lasso alpha must be non-negative");

  const auto s = standardize(X);
  const double n = static_cast<double>(X.rows());
  const double y_mean = y.mean();
  const Eigen::Index p = X.cols();

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd residual = y.array() - y_mean;
  Eigen::VectorXd col_norm(p);  // (1/n)||z_j||^2: 1 for live columns, 0 for constants
  for (Eigen::Index j = 0; j < p; ++j) col_norm(j) = s.Z.col(j).squaredNorm() / n;

  const auto to_model = [&](const Eigen::VectorXd& b) {
    LinearModel m;
    m.kind = LinearKind::lasso;
    m.alpha = options.alpha;
    m.weights.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) m.weights(j) = s.scale(j) > 0 ? b(j) / s.scale(j) : 0.0;
    m.intercept = y_mean - s.mean.dot(m.weights);
    return m;
  };

  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    double max_change = 0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_norm(j) == 0) continue;
      const double old = beta(j);
      const double rho = s.Z.col(j).dot(residual) / n + col_norm(j) * old;
      const double updated = soft_threshold(rho, options.alpha) / col_norm(j);
      if (updated != old) {
        residual -= (updated - old) * s.Z.col(j);
        beta(j) = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    if (max_change < options.tol) return to_model(beta);
  }
  throw ConvergenceError(to_model(beta), "lasso did not converge within " +
                                             std::to_string(options.max_iter) + " iterations");
}

Eigen::VectorXd predict_linear(const LinearModel& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.weights.size())
    throw ShapeError("model expects " + std::to_string(m.weights.size()) + " columns, got " +
                     std::to_string(X.cols()));
  return (X * m.weights).array() + m.intercept;
}

}  // namespace placement
