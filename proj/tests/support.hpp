#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "placement/dataset.hpp"
#include "placement/tree.hpp"

namespace testing {

inline placement::RawRecord make_row(std::string match, std::string group, std::string id,
                                     std::string match_type = "squad-fpp") {
  placement::RawRecord r;
  r.id = std::move(id);
  r.group_id = std::move(group);
  r.match_id = std::move(match);
  r.match_type = std::move(match_type);
  r.kills = 1;
  r.walk_distance = 100;
  r.weapons_acquired = 2;
  r.max_place = 10;
  r.num_groups = 10;
  return r;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  return m;
}

// Fresh directory under the test's working directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::current_path() / ("scratch_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double sse(const std::vector<double>& v) {
  if (v.empty()) return 0;
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s;
}

// Every (feature, midpoint) pair, SSE recomputed from scratch for each.
inline placement::SplitCandidate brute_force_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  std::vector<double> all(y.data(), y.data() + y.size());
  const double parent = sse(all);
  placement::SplitCandidate best;
  for (Eigen::Index f = 0; f < X.cols(); ++f) {
    std::set<double> values(X.col(f).data(), X.col(f).data() + X.rows());
    std::vector<double> sorted(values.begin(), values.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      const double thr = placement::split_midpoint(sorted[i], sorted[i + 1]);
      std::vector<double> l, r;
      for (Eigen::Index k = 0; k < X.rows(); ++k) (X(k, f) <= thr ? l : r).push_back(y(k));
      const double gain = parent - sse(l) - sse(r);
      // ties (equal up to rounding) keep the earlier candidate
      if (gain > 1e-9 * (1 + parent) && gain > best.gain + 1e-9 * (1 + parent)) best = {f, thr, gain};
    }
  }
  return best;
}

}  // namespace testing
