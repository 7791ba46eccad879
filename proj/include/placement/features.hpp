#pragma once

#include <Eigen/Dense>
#include <concepts>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "placement/dataset.hpp"
#include "placement/error.hpp"

namespace placement {

/// Rescales a per-player stat by how empty the match was: fewer players means a
/// larger multiplier. Exactly 1 at 100 players.
template <std::floating_point Scalar>
Scalar eq2_normalize(Scalar value, std::size_t num_players) {
  if (num_players > 100)
    throw DomainError("player count " + std::to_string(num_players) + " exceeds 100");
  return value * (Scalar(100) - static_cast<Scalar>(num_players)) / Scalar(100) + Scalar(1);
}

/// Coefficient-wise form for Eigen arrays and vectors.
template <class Derived>
auto eq2_normalize(const Eigen::ArrayBase<Derived>& values, std::size_t num_players) {
  using Scalar = typename Derived::Scalar;
  if (num_players > 100)
    throw DomainError("player count " + std::to_string(num_players) + " exceeds 100");
  const Scalar scale = (Scalar(100) - static_cast<Scalar>(num_players)) / Scalar(100);
  return (values * scale + Scalar(1)).eval();
}

enum class FeatureDefinition {
  dbnos,
  kill_place_norm,
  kill_streak_norm,
  longest_kill,
  total_distance,
  kill_per_dist_norm,
  heals_per_dist,
  assist_revive,
  kill_place_over_max_place_norm,
  total_team_damage_norm,
  total_kills_by_team_norm,
  kills_norm,
  damage_norm,
  heals_boosts,
  headshot_per_kill,
  players_in_team,
};

struct FeatureSpec {
  std::string name;
  FeatureDefinition definition;
  bool normalized;

  bool operator==(const FeatureSpec&) const = default;
};

/// Every feature the pipeline knows how to compute, in a fixed order.
const std::vector<FeatureSpec>& feature_dictionary();

/// Throws SpecError for names outside the dictionary.
const FeatureSpec& feature_by_name(std::string_view name);
std::vector<FeatureSpec> features_by_name(const std::vector<std::string>& names);

/// Preset lists for 14, 8 and 7 features.
std::vector<FeatureSpec> feature_set_for(int k);

struct RowKey {
  std::string match_id;
  std::string group_id;
  std::string id;

  bool operator==(const RowKey&) const = default;
};

struct FeatureMatrix {
  std::vector<FeatureSpec> columns;
  Eigen::MatrixXd values;  // rows x columns
  Eigen::VectorXd target;
  std::vector<RowKey> row_keys;

  Eigen::Index rows() const noexcept { return values.rows(); }
  Eigen::Index cols() const noexcept { return values.cols(); }
  std::vector<std::string> names() const;
};

std::map<std::string, std::size_t> match_player_counts(const RecordTable& table);

/// Computes the requested columns row by row. The player count used for
/// normalization is the number of rows in the row's match.
FeatureMatrix build_features(const RecordTable& table, const std::vector<FeatureSpec>& feature_set);

/// Feature columns followed by winPlacePerc.
void write_feature_csv(std::ostream& out, const FeatureMatrix& fm);

}  // namespace placement
