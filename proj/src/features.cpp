#include "placement/features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "placement/csv.hpp"
#include "placement/parallel.hpp"

namespace placement {

const std::vector<FeatureSpec>& feature_dictionary() {
  using D = FeatureDefinition;
  static const std::vector<FeatureSpec> dictionary = {
      {"DBNOs", D::dbnos, false},
      {"killPlaceNorm", D::kill_place_norm, true},
      {"killStreakNorm", D::kill_streak_norm, true},
      {"longestKill", D::longest_kill, false},
      {"TotalDistance", D::total_distance, false},
      {"killperdistNorm", D::kill_per_dist_norm, true},
      {"HealsPerDist", D::heals_per_dist, false},
      {"Assist_Revive", D::assist_revive, false},
      {"killP/maxP_Norm", D::kill_place_over_max_place_norm, true},
      {"totalTeamDamageNorm", D::total_team_damage_norm, true},
      {"TotalKillsByTeamNorm", D::total_kills_by_team_norm, true},
      {"killsNormalised", D::kills_norm, true},
      {"DamageNormalised", D::damage_norm, true},
      {"Heals_Boosts", D::heals_boosts, false},
      {"Headshot_per_kill", D::headshot_per_kill, false},
      {"Players_in_a_team", D::players_in_team, false},
  };
  return dictionary;
}

const FeatureSpec& feature_by_name(std::string_view name) {
  for (const auto& f : feature_dictionary())
    if (f.name == name) return f;
  throw SpecError("unknown feature \"" + std::string(name) + "\"");
}

std::vector<FeatureSpec> features_by_name(const std::vector<std::string>& names) {
  std::vector<FeatureSpec> out;
  for (const auto& n : names) {
    const auto& f = feature_by_name(n);
    if (std::find(out.begin(), out.end(), f) != out.end())
      throw SpecError("feature \"" + n + "\" listed twice");
    out.push_back(f);
  }
  return out;
}

std::vector<FeatureSpec> feature_set_for(int k) {
  switch (k) {
    case 14:
      return features_by_name({"DBNOs", "killPlaceNorm", "killStreakNorm", "longestKill",
                               "TotalDistance", "killperdistNorm", "HealsPerDist",
                               "Assist_Revive", "killP/maxP_Norm", "totalTeamDamageNorm",
                               "TotalKillsByTeamNorm", "killsNormalised", "DamageNormalised",
                               "Heals_Boosts"});
    case 8:
      return features_by_name({"TotalDistance", "TotalKillsByTeamNorm", "killsNormalised",
                               "DamageNormalised", "Heals_Boosts", "killPlaceNorm",
                               "killP/maxP_Norm", "longestKill"});
    case 7:
      return features_by_name({"TotalDistance", "TotalKillsByTeamNorm", "killsNormalised",
                               "DamageNormalised", "Heals_Boosts", "killP/maxP_Norm",
                               "longestKill"});
    default:
      throw SpecError("no preset feature set of size " + std::to_string(k) +
                      " (expected 7, 8 or 14)");
  }
}

std::vector<std::string> FeatureMatrix::names() const {
  std::vector<std::string> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.name);
  return out;
}

std::map<std::string, std::size_t> match_player_counts(const RecordTable& table) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : table.rows) ++counts[r.match_id];
  return counts;
}

namespace {

struct TeamTotals {
  double kills = 0;
  double damage = 0;
  std::size_t members = 0;
};

double raw_feature(FeatureDefinition def, const RawRecord& r, const TeamTotals& team) {
  using D = FeatureDefinition;
  const double total_distance = r.walk_distance + r.swim_distance;
  const double distance_floor = std::max(total_distance, 1.0);
  switch (def) {
    case D::dbnos: return r.dbnos;
    case D::kill_place_norm: return r.kill_place;
    case D::kill_streak_norm: return r.kill_streaks;
    case D::longest_kill: return r.longest_kill;
    case D::total_distance: return total_distance;
    case D::kill_per_dist_norm: return r.kills / distance_floor;
    case D::heals_per_dist: return r.heals / distance_floor;
    case D::assist_revive: return r.assists + r.revives;
    case D::kill_place_over_max_place_norm:
      return static_cast<double>(r.kill_place) / static_cast<double>(r.max_place);
    case D::total_team_damage_norm: return team.damage;
    case D::total_kills_by_team_norm: return team.kills;
    case D::kills_norm: return r.kills;
    case D::damage_norm: return r.damage_dealt;
    case D::heals_boosts: return r.heals + r.boosts;
    case D::headshot_per_kill:
      return r.kills > 0 ? static_cast<double>(r.headshot_kills) / r.kills : 0.0;
    case D::players_in_team: return static_cast<double>(team.members);
  }
  return std::nan("");
}

}  // namespace

FeatureMatrix build_features(const RecordTable& table, const std::vector<FeatureSpec>& feature_set) {
  // re-resolve so callers cannot smuggle in unknown definitions
  for (const auto& f : feature_set) {
    const auto& known = feature_by_name(f.name);
    if (known != f) throw SpecError("feature \"" + f.name + "\" does not match its dictionary entry");
  }

  const auto n = static_cast<Eigen::Index>(table.size());
  const auto k = static_cast<Eigen::Index>(feature_set.size());

  std::unordered_map<std::string, std::size_t> players;
  for (const auto& r : table.rows) ++players[r.match_id];

  // sequential pass keeps the floating-point sums independent of thread count
  std::unordered_map<std::string, std::unordered_map<std::string, TeamTotals>> teams;
  for (const auto& r : table.rows) {
    auto& t = teams[r.match_id][r.group_id];
    t.kills += r.kills;
    t.damage += r.damage_dealt;
    ++t.members;
  }

  FeatureMatrix fm;
  fm.columns = feature_set;
  fm.values.resize(n, k);
  fm.target.resize(n);
  fm.row_keys.resize(table.size());

  parallel_for(0, table.size(), [&](std::size_t i) {
    const auto& r = table.rows[i];
    const std::size_t match_players = players.at(r.match_id);
    const TeamTotals& team = teams.at(r.match_id).at(r.group_id);
    const auto row = static_cast<Eigen::Index>(i);
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto& spec = feature_set[static_cast<std::size_t>(c)];
      double v = raw_feature(spec.definition, r, team);
      if (spec.normalized) v = eq2_normalize(v, match_players);
      fm.values(row, c) = v;
    }
    fm.target(row) = r.win_place_perc;
    fm.row_keys[i] = {r.match_id, r.group_id, r.id};
  });

  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!std::isfinite(fm.values(i, c))) {
        throw InternalError("feature \"" + feature_set[static_cast<std::size_t>(c)].name +
                            "\" is not finite at row " + std::to_string(i));
      }
    }
  }
  return fm;
}

void write_feature_csv(std::ostream& out, const FeatureMatrix& fm) {
  for (const auto& c : fm.columns) out << c.name << ',';
  out << "winPlacePerc\n";
  for (Eigen::Index i = 0; i < fm.rows(); ++i) {
    for (Eigen::Index c = 0; c < fm.cols(); ++c) out << csv::format_double(fm.values(i, c)) << ',';
    out << csv::format_double(fm.target(i)) << '\n';
  }
}

}  // namespace placement
