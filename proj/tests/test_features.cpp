#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "placement/cleaning.hpp"
#include "placement/error.hpp"
#include "placement/features.hpp"

using namespace placement;
using testing::make_row;

TEST_CASE("eq2_normalize examples") {
  CHECK(eq2_normalize(10.0, 90) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(eq2_normalize(5.0, 50) == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(eq2_normalize(123.456, 100) == 1.0);
  CHECK(eq2_normalize(0.0, 37) == 1.0);
  CHECK_THROWS_AS(eq2_normalize(1.0, 101), DomainError);
}

TEST_CASE("eq2_normalize matches the direct formula on a random grid") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> v(-1000, 1000);
  for (int i = 0; i < 1000; ++i) {
    const double x = v(rng);
    const std::size_t p = rng() % 101;
    const double direct = x * (100.0 - static_cast<double>(p)) / 100.0 + 1.0;
    CHECK(std::abs(eq2_normalize(x, p) - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("eq2_normalize array form agrees with the scalar form") {
  Eigen::ArrayXd a(4);
  a << 0, 1.5, 10, -3;
  const Eigen::ArrayXd out = eq2_normalize(a, 80);
  for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(out(i) == doctest::Approx(eq2_normalize(a(i), 80)));
  CHECK_THROWS_AS(eq2_normalize(a, 200), DomainError);
}

TEST_CASE("eq2_normalize is affine and non-increasing in player count") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> v(0, 500);
  for (int i = 0; i < 500; ++i) {
    const double x = v(rng);
    const double a = v(rng) / 50.0 - 5.0;
    const std::size_t p = rng() % 101;
    CHECK(std::abs(eq2_normalize(a * x, p) - (a * eq2_normalize(x, p) - a + 1.0)) <= 1e-12 * (1 + std::abs(a * x)));
    if (p < 100) CHECK(eq2_normalize(x, p + 1) <= eq2_normalize(x, p));
  }
}

TEST_CASE("feature presets") {
  const auto names = [](const std::vector<FeatureSpec>& fs) {
    std::vector<std::string> out;
    for (const auto& f : fs) out.push_back(f.name);
    return out;
  };
  const std::vector<std::string> fs8 = {"TotalDistance", "TotalKillsByTeamNorm", "killsNormalised",
                                        "DamageNormalised", "Heals_Boosts", "killPlaceNorm",
                                        "killP/maxP_Norm", "longestKill"};
  CHECK(names(feature_set_for(8)) == fs8);
  auto fs7 = fs8;
  fs7.erase(fs7.begin() + 5);
  CHECK(names(feature_set_for(7)) == fs7);

  const auto fs14 = names(feature_set_for(14));
  CHECK(fs14.size() == 14);
  for (const auto& n : fs8) CHECK(std::find(fs14.begin(), fs14.end(), n) != fs14.end());
  for (const char* n : {"DBNOs", "killStreakNorm", "killperdistNorm", "HealsPerDist", "Assist_Revive",
                        "totalTeamDamageNorm"})
    CHECK(std::find(fs14.begin(), fs14.end(), n) != fs14.end());

  CHECK_THROWS_AS(feature_set_for(9), SpecError);
  CHECK_THROWS_AS(feature_by_name("nope"), SpecError);
  CHECK(feature_dictionary().size() == 16);
}

TEST_CASE("match_player_counts") {
  RecordTable t;
  for (int i = 0; i < 3; ++i) t.rows.push_back(make_row("a", "g" + std::to_string(i), "a" + std::to_string(i)));
  for (int i = 0; i < 3; ++i) t.rows.push_back(make_row("b", "g" + std::to_string(i), "b" + std::to_string(i)));
  const auto c = match_player_counts(t);
  CHECK(c.size() == 2);
  CHECK(c.at("a") == 3);
  CHECK(c.at("b") == 3);
  CHECK(match_player_counts(RecordTable{}).empty());

  SynthConfig cfg;
  cfg.n_matches = 5;
  cfg.players_per_match = 10;
  for (const auto& [id, n] : match_player_counts(generate_synthetic(cfg))) CHECK(n == 10);
}

TEST_CASE("compound feature values") {
  auto r = make_row("m", "g", "p");
  r.assists = 2;
  r.revives = 1;
  r.walk_distance = 120.5;
  r.swim_distance = 10.0;
  r.ride_distance = 999;
  r.kills = 0;
  r.headshot_kills = 0;
  r.heals = 3;
  r.boosts = 4;
  RecordTable t;
  t.rows = {r};
  const auto fm = build_features(
      t, features_by_name({"Assist_Revive", "TotalDistance", "Headshot_per_kill", "Heals_Boosts",
                           "HealsPerDist", "Players_in_a_team"}));
  CHECK(fm.values(0, 0) == 3.0);
  CHECK(fm.values(0, 1) == 130.5);
  CHECK(fm.values(0, 2) == 0.0);
  CHECK(fm.values(0, 3) == 7.0);
  CHECK(fm.values(0, 4) == doctest::Approx(3.0 / 130.5));
  CHECK(fm.values(0, 5) == 1.0);
}

TEST_CASE("normalized features use the match's row count") {
  RecordTable t;
  for (int i = 0; i < 4; ++i) {
    auto r = make_row("m", i < 2 ? "g1" : "g2", "p" + std::to_string(i));
    r.kills = i + 1;
    r.damage_dealt = 10.0 * (i + 1);
    r.kill_place = i + 1;
    r.max_place = 8;
    r.walk_distance = 0.5;  // below the 1 meter floor
    t.rows.push_back(r);
  }
  const auto fm = build_features(
      t, features_by_name({"killsNormalised", "TotalKillsByTeamNorm", "totalTeamDamageNorm",
                           "killP/maxP_Norm", "killperdistNorm", "killPlaceNorm"}));
  const double s = 0.96;  // (100 - 4) / 100
  CHECK(fm.values(2, 0) == doctest::Approx(3 * s + 1));
  CHECK(fm.values(0, 1) == doctest::Approx(3 * s + 1));
  CHECK(fm.values(2, 1) == doctest::Approx(7 * s + 1));
  CHECK(fm.values(3, 2) == doctest::Approx(70 * s + 1));
  CHECK(fm.values(1, 3) == doctest::Approx(2.0 / 8.0 * s + 1));
  CHECK(fm.values(3, 4) == doctest::Approx(4.0 * s + 1));
  CHECK(fm.values(3, 5) == doctest::Approx(4.0 * s + 1));
}

TEST_CASE("features on a cleaned synthetic table") {
  SynthConfig cfg;
  cfg.n_matches = 30;
  cfg.players_per_match = 60;
  cfg.seed = 8;
  const auto clean = remove_anomalies(generate_synthetic(cfg)).first;
  const auto fm = build_features(clean, feature_dictionary());
  REQUIRE(fm.rows() == static_cast<Eigen::Index>(clean.size()));
  CHECK(fm.values.allFinite());
  CHECK(fm.target.allFinite());

  const auto col = [&](const char* name) {
    const auto names = fm.names();
    return static_cast<Eigen::Index>(std::find(names.begin(), names.end(), name) - names.begin());
  };
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> team;
  for (Eigen::Index i = 0; i < fm.rows(); ++i) {
    const auto& k = fm.row_keys[static_cast<std::size_t>(i)];
    const std::pair<double, double> v{fm.values(i, col("TotalKillsByTeamNorm")),
                                      fm.values(i, col("totalTeamDamageNorm"))};
    auto [it, fresh] = team.emplace(std::make_pair(k.match_id, k.group_id), v);
    if (!fresh) CHECK(it->second == v);
    const auto& r = clean.rows[static_cast<std::size_t>(i)];
    CHECK(fm.values(i, col("Players_in_a_team")) <= max_team_size(canonical_match_type(r.match_type)));
  }
}

TEST_CASE("write_feature_csv layout") {
  RecordTable t;
  t.rows = {make_row("m", "g", "p")};
  t.rows[0].win_place_perc = 0.5;
  const auto fm = build_features(t, features_by_name({"DBNOs", "longestKill"}));
  std::ostringstream out;
  write_feature_csv(out, fm);
  CHECK(out.str().rfind("DBNOs,longestKill,winPlacePerc\n", 0) == 0);
  CHECK(out.str().find("0,0,0.5") != std::string::npos);
}
