#include "doctest.h"
#include "support.hpp"

#include <map>
#include <set>

#include "placement/cleaning.hpp"
#include "placement/error.hpp"

using namespace placement;
using testing::make_row;

TEST_CASE("canonical_match_type") {
  CHECK(canonical_match_type("solo-fpp") == CoreMatchType::solo);
  CHECK(canonical_match_type("normal-duo-fpp") == CoreMatchType::duo);
  CHECK(canonical_match_type("crashfpp") == CoreMatchType::squad);
  CHECK(canonical_match_type("flaretpp") == CoreMatchType::squad);
  CHECK(canonical_match_type("normal-squad") == CoreMatchType::squad);
  try {
    canonical_match_type("deathmatch");
    FAIL("expected MappingError");
  } catch (const MappingError& e) {
    CHECK(std::string(e.what()).find("deathmatch") != std::string::npos);
  }
}

TEST_CASE("aggregate_core_counts") {
  RecordTable t;
  for (int i = 0; i < 3; ++i) t.rows.push_back(make_row("m", "g" + std::to_string(i), "a" + std::to_string(i), "solo"));
  for (int i = 0; i < 2; ++i) t.rows.push_back(make_row("m", "h" + std::to_string(i), "b" + std::to_string(i), "solo-fpp"));
  const auto c = aggregate_core_counts(t);
  CHECK(c[0] == 5);
  CHECK(c[1] == 0);
  CHECK(c[2] == 0);

  const auto empty = aggregate_core_counts(RecordTable{});
  CHECK(empty == CoreCounts{0, 0, 0});
}

TEST_CASE("one row per label gives the mapping's fibre sizes") {
  RecordTable t;
  int i = 0;
  for (auto label : kMatchTypeLabels) {
    const auto s = std::to_string(i++);
    t.rows.push_back(make_row("m" + s, "g" + s, "p" + s, std::string(label)));
  }
  // oracle: count labels by substring, events go to squad
  std::size_t solo = 0, duo = 0, squad = 0;
  for (auto label : kMatchTypeLabels) {
    if (label.find("solo") != std::string_view::npos) ++solo;
    else if (label.find("duo") != std::string_view::npos) ++duo;
    else ++squad;
  }
  const auto c = aggregate_core_counts(t);
  CHECK(c[0] == solo);
  CHECK(c[1] == duo);
  CHECK(c[2] == squad);
  CHECK(c == CoreCounts{4, 4, 8});
}

TEST_CASE("squad team of five is removed whole") {
  RecordTable t;
  for (int i = 0; i < 5; ++i) t.rows.push_back(make_row("m", "big", "b" + std::to_string(i)));
  for (int i = 0; i < 4; ++i) t.rows.push_back(make_row("m", "ok", "o" + std::to_string(i)));
  const auto [kept, report] = remove_anomalies(t);
  CHECK(report.removed_oversize_team == 5);
  CHECK(kept.size() == 4);
  for (const auto& r : kept.rows) CHECK(r.group_id == "ok");
}

TEST_CASE("inactive players need all three conditions") {
  RecordTable t;
  auto idle = make_row("m", "g1", "idle");
  idle.kills = 0;
  idle.walk_distance = 0;
  idle.weapons_acquired = 0;
  auto walker = make_row("m", "g2", "walker");
  walker.kills = 0;
  walker.walk_distance = 100;
  walker.weapons_acquired = 0;
  auto rider = make_row("m", "g3", "rider");
  rider.kills = 0;
  rider.walk_distance = 0;
  rider.ride_distance = 50;
  rider.weapons_acquired = 0;
  auto looter = make_row("m", "g4", "looter");
  looter.kills = 0;
  looter.walk_distance = 0;
  looter.weapons_acquired = 1;
  t.rows = {idle, walker, rider, looter};
  const auto [kept, report] = remove_anomalies(t);
  CHECK(report.removed_inactive_player == 1);
  REQUIRE(kept.size() == 3);
  CHECK(kept.rows[0].id == "walker");
  CHECK(kept.rows[1].id == "rider");
  CHECK(kept.rows[2].id == "looter");
}

TEST_CASE("max_place of zero is dropped") {
  RecordTable t;
  auto bad = make_row("m", "g1", "bad");
  bad.max_place = 0;
  t.rows = {bad, make_row("m", "g2", "good")};
  const auto [kept, report] = remove_anomalies(t);
  CHECK(report.removed_invalid_max_place == 1);
  CHECK(kept.size() == 1);
}

namespace {

RecordTable random_table(std::mt19937_64& rng, std::size_t n) {
  RecordTable t;
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = rng() % 40;
    const auto label = kMatchTypeLabels[m % kMatchTypeLabels.size()];
    auto r = make_row("m" + std::to_string(m), "g" + std::to_string(rng() % 60),
                      "p" + std::to_string(i), std::string(label));
    r.kills = static_cast<int>(rng() % 3);
    r.walk_distance = rng() % 3 == 0 ? 0.0 : 10.0;
    r.swim_distance = rng() % 10 == 0 ? 5.0 : 0.0;
    r.ride_distance = rng() % 10 == 0 ? 5.0 : 0.0;
    r.weapons_acquired = static_cast<int>(rng() % 3);
    r.max_place = rng() % 50 == 0 ? 0 : 20;
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace

TEST_CASE("cleaning properties on randomized rows") {
  std::mt19937_64 rng(99);
  const auto t = random_table(rng, 10000);
  const auto [once, report] = remove_anomalies(t);
  CHECK(once.size() + report.removed() == t.size());
  CHECK(report.core_counts == aggregate_core_counts(t));

  const auto [twice, report2] = remove_anomalies(once);
  CHECK(twice == once);
  CHECK(report2.removed() == 0);

  std::map<std::pair<std::string, std::string>, std::size_t> sizes;
  for (const auto& r : once.rows) ++sizes[{r.match_id, r.group_id}];
  for (const auto& r : once.rows) {
    CHECK(sizes[{r.match_id, r.group_id}] <=
          static_cast<std::size_t>(max_team_size(canonical_match_type(r.match_type))));
    CHECK(r.max_place > 0);
    const bool inactive = r.kills == 0 && r.walk_distance + r.swim_distance + r.ride_distance == 0 &&
                          r.weapons_acquired == 0;
    CHECK_FALSE(inactive);
  }

  // kept rows stay in input order
  std::size_t j = 0;
  for (const auto& r : t.rows)
    if (j < once.size() && once.rows[j] == r) ++j;
  CHECK(j == once.size());
}
