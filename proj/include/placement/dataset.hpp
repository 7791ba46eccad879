#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace placement {

/// One player's row of match telemetry, in the competition's 29-column schema.
struct RawRecord {
  std::string id;
  std::string group_id;
  std::string match_id;
  std::int32_t assists = 0;
  std::int32_t boosts = 0;
  double damage_dealt = 0;
  std::int32_t dbnos = 0;
  std::int32_t headshot_kills = 0;
  std::int32_t heals = 0;
  std::int32_t kill_place = 1;
  std::int64_t kill_points = 0;
  std::int32_t kills = 0;
  std::int32_t kill_streaks = 0;
  double longest_kill = 0;
  std::int64_t match_duration = 0;
  std::string match_type;
  std::int32_t max_place = 1;
  std::int32_t num_groups = 1;
  std::int64_t rank_points = 0;
  std::int32_t revives = 0;
  double ride_distance = 0;
  std::int32_t road_kills = 0;
  double swim_distance = 0;
  std::int32_t team_kills = 0;
  std::int32_t vehicle_destroys = 0;
  double walk_distance = 0;
  std::int32_t weapons_acquired = 0;
  std::int64_t win_points = 0;
  double win_place_perc = 0;  // prediction target, 1 = winner

  bool operator==(const RawRecord&) const = default;
};

enum class Provenance { file, synthetic };

struct RecordTable {
  std::vector<RawRecord> rows;
  Provenance provenance = Provenance::file;

  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }
  bool operator==(const RecordTable&) const = default;
};

/// Header names in file order.
inline constexpr std::array<std::string_view, 29> kColumns = {
    "Id",          "groupId",       "matchId",       "assists",      "boosts",
    "damageDealt", "DBNOs",         "headshotKills", "heals",        "killPlace",
    "killPoints",  "kills",         "killStreaks",   "longestKill",  "matchDuration",
    "matchType",   "maxPlace",      "numGroups",     "rankPoints",   "revives",
    "rideDistance", "roadKills",    "swimDistance",  "teamKills",    "vehicleDestroys",
    "walkDistance", "weaponsAcquired", "winPoints",  "winPlacePerc"};

/// Raw match_type labels found in the data, variants of solo/duo/squad.
inline constexpr std::array<std::string_view, 16> kMatchTypeLabels = {
    "solo",     "solo-fpp",     "normal-solo",     "normal-solo-fpp",
    "duo",      "duo-fpp",      "normal-duo",      "normal-duo-fpp",
    "squad",    "squad-fpp",    "normal-squad",    "normal-squad-fpp",
    "crashfpp", "crashtpp",     "flarefpp",        "flaretpp"};

/// Whether winPlacePerc must be present. Scoring files may omit it; the target
/// then reads as 0.
enum class TargetColumn { required, optional };

RecordTable read_csv(std::istream& in, TargetColumn target = TargetColumn::required);
RecordTable load_csv(const std::filesystem::path& path, TargetColumn target = TargetColumn::required);
void write_csv(std::ostream& out, const RecordTable& table);
void save_csv(const std::filesystem::path& path, const RecordTable& table);

struct SynthConfig {
  std::size_t n_matches = 100;
  std::size_t players_per_match = 50;
  double noise_sd = 0.5;
  std::uint64_t seed = 42;
};

/// Coefficients of the planted latent score. The generator ranks players
/// within a match by this score (plus noise) to produce win_place_perc.
struct PlantedWeights {
  double kills;
  double damage_dealt;
  double walk_distance;
  double heals_boosts;
  double kill_place;  // applied to kill_place / players_per_match
};

PlantedWeights planted_weights();

/// Noise-free planted score of a synthetic row.
double planted_score(const RawRecord& r, std::size_t players_per_match);

RecordTable generate_synthetic(const SynthConfig& config);

struct Split {
  RecordTable train;
  RecordTable test;
};

/// Partitions by match: every row of a match lands on the same side. The number
/// of test matches is round(test_fraction * n_matches), clamped to [1, n - 1]
/// when at least two matches exist.
Split split(const RecordTable& table, double test_fraction, std::uint64_t seed);

}  // namespace placement
