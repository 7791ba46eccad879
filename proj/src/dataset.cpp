#include "placement/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "placement/cleaning.hpp"
#include "placement/csv.hpp"
#include "placement/error.hpp"

namespace placement {
namespace {

enum Col : std::size_t {
  kId, kGroupId, kMatchId, kAssists, kBoosts, kDamageDealt, kDbnos, kHeadshotKills,
  kHeals, kKillPlace, kKillPoints, kKills, kKillStreaks, kLongestKill, kMatchDuration,
  kMatchType, kMaxPlace, kNumGroups, kRankPoints, kRevives, kRideDistance, kRoadKills,
  kSwimDistance, kTeamKills, kVehicleDestroys, kWalkDistance, kWeaponsAcquired,
  kWinPoints, kWinPlacePerc
};

constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

[[noreturn]] void cell_error(std::size_t row, std::size_t col, std::string_view text,
                             std::string_view why) {
  std::ostringstream msg;
  msg << "row " << row << ", column \"" << kColumns[col] << "\": " << why << " (\"" << text
      << "\")";
  throw ParseError(row, std::string(kColumns[col]), msg.str());
}

std::int64_t int_cell(std::size_t row, std::size_t col, std::string_view text) {
  std::int64_t v = 0;
  if (!csv::parse_int(text, v)) cell_error(row, col, text, "not an integer");
  return v;
}

std::int32_t count_cell(std::size_t row, std::size_t col, std::string_view text) {
  const std::int64_t v = int_cell(row, col, text);
  if (v < 0) cell_error(row, col, text, "negative count");
  if (v > std::numeric_limits<std::int32_t>::max()) cell_error(row, col, text, "out of range");
  return static_cast<std::int32_t>(v);
}

double real_cell(std::size_t row, std::size_t col, std::string_view text) {
  double v = 0;
  if (!csv::parse_double(text, v)) cell_error(row, col, text, "not a finite number");
  return v;
}

double distance_cell(std::size_t row, std::size_t col, std::string_view text) {
  const double v = real_cell(row, col, text);
  if (v < 0) cell_error(row, col, text, "negative value");
  return v;
}

RawRecord parse_row(std::size_t row, const std::vector<std::string>& cells,
                    const std::array<std::size_t, 29>& position) {
  static const std::string kZero = "0";
  auto cell = [&](Col c) -> const std::string& {
    return position[c] == kAbsent ? kZero : cells[position[c]];
  };
  RawRecord r;
  r.id = cell(kId);
  r.group_id = cell(kGroupId);
  r.match_id = cell(kMatchId);
  r.assists = count_cell(row, kAssists, cell(kAssists));
  r.boosts = count_cell(row, kBoosts, cell(kBoosts));
  r.damage_dealt = distance_cell(row, kDamageDealt, cell(kDamageDealt));
  r.dbnos = count_cell(row, kDbnos, cell(kDbnos));
  r.headshot_kills = count_cell(row, kHeadshotKills, cell(kHeadshotKills));
  r.heals = count_cell(row, kHeals, cell(kHeals));
  r.kill_place = count_cell(row, kKillPlace, cell(kKillPlace));
  r.kill_points = int_cell(row, kKillPoints, cell(kKillPoints));
  r.kills = count_cell(row, kKills, cell(kKills));
  r.kill_streaks = count_cell(row, kKillStreaks, cell(kKillStreaks));
  r.longest_kill = distance_cell(row, kLongestKill, cell(kLongestKill));
  r.match_duration = int_cell(row, kMatchDuration, cell(kMatchDuration));
  r.match_type = cell(kMatchType);
  r.max_place = count_cell(row, kMaxPlace, cell(kMaxPlace));
  r.num_groups = count_cell(row, kNumGroups, cell(kNumGroups));
  r.rank_points = int_cell(row, kRankPoints, cell(kRankPoints));
  r.revives = count_cell(row, kRevives, cell(kRevives));
  r.ride_distance = distance_cell(row, kRideDistance, cell(kRideDistance));
  r.road_kills = count_cell(row, kRoadKills, cell(kRoadKills));
  r.swim_distance = distance_cell(row, kSwimDistance, cell(kSwimDistance));
  r.team_kills = count_cell(row, kTeamKills, cell(kTeamKills));
  r.vehicle_destroys = count_cell(row, kVehicleDestroys, cell(kVehicleDestroys));
  r.walk_distance = distance_cell(row, kWalkDistance, cell(kWalkDistance));
  r.weapons_acquired = count_cell(row, kWeaponsAcquired, cell(kWeaponsAcquired));
  r.win_points = int_cell(row, kWinPoints, cell(kWinPoints));
  r.win_place_perc = real_cell(row, kWinPlacePerc, cell(kWinPlacePerc));

  if (r.headshot_kills > r.kills)
    cell_error(row, kHeadshotKills, cell(kHeadshotKills), "headshotKills exceeds kills");
  if (r.win_place_perc < 0.0 || r.win_place_perc > 1.0)
    cell_error(row, kWinPlacePerc, cell(kWinPlacePerc), "target outside [0, 1]");
  return r;
}

std::array<std::size_t, 29> resolve_header(const std::vector<std::string>& header,
                                           TargetColumn target) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    auto name = header[i];
    // tolerate a UTF-8 byte order mark on the first header cell
    if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name.erase(0, 3);
    if (!index.emplace(name, i).second) throw SchemaError(name, "duplicate column \"" + name + "\"");
  }
  std::array<std::size_t, 29> position{};
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    auto it = index.find(std::string(kColumns[c]));
    if (it == index.end()) {
      if (c == kWinPlacePerc && target == TargetColumn::optional) {
        position[c] = kAbsent;
        continue;
      }
      throw SchemaError(std::string(kColumns[c]),
                        "missing column \"" + std::string(kColumns[c]) + "\"");
    }
    position[c] = it->second;
    index.erase(it);
  }
  if (!index.empty()) {
    // report the leftmost unexpected column
    auto extra = std::min_element(index.begin(), index.end(), [](const auto& a, const auto& b) {
      return a.second < b.second;
    });
    throw SchemaError(extra->first, "unexpected column \"" + extra->first + "\"");
  }
  return position;
}

}  // namespace

RecordTable read_csv(std::istream& in, TargetColumn target) {
  std::string line;
  if (!csv::read_line(in, line)) throw EmptyInputError("empty input: no header row");
  const auto header = csv::split_line(line);
  const auto position = resolve_header(header, target);

  RecordTable table;
  table.provenance = Provenance::file;
  std::set<std::pair<std::string, std::string>> keys;
  std::size_t row = 0;
  while (csv::read_line(in, line)) {
    ++row;
    const auto cells = csv::split_line(line);
    if (cells.size() != header.size()) {
      std::ostringstream msg;
      msg << "row " << row << ": expected " << header.size() << " cells, found "
          << cells.size();
      throw ParseError(row, "", msg.str());
    }
    RawRecord r = parse_row(row, cells, position);
    if (!keys.emplace(r.match_id, r.id).second) {
      throw ParseError(row, "Id", "row " + std::to_string(row) + ": duplicate (matchId, Id) pair (" +
                                      r.match_id + ", " + r.id + ")");
    }
    table.rows.push_back(std::move(r));
  }
  return table;
}

RecordTable load_csv(const std::filesystem::path& path, TargetColumn target) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in, target);
}

void write_csv(std::ostream& out, const RecordTable& table) {
  for (std::size_t c = 0; c < kColumns.size(); ++c) out << (c ? "," : "") << kColumns[c];
  out << '\n';
  const auto d = [](double v) { return csv::format_double(v); };
  for (const auto& r : table.rows) {
    out << r.id << ',' << r.group_id << ',' << r.match_id << ',' << r.assists << ','
        << r.boosts << ',' << d(r.damage_dealt) << ',' << r.dbnos << ',' << r.headshot_kills
        << ',' << r.heals << ',' << r.kill_place << ',' << r.kill_points << ',' << r.kills
        << ',' << r.kill_streaks << ',' << d(r.longest_kill) << ',' << r.match_duration << ','
        << r.match_type << ',' << r.max_place << ',' << r.num_groups << ',' << r.rank_points
        << ',' << r.revives << ',' << d(r.ride_distance) << ',' << r.road_kills << ','
        << d(r.swim_distance) << ',' << r.team_kills << ',' << r.vehicle_destroys << ','
        << d(r.walk_distance) << ',' << r.weapons_acquired << ',' << r.win_points << ','
        << d(r.win_place_perc) << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const RecordTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(out, table);
  if (!out) throw IoError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Synthetic telemetry

PlantedWeights planted_weights() {
  return {.kills = 0.30,
          .damage_dealt = 0.003,
          .walk_distance = 0.0008,
          .heals_boosts = 0.10,
          .kill_place = -3.0};
}

double planted_score(const RawRecord& r, std::size_t players_per_match) {
  const auto w = planted_weights();
  return w.kills * r.kills + w.damage_dealt * r.damage_dealt +
         w.walk_distance * r.walk_distance + w.heals_boosts * (r.heals + r.boosts) +
         w.kill_place * (static_cast<double>(r.kill_place) /
                         static_cast<double>(players_per_match));
}

namespace {

std::string hex_id(std::mt19937_64& rng) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::uint64_t v = rng();
  std::string s(14, '0');
  for (auto& ch : s) {
    ch = kDigits[v & 0xF];
    v >>= 4;
  }
  return s;
}

template <class Rng>
std::int32_t poisson(Rng& rng, double mean) {
  if (mean <= 0) return 0;
  return std::poisson_distribution<std::int32_t>(mean)(rng);
}

// Within-match 1-based ranks by descending key; ties go to the lower index.
std::vector<std::size_t> descending_ranks(const std::vector<double>& key) {
  std::vector<std::size_t> order(key.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  std::vector<std::size_t> rank(key.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos + 1;
  return rank;
}

}  // namespace

RecordTable generate_synthetic(const SynthConfig& config) {
  if (config.players_per_match < 2 || config.players_per_match > 100) {
    throw ConfigError("players_per_match must be in [2, 100], got " +
                      std::to_string(config.players_per_match));
  }
  if (!(config.noise_sd >= 0.0) || !std::isfinite(config.noise_sd))
    throw ConfigError("noise_sd must be a finite non-negative number");

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::size_t players = config.players_per_match;
  RecordTable table;
  table.provenance = Provenance::synthetic;
  table.rows.reserve(config.n_matches * players);

  for (std::size_t m = 0; m < config.n_matches; ++m) {
    const auto label = kMatchTypeLabels[rng() % kMatchTypeLabels.size()];
    const int cap = max_team_size(canonical_match_type(label));
    const std::string match_id = hex_id(rng);
    const std::int64_t duration = 1300 + static_cast<std::int64_t>(rng() % 900);

    // teams of 1..cap players
    std::vector<std::size_t> team_of(players);
    std::size_t n_groups = 0;
    for (std::size_t p = 0; p < players;) {
      const std::size_t size = 1 + rng() % static_cast<std::size_t>(cap);
      for (std::size_t k = 0; k < size && p < players; ++k) team_of[p++] = n_groups;
      ++n_groups;
    }
    std::vector<std::string> group_ids(n_groups);
    for (auto& g : group_ids) g = hex_id(rng);
    const auto max_place =
        static_cast<std::int32_t>(n_groups + rng() % (n_groups / 2 + 1));

    std::vector<RawRecord> rows(players);
    std::vector<double> combat(players);
    for (std::size_t p = 0; p < players; ++p) {
      const double skill = normal(rng);
      const double survival = 0.5 * skill + std::sqrt(0.75) * normal(rng);
      RawRecord& r = rows[p];
      r.id = hex_id(rng);
      r.group_id = group_ids[team_of[p]];
      r.match_id = match_id;
      r.match_type = std::string(label);
      r.match_duration = duration;
      r.num_groups = static_cast<std::int32_t>(n_groups);
      r.max_place = max_place;

      r.kills = poisson(rng, std::exp(0.7 * skill - 0.4));
      r.headshot_kills = r.kills > 0
          ? std::binomial_distribution<std::int32_t>(r.kills, 0.25)(rng) : 0;
      r.damage_dealt = r.kills * (70.0 + 30.0 * unit(rng)) +
                       std::exponential_distribution<double>(1.0 / (40.0 * std::exp(0.3 * skill)))(rng);
      r.dbnos = cap > 1 ? poisson(rng, 0.6 * r.kills + 0.2) : 0;
      r.assists = poisson(rng, 0.25 * std::exp(0.3 * skill));
      r.kill_streaks = r.kills > 0 ? std::min(r.kills, 1 + poisson(rng, 0.3 * r.kills)) : 0;
      r.longest_kill = r.kills > 0
          ? std::exponential_distribution<double>(1.0 / (30.0 * (1 + r.kills)))(rng) : 0.0;

      r.walk_distance = 1.0 + 1000.0 * std::exp(0.6 * survival + 0.3 * normal(rng));
      r.swim_distance = unit(rng) < 0.05 ? 200.0 * unit(rng) : 0.0;
      r.ride_distance = unit(rng) < 0.25 ? 4000.0 * unit(rng) : 0.0;
      r.heals = poisson(rng, std::exp(0.5 * survival));
      r.boosts = poisson(rng, std::exp(0.4 * survival + 0.2 * skill - 0.3));
      r.weapons_acquired = 1 + poisson(rng, 3.0 * std::exp(0.2 * survival));
      r.revives = cap > 1 ? poisson(rng, 0.2) : 0;
      r.road_kills = unit(rng) < 0.01 ? 1 : 0;
      r.team_kills = unit(rng) < 0.01 ? 1 : 0;
      r.vehicle_destroys = unit(rng) < 0.005 ? 1 : 0;
      r.kill_points = unit(rng) < 0.6 ? 0 : 1000 + static_cast<std::int64_t>(rng() % 800);
      r.win_points = r.kill_points == 0 ? 0 : 1400 + static_cast<std::int64_t>(rng() % 200);
      r.rank_points = r.kill_points == 0 ? 1000 + static_cast<std::int64_t>(rng() % 1000) : -1;

      combat[p] = skill + 0.3 * normal(rng);
    }

    const auto kill_rank = descending_ranks(combat);
    std::vector<double> latent(players);
    for (std::size_t p = 0; p < players; ++p) {
      rows[p].kill_place = static_cast<std::int32_t>(kill_rank[p]);
      latent[p] = planted_score(rows[p], players) + config.noise_sd * normal(rng);
    }
    const auto place = descending_ranks(latent);
    for (std::size_t p = 0; p < players; ++p) {
      rows[p].win_place_perc =
          static_cast<double>(players - place[p]) / static_cast<double>(players - 1);
      table.rows.push_back(std::move(rows[p]));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------

Split split(const RecordTable& table, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("test_fraction must be in (0, 1)");
  if (table.empty()) throw EmptyInputError("cannot split an empty table");

  std::vector<std::string> matches;
  std::unordered_set<std::string> seen;
  for (const auto& r : table.rows)
    if (seen.insert(r.match_id).second) matches.push_back(r.match_id);

  std::mt19937_64 rng(seed);
  for (std::size_t i = matches.size(); i > 1; --i) std::swap(matches[i - 1], matches[rng() % i]);

  const std::size_t n = matches.size();
  auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  if (n >= 2) n_test = std::clamp<std::size_t>(n_test, 1, n - 1);
  const std::unordered_set<std::string> test_matches(matches.begin(),
                                                     matches.begin() + static_cast<long>(n_test));

  Split out;
  out.train.provenance = out.test.provenance = table.provenance;
  for (const auto& r : table.rows)
    (test_matches.count(r.match_id) ? out.test : out.train).rows.push_back(r);
  return out;
}

}  // namespace placement
