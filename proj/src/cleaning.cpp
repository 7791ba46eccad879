#include "placement/cleaning.hpp"

#include <map>
#include <string>

#include "placement/error.hpp"

namespace placement {

std::string_view to_string(CoreMatchType t) noexcept {
  switch (t) {
    case CoreMatchType::solo: return "Solo";
    case CoreMatchType::duo: return "Duo";
    case CoreMatchType::squad: return "Squad";
  }
  return "?";
}

CoreMatchType canonical_match_type(std::string_view raw_label) {
  bool known = false;
  for (auto label : kMatchTypeLabels) known = known || label == raw_label;
  if (!known) throw MappingError("unknown match type \"" + std::string(raw_label) + "\"");

  if (raw_label.find("solo") != std::string_view::npos) return CoreMatchType::solo;
  if (raw_label.find("duo") != std::string_view::npos) return CoreMatchType::duo;
  return CoreMatchType::squad;  // squad variants plus crash*/flare* events
}

CoreCounts aggregate_core_counts(const RecordTable& table) {
  CoreCounts counts{};
  for (const auto& r : table.rows) ++counts[static_cast<int>(canonical_match_type(r.match_type))];
  return counts;
}

std::pair<RecordTable, CleaningReport> remove_anomalies(const RecordTable& table) {
  CleaningReport report;
  std::vector<CoreMatchType> core(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    core[i] = canonical_match_type(table.rows[i].match_type);
    ++report.core_counts[static_cast<int>(core[i])];
  }

  std::map<std::pair<std::string_view, std::string_view>, std::size_t> team_size;
  for (const auto& r : table.rows) ++team_size[{r.match_id, r.group_id}];

  RecordTable kept;
  kept.provenance = table.provenance;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table.rows[i];
    if (team_size[{r.match_id, r.group_id}] > static_cast<std::size_t>(max_team_size(core[i]))) {
      ++report.removed_oversize_team;
      continue;
    }
    const bool moved = r.walk_distance + r.swim_distance + r.ride_distance > 0.0;
    if (r.kills == 0 && !moved && r.weapons_acquired == 0) {
      ++report.removed_inactive_player;
      continue;
    }
    if (r.max_place == 0) {
      ++report.removed_invalid_max_place;
      continue;
    }
    kept.rows.push_back(r);
  }
  return {std::move(kept), report};
}

}  // namespace placement
