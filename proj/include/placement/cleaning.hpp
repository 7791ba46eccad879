#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <utility>

#include "placement/dataset.hpp"

namespace placement {

enum class CoreMatchType { solo, duo, squad };

inline constexpr std::array<CoreMatchType, 3> kCoreMatchTypes = {
    CoreMatchType::solo, CoreMatchType::duo, CoreMatchType::squad};

constexpr int max_team_size(CoreMatchType t) noexcept {
  switch (t) {
    case CoreMatchType::solo: return 1;
    case CoreMatchType::duo: return 2;
    case CoreMatchType::squad: return 4;
  }
  return 0;
}

std::string_view to_string(CoreMatchType t) noexcept;

/// Maps one of the 16 raw labels onto its core type. Event modes (crash*, flare*)
/// count as squad. Throws MappingError for anything else.
CoreMatchType canonical_match_type(std::string_view raw_label);

/// Player totals per core type, indexed by static_cast<int>(CoreMatchType).
using CoreCounts = std::array<std::size_t, 3>;

CoreCounts aggregate_core_counts(const RecordTable& table);

struct CleaningReport {
  std::size_t removed_oversize_team = 0;
  std::size_t removed_inactive_player = 0;
  std::size_t removed_invalid_max_place = 0;
  CoreCounts core_counts{};  // over the whole input, kept and removed

  std::size_t removed() const noexcept {
    return removed_oversize_team + removed_inactive_player + removed_invalid_max_place;
  }
};

/// Drops whole teams larger than their core type allows, players with no kills,
/// no movement and no weapons picked up, and rows with max_place == 0. When a row
/// matches several rules it is tallied under the first of those three.
std::pair<RecordTable, CleaningReport> remove_anomalies(const RecordTable& table);

}  // namespace placement
