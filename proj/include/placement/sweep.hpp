#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "placement/dataset.hpp"
#include "placement/features.hpp"
#include "placement/model.hpp"

namespace placement {

struct SweepConfig {
  std::vector<int> feature_counts{14, 8, 7};
  std::vector<ModelKind> models{kAllModels.begin(), kAllModels.end()};
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  std::size_t repeats = 3;
  bool parallel_cells = false;
  ModelConfig model;
};

struct EvalCell {
  ModelKind model = ModelKind::linear;
  int feature_count = 0;
  double mae = 0;
  double accuracy_pct = 0;
  double fit_seconds = 0;  // median over repeats
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::vector<std::string> features;
  std::optional<std::string> error;  // set when the cell failed

  bool ok() const noexcept { return !error.has_value(); }
  bool operator==(const EvalCell&) const = default;
};

struct SweepReport {
  std::vector<EvalCell> cells;
  std::string dataset_fingerprint;
  SweepConfig config;

  const EvalCell* find(ModelKind model, int feature_count) const;
};

/// Feature list for a sweep column: the preset for 7, 8 and 14, otherwise the
/// top-k dictionary features by |correlation| on the training rows.
std::vector<FeatureSpec> sweep_feature_set(int count, const RecordTable& train);

/// FNV-1a over the table's CSV serialization, as 16 hex digits.
std::string fingerprint(const RecordTable& table);

/// Expects a cleaned table. Cells that throw are recorded with their message.
SweepReport run_sweep(const RecordTable& table, const SweepConfig& config);

}  // namespace placement
