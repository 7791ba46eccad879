#include "placement/sweep.hpp"

#include <cstdio>
#include <sstream>

#include "placement/features.hpp"
#include "placement/metrics.hpp"
#include "placement/parallel.hpp"
#include "placement/selection.hpp"

namespace placement {

const EvalCell* SweepReport::find(ModelKind model, int feature_count) const {
  for (const auto& c : cells)
    if (c.model == model && c.feature_count == feature_count) return &c;
  return nullptr;
}

std::vector<FeatureSpec> sweep_feature_set(int count, const RecordTable& train) {
  if (count == 7 || count == 8 || count == 14) return feature_set_for(count);
  const auto& all = feature_dictionary();
  if (count < 1 || static_cast<std::size_t>(count) > all.size())
    throw SpecError("feature count " + std::to_string(count) + " outside [1, " +
                    std::to_string(all.size()) + "]");
  const auto cm = correlation_matrix(build_features(train, all));
  return features_by_name(top_k_by_target_corr(cm, static_cast<std::size_t>(count)));
}

std::string fingerprint(const RecordTable& table) {
  std::ostringstream csv;
  write_csv(csv, table);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : csv.str()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SweepReport run_sweep(const RecordTable& table, const SweepConfig& config) {
  SweepReport report;
  report.config = config;
  report.config.model.set_seed(config.seed);
  report.dataset_fingerprint = fingerprint(table);

  const auto parts = split(table, config.test_fraction, config.seed);

  struct Prepared {
    int count;
    std::optional<FeatureMatrix> train, test;
    std::optional<std::string> error;
  };
  std::vector<Prepared> prepared;
  for (int count : config.feature_counts) {
    Prepared p{count, std::nullopt, std::nullopt, std::nullopt};
    try {
      const auto specs = sweep_feature_set(count, parts.train);
      p.train = build_features(parts.train, specs);
      p.test = build_features(parts.test, specs);
    } catch (const std::exception& e) {
      p.error = e.what();
    }
    prepared.push_back(std::move(p));
  }

  for (const auto& p : prepared) {
    for (auto kind : config.models) {
      EvalCell cell;
      cell.model = kind;
      cell.feature_count = p.count;
      cell.n_train = parts.train.size();
      cell.n_test = parts.test.size();
      if (p.error) {
        cell.error = *p.error;
      } else {
        cell.features = p.train->names();
      }
      report.cells.push_back(std::move(cell));
    }
  }

  const auto evaluate = [&](std::size_t index) {
    EvalCell& cell = report.cells[index];
    if (!cell.ok()) return;
    const auto& p = prepared[index / config.models.size()];
    try {
      const auto& model_config = report.config.model;
      std::optional<TrainedModel> fitted;
      cell.fit_seconds = time_fit(
          [&] { fitted = fit_model(cell.model, p.train->values, p.train->target, model_config); },
          config.repeats);
      const Eigen::VectorXd y_hat = predict(*fitted, p.test->values);
      cell.mae = mae(p.test->target, y_hat);
      cell.accuracy_pct = accuracy_pct(p.test->target, y_hat);
    } catch (const std::exception& e) {
      cell.error = e.what();
      cell.fit_seconds = 0;
    }
  };

  if (config.parallel_cells) {
    parallel_for(0, report.cells.size(), evaluate);
  } else {
    for (std::size_t i = 0; i < report.cells.size(); ++i) evaluate(i);
  }
  return report;
}

}  // namespace placement
