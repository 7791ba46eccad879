#pragma once

#include <Eigen/Dense>
#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "placement/boosting.hpp"
#include "placement/forest.hpp"
#include "placement/knn.hpp"
#include "placement/linear.hpp"
#include "placement/tree.hpp"

namespace placement {

/// The eight regressors, in the column order of the benchmark tables.
enum class ModelKind { lgbm, random_forest, gbr, decision_tree, knn, ridge, lasso, linear };

inline constexpr std::array<ModelKind, 8> kAllModels = {
    ModelKind::lgbm, ModelKind::random_forest, ModelKind::gbr,   ModelKind::decision_tree,
    ModelKind::knn,  ModelKind::ridge,         ModelKind::lasso, ModelKind::linear};

/// Short identifier used on the command line and in files, e.g. "random_forest".
std::string_view model_id(ModelKind kind) noexcept;
/// Table header, e.g. "RANDOM FOREST".
std::string_view model_title(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view id);
/// Accepts "all" or a comma-separated list of ids.
std::vector<ModelKind> parse_model_list(std::string_view text);

struct ModelConfig {
  double ridge_alpha = 1.0;
  LassoOptions lasso;
  std::size_t knn_k = 5;
  TreeParams tree;
  ForestParams forest;
  BoostParams gbr = BoostParams::gbr_defaults();
  BoostParams hist = BoostParams::hist_defaults();

  /// Routes one seed to every randomized learner.
  void set_seed(std::uint64_t seed) {
    forest.seed = seed;
    gbr.seed = seed;
    hist.seed = seed;
  }
};

using ModelState = std::variant<LinearModel, KnnModel, Tree, ForestModel, BoostedEnsemble>;

struct TrainedModel {
  ModelKind kind;
  ModelState state;
  std::vector<std::string> features;  // column names the model was fitted on
};

TrainedModel fit_model(ModelKind kind, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const ModelConfig& config, std::vector<std::string> features = {});

Eigen::VectorXd predict(const TrainedModel& model, const Eigen::MatrixXd& X);

inline constexpr int kModelSchemaVersion = 1;

std::string model_to_json(const TrainedModel& model, const ModelConfig& config);
TrainedModel model_from_json(std::string_view text);
void save_model(const std::filesystem::path& path, const TrainedModel& model,
                const ModelConfig& config);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace placement
