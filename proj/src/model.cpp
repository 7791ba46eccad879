#include "placement/model.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "placement/error.hpp"

namespace placement {

using nlohmann::json;

namespace {

struct KindInfo {
  ModelKind kind;
  std::string_view id;
  std::string_view title;
};

constexpr std::array<KindInfo, 8> kKinds = {{
    {ModelKind::lgbm, "lgbm", "LGBM"},
    {ModelKind::random_forest, "random_forest", "RANDOM FOREST"},
    {ModelKind::gbr, "gbr", "GBR"},
    {ModelKind::decision_tree, "decision_tree", "DECISION TREE"},
    {ModelKind::knn, "knn", "KNN"},
    {ModelKind::ridge, "ridge", "RIDGE"},
    {ModelKind::lasso, "lasso", "LASSO"},
    {ModelKind::linear, "linear", "LINEAR REGRESSION"},
}};

}  // namespace

std::string_view model_id(ModelKind kind) noexcept {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.id;
  return "?";
}

std::string_view model_title(ModelKind kind) noexcept {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.title;
  return "?";
}

ModelKind parse_model_kind(std::string_view id) {
  for (const auto& k : kKinds)
    if (k.id == id) return k.kind;
  throw SpecError("unknown model \"" + std::string(id) + "\"");
}

std::vector<ModelKind> parse_model_list(std::string_view text) {
  if (text == "all") return {kAllModels.begin(), kAllModels.end()};
  std::vector<ModelKind> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto token = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    if (!token.empty()) {
      const auto kind = parse_model_kind(token);
      if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw SpecError("empty model list");
  return out;
}

TrainedModel fit_model(ModelKind kind, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const ModelConfig& config, std::vector<std::string> features) {
  TrainedModel m{kind, LinearModel{}, std::move(features)};
  switch (kind) {
    case ModelKind::lgbm:
      m.state = fit_hist_gbdt(build_histograms(X, config.hist.max_bins), y, config.hist);
      break;
    case ModelKind::random_forest: m.state = fit_random_forest(X, y, config.forest); break;
    case ModelKind::gbr: m.state = fit_gbr(X, y, config.gbr); break;
    case ModelKind::decision_tree: m.state = fit_cart(X, y, config.tree); break;
    case ModelKind::knn: m.state = fit_knn(X, y, config.knn_k); break;
    case ModelKind::ridge: m.state = fit_ridge(X, y, config.ridge_alpha); break;
    case ModelKind::lasso: m.state = fit_lasso(X, y, config.lasso); break;
    case ModelKind::linear: m.state = fit_ols(X, y); break;
  }
  return m;
}

Eigen::VectorXd predict(const TrainedModel& model, const Eigen::MatrixXd& X) {
  struct Visitor {
    const Eigen::MatrixXd& X;
    Eigen::VectorXd operator()(const LinearModel& m) const { return predict_linear(m, X); }
    Eigen::VectorXd operator()(const KnnModel& m) const { return predict_knn(m, X); }
    Eigen::VectorXd operator()(const Tree& m) const { return predict_tree(m, X); }
    Eigen::VectorXd operator()(const ForestModel& m) const { return predict_forest(m, X); }
    Eigen::VectorXd operator()(const BoostedEnsemble& m) const { return predict_ensemble(m, X); }
  };
  return std::visit(Visitor{X}, model.state);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json tree_json(const Tree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value, n.n_samples});
  return json{{"nodes", std::move(nodes)}};
}

Tree tree_from(const json& j) {
  Tree t;
  for (const auto& n : j.at("nodes")) {
    if (!n.is_array() || n.size() != 6) throw ParseError(0, "nodes", "tree node must have 6 fields");
    t.nodes.push_back({n[0].get<int>(), n[1].get<double>(), n[2].get<int>(), n[3].get<int>(),
                       n[4].get<double>(), n[5].get<double>()});
  }
  const auto size = static_cast<int>(t.nodes.size());
  if (size == 0) throw ParseError(0, "nodes", "tree has no nodes");
  for (int i = 0; i < size; ++i) {
    const auto& n = t.nodes[static_cast<std::size_t>(i)];
    if (!n.is_leaf() && (n.left <= i || n.right <= i || n.left >= size || n.right >= size))
      throw ParseError(0, "nodes", "tree node " + std::to_string(i) + " has invalid children");
  }
  return t;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string_view linear_kind_id(LinearKind k) {
  switch (k) {
    case LinearKind::ols: return "ols";
    case LinearKind::ridge: return "ridge";
    case LinearKind::lasso: return "lasso";
  }
  return "?";
}

LinearKind linear_kind_from(std::string_view s) {
  if (s == "ols") return LinearKind::ols;
  if (s == "ridge") return LinearKind::ridge;
  if (s == "lasso") return LinearKind::lasso;
  throw ParseError(0, "linear_kind", "unknown linear kind " + std::string(s));
}

json depth_json(std::size_t d) { return d == kUnlimitedDepth ? json(nullptr) : json(d); }

json hyperparameters(ModelKind kind, const ModelConfig& c) {
  switch (kind) {
    case ModelKind::lgbm:
      return {{"n_iterations", c.hist.n_iterations}, {"learning_rate", c.hist.learning_rate},
              {"max_leaves", c.hist.max_leaves},     {"min_samples_leaf", c.hist.min_samples_leaf},
              {"max_bins", c.hist.max_bins}};
    case ModelKind::random_forest:
      return {{"n_trees", c.forest.n_trees},
              {"feature_subsample", c.forest.feature_subsample},
              {"bootstrap", c.forest.bootstrap},
              {"seed", c.forest.seed},
              {"max_depth", depth_json(c.forest.tree.max_depth)},
              {"min_samples_leaf", c.forest.tree.min_samples_leaf}};
    case ModelKind::gbr:
      return {{"n_iterations", c.gbr.n_iterations}, {"learning_rate", c.gbr.learning_rate},
              {"max_depth", c.gbr.max_depth},       {"min_samples_leaf", c.gbr.min_samples_leaf}};
    case ModelKind::decision_tree:
      return {{"max_depth", depth_json(c.tree.max_depth)},
              {"min_samples_leaf", c.tree.min_samples_leaf},
              {"min_samples_split", c.tree.min_samples_split}};
    case ModelKind::knn: return {{"k", c.knn_k}};
    case ModelKind::ridge: return {{"alpha", c.ridge_alpha}};
    case ModelKind::lasso:
      return {{"alpha", c.lasso.alpha}, {"tol", c.lasso.tol}, {"max_iter", c.lasso.max_iter}};
    case ModelKind::linear: return json::object();
  }
  return json::object();
}

json state_json(const ModelState& state) {
  struct Visitor {
    json operator()(const LinearModel& m) const {
      return {{"linear_kind", linear_kind_id(m.kind)}, {"alpha", m.alpha},
              {"intercept", m.intercept}, {"weights", vector_json(m.weights)}};
    }
    json operator()(const KnnModel& m) const {
      json points = json::array();
      for (Eigen::Index i = 0; i < m.points.rows(); ++i)
        points.push_back(vector_json(m.points.row(i).transpose()));
      return {{"k", m.k}, {"n_features", m.points.cols()}, {"points", std::move(points)},
              {"targets", vector_json(m.targets)}};
    }
    json operator()(const Tree& t) const { return tree_json(t); }
    json operator()(const ForestModel& m) const {
      json trees = json::array();
      for (const auto& t : m.trees) trees.push_back(tree_json(t));
      return {{"n_trees", m.n_trees}, {"feature_subsample", m.feature_subsample},
              {"bootstrap", m.bootstrap}, {"seed", m.seed}, {"trees", std::move(trees)}};
    }
    json operator()(const BoostedEnsemble& m) const {
      json trees = json::array();
      for (const auto& t : m.trees) trees.push_back(tree_json(t));
      return {{"boost_kind", m.kind == BoostKind::gbr ? "gbr" : "hist_gbdt"},
              {"base_prediction", m.base_prediction},
              {"learning_rate", m.learning_rate},
              {"n_features", m.n_features},
              {"bin_edges", m.bin_edges},
              {"trees", std::move(trees)}};
    }
  };
  return std::visit(Visitor{}, state);
}

ModelState state_from(ModelKind kind, const json& j) {
  switch (kind) {
    case ModelKind::ridge:
    case ModelKind::lasso:
    case ModelKind::linear: {
      LinearModel m;
      m.kind = linear_kind_from(j.at("linear_kind").get<std::string>());
      m.alpha = j.at("alpha").get<double>();
      m.intercept = j.at("intercept").get<double>();
      m.weights = vector_from(j.at("weights"));
      return m;
    }
    case ModelKind::knn: {
      KnnModel m;
      m.k = j.at("k").get<std::size_t>();
      const auto& pts = j.at("points");
      const auto cols = j.at("n_features").get<Eigen::Index>();
      m.points.resize(static_cast<Eigen::Index>(pts.size()), cols);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto row = vector_from(pts[i]);
        if (row.size() != cols) throw ParseError(i, "points", "knn point has the wrong width");
        m.points.row(static_cast<Eigen::Index>(i)) = row.transpose();
      }
      m.targets = vector_from(j.at("targets"));
      return m;
    }
    case ModelKind::decision_tree: return tree_from(j);
    case ModelKind::random_forest: {
      ForestModel m;
      m.n_trees = j.at("n_trees").get<std::size_t>();
      m.feature_subsample = j.at("feature_subsample").get<double>();
      m.bootstrap = j.at("bootstrap").get<bool>();
      m.seed = j.at("seed").get<std::uint64_t>();
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from(t));
      return m;
    }
    case ModelKind::gbr:
    case ModelKind::lgbm: {
      BoostedEnsemble m;
      m.kind = j.at("boost_kind").get<std::string>() == "gbr" ? BoostKind::gbr : BoostKind::hist_gbdt;
      m.base_prediction = j.at("base_prediction").get<double>();
      m.learning_rate = j.at("learning_rate").get<double>();
      m.n_features = j.at("n_features").get<Eigen::Index>();
      m.bin_edges = j.at("bin_edges").get<std::vector<std::vector<double>>>();
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from(t));
      return m;
    }
  }
  throw InternalError("unhandled model kind");
}

}  // namespace

std::string model_to_json(const TrainedModel& model, const ModelConfig& config) {
  json doc = {{"format", "placement-model"},
              {"schema_version", kModelSchemaVersion},
              {"kind", model_id(model.kind)},
              {"features", model.features},
              {"hyperparameters", hyperparameters(model.kind, config)},
              {"model", state_json(model.state)}};
  return doc.dump(1);
}

TrainedModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(0, "", std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", "") != "placement-model")
      throw ParseError(0, "format", "not a placement model document");
    const int version = doc.at("schema_version").get<int>();
    if (version != kModelSchemaVersion)
      throw ParseError(0, "schema_version",
                       "unsupported model schema version " + std::to_string(version));
    TrainedModel m{parse_model_kind(doc.at("kind").get<std::string>()), LinearModel{},
                   doc.at("features").get<std::vector<std::string>>()};
    m.state = state_from(m.kind, doc.at("model"));
    return m;
  } catch (const json::exception& e) {
    throw ParseError(0, "", std::string("malformed model document: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const TrainedModel& model,
                const ModelConfig& config) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << model_to_json(model, config) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace placement
