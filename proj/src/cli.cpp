#include "placement/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "placement/cleaning.hpp"
#include "placement/csv.hpp"
#include "placement/dataset.hpp"
#include "placement/features.hpp"
#include "placement/model.hpp"
#include "placement/parallel.hpp"
#include "placement/report.hpp"
#include "placement/selection.hpp"
#include "placement/sweep.hpp"

namespace placement::cli {
namespace fs = std::filesystem;

namespace {

struct Hyper {
  double ridge_alpha = 1.0;
  double lasso_alpha = 1e-3;
  std::size_t knn_k = 5;
  std::size_t rf_trees = 100;
  std::size_t gbr_iterations = 100;
  std::size_t gbr_depth = 3;
  std::size_t lgbm_iterations = 100;
  std::size_t lgbm_leaves = 31;
  std::size_t max_bins = 255;
  double learning_rate = 0.1;

  void add_to(CLI::App& app) {
    app.add_option("--ridge-alpha", ridge_alpha, "Ridge penalty")->capture_default_str();
    app.add_option("--lasso-alpha", lasso_alpha, "Lasso penalty (standardized scale)")->capture_default_str();
    app.add_option("--knn-k", knn_k, "Neighbours for KNN")->capture_default_str();
    app.add_option("--rf-trees", rf_trees, "Random forest size")->capture_default_str();
    app.add_option("--gbr-iterations", gbr_iterations, "GBR boosting rounds")->capture_default_str();
    app.add_option("--gbr-depth", gbr_depth, "GBR tree depth")->capture_default_str();
    app.add_option("--lgbm-iterations", lgbm_iterations, "Histogram GBDT rounds")->capture_default_str();
    app.add_option("--lgbm-leaves", lgbm_leaves, "Histogram GBDT leaves per tree")->capture_default_str();
    app.add_option("--max-bins", max_bins, "Histogram bins per feature")->capture_default_str();
    app.add_option("--learning-rate", learning_rate, "Shrinkage for both boosters")->capture_default_str();
  }

  ModelConfig config(std::uint64_t seed) const {
    ModelConfig c;
    c.ridge_alpha = ridge_alpha;
    c.lasso.alpha = lasso_alpha;
    c.knn_k = knn_k;
    c.forest.n_trees = rf_trees;
    c.gbr.n_iterations = gbr_iterations;
    c.gbr.max_depth = gbr_depth;
    c.gbr.learning_rate = learning_rate;
    c.hist.n_iterations = lgbm_iterations;
    c.hist.max_leaves = lgbm_leaves;
    c.hist.max_bins = max_bins;
    c.hist.learning_rate = learning_rate;
    c.set_seed(seed);
    return c;
  }
};

std::vector<int> parse_counts(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw SpecError("bad feature count \"" + item + "\"");
    }
  }
  if (out.empty()) throw SpecError("empty feature count list");
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) if (!item.empty()) out.push_back(item);
  return out;
}

RecordTable load_clean(const fs::path& path) { return remove_anomalies(load_csv(path)).first; }

std::vector<FeatureSpec> chosen_features(int count, const std::string& names) {
  return names.empty() ? feature_set_for(count) : features_by_name(split_names(names));
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

int run(CLI::App& app, const std::vector<std::string>& args) {
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = PLACEMENT_THREADS or all cores)");

  // synth
  SynthConfig synth_cfg;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate synthetic telemetry with a planted signal");
  synth->add_option("--matches", synth_cfg.n_matches, "Number of matches")->capture_default_str();
  synth->add_option("--players", synth_cfg.players_per_match, "Players per match (2-100)")->capture_default_str();
  synth->add_option("--noise", synth_cfg.noise_sd, "Gaussian noise on the planted score")->capture_default_str();
  synth->add_option("--seed", synth_cfg.seed, "Random seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output CSV")->required();

  // clean
  std::string clean_data, clean_out;
  auto* clean = app.add_subcommand("clean", "Remove anomalous rows and tally core match types");
  clean->add_option("--data", clean_data, "Raw telemetry CSV")->required();
  clean->add_option("--out", clean_out, "Output directory")->required();

  // featurize
  std::string feat_data, feat_out, feat_names;
  int feat_count = 8;
  auto* featurize = app.add_subcommand("featurize", "Write the engineered feature matrix as CSV");
  featurize->add_option("--data", feat_data, "Telemetry CSV (cleaned on load)")->required();
  featurize->add_option("--features", feat_count, "Preset size: 7, 8 or 14")->capture_default_str();
  featurize->add_option("--feature-names", feat_names, "Comma-separated feature names (overrides --features)");
  featurize->add_option("--out", feat_out, "Output CSV")->required();

  // select
  std::string sel_data, sel_out;
  std::size_t sel_k = 8;
  auto* select = app.add_subcommand("select", "Correlation heatmap and top-k feature selection");
  select->add_option("--data", sel_data, "Telemetry CSV (cleaned on load)")->required();
  select->add_option("--k", sel_k, "Number of features to keep")->capture_default_str();
  select->add_option("--out", sel_out, "Output directory")->required();

  // train
  std::string train_data, train_out, train_names, train_model = "gbr";
  int train_count = 8;
  std::uint64_t train_seed = 42;
  Hyper train_hyper;
  auto* train = app.add_subcommand("train", "Fit one model and save it as JSON");
  train->add_option("--data", train_data, "Telemetry CSV (cleaned on load)")->required();
  train->add_option("--model", train_model, "lgbm, random_forest, gbr, decision_tree, knn, ridge, lasso, linear")
      ->capture_default_str();
  train->add_option("--features", train_count, "Preset size: 7, 8 or 14")->capture_default_str();
  train->add_option("--feature-names", train_names, "Comma-separated feature names (overrides --features)");
  train->add_option("--seed", train_seed, "Random seed")->capture_default_str();
  train->add_option("--out", train_out, "Output model JSON")->required();
  train_hyper.add_to(*train);

  // predict
  std::string pred_model, pred_data, pred_out;
  auto* predict_cmd = app.add_subcommand("predict", "Score a CSV with a saved model");
  predict_cmd->add_option("--model", pred_model, "Model JSON from `train`")->required();
  predict_cmd->add_option("--data", pred_data, "Telemetry CSV; winPlacePerc may be absent")->required();
  predict_cmd->add_option("--out", pred_out, "Output CSV (Id,winPlacePerc)")->required();

  // bench
  std::string bench_data, bench_out, bench_counts = "14,8,7", bench_models = "all";
  SweepConfig sweep;
  Hyper bench_hyper;
  auto* bench = app.add_subcommand("bench", "Train the model zoo across feature counts and report");
  bench->add_option("--data", bench_data, "Telemetry CSV (cleaned on load)")->required();
  bench->add_option("--features", bench_counts, "Comma-separated feature counts")->capture_default_str();
  bench->add_option("--models", bench_models, "\"all\" or comma-separated model ids")->capture_default_str();
  bench->add_option("--seed", sweep.seed, "Random seed")->capture_default_str();
  bench->add_option("--repeats", sweep.repeats, "Timed fits per cell")->capture_default_str();
  bench->add_option("--test-fraction", sweep.test_fraction, "Held-out share of matches")->capture_default_str();
  bench->add_flag("--parallel-cells", sweep.parallel_cells, "Run cells concurrently (timings contended)");
  bench->add_option("--out", bench_out, "Output directory")->required();
  bench_hyper.add_to(*bench);

  // report
  std::string report_in, report_out, report_format = "all";
  auto* report = app.add_subcommand("report", "Re-render a saved report.json");
  report->add_option("--in", report_in, "report.json from `bench`")->required();
  report->add_option("--out", report_out, "Output directory")->required();
  report->add_option("--format", report_format, "all, markdown, csv, json or svg")
      ->check(CLI::IsMember({"all", "markdown", "csv", "json", "svg"}))
      ->capture_default_str();

  std::vector<std::string> reversed;
  if (!args.empty()) reversed.assign(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  set_num_threads(threads);

  try {
    if (*synth) {
      auto out = open_out(synth_out);
      write_csv(out, generate_synthetic(synth_cfg));
      if (!out) throw IoError("write failed: " + synth_out);
    } else if (*clean) {
      const auto raw = load_csv(clean_data);
      const auto [kept, rep] = remove_anomalies(raw);
      ensure_dir(clean_out);
      save_csv(fs::path(clean_out) / "clean.csv", kept);
      nlohmann::json j = {{"input_rows", raw.size()},
                          {"kept_rows", kept.size()},
                          {"removed_oversize_team", rep.removed_oversize_team},
                          {"removed_inactive_player", rep.removed_inactive_player},
                          {"removed_invalid_max_place", rep.removed_invalid_max_place},
                          {"core_counts",
                           {{"Solo", rep.core_counts[0]}, {"Duo", rep.core_counts[1]}, {"Squad", rep.core_counts[2]}}}};
      auto out = open_out(fs::path(clean_out) / "cleaning_report.json");
      out << j.dump(2) << '\n';
    } else if (*featurize) {
      const auto fm = build_features(load_clean(feat_data), chosen_features(feat_count, feat_names));
      auto out = open_out(feat_out);
      write_feature_csv(out, fm);
    } else if (*select) {
      const auto fm = build_features(load_clean(sel_data), feature_dictionary());
      const auto cm = correlation_matrix(fm);
      ensure_dir(sel_out);
      emit_heatmap(cm, fs::path(sel_out) / "heatmap");
      auto out = open_out(fs::path(sel_out) / "selected_features.txt");
      for (const auto& name : top_k_by_target_corr(cm, sel_k)) out << name << '\n';
      for (const auto& c : cm.constant_columns)
        std::cerr << "warning: column " << c << " is constant; correlation reported as 0\n";
    } else if (*train) {
      const auto kind = parse_model_kind(train_model);
      const auto config = train_hyper.config(train_seed);
      const auto fm = build_features(load_clean(train_data), chosen_features(train_count, train_names));
      const auto model = fit_model(kind, fm.values, fm.target, config, fm.names());
      if (fs::path(train_out).has_parent_path()) ensure_dir(fs::path(train_out).parent_path());
      save_model(train_out, model, config);
    } else if (*predict_cmd) {
      const auto model = load_model(pred_model);
      const auto table = load_csv(pred_data, TargetColumn::optional);
      const auto fm = build_features(table, features_by_name(model.features));
      const Eigen::VectorXd y_hat = predict(model, fm.values);
      auto out = open_out(pred_out);
      out << "Id,winPlacePerc\n";
      for (std::size_t i = 0; i < table.size(); ++i)
        out << table.rows[i].id << ',' << csv::format_double(y_hat(static_cast<Eigen::Index>(i))) << '\n';
    } else if (*bench) {
      sweep.feature_counts = parse_counts(bench_counts);
      sweep.models = parse_model_list(bench_models);
      sweep.model = bench_hyper.config(sweep.seed);
      const auto result = run_sweep(load_clean(bench_data), sweep);
      render_all(result, bench_out);
      for (const auto& c : result.cells)
        if (!c.ok())
          std::cerr << "warning: " << model_id(c.model) << " @ " << c.feature_count
                    << " features failed: " << *c.error << '\n';
    } else if (*report) {
      const auto r = read_report_json(report_in);
      if (report_format == "all") render_all(r, report_out);
      else if (report_format == "markdown") render_report(r, ReportFormat::markdown, report_out);
      else if (report_format == "csv") render_report(r, ReportFormat::csv, report_out);
      else if (report_format == "json") render_report(r, ReportFormat::json, report_out);
      else render_report(r, ReportFormat::svg_plots, report_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Battle-royale placement prediction: cleaning, features, model zoo and benchmarks",
               args.empty() ? "placement" : args.front()};
  return run(app, args);
}

int dispatch(int argc, char** argv) {
  return dispatch(std::vector<std::string>(argv, argv + argc));
}

}  // namespace placement::cli
