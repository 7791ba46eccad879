#include "placement/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "placement/csv.hpp"
#include "placement/error.hpp"

namespace placement {

using nlohmann::json;

namespace {

constexpr std::string_view kAccuracyNote =
    "ACCURACY is the coefficient of determination (R^2) on held-out matches, "
    "expressed as a percentage.";

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::vector<int> distinct_counts(const SweepReport& r) {
  std::vector<int> out;
  for (const auto& c : r.cells)
    if (std::find(out.begin(), out.end(), c.feature_count) == out.end()) out.push_back(c.feature_count);
  return out;
}

std::vector<ModelKind> distinct_models(const SweepReport& r) {
  std::vector<ModelKind> out;
  for (const auto& c : r.cells)
    if (std::find(out.begin(), out.end(), c.model) == out.end()) out.push_back(c.model);
  return out;
}

json depth_json(std::size_t d) { return d == kUnlimitedDepth ? json(nullptr) : json(d); }
std::size_t depth_from(const json& j) { return j.is_null() ? kUnlimitedDepth : j.get<std::size_t>(); }

json boost_json(const BoostParams& p) {
  return {{"n_iterations", p.n_iterations}, {"learning_rate", p.learning_rate},
          {"max_depth", p.max_depth},       {"max_leaves", p.max_leaves},
          {"min_samples_leaf", p.min_samples_leaf}, {"max_bins", p.max_bins},
          {"seed", p.seed}};
}

BoostParams boost_from(const json& j) {
  BoostParams p;
  p.n_iterations = j.at("n_iterations").get<std::size_t>();
  p.learning_rate = j.at("learning_rate").get<double>();
  p.max_depth = j.at("max_depth").get<std::size_t>();
  p.max_leaves = j.at("max_leaves").get<std::size_t>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
  p.max_bins = j.at("max_bins").get<std::size_t>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

json tree_params_json(const TreeParams& p) {
  return {{"max_depth", depth_json(p.max_depth)}, {"min_samples_leaf", p.min_samples_leaf},
          {"min_samples_split", p.min_samples_split}};
}

TreeParams tree_params_from(const json& j) {
  return {depth_from(j.at("max_depth")), j.at("min_samples_leaf").get<std::size_t>(),
          j.at("min_samples_split").get<std::size_t>()};
}

json config_json(const SweepConfig& c) {
  std::vector<std::string> models;
  for (auto m : c.models) models.emplace_back(model_id(m));
  const auto& mc = c.model;
  return {{"feature_counts", c.feature_counts},
          {"models", models},
          {"test_fraction", c.test_fraction},
          {"seed", c.seed},
          {"repeats", c.repeats},
          {"parallel_cells", c.parallel_cells},
          {"hyperparameters",
           {{"ridge_alpha", mc.ridge_alpha},
            {"lasso", {{"alpha", mc.lasso.alpha}, {"tol", mc.lasso.tol}, {"max_iter", mc.lasso.max_iter}}},
            {"knn_k", mc.knn_k},
            {"decision_tree", tree_params_json(mc.tree)},
            {"random_forest",
             {{"tree", tree_params_json(mc.forest.tree)},
              {"n_trees", mc.forest.n_trees},
              {"feature_subsample", mc.forest.feature_subsample},
              {"bootstrap", mc.forest.bootstrap},
              {"seed", mc.forest.seed}}},
            {"gbr", boost_json(mc.gbr)},
            {"lgbm", boost_json(mc.hist)}}}};
}

SweepConfig config_from(const json& j) {
  SweepConfig c;
  c.feature_counts = j.at("feature_counts").get<std::vector<int>>();
  c.models.clear();
  for (const auto& m : j.at("models")) c.models.push_back(parse_model_kind(m.get<std::string>()));
  c.test_fraction = j.at("test_fraction").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.repeats = j.at("repeats").get<std::size_t>();
  c.parallel_cells = j.at("parallel_cells").get<bool>();
  const auto& h = j.at("hyperparameters");
  c.model.ridge_alpha = h.at("ridge_alpha").get<double>();
  c.model.lasso.alpha = h.at("lasso").at("alpha").get<double>();
  c.model.lasso.tol = h.at("lasso").at("tol").get<double>();
  c.model.lasso.max_iter = h.at("lasso").at("max_iter").get<std::size_t>();
  c.model.knn_k = h.at("knn_k").get<std::size_t>();
  c.model.tree = tree_params_from(h.at("decision_tree"));
  const auto& rf = h.at("random_forest");
  c.model.forest.tree = tree_params_from(rf.at("tree"));
  c.model.forest.n_trees = rf.at("n_trees").get<std::size_t>();
  c.model.forest.feature_subsample = rf.at("feature_subsample").get<double>();
  c.model.forest.bootstrap = rf.at("bootstrap").get<bool>();
  c.model.forest.seed = rf.at("seed").get<std::uint64_t>();
  c.model.gbr = boost_from(h.at("gbr"));
  c.model.hist = boost_from(h.at("lgbm"));
  return c;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::string render_markdown(const SweepReport& report) {
  if (report.cells.empty()) throw DomainError("cannot render an empty report");
  const auto models = distinct_models(report);
  std::ostringstream md;
  md << "# Placement prediction benchmark\n\n";
  md << "Dataset fingerprint: `" << report.dataset_fingerprint << "`, seed "
     << report.config.seed << ", test fraction " << report.config.test_fraction
     << ", fit time = median of " << report.config.repeats << " run(s) after one warm-up.\n";

  for (int count : distinct_counts(report)) {
    md << "\n## " << count << " features\n\n| Metric |";
    for (auto m : models) md << ' ' << model_title(m) << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < models.size(); ++i) md << "---:|";
    md << '\n';

    const auto row = [&](std::string_view label, auto&& format) {
      md << "| " << label << " |";
      for (auto m : models) {
        const auto* c = report.find(m, count);
        md << ' ' << (c == nullptr ? std::string("-") : c->ok() ? format(*c) : std::string("failed"))
           << " |";
      }
      md << '\n';
    };
    row("MAE", [](const EvalCell& c) { return csv::format_fixed(c.mae, 4); });
    row("ACCURACY", [](const EvalCell& c) { return csv::format_fixed(c.accuracy_pct, 2) + "%"; });
    row("TIME (s)", [](const EvalCell& c) { return csv::format_fixed(c.fit_seconds, 3); });

    const EvalCell* any = nullptr;
    for (const auto& c : report.cells)
      if (c.feature_count == count && !c.features.empty()) any = &c;
    if (any) md << "\nFeatures: " << join(any->features, ", ") << '\n';
    for (const auto& c : report.cells)
      if (c.feature_count == count && !c.ok())
        md << "\n- " << model_title(c.model) << " failed: " << *c.error << '\n';
  }
  md << "\n---\n" << kAccuracyNote << '\n';
  return md.str();
}

std::string render_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "model,feature_count,mae,accuracy_pct,fit_seconds,n_train,n_test,status,features,error\n";
  for (const auto& c : report.cells) {
    out << model_id(c.model) << ',' << c.feature_count << ',' << csv::format_double(c.mae) << ','
        << csv::format_double(c.accuracy_pct) << ',' << csv::format_double(c.fit_seconds) << ','
        << c.n_train << ',' << c.n_test << ',' << (c.ok() ? "ok" : "failed") << ','
        << quote(join(c.features, ";")) << ',' << quote(c.error.value_or("")) << '\n';
  }
  return out.str();
}

std::vector<EvalCell> parse_report_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!csv::read_line(in, line)) throw EmptyInputError("empty report csv");
  std::vector<EvalCell> cells;
  std::size_t row = 0;
  while (csv::read_line(in, line)) {
    ++row;
    const auto f = csv::split_line(line);
    if (f.size() != 10) throw ParseError(row, "", "report row has " + std::to_string(f.size()) + " fields");
    EvalCell c;
    c.model = parse_model_kind(f[0]);
    std::int64_t count = 0, n_train = 0, n_test = 0;
    if (!csv::parse_int(f[1], count) || !csv::parse_double(f[2], c.mae) ||
        !csv::parse_double(f[3], c.accuracy_pct) || !csv::parse_double(f[4], c.fit_seconds) ||
        !csv::parse_int(f[5], n_train) || !csv::parse_int(f[6], n_test))
      throw ParseError(row, "", "malformed numeric field in report row");
    c.feature_count = static_cast<int>(count);
    c.n_train = static_cast<std::size_t>(n_train);
    c.n_test = static_cast<std::size_t>(n_test);
    c.features = split_on(f[8], ';');
    if (f[7] != "ok") c.error = f[9];
    cells.push_back(std::move(c));
  }
  return cells;
}

std::string render_json(const SweepReport& report) {
  json cells = json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"model", model_id(c.model)},
                     {"feature_count", c.feature_count},
                     {"mae", c.mae},
                     {"accuracy_pct", c.accuracy_pct},
                     {"fit_seconds", c.fit_seconds},
                     {"n_train", c.n_train},
                     {"n_test", c.n_test},
                     {"features", c.features},
                     {"status", c.ok() ? "ok" : "failed"},
                     {"error", c.error ? json(*c.error) : json(nullptr)}});
  }
  const json doc = {{"format", "placement-sweep"},
                    {"schema_version", kReportSchemaVersion},
                    {"dataset_fingerprint", report.dataset_fingerprint},
                    {"accuracy_definition", kAccuracyNote},
                    {"config", config_json(report.config)},
                    {"cells", std::move(cells)}};
  return doc.dump(2) + "\n";
}

SweepReport parse_report_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", "") != "placement-sweep")
      throw ParseError(0, "format", "not a placement sweep report");
    if (doc.at("schema_version").get<int>() != kReportSchemaVersion)
      throw ParseError(0, "schema_version", "unsupported report schema version");
    SweepReport r;
    r.dataset_fingerprint = doc.at("dataset_fingerprint").get<std::string>();
    r.config = config_from(doc.at("config"));
    for (const auto& j : doc.at("cells")) {
      EvalCell c;
      c.model = parse_model_kind(j.at("model").get<std::string>());
      c.feature_count = j.at("feature_count").get<int>();
      c.mae = j.at("mae").get<double>();
      c.accuracy_pct = j.at("accuracy_pct").get<double>();
      c.fit_seconds = j.at("fit_seconds").get<double>();
      c.n_train = j.at("n_train").get<std::size_t>();
      c.n_test = j.at("n_test").get<std::size_t>();
      c.features = j.at("features").get<std::vector<std::string>>();
      if (j.at("status").get<std::string>() != "ok") c.error = j.at("error").get<std::string>();
      r.cells.push_back(std::move(c));
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(0, "", std::string("malformed report json: ") + e.what());
  }
}

SweepReport read_report_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_report_json(buf.str());
}

// ---------------------------------------------------------------------------
// SVG line charts

namespace {

constexpr std::array<std::string_view, 8> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                      "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string line_chart(const SweepReport& report, std::string_view title, std::string_view y_label,
                       double (*value)(const EvalCell&), bool y_from_zero) {
  if (report.cells.empty()) throw DomainError("cannot render an empty report");
  auto counts = distinct_counts(report);
  std::sort(counts.begin(), counts.end());
  const auto models = distinct_models(report);

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& c : report.cells) {
    if (!c.ok()) continue;
    lo = std::min(lo, value(c));
    hi = std::max(hi, value(c));
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (y_from_zero) lo = std::min(lo, 0.0);
  if (hi - lo < 1e-12) hi = lo + 1;
  const double pad = 0.05 * (hi - lo);
  hi += pad;
  if (!y_from_zero) lo -= pad;

  constexpr double width = 720, height = 440, left = 70, right = 190, top = 40, bottom = 60;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  const double x_lo = counts.front(), x_hi = counts.back() == counts.front() ? x_lo + 1 : counts.back();
  const auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto py = [&](double y) { return top + (hi - y) / (hi - lo) * plot_h; };
  const auto num = [](double v) { return csv::format_fixed(v, 2); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
      << "</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\" stroke=\"#000\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"#000\"/>\n";
  for (int c : counts) {
    svg << "<text x=\"" << num(px(c)) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << c << "</text>\n";
  }
  for (int t = 0; t <= 5; ++t) {
    const double v = lo + (hi - lo) * t / 5.0;
    svg << "<text x=\"" << left - 6 << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">"
        << num(v) << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">number of features</text>\n";
  svg << "<text transform=\"translate(18," << top + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << y_label << "</text>\n";

  for (std::size_t s = 0; s < models.size(); ++s) {
    const auto color = kPalette[s % kPalette.size()];
    std::string points;
    for (int c : counts) {
      const auto* cell = report.find(models[s], c);
      if (cell == nullptr || !cell->ok()) continue;
      if (!points.empty()) points += ' ';
      points += num(px(c)) + "," + num(py(value(*cell)));
    }
    svg << "<polyline class=\"series\" data-model=\"" << model_id(models[s]) << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
    const double ly = top + 16 + 18.0 * static_cast<double>(s);
    svg << "<line x1=\"" << left + plot_w + 15 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + plot_w + 35
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>"
        << "<text x=\"" << left + plot_w + 40 << "\" y=\"" << ly << "\">" << model_title(models[s])
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::string render_accuracy_svg(const SweepReport& report) {
  return line_chart(report, "Accuracy vs number of features", "accuracy (R^2 %)",
                    [](const EvalCell& c) { return c.accuracy_pct; }, false);
}

std::string render_time_svg(const SweepReport& report) {
  return line_chart(report, "Fit time vs number of features", "fit time (s)",
                    [](const EvalCell& c) { return c.fit_seconds; }, true);
}

void render_report(const SweepReport& report, ReportFormat format, const std::filesystem::path& dir) {
  if (report.cells.empty()) throw DomainError("cannot render an empty report");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  switch (format) {
    case ReportFormat::markdown: write_text(dir / "report.md", render_markdown(report)); break;
    case ReportFormat::csv: write_text(dir / "report.csv", render_csv(report)); break;
    case ReportFormat::json: write_text(dir / "report.json", render_json(report)); break;
    case ReportFormat::svg_plots:
      write_text(dir / "accuracy_vs_features.svg", render_accuracy_svg(report));
      write_text(dir / "time_vs_features.svg", render_time_svg(report));
      break;
  }
}

void render_all(const SweepReport& report, const std::filesystem::path& dir) {
  for (auto f : {ReportFormat::markdown, ReportFormat::csv, ReportFormat::json, ReportFormat::svg_plots})
    render_report(report, f, dir);
}

}  // namespace placement
