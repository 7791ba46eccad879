#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "placement/sweep.hpp"

namespace placement {

enum class ReportFormat { markdown, csv, json, svg_plots };

inline constexpr int kReportSchemaVersion = 1;

/// One table per feature count with MAE / ACCURACY / TIME rows and one column per model.
std::string render_markdown(const SweepReport& report);
std::string render_csv(const SweepReport& report);
std::string render_json(const SweepReport& report);
/// Line chart, one polyline per model, x = feature count.
std::string render_accuracy_svg(const SweepReport& report);
std::string render_time_svg(const SweepReport& report);

/// Writes report.md, report.csv, report.json or the two SVG plots into `dir`.
void render_report(const SweepReport& report, ReportFormat format, const std::filesystem::path& dir);
void render_all(const SweepReport& report, const std::filesystem::path& dir);

SweepReport parse_report_json(std::string_view text);
/// Cells only; the CSV carries no config snapshot.
std::vector<EvalCell> parse_report_csv(std::string_view text);

SweepReport read_report_json(const std::filesystem::path& path);

}  // namespace placement
