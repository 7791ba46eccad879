#include "placement/selection.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "placement/csv.hpp"
#include "placement/parallel.hpp"

namespace placement {

CorrelationMatrix correlation_matrix(const FeatureMatrix& fm) {
  if (fm.rows() < 2) throw DomainError("correlation matrix needs at least 2 rows");

  const Eigen::Index k = fm.cols() + 1;
  Eigen::MatrixXd data(fm.rows(), k);
  data.leftCols(fm.cols()) = fm.values;
  data.col(k - 1) = fm.target;

  CorrelationMatrix cm;
  cm.labels = fm.names();
  cm.labels.push_back("winPlacePerc");
  cm.values = Eigen::MatrixXd::Zero(k, k);

  std::vector<char> constant(static_cast<std::size_t>(k), 0);
  parallel_for(0, static_cast<std::size_t>(k), [&](std::size_t ui) {
    const auto i = static_cast<Eigen::Index>(ui);
    for (Eigen::Index j = i; j < k; ++j) {
      const auto r = pearson(data.col(i), data.col(j));
      if (i == j) {
        constant[ui] = r.constant_input;
        cm.values(i, i) = r.constant_input ? 0.0 : 1.0;
      } else {
        cm.values(i, j) = r.value;
      }
    }
  });
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < i; ++j) cm.values(i, j) = cm.values(j, i);
  for (std::size_t i = 0; i < constant.size(); ++i)
    if (constant[i]) cm.constant_columns.push_back(cm.labels[i]);
  return cm;
}

std::vector<std::string> top_k_by_target_corr(const CorrelationMatrix& cm, std::size_t k) {
  const std::size_t n_features = cm.labels.empty() ? 0 : cm.labels.size() - 1;
  if (k < 1 || k > n_features) {
    throw SpecError("k = " + std::to_string(k) + " outside [1, " + std::to_string(n_features) +
                    "]");
  }
  const auto target = static_cast<Eigen::Index>(n_features);
  std::vector<std::size_t> order(n_features);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ca = std::abs(cm.values(static_cast<Eigen::Index>(a), target));
    const double cb = std::abs(cm.values(static_cast<Eigen::Index>(b), target));
    if (ca != cb) return ca > cb;
    return cm.labels[a] < cm.labels[b];
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(cm.labels[order[i]]);
  return out;
}

namespace {

// blue (-1) -> white (0) -> red (+1)
std::string ramp_color(double v) {
  v = std::clamp(v, -1.0, 1.0);
  int r = 255, g = 255, b = 255;
  if (v < 0) {
    r = g = static_cast<int>(std::lround(255 * (1 + v)));
  } else {
    g = b = static_cast<int>(std::lround(255 * (1 - v)));
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void emit_heatmap(const CorrelationMatrix& cm, const std::filesystem::path& base) {
  const auto n = static_cast<Eigen::Index>(cm.labels.size());
  auto csv_path = base;
  csv_path += ".csv";
  auto svg_path = base;
  svg_path += ".svg";

  std::ofstream out(csv_path);
  if (!out) throw IoError("cannot write " + csv_path.string());
  for (const auto& l : cm.labels) out << ',' << l;
  out << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    out << cm.labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) out << ',' << csv::format_fixed(cm.values(i, j), 6);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + csv_path.string());

  constexpr int cell = 48;
  constexpr int margin = 170;
  const int size = margin + static_cast<int>(n) * cell + 10;
  std::ofstream svg(svg_path);
  if (!svg) throw IoError("cannot write " + svg_path.string());
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto label = xml_escape(cm.labels[static_cast<std::size_t>(i)]);
    const int pos = margin + static_cast<int>(i) * cell + cell / 2;
    svg << "<text x=\"" << margin - 4 << "\" y=\"" << pos + 3 << "\" text-anchor=\"end\">" << label
        << "</text>\n";
    svg << "<text transform=\"translate(" << pos + 3 << "," << margin - 4
        << ") rotate(-60)\">" << label << "</text>\n";
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = cm.values(i, j);
      const int x = margin + static_cast<int>(j) * cell;
      const int y = margin + static_cast<int>(i) * cell;
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\""
          << cell << "\" fill=\"" << ramp_color(v) << "\" stroke=\"#ffffff\"/>";
      svg << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 3
          << "\" text-anchor=\"middle\">" << csv::format_fixed(v, 2) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  if (!svg) throw IoError("write failed: " + svg_path.string());
}

CorrelationMatrix read_heatmap_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!csv::read_line(in, line)) throw EmptyInputError("empty heatmap file " + path.string());
  auto header = csv::split_line(line);
  CorrelationMatrix cm;
  cm.labels.assign(header.begin() + 1, header.end());
  const auto n = static_cast<Eigen::Index>(cm.labels.size());
  cm.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!csv::read_line(in, line)) throw ShapeError("heatmap has fewer rows than labels");
    const auto cells = csv::split_line(line);
    if (static_cast<Eigen::Index>(cells.size()) != n + 1)
      throw ShapeError("heatmap row " + std::to_string(i) + " has the wrong width");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!csv::parse_double(cells[static_cast<std::size_t>(j + 1)], cm.values(i, j)))
        throw ParseError(static_cast<std::size_t>(i + 1), cm.labels[static_cast<std::size_t>(j)],
                         "bad heatmap cell");
    }
  }
  return cm;
}

}  // namespace placement
