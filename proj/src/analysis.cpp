#include "rockrisk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rockrisk {

double relative_l2_error(
    const Eigen::VectorXd& z, const Eigen::VectorXd& z_true,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& mass_apply) {
  if (z.size() != z_true.size()) {
    throw std::invalid_argument("relative_l2_error: size mismatch");
  }
  const Eigen::VectorXd diff = z - z_true;
  const double denom = z_true.dot(mass_apply(z_true));
  if (denom <= 0.0) {
    throw std::invalid_argument("relative_l2_error: zero reference norm");
  }
  return diff.dot(mass_apply(diff)) / denom;
}

ErrorReport make_error_report(double e_rel_rock, double e_rel_corrupted) {
  ErrorReport r;
  r.e_rel_rock = e_rel_rock;
  r.e_rel_corrupted = e_rel_corrupted;
  r.e_ratio = e_rel_rock > 0.0
                  ? e_rel_corrupted / e_rel_rock
                  : std::numeric_limits<double>::infinity();
  return r;
}

double nearest_rank_quantile(const std::vector<double>& sorted, double level) {
  if (sorted.empty()) {
    throw std::invalid_argument("nearest_rank_quantile: empty sample");
  }
  const std::size_t n = sorted.size();
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(level * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

CdfReport empirical_cdf(const std::function<double(double)>& j, int n_sobol,
                        const DensitySpec& density) {
  if (density.kind != DensityKind::TruncExp) {
    throw std::invalid_argument("empirical_cdf: density must be TruncExp");
  }
  const std::vector<double> u = sobol_1d(n_sobol);
  CdfReport report;
  report.sorted_values.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double xi =
        inverse_cdf_truncexp(u[i], density.k, density.support_max);
    report.sorted_values[i] = j(xi);
  }
  std::sort(report.sorted_values.begin(), report.sorted_values.end());
  report.min = report.sorted_values.front();
  report.max = report.sorted_values.back();
  for (double level : {0.5, 0.75, 0.9, 0.95, 0.99}) {
    report.quantiles[level] = nearest_rank_quantile(report.sorted_values, level);
  }
  return report;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void emit_table(const CsvTable& table, const std::string& path) {
  std::ofstream f(path);
  if (!f) {
    throw std::runtime_error("emit_table: cannot open " + path);
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    f << (c ? "," : "") << table.columns[c];
  }
  f << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      f << (c ? "," : "") << row[c];
    }
    f << '\n';
  }
}

void emit_svg_cdf(const std::vector<std::pair<std::string, CdfReport>>& reports,
                  const std::string& path) {
  std::ofstream f(path);
  if (!f) {
    throw std::runtime_error("emit_svg_cdf: cannot open " + path);
  }
  const int width = 720, height = 480;
  const int ml = 70, mr = 20, mt = 20, mb = 50;

  double lo = 0.0, hi = 1.0;
  bool have_data = false;
  for (const auto& [name, r] : reports) {
    if (r.sorted_values.empty()) continue;
    if (!have_data) {
      lo = r.min;
      hi = r.max;
      have_data = true;
    } else {
      lo = std::min(lo, r.min);
      hi = std::max(hi, r.max);
    }
  }
  if (hi <= lo) hi = lo + 1.0;

  auto px = [&](double v) {
    return ml + (v - lo) / (hi - lo) * (width - ml - mr);
  };
  auto py = [&](double p) { return height - mb - p * (height - mt - mb); };

  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
    << height << "\">\n";
  // Axes.
  f << "<line x1=\"" << ml << "\" y1=\"" << py(0) << "\" x2=\"" << width - mr
    << "\" y2=\"" << py(0) << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << ml << "\" y1=\"" << py(0) << "\" x2=\"" << ml
    << "\" y2=\"" << py(1) << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double p = k / 4.0;
    const double v = lo + p * (hi - lo);
    f << "<text x=\"" << px(v) << "\" y=\"" << height - mb + 20
      << "\" font-size=\"12\" text-anchor=\"middle\">" << format_double(v)
      << "</text>\n";
    f << "<text x=\"" << ml - 8 << "\" y=\"" << py(p) + 4
      << "\" font-size=\"12\" text-anchor=\"end\">" << format_double(p)
      << "</text>\n";
  }

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  int color_idx = 0;
  int legend_y = mt + 16;
  for (const auto& [name, r] : reports) {
    const char* color = palette[color_idx % 8];
    ++color_idx;
    if (!r.sorted_values.empty()) {
      const std::size_t n = r.sorted_values.size();
      const std::size_t stride = std::max<std::size_t>(1, n / 2000);
      f << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
      f << px(r.sorted_values.front()) << ',' << py(0) << ' ';
      for (std::size_t i = 0; i < n; i += stride) {
        const double p = static_cast<double>(i + 1) / static_cast<double>(n);
        f << px(r.sorted_values[i]) << ',' << py(p) << ' ';
      }
      f << px(r.sorted_values.back()) << ',' << py(1);
      f << "\"/>\n";
    }
    f << "<line x1=\"" << width - 200 << "\" y1=\"" << legend_y << "\" x2=\""
      << width - 170 << "\" y2=\"" << legend_y << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
    f << "<text x=\"" << width - 164 << "\" y=\"" << legend_y + 4
      << "\" font-size=\"12\">" << name << "</text>\n";
    legend_y += 18;
  }
  f << "</svg>\n";
}

}  // namespace rockrisk
