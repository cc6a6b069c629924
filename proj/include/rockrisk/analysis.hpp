#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rockrisk/sampling.hpp"

namespace rockrisk {

/// Relative squared-L2 error ||z - z_true||^2 / ||z_true||^2 under the given
/// mass operator. Throws if the reference norm vanishes.
double relative_l2_error(
    const Eigen::VectorXd& z, const Eigen::VectorXd& z_true,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& mass_apply);

struct ErrorReport {
  double e_rel_rock;
  double e_rel_corrupted;
  double e_ratio;  // e_rel_corrupted / e_rel_rock
};

ErrorReport make_error_report(double e_rel_rock, double e_rel_corrupted);

struct CdfReport {
  std::vector<double> sorted_values;
  std::map<double, double> quantiles;  // levels 0.5, 0.75, 0.9, 0.95, 0.99
  double min;
  double max;
};

/// Empirical distribution of j under the TruncExp density: pushes the first
/// n_sobol van der Corput points through the inverse CDF, evaluates j at
/// each sample, sorts, and extracts nearest-rank quantiles.
CdfReport empirical_cdf(const std::function<double(double)>& j, int n_sobol,
                        const DensitySpec& density);

/// Nearest-rank (ceiling) quantile of a sorted sample.
double nearest_rank_quantile(const std::vector<double>& sorted, double level);

/// Generic CSV table with a stable column order.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void emit_table(const CsvTable& table, const std::string& path);

std::string format_double(double v);

/// Step-function CDF plot (SVG 1.1, polyline primitives) with a legend.
void emit_svg_cdf(const std::vector<std::pair<std::string, CdfReport>>& reports,
                  const std::string& path);

}  // namespace rockrisk
