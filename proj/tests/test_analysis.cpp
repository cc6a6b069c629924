#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "rockrisk/analysis.hpp"

using rockrisk::CdfReport;
using rockrisk::CsvTable;
using rockrisk::DensitySpec;

namespace {

Eigen::VectorXd identity_mass(const Eigen::VectorXd& v) { return v; }

}  // namespace

TEST_CASE("relative L2 error on hand-checked controls") {
  Eigen::VectorXd z_true(3);
  z_true << 1.0, 2.0, 2.0;
  CHECK(rockrisk::relative_l2_error(z_true, z_true, identity_mass) == 0.0);
  CHECK(rockrisk::relative_l2_error(2.0 * z_true, z_true, identity_mass) ==
        doctest::Approx(1.0));
  CHECK(rockrisk::relative_l2_error(Eigen::VectorXd::Zero(3), z_true,
                                    identity_mass) == doctest::Approx(1.0));
  CHECK_THROWS(rockrisk::relative_l2_error(z_true, Eigen::VectorXd::Zero(3),
                                           identity_mass));
}

TEST_CASE("relative L2 error is invariant under joint scaling") {
  Eigen::VectorXd z(4), zt(4);
  z << 1.0, -2.0, 0.5, 3.0;
  zt << 0.5, 1.0, 1.5, -1.0;
  const double base = rockrisk::relative_l2_error(z, zt, identity_mass);
  CHECK(rockrisk::relative_l2_error(7.0 * z, 7.0 * zt, identity_mass) ==
        doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("error report ratio convention") {
  const auto r = rockrisk::make_error_report(0.5, 2.0);
  CHECK(r.e_ratio == doctest::Approx(4.0));
  CHECK(std::isinf(rockrisk::make_error_report(0.0, 1.0).e_ratio));
}

TEST_CASE("nearest-rank quantile agrees with a naive oracle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(1 + trial * 7);
    for (double& x : v) x = dist(rng);
    std::sort(v.begin(), v.end());
    for (double level : {0.5, 0.75, 0.9, 0.95, 0.99}) {
      const std::size_t rank = std::min<std::size_t>(
          v.size(),
          std::max<std::size_t>(
              1, static_cast<std::size_t>(
                     std::ceil(level * static_cast<double>(v.size())))));
      CHECK(rockrisk::nearest_rank_quantile(v, level) == v[rank - 1]);
    }
  }
}

TEST_CASE("empirical CDF quantiles are monotone and hit the analytic median") {
  DensitySpec d;
  d.kind = rockrisk::DensityKind::TruncExp;
  const CdfReport r =
      rockrisk::empirical_cdf([](double xi) { return xi; }, 1 << 14, d);
  CHECK(std::is_sorted(r.sorted_values.begin(), r.sorted_values.end()));
  double prev = r.min - 1.0;
  for (double level : {0.5, 0.75, 0.9, 0.95, 0.99}) {
    CHECK(r.quantiles.at(level) >= prev);
    prev = r.quantiles.at(level);
  }
  // Analytic inverse CDF of TruncExp(k = 1/4) on [0, 20] at the median.
  const double median = -4.0 * std::log(1.0 - 0.5 * (1.0 - std::exp(-5.0)));
  CHECK(r.quantiles.at(0.5) == doctest::Approx(median).epsilon(1e-3));
  CHECK(r.min >= 0.0);
  CHECK(r.max <= 20.0);
}

TEST_CASE("constant objective collapses the CDF") {
  DensitySpec d;
  const CdfReport r =
      rockrisk::empirical_cdf([](double) { return 3.5; }, 256, d);
  CHECK(r.min == 3.5);
  CHECK(r.max == 3.5);
  for (const auto& [level, q] : r.quantiles) CHECK(q == 3.5);
}

TEST_CASE("csv emission preserves column order") {
  CsvTable t;
  t.columns = {"a", "b"};
  t.rows = {{"1", "2"}, {"3", "4"}};
  const std::string path = "test_table_tmp.csv";
  rockrisk::emit_table(t, path);
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  CHECK(line == "a,b");
  std::getline(f, line);
  CHECK(line == "1,2");
  std::getline(f, line);
  CHECK(line == "3,4");
  f.close();
  std::remove(path.c_str());

  CsvTable empty;
  empty.columns = {"x"};
  rockrisk::emit_table(empty, path);
  std::ifstream g(path);
  std::getline(g, line);
  CHECK(line == "x");
  CHECK_FALSE(std::getline(g, line));
  g.close();
  std::remove(path.c_str());
}

TEST_CASE("svg emission renders one polyline per report") {
  CdfReport a;
  a.sorted_values = {0.0, 0.5, 1.0};
  a.min = 0.0;
  a.max = 1.0;
  CdfReport b;
  b.sorted_values = {0.2, 0.4};
  b.min = 0.2;
  b.max = 0.4;
  const std::string path = "test_cdf_tmp.svg";
  rockrisk::emit_svg_cdf({{"first", a}, {"second", b}}, path);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string svg = ss.str();
  f.close();
  std::remove(path.c_str());
  std::size_t count = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  CHECK(count == 2);
  CHECK(svg.find("first") != std::string::npos);
  CHECK(svg.find("second") != std::string::npos);
}
