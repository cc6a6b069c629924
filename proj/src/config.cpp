#include "rockrisk/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace rockrisk {

namespace {

std::string trim(const std::string& s) {
  auto b = s.begin();
  auto e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return {b, e};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, std::string> entries)
      : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) {
    auto it = entries_.find(key);
    consumed_.insert(key);
    return it == entries_.end() ? fallback : it->second;
  }
  double num(const std::string& key, double fallback) {
    auto it = entries_.find(key);
    consumed_.insert(key);
    if (it == entries_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(key + ": not a number: " + it->second);
    }
  }
  int integer(const std::string& key, int fallback) {
    const double v = num(key, fallback);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      throw ConfigError(key + ": not an integer");
    }
    return i;
  }
  std::vector<double> num_list(const std::string& key,
                               std::vector<double> fallback) {
    auto it = entries_.find(key);
    consumed_.insert(key);
    if (it == entries_.end()) return fallback;
    std::vector<double> out;
    for (const auto& tok : split_list(it->second)) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: " + tok);
      }
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
  }
  std::vector<std::string> str_list(const std::string& key) {
    auto it = entries_.find(key);
    consumed_.insert(key);
    return it == entries_.end() ? std::vector<std::string>{}
                                : split_list(it->second);
  }
  void check_unknown() const {
    for (const auto& [key, value] : entries_) {
      if (!consumed_.count(key)) {
        throw ConfigError("unknown config key: " + key);
      }
    }
  }

 private:
  std::map<std::string, std::string> entries_;
  std::set<std::string> consumed_;
};

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw ConfigError("cannot read config file: " + path);
  }
  std::map<std::string, std::string> entries;
  std::string line, section;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    entries[section.empty() ? key : section + "." + key] = value;
  }
  return entries;
}

void validate(const ExperimentConfig& cfg) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  for (double beta : cfg.beta_list) {
    require(beta > 0.0 && beta < 1.0, "beta: must satisfy 0 < beta < 1");
  }
  for (double c : cfg.corruption_levels) {
    require(c >= 0.0 && c <= 1.0,
            "corruption_levels: must lie in [0, 1]");
  }
  for (double theta : cfg.theta_list) {
    require(theta >= 0.0, "theta_list: must be nonnegative");
  }
  require(cfg.n_samples >= 1, "n_samples: must be >= 1");
  require(cfg.n_quadrature >= 1, "n_quadrature: must be >= 1");
  require(cfg.grid_cells >= 2, "grid_cells: must be >= 2");
  require(cfg.refinement >= 0 && cfg.refinement <= 8,
          "refinement: must lie in [0, 8]");
  require(cfg.kkl_terms >= 1, "kkl_terms: must be >= 1");
  require(cfg.kkl_sigma > 0.0, "kkl_sigma: must be positive");
  require(cfg.alpha > 0.0, "alpha: must be positive");
  require(cfg.delta > 0.0, "delta: must be positive");
  require(cfg.v_max > 0.0, "v_max: must be positive");
  require(cfg.density_k > 0.0, "density_k: must be positive");
  require(cfg.density_a > 0.0, "density_a: must be positive");
  require(cfg.gamma_tol > 0.0, "gamma_tol: must be positive");
  require(cfg.grad_tol > 0.0, "grad_tol: must be positive");
  require(cfg.lbfgs_history >= 1, "lbfgs_history: must be >= 1");
  require(cfg.lbfgs_max_iters >= 1, "lbfgs_max_iters: must be >= 1");
  require(cfg.max_outer >= 1, "max_outer: must be >= 1");
  require(cfg.t_tol > 0.0, "t_tol: must be positive");
  require(cfg.max_adi >= 1, "max_adi: must be >= 1");
  require(cfg.n_sobol >= 1, "n_sobol: must be >= 1");
  require(cfg.workers >= 1, "workers: must be >= 1");
  require(!cfg.output_dir.empty(), "output_dir: must be nonempty");
  if (cfg.experiment == ExperimentKind::CdfStudy) {
    require(cfg.cdf_surrogate || !cfg.cdf_controls.empty(),
            "cdf: need surrogate = true or a controls list");
    require(cfg.cdf_controls.size() == cfg.cdf_labels.size() ||
                cfg.cdf_labels.empty(),
            "cdf_labels: must match cdf_controls in length");
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  Reader r(parse_config_file(path));
  ExperimentConfig cfg;

  const std::string kind = r.str("experiment", "example1");
  if (kind == "example1") {
    cfg.experiment = ExperimentKind::Example1;
    cfg.alpha = 1e-5;
  } else if (kind == "example2") {
    cfg.experiment = ExperimentKind::Example2;
    cfg.alpha = 1e-4;
  } else if (kind == "cdf_study") {
    cfg.experiment = ExperimentKind::CdfStudy;
    cfg.alpha = 1e-4;
  } else {
    throw ConfigError("experiment: unknown kind: " + kind);
  }

  cfg.beta_list = r.num_list("sweep.beta_list", cfg.beta_list);
  cfg.corruption_levels =
      r.num_list("sweep.corruption_levels", cfg.corruption_levels);
  cfg.theta_list = r.num_list("sweep.theta_list", cfg.theta_list);

  cfg.n_samples = r.integer("problem.n_samples", cfg.n_samples);
  cfg.n_quadrature = r.integer("problem.n_quadrature", cfg.n_quadrature);
  cfg.grid_cells = r.integer("problem.grid_cells", cfg.grid_cells);
  cfg.refinement = r.integer("problem.refinement", cfg.refinement);
  cfg.kkl_terms = r.integer("problem.kkl_terms", cfg.kkl_terms);
  cfg.kkl_sigma = r.num("problem.kkl_sigma", cfg.kkl_sigma);
  cfg.corruption_factor =
      r.num("problem.corruption_factor", cfg.corruption_factor);
  cfg.alpha = r.num("problem.alpha", cfg.alpha);
  cfg.delta = r.num("problem.delta", cfg.delta);
  cfg.v_max = r.num("problem.v_max", cfg.v_max);
  cfg.density_k = r.num("problem.density_k", cfg.density_k);
  cfg.density_a = r.num("problem.density_a", cfg.density_a);
  cfg.seed = static_cast<std::uint64_t>(r.num("problem.seed", 1.0));

  cfg.gamma_tol = r.num("solver.gamma_tol", cfg.gamma_tol);
  cfg.grad_tol = r.num("solver.grad_tol", cfg.grad_tol);
  cfg.lbfgs_history = r.integer("solver.lbfgs_history", cfg.lbfgs_history);
  cfg.lbfgs_max_iters =
      r.integer("solver.lbfgs_max_iters", cfg.lbfgs_max_iters);
  cfg.max_outer = r.integer("solver.max_outer", cfg.max_outer);
  cfg.t_tol = r.num("solver.t_tol", cfg.t_tol);
  cfg.max_adi = r.integer("solver.max_adi", cfg.max_adi);

  cfg.n_sobol = r.integer("cdf.n_sobol", cfg.n_sobol);
  cfg.cdf_surrogate = r.str("cdf.surrogate", "false") == "true";
  cfg.cdf_controls = r.str_list("cdf.controls");
  cfg.cdf_labels = r.str_list("cdf.labels");

  cfg.output_dir = r.str("output.dir", cfg.output_dir);
  cfg.workers = r.integer("output.workers", cfg.workers);

  r.check_unknown();
  validate(cfg);
  return cfg;
}

void apply_full_scale(ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::Example1:
      cfg.beta_list = {0.1, 0.5, 0.9};
      cfg.corruption_levels = {0.01, 0.05, 0.2, 0.4};
      cfg.theta_list = {0.1};
      cfg.n_samples = 5000;
      cfg.grid_cells = 128;
      break;
    case ExperimentKind::Example2:
      cfg.beta_list = {0.1, 0.9};
      cfg.corruption_levels = {0.5, 1.0};
      cfg.theta_list = {0.1, 0.01};
      cfg.refinement = 5;  // 5185 degrees of freedom
      cfg.n_quadrature = 15;
      break;
    case ExperimentKind::CdfStudy:
      cfg.n_sobol = 1 << 17;
      break;
  }
}

}  // namespace rockrisk
