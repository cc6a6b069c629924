#include "rockrisk/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rockrisk/pde1d.hpp"
#include "rockrisk/pde2d.hpp"
#include "rockrisk/problem.hpp"

namespace rockrisk {

namespace fs = std::filesystem;

namespace {

std::string tag(double v) {
  std::ostringstream os;
  os << v;
  std::string s = os.str();
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return s;
}

void write_profile_csv(const Eigen::VectorXd& x, const Eigen::VectorXd& z_true,
                       const Eigen::VectorXd& z_corr,
                       const Eigen::VectorXd& z_rock,
                       const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "x,z_true,z_corrupted,z_rock\n";
  f.precision(17);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    f << x[i] << ',' << z_true[i] << ',' << z_corr[i] << ',' << z_rock[i]
      << '\n';
  }
}

}  // namespace

NqeConfig make_nqe_config(const ExperimentConfig& cfg, double beta) {
  NqeConfig n;
  n.beta = beta;
  n.delta = cfg.delta;
  n.alpha = cfg.alpha;
  n.gamma_tol = cfg.gamma_tol;
  n.max_outer = cfg.max_outer;
  n.lbfgs.history = cfg.lbfgs_history;
  n.lbfgs.grad_tol = cfg.grad_tol;
  n.lbfgs.max_iters = cfg.lbfgs_max_iters;
  return n;
}

RockConfig make_rock_config(const ExperimentConfig& cfg, double theta,
                            BoundMode mode, double l1_scale) {
  RockConfig r;
  r.theta = theta;
  r.t_tol = cfg.t_tol;
  r.bound_mode = mode;
  r.max_adi = cfg.max_adi;
  r.l1_scale = l1_scale;
  return r;
}

DensitySpec density_for_corruption(const ExperimentConfig& cfg, double c) {
  DensitySpec d;
  d.k = cfg.density_k;
  d.a = cfg.density_a;
  d.support_max = cfg.v_max;
  if (c <= 0.0) {
    d.kind = DensityKind::TruncExp;
  } else if (c >= 1.0) {
    d.kind = DensityKind::Algebraic;
  } else {
    d.kind = DensityKind::Mixture;
    d.mix_weight = 1.0 - c;
  }
  return d;
}

ScenarioSet density_scenarios(const Quadrature& gq, const DensitySpec& density,
                              double& mass_out) {
  const int n = static_cast<int>(gq.nodes.size());
  ScenarioSet s;
  s.points.resize(n, 1);
  s.weights.resize(n);
  s.corrupted.assign(n, density.kind != DensityKind::TruncExp);
  double mass = 0.0;
  for (int k = 0; k < n; ++k) {
    s.points(k, 0) = gq.nodes[k];
    s.weights[k] = gq.weights[k] * density_eval(density, gq.nodes[k]);
    mass += s.weights[k];
  }
  s.weights /= mass;
  mass_out = mass;
  return s;
}

void run_example1(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  const Grid1D grid{cfg.grid_cells};
  const KklField field{cfg.kkl_sigma, cfg.kkl_terms};
  const ScenarioSet base =
      sample_gaussian_scenarios(cfg.n_samples, cfg.kkl_terms, cfg.seed);
  write_scenarios_csv(base, cfg.output_dir + "/scenarios.csv");

  const Eigen::VectorXd z0 = Eigen::VectorXd::Zero(grid.n_nodes());
  const Eigen::VectorXd x = grid.nodes();

  CsvTable table;
  table.columns = {"beta",
                   "corruption",
                   "theta",
                   "e_rel_rock",
                   "e_rel_corrupted",
                   "e_ratio",
                   "corrupted_deleted",
                   "corrupted_total",
                   "clean_deleted",
                   "clean_total",
                   "adi_iters",
                   "converged"};

  for (double beta : cfg.beta_list) {
    const NqeConfig nqe_cfg = make_nqe_config(cfg, beta);
    Pde1dProblem clean_problem(grid, field, base, cfg.workers);
    auto mass = [&](const Eigen::VectorXd& v) {
      return clean_problem.mass_apply(v);
    };
    const NqeResult res_true =
        nqe_solve(clean_problem, base.weights, nqe_cfg, z0);
    write_nqe_trace_csv(res_true, cfg.output_dir + "/trace_true_beta" +
                                      tag(beta) + ".csv");

    for (double corruption : cfg.corruption_levels) {
      const ScenarioSet corrupted =
          corrupt_by_scaling(base, corruption, cfg.corruption_factor);
      Pde1dProblem problem(grid, field, corrupted, cfg.workers);
      const NqeResult res_corr =
          nqe_solve(problem, corrupted.weights, nqe_cfg, z0);
      const double e_rel_corr =
          relative_l2_error(res_corr.z, res_true.z, mass);

      int corrupted_total = 0;
      for (bool b : corrupted.corrupted) corrupted_total += b ? 1 : 0;
      const int clean_total = cfg.n_samples - corrupted_total;

      for (double theta : cfg.theta_list) {
        const RockConfig rock_cfg =
            make_rock_config(cfg, theta, BoundMode::Tight);
        const RockResult rock =
            adi_minimize(problem, corrupted, nqe_cfg, rock_cfg, z0);
        const double e_rel_rock = relative_l2_error(rock.z, res_true.z, mass);
        const ErrorReport err = make_error_report(e_rel_rock, e_rel_corr);

        const std::string suffix = "beta" + tag(beta) + "_corr" +
                                   tag(corruption) + "_theta" + tag(theta);
        write_profile_csv(x, res_true.z, res_corr.z, rock.z,
                          cfg.output_dir + "/controls_" + suffix + ".csv");
        write_perturbation_csv(corrupted, rock.t,
                               cfg.output_dir + "/t_" + suffix + ".csv");
        write_adi_trace_csv(rock, cfg.output_dir + "/adi_" + suffix + ".csv");

        table.rows.push_back(
            {format_double(beta), format_double(corruption),
             format_double(theta), format_double(err.e_rel_rock),
             format_double(err.e_rel_corrupted), format_double(err.e_ratio),
             std::to_string(rock.corrupted_deleted),
             std::to_string(corrupted_total),
             std::to_string(rock.clean_deleted), std::to_string(clean_total),
             std::to_string(rock.adi_iters),
             rock.converged && rock.nqe_converged ? "1" : "0"});
      }
    }
  }
  emit_table(table, cfg.output_dir + "/table_recovery.csv");
}

void run_example2(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  const DiskMesh mesh = build_mesh(cfg.refinement);
  const DiskFem fem(mesh);
  const AdvectionField adv{cfg.v_max};
  const Quadrature gq = gauss_legendre(cfg.n_quadrature, 0.0, cfg.v_max);
  std::vector<double> xis(gq.nodes.data(), gq.nodes.data() + gq.nodes.size());
  const Pde2dProblem problem(fem, adv, xis, Eigen::VectorXd(), cfg.workers);
  auto mass = [&](const Eigen::VectorXd& v) { return problem.mass_apply(v); };
  const Eigen::VectorXd z0 = Eigen::VectorXd::Zero(fem.dof_count());

  CsvTable table;
  table.columns = {"beta",      "corruption", "theta",
                   "e_rel_rock", "e_rel_corrupted", "e_ratio",
                   "adi_iters", "converged"};

  for (double beta : cfg.beta_list) {
    const NqeConfig nqe_cfg = make_nqe_config(cfg, beta);

    double mass_true = 0.0;
    const ScenarioSet scen_true = density_scenarios(
        gq, density_for_corruption(cfg, 0.0), mass_true);
    const NqeResult res_true =
        nqe_solve(problem, scen_true.weights, nqe_cfg, z0);
    write_nodal_csv(mesh, res_true.z,
                    cfg.output_dir + "/control_true_beta" + tag(beta) + ".csv");

    for (double corruption : cfg.corruption_levels) {
      double mass_corr = 0.0;
      const ScenarioSet scen = density_scenarios(
          gq, density_for_corruption(cfg, corruption), mass_corr);
      const NqeResult res_corr = nqe_solve(problem, scen.weights, nqe_cfg, z0);
      const std::string base_suffix =
          "beta" + tag(beta) + "_corr" + tag(corruption);
      write_nodal_csv(mesh, res_corr.z, cfg.output_dir + "/control_corrupted_" +
                                            base_suffix + ".csv");
      const double e_rel_corr =
          corruption > 0.0 ? relative_l2_error(res_corr.z, res_true.z, mass)
                           : 0.0;

      for (double theta : cfg.theta_list) {
        const RockConfig rock_cfg =
            make_rock_config(cfg, theta, BoundMode::Density, mass_corr);
        const RockResult rock =
            adi_minimize(problem, scen, nqe_cfg, rock_cfg, z0);
        const double e_rel_rock = relative_l2_error(rock.z, res_true.z, mass);
        const ErrorReport err = make_error_report(e_rel_rock, e_rel_corr);

        const std::string suffix = base_suffix + "_theta" + tag(theta);
        write_nodal_csv(mesh, rock.z,
                        cfg.output_dir + "/control_rock_" + suffix + ".csv");
        write_perturbation_csv(scen, rock.t,
                               cfg.output_dir + "/t_" + suffix + ".csv");
        write_adi_trace_csv(rock, cfg.output_dir + "/adi_" + suffix + ".csv");

        table.rows.push_back(
            {format_double(beta), format_double(corruption),
             format_double(theta), format_double(err.e_rel_rock),
             format_double(err.e_rel_corrupted), format_double(err.e_ratio),
             std::to_string(rock.adi_iters),
             rock.converged && rock.nqe_converged ? "1" : "0"});
      }
    }
  }
  emit_table(table, cfg.output_dir + "/table_recovery.csv");
}

Eigen::VectorXd read_nodal_values_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read control file: " + path);
  std::string line;
  std::getline(f, line);  // header
  std::vector<double> values;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto last = line.find_last_of(',');
    if (last == std::string::npos) {
      throw std::runtime_error("malformed control file: " + path);
    }
    values.push_back(std::stod(line.substr(last + 1)));
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(),
                                     static_cast<Eigen::Index>(values.size()));
}

void run_cdf_study(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  DensitySpec density;
  density.kind = DensityKind::TruncExp;
  density.k = cfg.density_k;
  density.support_max = cfg.v_max;

  std::vector<std::pair<std::string, CdfReport>> objective_cdfs;
  std::vector<std::pair<std::string, CdfReport>> total_cdfs;

  CsvTable table;
  table.columns = {"label", "min", "max", "q50", "q75", "q90", "q95", "q99"};
  auto add_row = [&](const std::string& label, const CdfReport& r) {
    table.rows.push_back({label, format_double(r.min), format_double(r.max),
                          format_double(r.quantiles.at(0.5)),
                          format_double(r.quantiles.at(0.75)),
                          format_double(r.quantiles.at(0.9)),
                          format_double(r.quantiles.at(0.95)),
                          format_double(r.quantiles.at(0.99))});
  };

  if (cfg.cdf_surrogate) {
    const CdfReport r =
        empirical_cdf([](double xi) { return xi; }, cfg.n_sobol, density);
    objective_cdfs.emplace_back("surrogate", r);
    add_row("surrogate", r);
  }

  if (!cfg.cdf_controls.empty()) {
    const DiskMesh mesh = build_mesh(cfg.refinement);
    const DiskFem fem(mesh);
    const AdvectionField adv{cfg.v_max};

    for (std::size_t c = 0; c < cfg.cdf_controls.size(); ++c) {
      const std::string label = c < cfg.cdf_labels.size()
                                    ? cfg.cdf_labels[c]
                                    : fs::path(cfg.cdf_controls[c]).stem().string();
      const Eigen::VectorXd z = read_nodal_values_csv(cfg.cdf_controls[c]);
      if (z.size() != fem.dof_count()) {
        throw std::runtime_error(label +
                                 ": control size does not match the mesh");
      }
      const Eigen::VectorXd f = Eigen::VectorXd::Zero(fem.dof_count());

      // One factorization per sample; evaluated in parallel, collected in
      // fixed order by index.
      const std::vector<double> u = sobol_1d(cfg.n_sobol);
      std::vector<double> samples(u.size());
      parallel_for(static_cast<int>(u.size()), cfg.workers, [&](int i) {
        const double xi =
            inverse_cdf_truncexp(u[i], density.k, density.support_max);
        samples[i] = ScenarioSolver2d(fem, adv, xi).objective(z, f);
      });
      CdfReport r;
      r.sorted_values = std::move(samples);
      std::sort(r.sorted_values.begin(), r.sorted_values.end());
      r.min = r.sorted_values.front();
      r.max = r.sorted_values.back();
      for (double level : {0.5, 0.75, 0.9, 0.95, 0.99}) {
        r.quantiles[level] = nearest_rank_quantile(r.sorted_values, level);
      }
      objective_cdfs.emplace_back(label, r);

      // Total control cost shifts every sample by the regularization term.
      const double reg = 0.5 * cfg.alpha * z.dot(fem.mass() * z);
      CdfReport rt = r;
      for (double& v : rt.sorted_values) v += reg;
      rt.min += reg;
      rt.max += reg;
      for (auto& [level, q] : rt.quantiles) q += reg;
      total_cdfs.emplace_back(label, rt);
      add_row(label, rt);
    }
  }

  emit_table(table, cfg.output_dir + "/table_cdf.csv");
  emit_svg_cdf(objective_cdfs, cfg.output_dir + "/cdf_objective.svg");
  if (!total_cdfs.empty()) {
    emit_svg_cdf(total_cdfs, cfg.output_dir + "/cdf_total_cost.svg");
  }
}

int run_experiment(const ExperimentConfig& cfg) {
  try {
    switch (cfg.experiment) {
      case ExperimentKind::Example1:
        run_example1(cfg);
        break;
      case ExperimentKind::Example2:
        run_example2(cfg);
        break;
      case ExperimentKind::CdfStudy:
        run_cdf_study(cfg);
        break;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace rockrisk
