#include "matreg/experiments.hpp"

#include "matreg/csv.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace matreg {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string file_prefix(const ExperimentConfig& config) {
  return std::string(to_string(config.scenario)) + "_seed" + std::to_string(config.seed) + "_";
}

fs::path ensure_outdir(const ExperimentConfig& config) {
  fs::path dir(config.outdir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("emit_reports: cannot create '" + dir.string() + "': " + ec.message());
  return dir;
}

/// Grayscale PGM with the paper-style color limits: values clamp to [0,1],
/// 0 maps to white and 1 to black.
void write_pgm(const fs::path& path, const Matrix& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_pgm: cannot open '" + path.string() + "'");
  out << "P2\n" << values.cols() << ' ' << values.rows() << "\n255\n";
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      const double v = std::clamp(values(i, j), 0.0, 1.0);
      out << static_cast<int>(std::lround(255.0 * (1.0 - v))) << (j + 1 < values.cols() ? ' ' : '\n');
    }
  }
}

struct Series {
  std::string label;
  std::vector<double> x, y;
};

/// Minimal static line plot: linear x (seconds), log10 y.
void write_svg_log_plot(const fs::path& path, const std::vector<Series>& series,
                        const std::string& x_label, const std::string& y_label) {
  const int width = 720, height = 480, margin = 60;
  double xmax = 1e-9, ymin = 1e300, ymax = 1e-300;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (s.y[i] <= 0.0) continue;
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (ymin > ymax) { ymin = 1e-12; ymax = 1.0; }
  const double ly0 = std::floor(std::log10(ymin)), ly1 = std::ceil(std::log10(ymax) + 1e-12);
  const auto px = [&](double x) {
    return margin + (width - 2 * margin) * (xmax > 0 ? x / xmax : 0.0);
  };
  const auto py = [&](double y) {
    const double t = (std::log10(y) - ly0) / std::max(ly1 - ly0, 1e-12);
    return height - margin - (height - 2 * margin) * t;
  };
  static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_svg_log_plot: cannot open '" + path.string() + "'");
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  out << "<line x1='" << margin << "' y1='" << height - margin << "' x2='" << width - margin
      << "' y2='" << height - margin << "' stroke='black'/>\n";
  out << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
      << height - margin << "' stroke='black'/>\n";
  for (double e = ly0; e <= ly1; e += 1.0) {
    const double y = py(std::pow(10.0, e));
    out << "<line x1='" << margin - 4 << "' y1='" << y << "' x2='" << margin << "' y2='" << y
        << "' stroke='black'/>\n";
    out << "<text x='" << 6 << "' y='" << y + 4 << "' font-size='11'>1e" << static_cast<int>(e)
        << "</text>\n";
  }
  out << "<text x='" << width / 2 << "' y='" << height - 16 << "' font-size='13'>" << x_label
      << "</text>\n";
  out << "<text x='10' y='" << margin - 16 << "' font-size='13'>" << y_label << "</text>\n";
  int ci = 0;
  for (const auto& s : series) {
    out << "<polyline fill='none' stroke='" << colors[ci % 5] << "' stroke-width='1.5' points='";
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (s.y[i] <= 0.0) continue;
      out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    out << "'/>\n";
    out << "<text x='" << width - margin + 6 << "' y='" << margin + 16 * ci << "' fill='"
        << colors[ci % 5] << "' font-size='12'>" << s.label << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
}

void write_manifest(const ExperimentConfig& config, const std::vector<std::string>& files) {
  const fs::path dir(config.outdir);
  nlohmann::ordered_json manifest = nlohmann::ordered_json::parse(config_to_manifest_json(config));
  nlohmann::ordered_json root;
  root["config"] = manifest;
  root["config_hash"] = config_hash(config);
  root["files"] = files;
  std::ofstream out(dir / (file_prefix(config) + "manifest.json"));
  if (!out) throw std::runtime_error("emit_reports: cannot write manifest");
  out << root.dump(2) << "\n";
}

std::string estimator_list(const ExperimentConfig& config) {
  std::string s;
  for (size_t i = 0; i < config.estimators.size(); ++i) {
    if (i) s += "+";
    s += to_string(config.estimators[i]);
  }
  return s;
}

}  // namespace

std::string config_to_manifest_json(const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["scenario"] = to_string(config.scenario);
  j["n"] = config.n;
  j["m"] = config.m;
  j["q"] = config.q;
  j["p"] = config.p;
  j["rank"] = config.rank;
  j["nonsparsity_s"] = config.nonsparsity_s;
  j["noise_sd"] = config.noise_sd;
  j["shape"] = to_string(config.shape);
  j["scheme"] = to_string(config.scheme);
  j["estimators"] = estimator_list(config);
  j["grid_points"] = config.grid.points;
  j["grid_alpha_min"] = config.grid.alpha_min;
  j["grid_alpha_max"] = config.grid.alpha_max;
  j["grid_log_scale"] = config.grid.log_scale;
  j["seed"] = config.seed;
  j["replications"] = config.replications;
  j["n_validation"] = config.n_validation;
  j["n_test"] = config.n_test;
  j["solver"] = to_string(config.solver);
  j["alpha_matrix"] = config.alpha_matrix;
  j["alpha_vector"] = config.alpha_vector;
  j["alpha_vector_prime"] = config.alpha_vector_prime;
  j["efficiency_robj_tol"] = config.efficiency_robj_tol;
  j["admm_iteration_cap"] = config.admm_iteration_cap;
  j["time_limit_seconds"] = config.time_limit_seconds;
  j["n_ladder"] = config.n_ladder;
  j["consistency_penalty_scale"] = config.consistency_penalty_scale;
  j["csv_y"] = config.csv_y;
  j["csv_z"] = config.csv_z;
  j["csv_x"] = config.csv_x;
  j["standardize"] = config.standardize;
  j["standardize_response"] = config.standardize_response;
  j["outdir"] = config.outdir;
  j["paper_scale"] = config.paper_scale;
  j["ppdna"] = {{"nu", config.ppdna.nu},
                {"sigma0", config.ppdna.sigma0},
                {"sigma_max", config.ppdna.sigma_max},
                {"sigma_growth", config.ppdna.sigma_growth},
                {"eps0", config.ppdna.eps0},
                {"eps_decay", config.ppdna.eps_decay},
                {"kkt_tol", config.ppdna.kkt_tol},
                {"max_outer", config.ppdna.max_outer}};
  j["admm"] = {{"sigma", config.admm.sigma},
               {"step_tau", config.admm.step_tau},
               {"max_iter", config.admm.max_iter},
               {"kkt_tol", config.admm.kkt_tol}};
  j["apg"] = {{"max_iter", config.apg.max_iter}, {"kkt_tol", config.apg.kkt_tol}};
  return j.dump();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  // FNV-1a over the canonical serialization
  const std::string s = config_to_manifest_json(config);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void emit_reports(const ExperimentConfig& config, const StudyResult& study) {
  const fs::path dir = ensure_outdir(config);
  const std::string prefix = file_prefix(config);
  std::vector<std::string> files;

  CsvTable grid;
  grid.header = {"estimator", "alpha_mat", "alpha_vec", "rho", "lambda", "lambda_prime",
                 "validation_rmse", "status", "iterations", "seconds"};
  for (const auto& sel : study.selections)
    for (const auto& cell : sel.table)
      grid.rows.push_back({to_string(cell.estimator), fmt(cell.alpha_mat), fmt(cell.alpha_vec),
                           fmt(cell.levels.rho), fmt(cell.levels.lambda),
                           fmt(cell.levels.lambda_prime), fmt(cell.validation_rmse),
                           to_string(cell.status), std::to_string(cell.iterations),
                           fmt(cell.seconds)});
  write_csv((dir / (prefix + "grid.csv")).string(), grid);
  files.push_back(prefix + "grid.csv");

  CsvTable summary;
  summary.header = {"estimator", "scheme",     "mean_rmse_y",      "sd_rmse_y",
                    "mean_error_b", "sd_error_b", "mean_error_gamma", "sd_error_gamma",
                    "alpha_mat",  "alpha_vec"};
  for (const auto& s : study.summaries)
    summary.rows.push_back({to_string(s.estimator), to_string(config.scheme), fmt(s.mean_rmse),
                            fmt(s.sd_rmse), fmt(s.mean_error_b), fmt(s.sd_error_b),
                            fmt(s.mean_error_gamma), fmt(s.sd_error_gamma), fmt(s.alpha_mat),
                            fmt(s.alpha_vec)});
  write_csv((dir / (prefix + "summary.csv")).string(), summary);
  files.push_back(prefix + "summary.csv");

  CsvTable reps;
  reps.header = {"estimator", "replication", "rmse_y", "error_b", "error_gamma",
                 "rank_hat",  "nonsparsity", "status"};
  for (const auto& s : study.summaries)
    for (const auto& row : s.rows)
      reps.rows.push_back({to_string(row.estimator), std::to_string(row.replication),
                           fmt(row.eval.rmse_y), fmt(row.eval.error_b),
                           fmt(row.eval.error_gamma), std::to_string(row.eval.rank_hat),
                           fmt(row.eval.nonsparsity_gamma), to_string(row.status)});
  write_csv((dir / (prefix + "replications.csv")).string(), reps);
  files.push_back(prefix + "replications.csv");

  write_pgm(dir / (prefix + "b_true.pgm"), study.b_true);
  files.push_back(prefix + "b_true.pgm");
  for (const auto& [name, estimate] : study.example_estimates) {
    const std::string f = prefix + "b_" + name + ".pgm";
    write_pgm(dir / f, estimate.b_mat);
    files.push_back(f);
  }

  write_manifest(config, files);
}

void emit_reports(const ExperimentConfig& config, const EfficiencyResult& efficiency) {
  const fs::path dir = ensure_outdir(config);
  const std::string prefix = file_prefix(config);
  std::vector<std::string> files;

  CsvTable table;
  table.header = {"solver", "iterations", "robj", "seconds", "rank_hat", "nonsparsity",
                  "status", "obj_star", "rho", "lambda"};
  for (const auto& row : efficiency.rows)
    table.rows.push_back({to_string(row.solver), std::to_string(row.iterations), fmt(row.robj),
                          fmt(row.seconds), std::to_string(row.rank_hat),
                          fmt(row.nonsparsity_gamma), to_string(row.status),
                          fmt(efficiency.obj_star), fmt(efficiency.levels.rho),
                          fmt(efficiency.levels.lambda)});
  write_csv((dir / (prefix + "efficiency.csv")).string(), table);
  files.push_back(prefix + "efficiency.csv");

  std::vector<Series> series;
  for (const auto& [solver, trace] : efficiency.traces) {
    CsvTable tr;
    tr.header = {"iteration", "seconds", "objective", "robj", "eta_kkt"};
    Series s;
    s.label = solver;
    for (const auto& rec : trace) {
      const double robj = rel_obj(rec.objective, efficiency.obj_star);
      tr.rows.push_back({std::to_string(rec.iteration), fmt(rec.seconds), fmt(rec.objective),
                         fmt(robj), fmt(rec.eta_kkt)});
      s.x.push_back(rec.seconds);
      s.y.push_back(std::max(robj, 1e-16));
    }
    const std::string f = prefix + "trace_" + solver + ".csv";
    write_csv((dir / f).string(), tr);
    files.push_back(f);
    series.push_back(std::move(s));
  }
  write_svg_log_plot(dir / (prefix + "time_vs_robj.svg"), series, "time (s)", "R_obj");
  files.push_back(prefix + "time_vs_robj.svg");

  write_manifest(config, files);
}

void emit_reports(const ExperimentConfig& config, const ConsistencyResult& consistency) {
  const fs::path dir = ensure_outdir(config);
  const std::string prefix = file_prefix(config);
  std::vector<std::string> files;

  CsvTable table;
  table.header = {"n", "rho_n", "mean_error_b", "sd_error_b", "mean_error_gamma",
                  "sd_error_gamma"};
  for (const auto& row : consistency.rows)
    table.rows.push_back({std::to_string(row.n), fmt(row.rho_n), fmt(row.mean_error_b),
                          fmt(row.sd_error_b), fmt(row.mean_error_gamma),
                          fmt(row.sd_error_gamma)});
  write_csv((dir / (prefix + "consistency.csv")).string(), table);
  files.push_back(prefix + "consistency.csv");

  std::vector<Series> series(2);
  series[0].label = "Error-B";
  series[1].label = "Error-gamma";
  for (const auto& row : consistency.rows) {
    series[0].x.push_back(static_cast<double>(row.n));
    series[0].y.push_back(std::max(row.mean_error_b, 1e-16));
    series[1].x.push_back(static_cast<double>(row.n));
    series[1].y.push_back(std::max(row.mean_error_gamma, 1e-16));
  }
  write_svg_log_plot(dir / (prefix + "error_vs_n.svg"), series, "n", "mean error");
  files.push_back(prefix + "error_vs_n.svg");

  write_manifest(config, files);
}

void emit_reports(const ExperimentConfig& config, const CsvRunResult& run) {
  const fs::path dir = ensure_outdir(config);
  const std::string prefix = file_prefix(config);
  std::vector<std::string> files;

  CsvTable bmat;
  for (Index i = 0; i < run.estimate.b_mat.rows(); ++i) {
    std::vector<std::string> row;
    for (Index j = 0; j < run.estimate.b_mat.cols(); ++j) row.push_back(fmt(run.estimate.b_mat(i, j)));
    bmat.rows.push_back(std::move(row));
  }
  write_csv((dir / (prefix + "coefficients_b.csv")).string(), bmat);
  files.push_back(prefix + "coefficients_b.csv");

  CsvTable gvec;
  for (Index i = 0; i < run.estimate.gamma_vec.size(); ++i)
    gvec.rows.push_back({fmt(run.estimate.gamma_vec[i])});
  write_csv((dir / (prefix + "coefficients_gamma.csv")).string(), gvec);
  files.push_back(prefix + "coefficients_gamma.csv");

  CsvTable rep;
  rep.header = {"status", "iterations", "objective", "eta_kkt", "seconds", "rho", "lambda",
                "lambda_prime"};
  rep.rows.push_back({to_string(run.report.status), std::to_string(run.report.iterations),
                      fmt(run.report.objective), fmt(run.report.eta_kkt), fmt(run.report.seconds),
                      fmt(run.levels.rho), fmt(run.levels.lambda), fmt(run.levels.lambda_prime)});
  write_csv((dir / (prefix + "report.csv")).string(), rep);
  files.push_back(prefix + "report.csv");

  write_manifest(config, files);
}

}  // namespace matreg
