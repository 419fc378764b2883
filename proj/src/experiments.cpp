#include "equizero/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "equizero/csvio.hpp"
#include "equizero/errors.hpp"
#include "equizero/parallel.hpp"
#include "equizero/rng.hpp"
#include "equizero/sphere_scaling.hpp"
#include "equizero/szego.hpp"
#include "equizero/zeros.hpp"

namespace equizero {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Runner {
  const ExperimentConfig& cfg;
  RunManifest manifest;
  int threads;

  explicit Runner(const ExperimentConfig& c) : cfg(c) {
    // EQUIZERO_THREADS overrides the config knob, which overrides hardware
    if (std::getenv("EQUIZERO_THREADS") != nullptr || c.threads <= 0)
      threads = default_thread_count();
    else
      threads = c.threads;
    manifest.config_echo = c.raw.to_json();
    std::filesystem::create_directories(cfg.output_dir);
  }

  void emit(const std::string& name, const std::string& body) {
    const auto path = cfg.output_dir / name;
    write_text_atomic(path, body);
    manifest.outputs.push_back({name, sha256_hex(body), body.size()});
  }

  template <class Fn>
  void stage(const std::string& name, Fn&& fn) {
    const auto t0 = Clock::now();
    fn();
    manifest.stages.push_back({name, ms_since(t0)});
  }

  void finish() {
    // manifest last: its presence certifies a complete run
    write_text_atomic(cfg.output_dir / "manifest.json", manifest.to_json());
  }

  // deterministic sample points with ||z|| <= radius (and, for the
  // interval, |Re z| >= 1 so the closed-form extremal function applies)
  std::vector<Point> random_points(int count, double radius, bool interval_strip) const {
    const GaussianStream stream{cfg.seed};
    std::vector<Point> pts;
    pts.reserve(count);
    std::uint64_t idx = 0;
    while (int(pts.size()) < count) {
      Point p(cfg.m);
      double n2 = 0.0;
      for (int i = 0; i < cfg.m; ++i) {
        const cplx g = stream.complex_gaussian(0x9999, idx++);
        p[i] = g;
        n2 += std::norm(g);
      }
      const double u = stream.uniform(0x9999, idx++);
      const double scale = radius * std::pow(u, 1.0 / (2.0 * cfg.m)) / std::sqrt(n2);
      for (int i = 0; i < cfg.m; ++i) p[i] *= scale;
      if (interval_strip) {
        double re = std::abs(p[0].real()) + 1.0;  // push outside the segment
        p[0] = cplx(p[0].real() < 0 ? -re : re, p[0].imag());
        if (std::abs(p[0]) > radius + 1.0) continue;
      }
      pts.push_back(std::move(p));
    }
    return pts;
  }
};

void run_converge(Runner& r) {
  const DomainModel& model = *r.cfg.domain;
  std::vector<Point> grid;
  if (!r.cfg.radii.empty() && model.m == 1) {
    for (double rad : r.cfg.radii)
      for (int a = 0; a < r.cfg.angles; ++a)
        grid.push_back({std::polar(rad, 2.0 * std::numbers::pi * (a + 0.5) / r.cfg.angles)});
  } else {
    grid = default_test_grid(model, r.cfg.radius);
  }
  ConvergenceTable table;
  r.stage("convergence_table",
          [&] { table = convergence_table(model, r.cfg.N_list, grid, true); });
  r.emit("convergence.csv", convergence_table_csv(table));
  // kernel slice at the largest degree, over the same grid
  const int N_top = *std::max_element(r.cfg.N_list.begin(), r.cfg.N_list.end());
  const KernelField field(
      std::make_shared<const OrthonormalBasis>(build_basis(model, N_top)));
  r.emit("kernel_slice.csv", kernel_slice_csv(field, grid));
  nlohmann::json dev = nlohmann::json::array();
  for (const auto& row : table.rows) dev.push_back(row.sup_dev_logkernel);
  r.manifest.metrics["sup_dev_logkernel"] = dev;
}

void run_sandwich(Runner& r) {
  const DomainModel& model = *r.cfg.domain;
  const int N = r.cfg.N_list.front();
  auto basis = std::make_shared<const OrthonormalBasis>(build_basis(model, N));
  const KernelField field(basis);
  const auto pts =
      r.random_points(r.cfg.points, r.cfg.radius, model.kind == DomainKind::Interval);
  std::vector<SandwichResult> results(pts.size());
  r.stage("sandwich", [&] {
    parallel_for(pts.size(), r.threads,
                 [&](std::size_t i) { results[i] = sandwich_check(field, model, pts[i]); });
  });
  std::vector<std::string> cols;
  for (int i = 1; i <= model.m; ++i) {
    cols.push_back("re_z" + std::to_string(i));
    cols.push_back("im_z" + std::to_string(i));
  }
  cols.push_back("ratio");
  cols.push_back("lower_ok");
  CsvFile csv(cols);
  int failures = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::string> row;
    for (const cplx& c : pts[i]) {
      row.push_back(csv_cell(c.real()));
      row.push_back(csv_cell(c.imag()));
    }
    row.push_back(csv_cell(results[i].ratio));
    row.push_back(results[i].lower_ok ? "1" : "0");
    csv.push_row(row);
    if (!results[i].lower_ok) ++failures;
  }
  r.emit("sandwich.csv", csv.body());
  r.manifest.metrics["lower_bound_failures"] = failures;
}

void run_zeros(Runner& r) {
  const DomainModel& model = *r.cfg.domain;
  const int N = r.cfg.N_list.front();
  const auto t0 = Clock::now();
  const GaussianEnsemble ensemble = GaussianEnsemble::l2(model, N, r.cfg.seed);
  std::vector<ZeroSample> samples(r.cfg.trials);
  r.stage("roots", [&] {
    parallel_for(std::size_t(r.cfg.trials), r.threads, [&](std::size_t t) {
      samples[t] = univariate_roots(sample_polynomial(ensemble, t));
    });
  });
  CsvFile roots_csv({"trial", "re", "im"});
  for (const auto& s : samples)
    for (const cplx& root : s.roots)
      roots_csv.push_row({csv_cell(int(s.trial)), csv_cell(root.real()), csv_cell(root.imag())});
  r.emit("roots.csv", roots_csv.body());

  MassEstimate est;
  est.trials = r.cfg.trials;
  std::vector<double> fractions(r.cfg.trials);
  for (int t = 0; t < r.cfg.trials; ++t) {
    int count = 0;
    for (const cplx& root : samples[t].roots)
      if (r.cfg.region->contains(model, root)) ++count;
    fractions[t] = double(count) / N;
    est.mean_fraction += fractions[t];
  }
  est.mean_fraction /= r.cfg.trials;
  if (r.cfg.trials > 1) {
    double ss = 0.0;
    for (double f : fractions) ss += (f - est.mean_fraction) * (f - est.mean_fraction);
    est.std_error = std::sqrt(ss / (r.cfg.trials - 1)) / std::sqrt(double(r.cfg.trials));
  }

  nlohmann::json summary;
  summary["seed"] = r.cfg.seed;
  summary["N"] = N;
  summary["m"] = model.m;
  summary["domain"] = domain_kind_name(model.kind);
  summary["variant"] = "L2mu";
  summary["trials"] = r.cfg.trials;
  summary["region"] = region_to_config(*r.cfg.region).to_json();
  summary["mean_fraction"] = est.mean_fraction;
  summary["std_error"] = est.std_error;
  summary["wall_time_ms"] = ms_since(t0);
  r.emit("summary.json", summary.dump(2));
  r.manifest.metrics["mean_fraction"] = est.mean_fraction;
  r.manifest.metrics["std_error"] = est.std_error;
  r.manifest.metrics["equilibrium_mass"] = equilibrium_mass(model, *r.cfg.region);
}

void run_density(Runner& r) {
  const DomainModel& model = *r.cfg.domain;
  const int N = r.cfg.N_list.front();
  const int k = r.cfg.k > 0 ? r.cfg.k : model.m;
  auto basis = std::make_shared<const OrthonormalBasis>(build_basis(model, N));
  const KernelField field(basis);

  const double lo = r.cfg.r_points > 0 ? r.cfg.r_lo : 0.5;
  const double hi = r.cfg.r_points > 0 ? r.cfg.r_hi : 1.5;
  const int nr = r.cfg.r_points > 0 ? r.cfg.r_points : 21;
  std::vector<Point> pts;
  for (int i = 0; i < nr; ++i) {
    const double rad = lo + (hi - lo) * i / std::max(1, nr - 1);
    for (int a = 0; a < r.cfg.angles; ++a) {
      Point p(model.m, cplx(0.0));
      p[0] = std::polar(rad, 2.0 * std::numbers::pi * a / r.cfg.angles);
      if (model.m > 1) {
        // spread along the diagonal so multivariate grids see generic points
        for (int i2 = 0; i2 < model.m; ++i2)
          p[i2] = p[0] / std::sqrt(double(model.m));
      }
      pts.push_back(std::move(p));
    }
  }
  DensityGrid grid;
  r.stage("density_grid",
          [&] { grid = density_grid(field, pts, k, r.cfg.step, r.threads); });
  r.emit("density.csv", density_grid_csv(grid));
  r.manifest.metrics["curvature_warning"] = grid.any_curvature_warning;
}

void run_scaling(Runner& r) {
  for (int N : r.cfg.N_list) {
    ScalingProfile profile;
    r.stage("scaling_N" + std::to_string(N), [&] {
      profile = scaling_profile(r.cfg.m, N,
                                uniform_grid(-r.cfg.u_max, r.cfg.u_max, r.cfg.u_points));
    });
    r.emit("scaling_N" + std::to_string(N) + ".csv", scaling_profile_csv(profile));
    r.emit("scaling_N" + std::to_string(N) + ".meta.json",
           scaling_profile_meta_json(profile));
    r.manifest.metrics["max_err_N" + std::to_string(N)] = profile.max_err();
  }
}

void run_bm(Runner& r) {
  const DomainModel& model = *r.cfg.domain;
  const int N = r.cfg.N_list.front();
  const OrthonormalBasis basis = build_basis(model, N);
  const int res = r.cfg.sup_resolution > 0 ? r.cfg.sup_resolution : 8 * N;
  BMReport report;
  r.stage("bm_ratio", [&] {
    report = bm_ratio(basis, sup_grid(model, res), r.cfg.epsilon, r.cfg.trials, r.cfg.seed);
  });
  r.emit("bm_report.json", bm_report_json(report));
  std::ostringstream basis_csv;
  export_basis_csv(basis, basis_csv);
  r.emit("basis.csv", basis_csv.str());
  r.manifest.metrics["estimated_C"] = report.estimated_C;
}

void run_su_flat(Runner& r) {
  double worst = 0.0;
  CsvFile csv({"N", "point", "ratio_deviation"});
  r.stage("su_flat", [&] {
    for (int N : r.cfg.N_list) {
      const GaussianEnsemble ensemble = GaussianEnsemble::su(r.cfg.m, N, r.cfg.seed);
      const KernelField field(ensemble.basis);
      const auto pts = r.random_points(r.cfg.points, 2.0, false);
      std::vector<double> devs(pts.size());
      parallel_for(pts.size(), r.threads, [&](std::size_t i) {
        const double step = r.cfg.step > 0.0 ? r.cfg.step : default_fd_step(pts[i]);
        const double density = expected_density(field, pts[i], r.cfg.m, step);
        const double reference = su_flat_reference_density(pts[i], N, r.cfg.m);
        devs[i] = std::abs(density / reference - 1.0);
      });
      for (std::size_t i = 0; i < pts.size(); ++i) {
        csv.push_row({csv_cell(N), csv_cell(int(i)), csv_cell(devs[i])});
        worst = std::max(worst, devs[i]);
      }
    }
  });
  r.emit("su_flat.csv", csv.body());
  r.manifest.metrics["max_ratio_deviation"] = worst;
}

}  // namespace

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["config"] = config_echo;
  j["version"] = version;
  j["stages"] = nlohmann::json::array();
  for (const auto& s : stages)
    j["stages"].push_back({{"name", s.name}, {"wall_ms", s.wall_ms}});
  j["outputs"] = nlohmann::json::array();
  for (const auto& o : outputs)
    j["outputs"].push_back({{"name", o.name}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  j["metrics"] = metrics;
  return j.dump(2);
}

RunManifest run_experiment(const ExperimentConfig& config) {
  const auto violations = validate(config);
  if (!violations.empty()) {
    std::string msg = "config rejected:";
    for (const auto& v : violations) msg += "\n  " + v.field + ": " + v.message;
    throw ValidationError(msg);
  }
  Runner runner(config);
  switch (config.experiment) {
    case ExperimentKind::Converge: run_converge(runner); break;
    case ExperimentKind::Sandwich: run_sandwich(runner); break;
    case ExperimentKind::Zeros: run_zeros(runner); break;
    case ExperimentKind::Density: run_density(runner); break;
    case ExperimentKind::Scaling: run_scaling(runner); break;
    case ExperimentKind::Bm: run_bm(runner); break;
    case ExperimentKind::SuFlat: run_su_flat(runner); break;
  }
  runner.finish();
  return runner.manifest;
}

}  // namespace equizero
