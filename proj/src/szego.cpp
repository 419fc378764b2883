#include "equizero/szego.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "equizero/csvio.hpp"
#include "equizero/errors.hpp"

namespace equizero {

namespace {

double log_abs_chebyshev(cplx z, int N) {
  const cplx w = z + std::sqrt(z - 1.0) * std::sqrt(z + 1.0);  // |w| >= 1 branch
  const double lw = std::log(std::abs(w));
  if (N * lw > 40.0) return N * lw - std::numbers::ln2_v<double>;
  cplx t_prev = 1.0, t_cur = z;
  if (N == 0) return 0.0;
  for (int k = 2; k <= N; ++k) {
    const cplx t_next = 2.0 * z * t_cur - t_prev;
    t_prev = t_cur;
    t_cur = t_next;
  }
  return std::log(std::abs(t_cur));
}

}  // namespace

double KernelField::normalized_log(PointView z) const {
  if (degree() < 1) throw ArgumentError("normalized_log: degree N >= 1 required");
  return log_diag(z) / (2.0 * degree());
}

double log_extremal_function(const DomainModel& model, PointView z, int N) {
  switch (model.kind) {
    case DomainKind::PolydiskTorus:
    case DomainKind::BallSphere:
    case DomainKind::UnitCircle:
      // attained by coordinate/linear-form powers
      return N * model.green_function(z);
    case DomainKind::Interval: {
      const cplx x = z[0];
      if (std::abs(x.real()) >= 1.0) return log_abs_chebyshev(x, N);
      if (N > 10)
        throw ArgumentError(
            "interval extremal function inside |Re z| < 1 requires the grid "
            "estimator, which is limited to N <= 10");
      return std::log(extremal_estimate_grid(model, z, N, 128));
    }
  }
  throw UnimplementedDomainError("extremal function: unknown domain kind");
}

double extremal_function(const DomainModel& model, PointView z, int N) {
  return std::exp(log_extremal_function(model, z, N));
}

double extremal_estimate_grid(const DomainModel& model, PointView z, int N,
                              int grid_resolution, LawsonInfo* info) {
  if (N > 10) throw ArgumentError("extremal_estimate_grid: N <= 10 required");
  if (model.m > 2) throw ArgumentError("extremal_estimate_grid: m <= 2 required");
  if (grid_resolution < 4) throw ArgumentError("extremal_estimate_grid: grid too small");

  const auto indices = enumerate_multiindices(model.m, N);
  const int d = int(indices.size());
  const auto grid = sup_grid(model, grid_resolution);
  const int n = int(grid.size());

  // monomial values at nodes and at z
  std::vector<std::vector<cplx>> V(n);
  for (int i = 0; i < n; ++i) {
    V[i].resize(d);
    for (int a = 0; a < d; ++a) V[i][a] = monomial_value(indices[a], grid[i]);
  }
  std::vector<cplx> v(d);
  for (int a = 0; a < d; ++a) v[a] = monomial_value(indices[a], z);

  std::vector<double> w(n, 1.0 / n);
  double best = 0.0;
  double prev_sup = -1.0;
  const int max_iter = 400;
  int it = 0;
  bool converged = false;
  double sup = 0.0;
  for (it = 0; it < max_iter; ++it) {
    CMat G(d, d);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          G(a, b) += w[i] * std::conj(V[i][a]) * V[i][b];
    std::vector<cplx> u(d);
    for (int a = 0; a < d; ++a) u[a] = std::conj(v[a]);
    if (!hermitian_solve(G, u)) break;
    cplx denom = 0.0;
    for (int a = 0; a < d; ++a) denom += v[a] * u[a];
    if (!(std::abs(denom) > 0.0)) break;

    sup = 0.0;
    std::vector<double> fmag(n);
    for (int i = 0; i < n; ++i) {
      cplx f = 0.0;
      for (int a = 0; a < d; ++a) f += V[i][a] * u[a];
      fmag[i] = std::abs(f / denom);
      sup = std::max(sup, fmag[i]);
    }
    if (sup <= 0.0) break;
    best = std::max(best, 1.0 / sup);

    if (prev_sup > 0.0 && std::abs(sup - prev_sup) < 1e-11 * sup) {
      converged = true;
      break;
    }
    prev_sup = sup;

    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      w[i] *= std::max(fmag[i], 1e-14 * sup);
      wsum += w[i];
    }
    for (int i = 0; i < n; ++i) w[i] /= wsum;
  }
  if (info) {
    info->iterations = it;
    info->converged = converged;
    info->grid_sup = sup;
  }
  return best;
}

SandwichResult sandwich_check(const KernelField& field, const DomainModel& model,
                              PointView z) {
  const int N = field.degree();
  const double log_ratio = field.log_diag(z) - 2.0 * log_extremal_function(model, z, N);
  SandwichResult r;
  r.ratio = std::exp(log_ratio);
  const double dim = double(polynomial_space_dim(model.m, N));
  r.lower_ok = r.ratio >= 1.0 / dim - 1e-12;
  return r;
}

ConvergenceTable convergence_table(const DomainModel& model, const std::vector<int>& N_list,
                                   const std::vector<Point>& grid, bool phi_column) {
  if (grid.empty()) throw ArgumentError("convergence_table: empty grid");
  std::vector<int> ns = N_list;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  ConvergenceTable table;
  table.grid = grid;
  for (int N : ns) {
    auto basis = std::make_shared<const OrthonormalBasis>(build_basis(model, N));
    KernelField field(basis);
    double dev_kernel = 0.0, dev_phi = 0.0;
    bool phi_any = false;
    for (const Point& z : grid) {
      const double vk = model.green_function(z);
      dev_kernel = std::max(dev_kernel, std::abs(field.normalized_log(z) - vk));
      if (phi_column) {
        if (model.kind == DomainKind::Interval && std::abs(z[0].real()) < 1.0)
          continue;  // no closed form inside the strip
        dev_phi = std::max(dev_phi, std::abs(log_extremal_function(model, z, N) / N - vk));
        phi_any = true;
      }
    }
    table.rows.push_back({N, dev_kernel, phi_any ? dev_phi : -1.0});
  }
  return table;
}

std::string kernel_slice_csv(const KernelField& field, const std::vector<Point>& points) {
  const int m = field.dimension();
  std::vector<std::string> cols;
  for (int i = 1; i <= m; ++i) {
    cols.push_back("re_z" + std::to_string(i));
    cols.push_back("im_z" + std::to_string(i));
  }
  cols.push_back("S_N");
  cols.push_back("normalized_log");
  CsvFile csv(cols);
  for (const Point& z : points) {
    std::vector<std::string> row;
    for (const cplx& c : z) {
      row.push_back(csv_cell(c.real()));
      row.push_back(csv_cell(c.imag()));
    }
    row.push_back(csv_cell(field.diag(z)));
    row.push_back(csv_cell(field.normalized_log(z)));
    csv.push_row(row);
  }
  return csv.body();
}

std::string convergence_table_csv(const ConvergenceTable& table) {
  const bool phi = !table.rows.empty() && table.rows.front().sup_dev_phi >= 0.0;
  CsvFile csv(phi ? std::vector<std::string>{"N", "sup_dev_logkernel", "sup_dev_phi"}
                  : std::vector<std::string>{"N", "sup_dev_logkernel"});
  for (const auto& row : table.rows) {
    if (phi)
      csv.push_row({csv_cell(row.N), csv_cell(row.sup_dev_logkernel), csv_cell(row.sup_dev_phi)});
    else
      csv.push_row({csv_cell(row.N), csv_cell(row.sup_dev_logkernel)});
  }
  return csv.body();
}

}  // namespace equizero
