#include "equizero/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "equizero/csvio.hpp"
#include "equizero/errors.hpp"
#include "equizero/parallel.hpp"
#include "equizero/rng.hpp"

namespace equizero {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kCompanionCap = 500;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

GaussianEnsemble GaussianEnsemble::l2(const DomainModel& model, int N, std::uint64_t seed) {
  GaussianEnsemble e;
  e.basis = std::make_shared<const OrthonormalBasis>(build_basis(model, N));
  e.seed = seed;
  e.variant = EnsembleVariant::L2mu;
  return e;
}

GaussianEnsemble GaussianEnsemble::su(int m, int N, std::uint64_t seed) {
  GaussianEnsemble e;
  e.basis = std::make_shared<const OrthonormalBasis>(su_flat_basis(m, N));
  e.seed = seed;
  e.variant = EnsembleVariant::SUm1;
  return e;
}

RandomPolynomial sample_polynomial(const GaussianEnsemble& ensemble, std::uint64_t trial) {
  const OrthonormalBasis& basis = *ensemble.basis;
  RandomPolynomial poly;
  poly.basis = ensemble.basis;
  poly.seed = ensemble.seed;
  poly.trial = trial;
  poly.c.resize(basis.dim);
  const GaussianStream stream{ensemble.seed};
  for (int j = 0; j < basis.dim; ++j) poly.c[j] = stream.complex_gaussian(trial, j);

  poly.b.assign(basis.dim, cplx(0.0));
  switch (basis.form) {
    case BasisForm::Identity:
      poly.b = poly.c;
      break;
    case BasisForm::Diagonal:
      for (int j = 0; j < basis.dim; ++j) poly.b[j] = poly.c[j] * basis.coeffs(j, j).real();
      break;
    default:
      for (int j = 0; j < basis.dim; ++j)
        for (int k = 0; k <= j; ++k) poly.b[k] += poly.c[j] * basis.coeffs(j, k);
      break;
  }
  return poly;
}

cplx RandomPolynomial::evaluate(cplx z) const {
  if (basis->m != 1) throw ArgumentError("RandomPolynomial::evaluate: m = 1 only");
  if (basis->form == BasisForm::ChebyshevRecurrence) {
    // forward recurrence on f = a_0 + sum a_k T_k, a_k = sqrt(2) c_k
    const double rt2 = std::sqrt(2.0);
    cplx t_prev = 1.0, t_cur = z;
    cplx f = c[0];
    if (basis->N >= 1) f += rt2 * c[1] * z;
    for (int k = 2; k <= basis->N; ++k) {
      const cplx t_next = 2.0 * z * t_cur - t_prev;
      f += rt2 * c[k] * t_next;
      t_prev = t_cur;
      t_cur = t_next;
    }
    return f;
  }
  cplx f = 0.0;
  for (int k = basis->dim - 1; k >= 0; --k) f = f * z + b[k];
  return f;
}

// ---- rootfinding ------------------------------------------------------------

namespace {

// Parlett-Reinsch diagonal balancing (radix 2) before the Schur pass;
// companion matrices are badly scaled whenever the leading coefficient
// draw is small.
void balance_inplace(Eigen::MatrixXcd& A) {
  const int n = int(A.rows());
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) {
          c += std::abs(A(j, i));
          r += std::abs(A(i, j));
        }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c > r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if (f != 1.0 && c + r < 0.95 * s) {
        done = false;
        A.row(i) /= f;
        A.col(i) *= f;
      }
    }
  }
}

std::vector<cplx> eigen_roots(Eigen::MatrixXcd M) {
  balance_inplace(M);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(M, false);
  std::vector<cplx> roots(M.rows());
  for (int i = 0; i < M.rows(); ++i) roots[i] = solver.eigenvalues()(i);
  return roots;
}

int effective_degree(const std::vector<cplx>& coeffs) {
  double biggest = 0.0;
  for (const cplx& v : coeffs) biggest = std::max(biggest, std::abs(v));
  if (biggest == 0.0)
    throw DegenerateSampleError("zero polynomial sampled; check RNG wiring");
  int deg = 0;
  for (int k = int(coeffs.size()) - 1; k >= 0; --k)
    if (std::abs(coeffs[k]) > 1e-13 * biggest) {
      deg = k;
      break;
    }
  return deg;
}

std::vector<cplx> roots_monomial(const std::vector<cplx>& b, int deg) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 0; i + 1 < deg; ++i) M(i + 1, i) = 1.0;
  for (int i = 0; i < deg; ++i) M(i, deg - 1) = -b[i] / b[deg];
  auto roots = eigen_roots(std::move(M));
  // one Newton step per root (Horner value and derivative)
  for (cplx& r : roots) {
    cplx f = b[deg], df = 0.0;
    for (int k = deg - 1; k >= 0; --k) {
      df = df * r + f;
      f = f * r + b[k];
    }
    if (std::abs(df) > 0.0) {
      const cplx step = f / df;
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) r -= step;
    }
  }
  return roots;
}

std::vector<cplx> roots_chebyshev(const std::vector<cplx>& a, int deg) {
  if (deg == 1) return {-a[0] / a[1]};  // a_0 T_0 + a_1 T_1, T_1 = x
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(deg, deg);
  if (deg >= 2) M(1, 0) = 1.0;
  for (int j = 1; j <= deg - 2; ++j) {
    M(j - 1, j) = 0.5;
    M(j + 1, j) = 0.5;
  }
  if (deg >= 2) M(deg - 2, deg - 1) += 0.5;
  for (int k = 0; k < deg; ++k) M(k, deg - 1) -= a[k] / (2.0 * a[deg]);
  auto roots = eigen_roots(std::move(M));
  for (cplx& r : roots) {
    if (std::abs(r) > 1.5) continue;  // stray roots: recurrence values would blow up
    cplx t_prev = 1.0, t_cur = r, d_prev = 0.0, d_cur = 1.0;
    cplx f = a[0], df = 0.0;
    if (deg >= 1) {
      f += a[1] * r;
      df += a[1];
    }
    for (int k = 2; k <= deg; ++k) {
      const cplx t_next = 2.0 * r * t_cur - t_prev;
      const cplx d_next = 2.0 * t_cur + 2.0 * r * d_cur - d_prev;
      f += a[k] * t_next;
      df += a[k] * d_next;
      t_prev = t_cur;
      t_cur = t_next;
      d_prev = d_cur;
      d_cur = d_next;
    }
    if (std::abs(df) > 0.0) {
      const cplx step = f / df;
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) r -= step;
    }
  }
  return roots;
}

}  // namespace

ZeroSample univariate_roots(const RandomPolynomial& poly) {
  if (poly.basis->m != 1) throw ArgumentError("univariate_roots: m = 1 only");
  ZeroSample sample;
  sample.trial = poly.trial;
  sample.seed = poly.seed;

  if (poly.basis->form == BasisForm::ChebyshevRecurrence) {
    std::vector<cplx> a(poly.c.size());
    a[0] = poly.c[0];
    const double rt2 = std::sqrt(2.0);
    for (std::size_t k = 1; k < poly.c.size(); ++k) a[k] = rt2 * poly.c[k];
    sample.degree_actual = effective_degree(a);
    if (sample.degree_actual > kCompanionCap)
      throw CapacityError("univariate_roots: degree beyond companion cap 500");
    if (sample.degree_actual > 0)
      sample.roots = roots_chebyshev(a, sample.degree_actual);
    return sample;
  }

  sample.degree_actual = effective_degree(poly.b);
  if (sample.degree_actual > kCompanionCap)
    throw CapacityError("univariate_roots: degree beyond companion cap 500");
  if (sample.degree_actual > 0)
    sample.roots = roots_monomial(poly.b, sample.degree_actual);
  return sample;
}

double root_residual(const RandomPolynomial& poly, const ZeroSample& sample) {
  double biggest = 0.0;
  for (const cplx& v : poly.b) biggest = std::max(biggest, std::abs(v));
  double worst = 0.0;
  const int N = poly.basis->N;
  for (const cplx& r : sample.roots) {
    const double log_bound = std::log1p(biggest) + N * std::log1p(std::abs(r));
    const double fr = std::abs(poly.evaluate(r));
    if (fr == 0.0) continue;
    worst = std::max(worst, std::exp(std::log(fr) - log_bound));
  }
  return worst;
}

MassEstimate empirical_zero_mass(const GaussianEnsemble& ensemble, const RegionSpec& region,
                                 int trials, int threads) {
  if (ensemble.dimension() != 1)
    throw ArgumentError("empirical_zero_mass: m = 1 only");
  if (trials < 1) throw ArgumentError("empirical_zero_mass: trials >= 1");
  const DomainModel& model = ensemble.basis->source;
  const int N = ensemble.degree();
  std::vector<double> fractions(trials);
  parallel_for(std::size_t(trials), threads, [&](std::size_t t) {
    const RandomPolynomial poly = sample_polynomial(ensemble, t);
    const ZeroSample sample = univariate_roots(poly);
    int count = 0;
    for (const cplx& r : sample.roots)
      if (region.contains(model, r)) ++count;
    fractions[t] = double(count) / double(N);
  });
  MassEstimate est;
  est.trials = trials;
  for (double f : fractions) est.mean_fraction += f;
  est.mean_fraction /= trials;
  if (trials > 1) {
    double ss = 0.0;
    for (double f : fractions) ss += (f - est.mean_fraction) * (f - est.mean_fraction);
    est.std_error = std::sqrt(ss / (trials - 1)) / std::sqrt(double(trials));
  }
  return est;
}

// ---- expected densities ------------------------------------------------------

double default_fd_step(PointView z) {
  double n2 = 0.0;
  for (const cplx& c : z) n2 += std::norm(c);
  return std::max(1e-4, 1e-3 * (1.0 + std::sqrt(n2)));
}

namespace {

CMat hessian_once(const KernelField& field, PointView z, double h) {
  const int m = field.dimension();
  Point work(z.begin(), z.end());
  const auto eval = [&](int coord, double da, int coord2, double da2) {
    Point p = work;
    p[coord / 2] += (coord % 2 == 0) ? cplx(da, 0.0) : cplx(0.0, da);
    if (coord2 >= 0)
      p[coord2 / 2] += (coord2 % 2 == 0) ? cplx(da2, 0.0) : cplx(0.0, da2);
    const double v = field.log_diag(p);
    if (!std::isfinite(v)) throw StepError("expected_density: non-finite finite difference");
    return v;
  };
  const double L0 = eval(0, 0.0, -1, 0.0);
  const int n_real = 2 * m;
  // second partials D[a][b]
  std::vector<std::vector<double>> D(n_real, std::vector<double>(n_real, 0.0));
  for (int a = 0; a < n_real; ++a)
    D[a][a] = (eval(a, h, -1, 0.0) - 2.0 * L0 + eval(a, -h, -1, 0.0)) / (h * h);
  for (int a = 0; a < n_real; ++a)
    for (int b = a + 1; b < n_real; ++b) {
      D[a][b] = (eval(a, h, b, h) - eval(a, h, b, -h) - eval(a, -h, b, h) +
                 eval(a, -h, b, -h)) /
                (4.0 * h * h);
      D[b][a] = D[a][b];
    }
  CMat H(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      const int xj = 2 * j, yj = 2 * j + 1, xk = 2 * k, yk = 2 * k + 1;
      const double re = 0.25 * (D[xj][xk] + D[yj][yk]);
      const double im = 0.25 * (D[xj][yk] - D[yj][xk]);
      H(j, k) = (j == k) ? cplx(re, 0.0) : cplx(re, im);
    }
  return H;
}

std::vector<double> hermitian_eigenvalues(const CMat& H) {
  const int m = H.rows;
  if (m == 1) return {H(0, 0).real()};
  Eigen::MatrixXcd M(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) M(i, j) = H(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(M, Eigen::EigenvaluesOnly);
  std::vector<double> ev(m);
  for (int i = 0; i < m; ++i) ev[i] = solver.eigenvalues()(i);
  return ev;
}

double elementary_symmetric(const std::vector<double>& lambda, int k) {
  const int m = int(lambda.size());
  std::vector<double> e(k + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = std::min(k, i + 1); j >= 1; --j) e[j] += lambda[i] * e[j - 1];
  return e[k];
}

}  // namespace

CMat complex_hessian_fd(const KernelField& field, PointView z, double step,
                        bool richardson) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw StepError("expected_density: step must be positive and finite");
  CMat H = hessian_once(field, z, step);
  if (!richardson) return H;
  const CMat H2 = hessian_once(field, z, step / 2.0);
  CMat out(H.rows, H.cols);
  for (int i = 0; i < H.rows; ++i)
    for (int j = 0; j < H.cols; ++j) out(i, j) = (4.0 * H2(i, j) - H(i, j)) / 3.0;
  return out;
}

DensityResult expected_density_detail(const KernelField& field, PointView z, int k,
                                      double step, bool richardson) {
  const int m = field.dimension();
  if (k < 1 || k > m) throw ArgumentError("expected_density: 1 <= k <= m required");
  const CMat H = complex_hessian_fd(field, z, step, richardson);
  const auto lambda = hermitian_eigenvalues(H);
  double lam_max = 0.0, lam_min = 0.0;
  for (double l : lambda) {
    lam_max = std::max(lam_max, l);
    lam_min = std::min(lam_min, l);
  }
  DensityResult res;
  // log S_N is plurisubharmonic: H >= 0 up to discretization error
  res.curvature_warning = lam_min < -1e-6 * std::max(1.0, lam_max);
  double density = factorial(k) * elementary_symmetric(lambda, k) / std::pow(kPi, k);
  if (density < -1e-9 * std::max(1.0, std::abs(lam_max)))
    res.curvature_warning = true;
  res.value = std::max(density, 0.0);
  return res;
}

double expected_density(const KernelField& field, PointView z, int k, double step) {
  return expected_density_detail(field, z, k, step).value;
}

WedgeResult wedge_consistency(const KernelField& field, PointView z, double step) {
  const int m = field.dimension();
  if (m < 2) throw ArgumentError("wedge_consistency: m >= 2 required");
  const CMat H = complex_hessian_fd(field, z, step, true);
  const auto lambda = hermitian_eigenvalues(H);
  WedgeResult w;
  w.lhs = factorial(m) * elementary_symmetric(lambda, m) / std::pow(kPi, m);
  Eigen::MatrixXcd M(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) M(i, j) = H(i, j);
  w.rhs = factorial(m) * M.determinant().real() / std::pow(kPi, m);
  const double scale = std::max({std::abs(w.lhs), std::abs(w.rhs), 1e-300});
  w.rel_err = std::abs(w.lhs - w.rhs) / scale;
  return w;
}

double su_flat_reference_density(PointView z, int N, int m) {
  double n2 = 0.0;
  for (const cplx& c : z) n2 += std::norm(c);
  return factorial(m) * std::pow(double(N) / kPi, m) * std::pow(1.0 + n2, -(m + 1));
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double lm = 0.5 * (a + mid), rm = 0.5 * (mid + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, mid, fa, flm, fm, tol / 2.0, depth - 1) +
         adaptive_simpson(f, mid, b, fm, frm, fb, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  // uneven initial panels: symmetric integrands can fool the adaptive
  // termination test on a single panel
  const double cuts[] = {0.0, 0.17, 0.36, 0.52, 0.71, 1.0};
  double total = 0.0;
  for (int i = 0; i + 1 < 6; ++i) {
    const double lo = a + (b - a) * cuts[i];
    const double hi = a + (b - a) * cuts[i + 1];
    const double mid = 0.5 * (lo + hi);
    total += adaptive_simpson(f, lo, hi, f(lo), f(mid), f(hi), tol / 5.0, 26);
  }
  return total;
}

}  // namespace

std::vector<CapturedMassRow> density_vs_equilibrium(
    const DomainModel& model, const std::vector<int>& N_list,
    const std::vector<std::pair<double, double>>& annuli) {
  if (model.kind != DomainKind::UnitCircle && model.kind != DomainKind::BallSphere)
    throw RegionMismatchError(
        "density_vs_equilibrium: radial captured mass needs a circularly symmetric "
        "ensemble (circle or ball)");
  const int m = model.m;
  const double sphere_area = 2.0 * std::pow(kPi, m) / factorial(m - 1);
  std::vector<CapturedMassRow> rows;
  for (int N : N_list) {
    auto basis = std::make_shared<const OrthonormalBasis>(build_basis(model, N));
    const KernelField field(basis);
    const auto radial_density = [&](double r) {
      Point z(m, cplx(0.0));
      z[0] = r;
      const double step = std::min(default_fd_step(z), 0.05 / (1.0 + 0.02 * N));
      return expected_density(field, z, m, step) * sphere_area * std::pow(r, 2 * m - 1);
    };
    for (const auto& [lo, hi] : annuli) {
      double total = 0.0;
      // split at the Silov radius: the density peaks there with width ~1/N
      std::vector<double> cuts = {lo};
      if (lo < 1.0 && 1.0 < hi) cuts.push_back(1.0);
      cuts.push_back(hi);
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += integrate(radial_density, cuts[i], cuts[i + 1], 1e-7 * std::pow(double(N), m));
      rows.push_back({N, lo, hi, total / std::pow(double(N), m)});
    }
  }
  return rows;
}

DensityGrid density_grid(const KernelField& field, const std::vector<Point>& points, int k,
                         double step, int threads) {
  DensityGrid grid;
  grid.points = points;
  grid.k = k;
  grid.hessian_step = step;
  grid.values.assign(points.size(), 0.0);
  std::vector<char> warn(points.size(), 0);
  parallel_for(points.size(), threads, [&](std::size_t i) {
    const double h = step > 0.0 ? step : default_fd_step(points[i]);
    const DensityResult r = expected_density_detail(field, points[i], k, h);
    grid.values[i] = r.value;
    warn[i] = r.curvature_warning ? 1 : 0;
  });
  for (char w : warn) grid.any_curvature_warning |= (w != 0);
  return grid;
}

std::string density_grid_csv(const DensityGrid& grid) {
  const int m = grid.points.empty() ? 1 : int(grid.points.front().size());
  std::vector<std::string> cols;
  for (int i = 1; i <= m; ++i) {
    cols.push_back("re_z" + std::to_string(i));
    cols.push_back("im_z" + std::to_string(i));
  }
  cols.push_back("k");
  cols.push_back("density");
  CsvFile csv(cols);
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    std::vector<std::string> row;
    for (const cplx& c : grid.points[i]) {
      row.push_back(csv_cell(c.real()));
      row.push_back(csv_cell(c.imag()));
    }
    row.push_back(csv_cell(grid.k));
    row.push_back(csv_cell(grid.values[i]));
    csv.push_row(row);
  }
  return csv.body();
}

}  // namespace equizero
