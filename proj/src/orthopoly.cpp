#include "equizero/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

#include <nlohmann/json.hpp>

#include "equizero/csvio.hpp"
#include "equizero/errors.hpp"
#include "equizero/rng.hpp"

namespace equizero {

namespace {

constexpr double kPi = std::numbers::pi;

// parent pointers for incremental monomial evaluation in graded order
std::vector<std::pair<int, int>> monomial_parents(const std::vector<MultiIndex>& indices) {
  std::map<std::vector<int>, int> position;
  for (std::size_t a = 0; a < indices.size(); ++a) position[indices[a].exponents] = int(a);
  std::vector<std::pair<int, int>> parents(indices.size(), {-1, -1});
  for (std::size_t a = 0; a < indices.size(); ++a) {
    if (indices[a].total == 0) continue;
    std::vector<int> e = indices[a].exponents;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0) {
        e[i] -= 1;
        parents[a] = {position.at(e), int(i)};
        break;
      }
    }
  }
  return parents;
}

std::vector<cplx> monomial_table(const std::vector<std::pair<int, int>>& parents,
                                 PointView z) {
  std::vector<cplx> table(parents.size());
  if (!table.empty()) table[0] = 1.0;
  for (std::size_t a = 1; a < parents.size(); ++a)
    table[a] = table[parents[a].first] * z[parents[a].second];
  return table;
}

double exact_moment_diag_inv(const DomainModel& model, const MultiIndex& J) {
  // 1 / G[J,J] for the diagonal domains
  switch (model.kind) {
    case DomainKind::UnitCircle:
    case DomainKind::PolydiskTorus:
      return 1.0;
    case DomainKind::BallSphere:
      return binomial(J.total + model.m - 1, model.m - 1) * multinomial(J);
    default:
      throw UnimplementedDomainError("no diagonal moments for this domain");
  }
}

double arcsine_moment(int degree) {
  if (degree % 2 == 1) return 0.0;
  const int n = degree / 2;
  return binomial(2 * n, n) * std::pow(0.5, 2 * n);
}

}  // namespace

CMat moment_matrix(const DomainModel& model, int N) {
  const auto indices = enumerate_multiindices(model.m, N);
  const int d = int(indices.size());
  CMat G(d, d);
  if (model.kind == DomainKind::Interval) {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        G(a, b) = arcsine_moment(indices[a].total + indices[b].total);
    return G;
  }
  for (int a = 0; a < d; ++a) G(a, a) = 1.0 / exact_moment_diag_inv(model, indices[a]);
  return G;
}

CMat moment_matrix(const QuadratureRule& rule, int N) {
  if (rule.exact && rule.max_exact_gram_degree < N) {
    DomainModel model{rule.kind, rule.m, ""};
    throw InsufficientResolutionError(
        "quadrature resolution " + std::to_string(rule.resolution) +
            " cannot integrate degree-" + std::to_string(N) + " Gram moments",
        min_resolution_for_degree(model, N));
  }
  const auto indices = enumerate_multiindices(rule.m, N);
  const auto parents = monomial_parents(indices);
  const int d = int(indices.size());
  const int n_nodes = int(rule.nodes.size());

  std::vector<cplx> values(std::size_t(n_nodes) * d);
  for (int p = 0; p < n_nodes; ++p) {
    const auto table = monomial_table(parents, rule.nodes[p]);
    std::copy(table.begin(), table.end(), values.begin() + std::size_t(p) * d);
  }
  CMat G(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      DDC acc(DD(0.0), DD(0.0));
      for (int p = 0; p < n_nodes; ++p) {
        const cplx va = values[std::size_t(p) * d + a];
        const cplx vb = values[std::size_t(p) * d + b];
        const cplx prod = va * std::conj(vb) * rule.weights[p];
        acc = acc + DDC(prod.real(), prod.imag());
      }
      G(a, b) = cplx(acc.re.value(), acc.im.value());
      G(b, a) = std::conj(G(a, b));
    }
  return G;
}

CMat orthonormalize(const CMat& G, double min_rel_pivot) {
  DDCMat L(G.rows);
  double pivot_ratio = 0.0;
  if (!cholesky_dd(G, L, &pivot_ratio))
    throw ConditioningError(
        "moment matrix is numerically singular; use an exact-moment provider or lower N",
        pivot_ratio);
  CMat A = to_double(lower_inverse_dd(L));
  // lambda_min(G) = 1/||G^{-1}|| = 1/sigma_max(A)^2
  const double lambda_min = 1.0 / spectral_norm_sq(A);
  const double lambda_max = hermitian_lambda_max(G);
  if (lambda_min < min_rel_pivot * lambda_max)
    throw ConditioningError(
        "moment matrix conditioning below floor (lambda_min/lambda_max ~ " +
            std::to_string(lambda_min / lambda_max) +
            "); use an exact-moment provider or lower N",
        lambda_min);
  return A;
}

namespace {

OrthonormalBasis basis_shell(const DomainModel& model, int N) {
  OrthonormalBasis b;
  b.source = model;
  b.m = model.m;
  b.N = N;
  b.indices = enumerate_multiindices(model.m, N);
  b.dim = int(b.indices.size());
  b.parents = monomial_parents(b.indices);
  return b;
}

void fill_diagonal(OrthonormalBasis& b, const std::vector<double>& diag) {
  b.coeffs = CMat(b.dim, b.dim);
  b.log_diag.resize(b.dim);
  for (int j = 0; j < b.dim; ++j) {
    b.coeffs(j, j) = diag[j];
    b.log_diag[j] = std::log(diag[j]);
  }
}

OrthonormalBasis chebyshev_basis(const DomainModel& model, int N) {
  OrthonormalBasis b = basis_shell(model, N);
  b.form = BasisForm::ChebyshevRecurrence;
  b.coeffs = CMat(b.dim, b.dim);
  const double rt2 = std::sqrt(2.0);
  std::vector<double> t_prev = {1.0}, t_cur = {0.0, 1.0};
  b.coeffs(0, 0) = 1.0;
  if (N >= 1) b.coeffs(1, 1) = rt2;
  for (int k = 2; k <= N; ++k) {
    std::vector<double> t_next(k + 1, 0.0);
    for (int i = 0; i < k; ++i) t_next[i + 1] = 2.0 * t_cur[i];
    for (std::size_t i = 0; i < t_prev.size(); ++i) t_next[i] -= t_prev[i];
    for (int i = 0; i <= k; ++i) b.coeffs(k, i) = rt2 * t_next[i];
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
  }
  return b;
}

}  // namespace

OrthonormalBasis build_basis(const DomainModel& model, int N) {
  switch (model.kind) {
    case DomainKind::UnitCircle:
    case DomainKind::PolydiskTorus: {
      OrthonormalBasis b = basis_shell(model, N);
      b.form = BasisForm::Identity;
      b.coeffs = CMat::identity(b.dim);
      b.log_diag.assign(b.dim, 0.0);
      return b;
    }
    case DomainKind::BallSphere: {
      OrthonormalBasis b = basis_shell(model, N);
      b.form = BasisForm::Diagonal;
      std::vector<double> diag(b.dim);
      for (int j = 0; j < b.dim; ++j)
        diag[j] = std::sqrt(exact_moment_diag_inv(model, b.indices[j]));
      fill_diagonal(b, diag);
      return b;
    }
    case DomainKind::Interval:
      return chebyshev_basis(model, N);
  }
  throw UnimplementedDomainError("build_basis: unknown domain kind");
}

OrthonormalBasis build_basis(const DomainModel& model, int N, const QuadratureRule& rule) {
  OrthonormalBasis b = basis_shell(model, N);
  b.form = BasisForm::LowerTriangular;
  const CMat G = moment_matrix(rule, N);
  // the double-double factorization tolerates conditioning far beyond the
  // plain-double floor, so relax it here
  b.coeffs = orthonormalize(G, 1e-28);
  return b;
}

OrthonormalBasis su_flat_basis(int m, int N) {
  OrthonormalBasis b = basis_shell(DomainModel::ball(m), N);
  b.su_variant = true;
  b.form = BasisForm::Diagonal;
  std::vector<double> diag(b.dim);
  for (int j = 0; j < b.dim; ++j) {
    const MultiIndex& J = b.indices[j];
    // 1/||z^J||_N^2 = C(N+m,m) C(N,|J|) multinomial(J)
    diag[j] = std::sqrt(binomial(N + m, m) * binomial(N, J.total) * multinomial(J));
  }
  fill_diagonal(b, diag);
  return b;
}

std::vector<cplx> OrthonormalBasis::evaluate_all(PointView z) const {
  const auto table = monomial_table(parents, z);
  std::vector<cplx> vals(dim);
  switch (form) {
    case BasisForm::Identity:
      return table;
    case BasisForm::Diagonal:
      for (int j = 0; j < dim; ++j) vals[j] = coeffs(j, j).real() * table[j];
      return vals;
    case BasisForm::LowerTriangular:
      for (int j = 0; j < dim; ++j) {
        cplx s = 0.0;
        for (int k = 0; k <= j; ++k) s += coeffs(j, k) * table[k];
        vals[j] = s;
      }
      return vals;
    case BasisForm::ChebyshevRecurrence: {
      const cplx x = z[0];
      const double rt2 = std::sqrt(2.0);
      cplx t_prev = 1.0, t_cur = x;
      vals[0] = 1.0;
      if (N >= 1) vals[1] = rt2 * x;
      for (int k = 2; k <= N; ++k) {
        const cplx t_next = 2.0 * x * t_cur - t_prev;
        vals[k] = rt2 * t_next;
        t_prev = t_cur;
        t_cur = t_next;
      }
      return vals;
    }
  }
  throw ArgumentError("evaluate_all: unknown basis form");
}

double OrthonormalBasis::log_kernel_diag(PointView z) const {
  switch (form) {
    case BasisForm::Identity:
    case BasisForm::Diagonal: {
      // positive terms: exact log-sum-exp over log |A_JJ z^J|^2
      std::vector<double> log_mod(m);
      for (int i = 0; i < m; ++i) log_mod[i] = std::log(std::abs(z[i]));
      double best = -std::numeric_limits<double>::infinity();
      std::vector<double> terms(dim);
      for (int j = 0; j < dim; ++j) {
        double t = 2.0 * log_diag[j];
        bool zero = false;
        const auto& e = indices[j].exponents;
        for (int i = 0; i < m; ++i) {
          if (e[i] == 0) continue;
          if (std::abs(z[i]) == 0.0) {
            zero = true;
            break;
          }
          t += 2.0 * e[i] * log_mod[i];
        }
        terms[j] = zero ? -std::numeric_limits<double>::infinity() : t;
        best = std::max(best, terms[j]);
      }
      double s = 0.0;
      for (double t : terms) s += std::exp(t - best);
      return best + std::log(s);
    }
    case BasisForm::ChebyshevRecurrence: {
      // recurrence with running rescale; |p_k|^2 = 2 |T_k|^2 for k >= 1
      const cplx x = z[0];
      std::vector<double> terms(dim);
      terms[0] = 0.0;
      cplx t_prev = 1.0, t_cur = x;
      double shift = 0.0;  // T_k = t_k * exp(shift)
      double best = 0.0;
      if (N >= 1) {
        terms[1] = std::numbers::ln2_v<double> + 2.0 * std::log(std::abs(t_cur));
        best = std::max(best, terms[1]);
      }
      for (int k = 2; k <= N; ++k) {
        cplx t_next = 2.0 * x * t_cur - t_prev;
        const double mag = std::abs(t_next);
        terms[k] = std::numbers::ln2_v<double> + 2.0 * (std::log(mag) + shift);
        best = std::max(best, terms[k]);
        if (mag > 1e150) {
          t_next *= 1e-150;
          t_cur *= 1e-150;
          shift += std::log(1e150);
        }
        t_prev = t_cur;
        t_cur = t_next;
      }
      double s = 0.0;
      for (double t : terms) s += std::exp(t - best);
      return best + std::log(s);
    }
    case BasisForm::LowerTriangular: {
      const auto vals = evaluate_all(z);
      double best = 0.0;
      for (const cplx& v : vals) best = std::max(best, std::abs(v));
      if (best == 0.0) return -std::numeric_limits<double>::infinity();
      double s = 0.0;
      for (const cplx& v : vals) s += std::norm(v / best);
      return 2.0 * std::log(best) + std::log(s);
    }
  }
  throw ArgumentError("log_kernel_diag: unknown basis form");
}

cplx OrthonormalBasis::kernel_offdiag(PointView z, PointView w) const {
  const auto vz = evaluate_all(z);
  const auto vw = evaluate_all(w);
  cplx s = 0.0;
  for (int j = 0; j < dim; ++j) s += vz[j] * std::conj(vw[j]);
  return s;
}

void export_basis_csv(const OrthonormalBasis& basis, std::ostream& os) {
  os << "row,multiindex,re_coeff,im_coeff\n";
  for (int j = 0; j < basis.dim; ++j)
    for (int k = 0; k <= j; ++k) {
      os << j << ',' << format_multiindex(basis.indices[k]) << ','
         << format_double(basis.coeffs(j, k).real()) << ','
         << format_double(basis.coeffs(j, k).imag()) << '\n';
    }
}

BMReport bm_ratio(const OrthonormalBasis& basis, const std::vector<Point>& grid,
                  double epsilon, int trials, std::uint64_t seed) {
  if (grid.empty()) throw ArgumentError("bm_ratio: empty sup grid");
  if (trials < 1) throw ArgumentError("bm_ratio: trials >= 1 required");

  std::vector<std::vector<cplx>> values(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) values[g] = basis.evaluate_all(grid[g]);

  // prefix dimension per degree
  std::vector<int> dim_at(basis.N + 1, 0);
  for (const MultiIndex& J : basis.indices)
    for (int degree = J.total; degree <= basis.N; ++degree) dim_at[degree] += 1;

  GaussianStream stream{seed};
  BMReport report;
  report.epsilon = epsilon;
  for (int degree = 0; degree <= basis.N; ++degree) {
    const int d = dim_at[degree];
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t trial_key = (std::uint64_t(degree) << 32) | std::uint64_t(t);
      std::vector<cplx> c(d);
      double n2 = 0.0;
      for (int j = 0; j < d; ++j) {
        c[j] = stream.complex_gaussian(trial_key, j);
        n2 += std::norm(c[j]);
      }
      const double inv = 1.0 / std::sqrt(n2);
      double sup = 0.0;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        cplx f = 0.0;
        for (int j = 0; j < d; ++j) f += c[j] * values[g][j];
        sup = std::max(sup, std::abs(f) * inv);
      }
      worst = std::max(worst, sup);
    }
    report.ratios.push_back({degree, worst / std::exp(epsilon * degree)});
    report.estimated_C = std::max(report.estimated_C, report.ratios.back().ratio);
  }
  return report;
}

std::string bm_report_json(const BMReport& report) {
  nlohmann::json j;
  j["epsilon"] = report.epsilon;
  j["estimated_C"] = report.estimated_C;
  j["ratios"] = nlohmann::json::array();
  for (const auto& row : report.ratios)
    j["ratios"].push_back({{"degree", row.degree}, {"ratio", row.ratio}});
  return j.dump(2);
}

std::vector<Point> sup_grid(const DomainModel& model, int resolution) {
  std::vector<Point> grid;
  switch (model.kind) {
    case DomainKind::UnitCircle:
      for (int k = 0; k < resolution; ++k)
        grid.push_back({std::polar(1.0, 2.0 * kPi * k / resolution)});
      return grid;
    case DomainKind::Interval:
      // Chebyshev extrema: hits sup of T_n exactly whenever n | resolution
      for (int k = 0; k <= resolution; ++k)
        grid.push_back({cplx(std::cos(kPi * k / resolution), 0.0)});
      return grid;
    case DomainKind::PolydiskTorus: {
      if (model.m == 1) return sup_grid(DomainModel::unit_circle(), resolution);
      const QuadratureRule rule = quadrature(model, resolution);
      return rule.nodes;
    }
    case DomainKind::BallSphere: {
      if (model.m == 1) return sup_grid(DomainModel::unit_circle(), resolution);
      const QuadratureRule rule =
          quadrature(model, std::max(4, resolution / (model.m == 2 ? 4 : 1)));
      return rule.nodes;
    }
  }
  throw UnimplementedDomainError("sup_grid: unknown domain kind");
}

}  // namespace equizero
