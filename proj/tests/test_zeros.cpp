#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "equizero/errors.hpp"
#include "equizero/rng.hpp"
#include "equizero/sphere_scaling.hpp"
#include "equizero/zeros.hpp"
#include "oracles.hpp"

using namespace equizero;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// expected number of circle-ensemble zeros with |z| <= r:  r (log S_N)'(r)/2
double circle_counting(double r, int N) {
  double s = 0.0, ks = 0.0, p = 1.0;
  for (int k = 0; k <= N; ++k) {
    s += p;
    ks += k * p;
    p *= r * r;
  }
  return ks / s;
}

}  // namespace

TEST_CASE("sampling is deterministic and reproduces b = c^T A") {
  const GaussianEnsemble ensemble = GaussianEnsemble::l2(DomainModel::unit_circle(), 12, 42);
  const RandomPolynomial p1 = sample_polynomial(ensemble, 0);
  const RandomPolynomial p2 = sample_polynomial(ensemble, 0);
  CHECK(p1.c == p2.c);
  CHECK(p1.b == p1.c);  // identity basis

  const GaussianEnsemble cheb = GaussianEnsemble::l2(DomainModel::interval(), 8, 42);
  const RandomPolynomial q = sample_polynomial(cheb, 3);
  // monomial form evaluates to the same polynomial as the recurrence form
  for (double x : {-0.8, -0.1, 0.4, 0.9, 1.3}) {
    const cplx z(x, 0.3);
    cplx horner = 0.0;
    for (int k = int(q.b.size()) - 1; k >= 0; --k) horner = horner * z + q.b[k];
    CHECK(std::abs(horner - q.evaluate(z)) < 1e-10 * (1.0 + std::abs(horner)));
  }
}

TEST_CASE("univariate roots: fixed polynomials") {
  RandomPolynomial p;
  p.basis = std::make_shared<const OrthonormalBasis>(
      build_basis(DomainModel::unit_circle(), 2));
  p.c = {cplx(-1.0), cplx(0.0), cplx(1.0)};  // z^2 - 1
  p.b = p.c;
  const ZeroSample s = univariate_roots(p);
  REQUIRE(s.degree_actual == 2);
  REQUIRE(s.roots.size() == 2);
  std::vector<double> re = {s.roots[0].real(), s.roots[1].real()};
  std::sort(re.begin(), re.end());
  CHECK(re[0] == Approx(-1.0).epsilon(1e-12));
  CHECK(re[1] == Approx(1.0).epsilon(1e-12));

  RandomPolynomial cube;
  cube.basis = std::make_shared<const OrthonormalBasis>(
      build_basis(DomainModel::unit_circle(), 3));
  cube.c = {cplx(0.0), cplx(0.0), cplx(0.0), cplx(1.0)};  // z^3
  cube.b = cube.c;
  const ZeroSample sc = univariate_roots(cube);
  REQUIRE(sc.roots.size() == 3);
  for (const cplx& r : sc.roots) CHECK(std::abs(r) < 1e-6);

  RandomPolynomial zero;
  zero.basis = cube.basis;
  zero.c = {cplx(0.0), cplx(0.0), cplx(0.0), cplx(0.0)};
  zero.b = zero.c;
  CHECK_THROWS_AS(univariate_roots(zero), DegenerateSampleError);
}

TEST_CASE("chebyshev-basis roots agree with known zeros") {
  // f = T_3 has zeros cos((2k-1)pi/6)
  RandomPolynomial p;
  p.basis = std::make_shared<const OrthonormalBasis>(build_basis(DomainModel::interval(), 3));
  p.c = {cplx(0.0), cplx(0.0), cplx(0.0), cplx(1.0 / std::sqrt(2.0))};  // c_3 p_3 = T_3
  p.b.assign(4, cplx(0.0));
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k <= j; ++k) p.b[k] += p.c[j] * p.basis->coeffs(j, k);
  const ZeroSample s = univariate_roots(p);
  REQUIRE(s.roots.size() == 3);
  std::vector<double> re;
  for (const cplx& r : s.roots) {
    CHECK(std::abs(r.imag()) < 1e-10);
    re.push_back(r.real());
  }
  std::sort(re.begin(), re.end());
  CHECK(re[0] == Approx(-std::sqrt(3.0) / 2.0).epsilon(1e-10));
  CHECK(re[1] == Approx(0.0).epsilon(1e-10));
  CHECK(re[2] == Approx(std::sqrt(3.0) / 2.0).epsilon(1e-10));
}

TEST_CASE("degree reduction: near-vanishing leading coefficients") {
  // only the linear term survives the 1e-13 relative threshold
  RandomPolynomial p;
  p.basis = std::make_shared<const OrthonormalBasis>(build_basis(DomainModel::interval(), 3));
  p.c = {cplx(2.0), cplx(3.0 / std::sqrt(2.0)), cplx(1e-15), cplx(0.0)};
  p.b.assign(4, cplx(0.0));
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k <= j; ++k) p.b[k] += p.c[j] * p.basis->coeffs(j, k);
  const ZeroSample s = univariate_roots(p);  // ~ 2 + 3x
  REQUIRE(s.degree_actual == 1);
  REQUIRE(s.roots.size() == 1);
  CHECK(s.roots[0].real() == doctest::Approx(-2.0 / 3.0).epsilon(1e-10));

  RandomPolynomial q;
  q.basis = std::make_shared<const OrthonormalBasis>(
      build_basis(DomainModel::unit_circle(), 3));
  q.c = {cplx(1.0), cplx(1.0), cplx(0.0), cplx(1e-16)};
  q.b = q.c;
  const ZeroSample sq = univariate_roots(q);
  CHECK(sq.degree_actual == 1);
  CHECK(sq.roots[0].real() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("root residual invariant across 1000 random trials") {
  // mixed degrees and both m=1 ensembles; residual bound normalized by
  // (1 + max|b|)(1 + |r|)^N
  double worst = 0.0;
  for (int block = 0; block < 2; ++block) {
    const auto model = block == 0 ? DomainModel::unit_circle() : DomainModel::interval();
    for (int N : {10, 25, 40, 60}) {
      const GaussianEnsemble ensemble = GaussianEnsemble::l2(model, N, 1000 + N);
      for (int t = 0; t < 125; ++t) {
        const RandomPolynomial poly = sample_polynomial(ensemble, t);
        worst = std::max(worst, root_residual(poly, univariate_roots(poly)));
      }
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("root residual invariant holds at high degree") {
  const GaussianEnsemble circle = GaussianEnsemble::l2(DomainModel::unit_circle(), 200, 99);
  for (int t = 0; t < 5; ++t) {
    const RandomPolynomial poly = sample_polynomial(circle, t);
    const ZeroSample s = univariate_roots(poly);
    CHECK(s.degree_actual == 200);
    CHECK(root_residual(poly, s) < 1e-8);
  }
  const GaussianEnsemble cheb = GaussianEnsemble::l2(DomainModel::interval(), 150, 99);
  for (int t = 0; t < 5; ++t) {
    const RandomPolynomial poly = sample_polynomial(cheb, t);
    const ZeroSample s = univariate_roots(poly);
    CHECK(root_residual(poly, s) < 1e-8);
  }
}

TEST_CASE("circle roots concentrate in the unit annulus") {
  const GaussianEnsemble ensemble = GaussianEnsemble::l2(DomainModel::unit_circle(), 200, 1);
  const RandomPolynomial poly = sample_polynomial(ensemble, 0);
  const ZeroSample s = univariate_roots(poly);
  int inside = 0;
  for (const cplx& r : s.roots)
    if (0.9 < std::abs(r) && std::abs(r) < 1.1) ++inside;
  CHECK(double(inside) / 200.0 >= 0.85);
}

TEST_CASE("empirical mass: sector symmetry and arcsine subinterval") {
  const GaussianEnsemble circle = GaussianEnsemble::l2(DomainModel::unit_circle(), 100, 31);
  const auto sector = RegionSpec::sector(0.0, kPi / 2, 0);
  const MassEstimate est = empirical_zero_mass(circle, sector, 200, 2);
  CHECK(std::abs(est.mean_fraction - 0.25) <= 3.0 * est.std_error);

  const GaussianEnsemble cheb = GaussianEnsemble::l2(DomainModel::interval(), 150, 31);
  const auto strip = RegionSpec::annulus(-0.5, 0.5);
  const MassEstimate ie = empirical_zero_mass(cheb, strip, 200, 2);
  CHECK(std::abs(ie.mean_fraction - 1.0 / 3.0) <= 4.0 * ie.std_error);

  const MassEstimate all = empirical_zero_mass(circle, RegionSpec::everything(), 20, 1);
  CHECK(all.mean_fraction == 1.0);
}

TEST_CASE("SU(m+1) flatness: the full pipeline is an exact identity") {
  for (int m : {1, 2}) {
    for (int N : {5, 10}) {
      const GaussianEnsemble ensemble = GaussianEnsemble::su(m, N, 5);
      const KernelField field(ensemble.basis);
      const GaussianStream stream{17};
      for (int t = 0; t < 20; ++t) {
        Point z(m);
        for (int i = 0; i < m; ++i) z[i] = stream.complex_gaussian(t, i) * 0.8;
        const double density = expected_density(field, z, m, default_fd_step(z));
        const double reference = su_flat_reference_density(z, N, m);
        CHECK(density / reference == Approx(1.0).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("expected density integrates to N on the circle ensemble") {
  const auto rows = density_vs_equilibrium(DomainModel::unit_circle(), {50}, {{0.0, 10.0}});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].captured == Approx(1.0).epsilon(5e-3));
}

TEST_CASE("captured annulus mass matches the closed form and grows with N") {
  const auto rows =
      density_vs_equilibrium(DomainModel::unit_circle(), {100, 200}, {{0.9, 1.1}});
  REQUIRE(rows.size() == 2);
  const double closed100 = (circle_counting(1.1, 100) - circle_counting(0.9, 100)) / 100.0;
  const double closed200 = (circle_counting(1.1, 200) - circle_counting(0.9, 200)) / 200.0;
  CHECK(rows[0].captured == Approx(closed100).epsilon(2e-3));
  CHECK(rows[1].captured == Approx(closed200).epsilon(2e-3));
  CHECK(rows[1].captured > rows[0].captured);
  CHECK(rows[1].captured >= 0.93);
}

TEST_CASE("wedge consistency: eigenvalue and determinant routes coincide") {
  const GaussianEnsemble su2 = GaussianEnsemble::su(2, 8, 3);
  const KernelField su_field(su2.basis);
  const Point z1 = {cplx(0.8, 0.0), cplx(0.4, 0.0)};
  CHECK(wedge_consistency(su_field, z1, default_fd_step(z1)).rel_err < 1e-8);

  const KernelField ball_field(
      std::make_shared<const OrthonormalBasis>(build_basis(DomainModel::ball(2), 8)));
  CHECK(wedge_consistency(ball_field, z1, default_fd_step(z1)).rel_err < 1e-8);

  const KernelField poly_field(
      std::make_shared<const OrthonormalBasis>(build_basis(DomainModel::polydisk(2), 8)));
  const Point z2 = {cplx(1.1, 0.0), cplx(0.9, 0.0)};
  CHECK(wedge_consistency(poly_field, z2, default_fd_step(z2)).rel_err < 1e-6);
}

TEST_CASE("log S_N is plurisubharmonic: Hessian stays nonnegative") {
  const GaussianStream stream{8};
  for (const auto& model : {DomainModel::ball(2), DomainModel::polydisk(2)}) {
    const KernelField field(
        std::make_shared<const OrthonormalBasis>(build_basis(model, 12)));
    for (int t = 0; t < 100; ++t) {
      Point z(2);
      for (int i = 0; i < 2; ++i) z[i] = stream.complex_gaussian(t, i);
      const auto detail = expected_density_detail(field, z, 2, default_fd_step(z));
      CHECK_FALSE(detail.curvature_warning);
      CHECK(detail.value >= 0.0);
    }
  }
  for (const auto& model : {DomainModel::unit_circle(), DomainModel::interval()}) {
    const KernelField field(
        std::make_shared<const OrthonormalBasis>(build_basis(model, 18)));
    for (int t = 0; t < 100; ++t) {
      const Point z = {1.6 * stream.complex_gaussian(t, 5)};
      const auto detail = expected_density_detail(field, z, 1, default_fd_step(z));
      CHECK_FALSE(detail.curvature_warning);
    }
  }
}

TEST_CASE("empirical region mass matches the density integral") {
  const int N = 100;
  const GaussianEnsemble ensemble = GaussianEnsemble::l2(DomainModel::unit_circle(), N, 12);
  const auto region = RegionSpec::annulus(0.8, 1.25);
  const MassEstimate emp = empirical_zero_mass(ensemble, region, 60, 2);
  const double expected = (circle_counting(1.25, N) - circle_counting(0.8, N)) / N;
  CHECK(std::abs(emp.mean_fraction - expected) <= 4.0 * emp.std_error);
}

TEST_CASE("density grid CSV carries coordinates and values") {
  const KernelField field(
      std::make_shared<const OrthonormalBasis>(build_basis(DomainModel::unit_circle(), 20)));
  std::vector<Point> pts;
  for (double r : {0.8, 1.0, 1.2}) pts.push_back({cplx(r, 0.0)});
  const DensityGrid grid = density_grid(field, pts, 1, 0.0, 1);
  const std::string csv = density_grid_csv(grid);
  CHECK(csv.rfind("re_z1,im_z1,k,density\n", 0) == 0);
  CHECK(grid.values[1] > grid.values[0]);  // peak at the circle
  CHECK(grid.values[1] > grid.values[2]);
}

TEST_CASE("expected density guards its preconditions") {
  const KernelField field(
      std::make_shared<const OrthonormalBasis>(build_basis(DomainModel::ball(2), 6)));
  const Point z = {cplx(0.5, 0.0), cplx(0.1, 0.0)};
  CHECK_THROWS_AS(expected_density(field, z, 0, 1e-3), ArgumentError);
  CHECK_THROWS_AS(expected_density(field, z, 3, 1e-3), ArgumentError);
  CHECK_THROWS_AS(expected_density(field, z, 2, 0.0), StepError);
  const KernelField field1(
      std::make_shared<const OrthonormalBasis>(build_basis(DomainModel::unit_circle(), 6)));
  CHECK_THROWS_AS(wedge_consistency(field1, Point{cplx(0.5, 0.0)}, 1e-3), ArgumentError);
}
