#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "equizero/errors.hpp"
#include "equizero/rng.hpp"
#include "equizero/sphere_scaling.hpp"
#include "equizero/szego.hpp"

using namespace equizero;
using doctest::Approx;

namespace {

KernelField make_field(const DomainModel& model, int N) {
  return KernelField(std::make_shared<const OrthonormalBasis>(build_basis(model, N)));
}

// sum_{k=0}^{N} r^{2k}
double circle_kernel_closed(double r, int N) {
  double s = 0.0, p = 1.0;
  for (int k = 0; k <= N; ++k) {
    s += p;
    p *= r * r;
  }
  return s;
}

}  // namespace

TEST_CASE("circle kernel diagonal: geometric closed form") {
  const auto field = make_field(DomainModel::unit_circle(), 3);
  CHECK(field.diag(Point{cplx(1.0, 0.0)}) == Approx(4.0));             // N+1 on K
  CHECK(field.diag(Point{cplx(0.0, 2.0)}) == Approx(85.0));            // 1+4+16+64
  CHECK(field.normalized_log(Point{cplx(-2.0, 0.0)}) == Approx(std::log(85.0) / 6.0));

  const auto field50 = make_field(DomainModel::unit_circle(), 50);
  for (double r : {0.3, 0.9, 1.0, 1.7, 4.0, 10.0}) {
    const double closed = circle_kernel_closed(r, 50);
    const double via_field = field50.diag(Point{std::polar(r, 0.77)});
    CHECK(via_field == Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("ball kernel diagonal equals g_N(||z||^2)") {
  const auto field = make_field(DomainModel::ball(2), 10);
  CHECK(field.diag(Point{cplx(1.0, 0.0), cplx(0.0, 0.0)}) == Approx(binomial(12, 2)));
  CHECK(field.normalized_log(Point{std::polar(1.0, 0.3), cplx(0.0)}) ==
        Approx(std::log(66.0) / 20.0));  // ~0.2094841

  const GaussianStream stream{123};
  for (int t = 0; t < 100; ++t) {
    Point z = {stream.complex_gaussian(t, 0), stream.complex_gaussian(t, 1)};
    const double x = std::norm(z[0]) + std::norm(z[1]);
    const double closed = g_N(x, 10, 2).g;
    CHECK(field.diag(z) == Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("interval kernel: recurrence matches quadrature Gram basis") {
  const int N = 10;
  const auto field = make_field(DomainModel::interval(), N);
  const auto rule = quadrature(DomainModel::interval(), 2 * N + 1);
  const auto quad_basis =
      std::make_shared<const OrthonormalBasis>(build_basis(DomainModel::interval(), N, rule));
  const KernelField quad_field(quad_basis);
  for (double x : {-0.9, -0.37, 0.0, 0.52, 0.99, 1.3, 2.0}) {
    const Point z{cplx(x, 0.21)};
    CHECK(field.diag(z) == Approx(quad_field.diag(z)).epsilon(1e-9));
  }
}

TEST_CASE("normalized log kernel approaches the interval Green function") {
  const auto field = make_field(DomainModel::interval(), 60);
  const double v = DomainModel::interval().green_function(cplx(2.0, 0.0));
  CHECK(std::abs(field.normalized_log(Point{cplx(2.0, 0.0)}) - v) < 0.02);
  // nonnegative once S_N >= 1 (constant polynomial in the span)
  CHECK(field.normalized_log(Point{cplx(0.2, 0.0)}) >= 0.0);
}

TEST_CASE("log-mode kernel survives huge arguments") {
  const auto field = make_field(DomainModel::unit_circle(), 200);
  const double big = field.log_diag(Point{cplx(1e6, 0.0)});
  CHECK(std::isfinite(big));
  CHECK(field.normalized_log(Point{cplx(1e6, 0.0)}) == Approx(std::log(1e6)).epsilon(1e-4));

  const auto ifield = make_field(DomainModel::interval(), 200);
  const double ibig = ifield.log_diag(Point{cplx(1e6, 0.0)});
  CHECK(std::isfinite(ibig));
  CHECK(ifield.normalized_log(Point{cplx(1e6, 0.0)}) ==
        Approx(std::log(2e6)).epsilon(1e-3));  // V = log|z + sqrt(z^2-1)| ~ log 2|z|
}

TEST_CASE("kernel symmetry, Cauchy-Schwarz, monotonicity in N") {
  const auto field = make_field(DomainModel::ball(2), 8);
  const auto field_next = make_field(DomainModel::ball(2), 9);
  const GaussianStream stream{77};
  for (int t = 0; t < 50; ++t) {
    const Point z = {stream.complex_gaussian(t, 0), stream.complex_gaussian(t, 1)};
    const Point w = {stream.complex_gaussian(t, 2), stream.complex_gaussian(t, 3)};
    const cplx szw = field.offdiag(z, w);
    const cplx swz = field.offdiag(w, z);
    CHECK(std::abs(szw - std::conj(swz)) < 1e-12 * (1.0 + std::abs(szw)));
    const double bound = field.diag(z) * field.diag(w);
    CHECK(std::norm(szw) <= bound * (1.0 + 1e-10));
    CHECK(field_next.diag(z) >= field.diag(z) * (1.0 - 1e-12));
  }
}

TEST_CASE("extremal function closed forms") {
  const auto ball2 = DomainModel::ball(2);
  CHECK(extremal_function(ball2, Point{cplx(2.0, 0.0), cplx(0.0)}, 3) == Approx(8.0));
  CHECK(extremal_function(ball2, Point{cplx(0.5, 0.0), cplx(0.5, 0.0)}, 7) == Approx(1.0));

  const auto interval = DomainModel::interval();
  CHECK(extremal_function(interval, Point{cplx(2.0, 0.0)}, 1) == Approx(2.0));  // |T_1(2)|
  const double t3 = std::abs(4.0 * std::pow(1.2, 3) - 3.0 * 1.2);               // T_3(1.2) = 3.312
  CHECK(extremal_function(interval, Point{cplx(1.2, 0.0)}, 3) == Approx(t3));

  const auto circle = DomainModel::unit_circle();
  CHECK(extremal_function(circle, Point{cplx(0.0, 2.0)}, 3) == Approx(8.0));
  CHECK(log_extremal_function(circle, Point{cplx(3.0, 0.0)}, 200) ==
        Approx(200.0 * std::log(3.0)));
}

TEST_CASE("grid estimator reaches the closed forms from below") {
  const auto disk = DomainModel::ball(1);
  LawsonInfo info;
  const double phi = extremal_estimate_grid(disk, Point{cplx(1.5, 0.0)}, 2, 64, &info);
  CHECK(phi == Approx(2.25).epsilon(0.05));
  CHECK(phi <= 2.25 * (1.0 + 1e-6));

  const double inside = extremal_estimate_grid(disk, Point{cplx(0.3, 0.1)}, 3, 64);
  CHECK(inside == Approx(1.0).epsilon(1e-6));

  const auto interval = DomainModel::interval();
  const double t3 = 4.0 * std::pow(1.2, 3) - 3.0 * 1.2;
  const double phi_i = extremal_estimate_grid(interval, Point{cplx(1.2, 0.0)}, 3, 128);
  CHECK(phi_i == Approx(t3).epsilon(0.05));

  CHECK_THROWS_AS(extremal_estimate_grid(disk, Point{cplx(1.5, 0.0)}, 11, 64), ArgumentError);
}

TEST_CASE("sandwich check: closed-form ratios") {
  const auto circle_field = make_field(DomainModel::unit_circle(), 3);
  const auto r = sandwich_check(circle_field, DomainModel::unit_circle(), Point{cplx(2.0, 0.0)});
  CHECK(r.ratio == Approx(85.0 / 64.0));
  CHECK(r.lower_ok);

  const int N = 9;
  const auto ball_field = make_field(DomainModel::ball(2), N);
  const auto rb =
      sandwich_check(ball_field, DomainModel::ball(2), Point{std::polar(1.0, 1.1), cplx(0.0)});
  CHECK(rb.ratio == Approx(binomial(N + 2, 2)).epsilon(1e-10));  // exactly d(N) on the sphere
  CHECK(rb.lower_ok);
}

TEST_CASE("sandwich lower bound: no failures at random points") {
  const GaussianStream stream{2024};
  const std::vector<DomainModel> models = {DomainModel::unit_circle(), DomainModel::ball(2),
                                           DomainModel::polydisk(2)};
  for (const auto& model : models) {
    const auto field = make_field(model, 15);
    for (int t = 0; t < 100; ++t) {
      Point z(model.m);
      for (int i = 0; i < model.m; ++i) z[i] = 1.5 * stream.complex_gaussian(t, i);
      CHECK(sandwich_check(field, model, z).lower_ok);
    }
  }
}

TEST_CASE("convergence table: circle closed-form deviations, O(1/N) halving") {
  std::vector<Point> grid;
  for (int a = 0; a < 8; ++a) grid.push_back({std::polar(2.0, 0.7 * a)});
  const auto table =
      convergence_table(DomainModel::unit_circle(), {50, 100}, grid, true);
  REQUIRE(table.rows.size() == 2);
  // (1/100) log((4^51 - 1)/3) - log 2 = 0.0028768...
  const double dev50 = (51.0 * std::log(4.0) + std::log1p(-std::pow(0.25, 51)) - std::log(3.0)) / 100.0 -
                       std::log(2.0);
  CHECK(table.rows[0].sup_dev_logkernel == Approx(dev50).epsilon(1e-10));
  CHECK(table.rows[0].sup_dev_logkernel == Approx(0.0028768).epsilon(1e-3));
  const double ratio = table.rows[1].sup_dev_logkernel / table.rows[0].sup_dev_logkernel;
  CHECK(ratio > 0.4);
  CHECK(ratio < 0.6);
  // Phi column is exact on the circle: (1/N) log Phi_N = V_K
  CHECK(table.rows[0].sup_dev_phi == Approx(0.0).epsilon(1e-12));
  for (const auto& row : table.rows) CHECK(row.sup_dev_logkernel >= 0.0);
}

TEST_CASE("interval extremal estimate inside the strip stays sane") {
  // no closed form for |Re z| < 1; the Lawson estimator takes over
  const auto interval = DomainModel::interval();
  const double phi = extremal_function(interval, Point{cplx(0.4, 0.9)}, 6);
  CHECK(phi >= 1.0 - 1e-9);  // f = 1 is always feasible
  const double upper = std::exp(6.0 * interval.green_function(cplx(0.4, 0.9)));
  CHECK(phi <= upper * 1.05);
  CHECK_THROWS_AS(log_extremal_function(interval, Point{cplx(0.4, 0.9)}, 20), ArgumentError);
}

TEST_CASE("kernel slice CSV schema") {
  const auto field = make_field(DomainModel::ball(2), 6);
  std::vector<Point> pts = {{cplx(0.5, 0.0), cplx(0.2, 0.1)}, {cplx(1.5, 0.0), cplx(0.0, 0.0)}};
  const std::string csv = kernel_slice_csv(field, pts);
  CHECK(csv.rfind("re_z1,im_z1,re_z2,im_z2,S_N,normalized_log\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("convergence table: ball m=2 deviations strictly decrease") {
  const auto grid = default_test_grid(DomainModel::ball(2));
  const auto table = convergence_table(DomainModel::ball(2), {10, 20, 40}, grid, false);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[1].sup_dev_logkernel < table.rows[0].sup_dev_logkernel);
  CHECK(table.rows[2].sup_dev_logkernel < table.rows[1].sup_dev_logkernel);
}
