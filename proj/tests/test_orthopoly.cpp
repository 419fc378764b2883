#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "equizero/errors.hpp"
#include "equizero/orthopoly.hpp"
#include "oracles.hpp"

using namespace equizero;
using doctest::Approx;

TEST_CASE("moment matrices: closed forms") {
  // circle: identity
  const CMat Gc = moment_matrix(DomainModel::unit_circle(), 6);
  for (int a = 0; a < Gc.rows; ++a)
    for (int b = 0; b < Gc.cols; ++b)
      CHECK(Gc(a, b) == cplx(a == b ? 1.0 : 0.0));

  // sphere m=3, J=(2,0,0): 2! 2! / 4! = 1/6
  const auto ball3 = DomainModel::ball(3);
  const auto indices = enumerate_multiindices(3, 2);
  const CMat Gb = moment_matrix(ball3, 2);
  int pos = -1;
  for (std::size_t i = 0; i < indices.size(); ++i)
    if (indices[i].exponents == std::vector<int>{2, 0, 0}) pos = int(i);
  REQUIRE(pos >= 0);
  CHECK(Gb(pos, pos).real() == Approx(1.0 / 6.0).epsilon(1e-15));

  // interval arcsine: G[0,2] = G[2,0] = 1/2, G[1,1] = 1/2
  const CMat Gi = moment_matrix(DomainModel::interval(), 2);
  CHECK(Gi(0, 2).real() == Approx(0.5));
  CHECK(Gi(2, 0).real() == Approx(0.5));
  CHECK(Gi(1, 1).real() == Approx(0.5));
  CHECK(Gi(0, 1).real() == 0.0);
}

TEST_CASE("interval arcsine moments agree with direct integration") {
  const CMat G = moment_matrix(DomainModel::interval(), 6);
  for (int k = 0; k <= 6; k += 2) {
    const double direct = oracle::integrate(
        [k](double t) {
          // substitute x = cos t to remove the endpoint singularity
          return std::pow(std::cos(t), k) / 3.14159265358979323846;
        },
        0.0, 3.14159265358979323846, 1e-12);
    CHECK(G(0, k).real() == Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("orthonormalize: identity, diagonal, Chebyshev") {
  CMat I = CMat::identity(5);
  const CMat A = orthonormalize(I);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(A(i, j) == cplx(i == j ? 1.0 : 0.0));

  // sphere diagonal: A_JJ = sqrt(C(|J|+m-1, m-1) multinomial(J))
  const auto ball2 = DomainModel::ball(2);
  const CMat Gb = moment_matrix(ball2, 3);
  const CMat Ab = orthonormalize(Gb);
  const auto idx = enumerate_multiindices(2, 3);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const double expected =
        std::sqrt(binomial(idx[j].total + 1, 1) * multinomial(idx[j]));
    CHECK(Ab(int(j), int(j)).real() == Approx(expected).epsilon(1e-13));
  }

  // interval N=2: p_2 = sqrt(2) (2x^2 - 1)
  const CMat Gi = moment_matrix(DomainModel::interval(), 2);
  const CMat Ai = orthonormalize(Gi);
  CHECK(Ai(2, 0).real() == Approx(-std::sqrt(2.0)));
  CHECK(Ai(2, 1).real() == Approx(0.0));
  CHECK(Ai(2, 2).real() == Approx(2.0 * std::sqrt(2.0)));
  // and independently: quadrature inner products of row 2 against monomials
  const auto rule = quadrature(DomainModel::interval(), 64);
  for (int k = 0; k < 2; ++k) {
    cplx ip = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const cplx x = rule.nodes[i][0];
      const cplx p2 = Ai(2, 0) + Ai(2, 1) * x + Ai(2, 2) * x * x;
      ip += rule.weights[i] * p2 * std::conj(std::pow(x, k));
    }
    CHECK(std::abs(ip) < 1e-13);
  }
}

TEST_CASE("orthonormalize honors the conditioning floor") {
  const CMat G = moment_matrix(DomainModel::interval(), 20);
  CHECK_THROWS_AS(orthonormalize(G), ConditioningError);  // default 1e-13 floor
  // relaxing the floor succeeds and reproduces the Chebyshev closed form
  const CMat A = orthonormalize(G, 1e-30);
  const OrthonormalBasis cheb = build_basis(DomainModel::interval(), 20);
  double worst = 0.0;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j <= i; ++j)
      worst = std::max(worst, std::abs(A(i, j) - cheb.coeffs(i, j)) /
                                  (1.0 + std::abs(cheb.coeffs(i, j))));
  CHECK(worst < 1e-12);
}

TEST_CASE("orthonormality residual < 1e-8: exact moments, m <= 3, N = 20") {
  const std::vector<DomainModel> models = {
      DomainModel::unit_circle(), DomainModel::interval(),  DomainModel::polydisk(2),
      DomainModel::polydisk(3),   DomainModel::ball(2),     DomainModel::ball(3)};
  for (const auto& model : models) {
    const int N = model.m == 1 ? 20 : (model.m == 2 ? 12 : 8);  // keep unit runtime small
    const OrthonormalBasis basis = build_basis(model, N);
    const CMat G = moment_matrix(model, N);
    CHECK(gram_residual_max(basis.coeffs, G) < 1e-8);
  }
}

TEST_CASE("orthonormality residual < 1e-8: quadrature providers, m = 1, N = 12") {
  for (const auto& model : {DomainModel::unit_circle(), DomainModel::interval()}) {
    const int N = 12;
    const auto rule = quadrature(model, 2 * N + 1);
    const OrthonormalBasis basis = build_basis(model, N, rule);
    const CMat G = moment_matrix(rule, N);
    CHECK(gram_residual_max(basis.coeffs, G) < 1e-8);
  }
}

TEST_CASE("degree filtration: lower basis is a prefix of the higher one") {
  for (const auto& model : {DomainModel::unit_circle(), DomainModel::interval(),
                            DomainModel::ball(2), DomainModel::polydisk(2)}) {
    const OrthonormalBasis lo = build_basis(model, 6);
    const OrthonormalBasis hi = build_basis(model, 7);
    for (int i = 0; i < lo.dim; ++i)
      for (int j = 0; j <= i; ++j) CHECK(lo.coeffs(i, j) == hi.coeffs(i, j));
  }
  // quadrature path: nested Cholesky gives the same leading block
  const auto rule = quadrature(DomainModel::interval(), 41);
  const OrthonormalBasis lo = build_basis(DomainModel::interval(), 6, rule);
  const OrthonormalBasis hi = build_basis(DomainModel::interval(), 7, rule);
  for (int i = 0; i < lo.dim; ++i)
    for (int j = 0; j <= i; ++j)
      CHECK(std::abs(lo.coeffs(i, j) - hi.coeffs(i, j)) < 1e-12);
}

TEST_CASE("SU frame norms, m = 1: 1/||z^j||^2 = (N+1) C(N,j)") {
  const int N = 10;
  const OrthonormalBasis su = su_flat_basis(1, N);
  for (int j = 0; j <= N; ++j) {
    const double expected = std::sqrt((N + 1) * binomial(N, j));
    CHECK(su.coeffs(j, j).real() == Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("sup grid sees the Chebyshev sup exactly") {
  const OrthonormalBasis basis = build_basis(DomainModel::interval(), 10);
  const auto grid = sup_grid(DomainModel::interval(), 80);  // 10 | 80
  double sup = 0.0;
  for (const auto& p : grid) {
    const auto vals = basis.evaluate_all(p);
    sup = std::max(sup, std::abs(vals[10]));
  }
  CHECK(sup == Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("bm_ratio: circle ratios are flat, discounted ratios decay") {
  const OrthonormalBasis basis = build_basis(DomainModel::unit_circle(), 16);
  const auto grid = sup_grid(DomainModel::unit_circle(), 256);
  const BMReport report = bm_ratio(basis, grid, 0.2, 8, 7);
  REQUIRE(report.ratios.size() == 17);
  CHECK(report.epsilon == 0.2);
  CHECK(report.estimated_C > 0.0);
  for (const auto& row : report.ratios) CHECK(row.ratio > 0.0);
  // discounted ratios nonincreasing beyond degree 5
  for (std::size_t i = 6; i + 1 < report.ratios.size(); ++i)
    CHECK(report.ratios[i + 1].ratio <= report.ratios[i].ratio * 1.0 + 1e-12);
}

TEST_CASE("bm_ratio: sphere m=2 ratios bounded by a small constant") {
  const OrthonormalBasis basis = build_basis(DomainModel::ball(2), 12);
  const auto grid = sup_grid(DomainModel::ball(2), 24);
  const BMReport report = bm_ratio(basis, grid, 0.1, 6, 11);
  for (const auto& row : report.ratios) CHECK(row.ratio <= 5.0);
  CHECK_THROWS_AS(bm_ratio(basis, {}, 0.1, 5, 1), ArgumentError);
}

TEST_CASE("basis coefficients: lower triangular, positive diagonal, CSV export") {
  for (const auto& model : {DomainModel::unit_circle(), DomainModel::interval(),
                            DomainModel::ball(2)}) {
    const OrthonormalBasis basis = build_basis(model, 6);
    for (int i = 0; i < basis.dim; ++i) {
      CHECK(basis.coeffs(i, i).real() > 0.0);
      CHECK(basis.coeffs(i, i).imag() == 0.0);
      for (int j = i + 1; j < basis.dim; ++j) CHECK(basis.coeffs(i, j) == cplx(0.0));
    }
  }
  const OrthonormalBasis basis = build_basis(DomainModel::interval(), 2);
  std::ostringstream os;
  export_basis_csv(basis, os);
  const std::string csv = os.str();
  CHECK(csv.rfind("row,multiindex,re_coeff,im_coeff\n", 0) == 0);
  // rows: 1 + 2 + 3 lower-triangular entries
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("bm report serializes") {
  const OrthonormalBasis basis = build_basis(DomainModel::unit_circle(), 4);
  const BMReport report = bm_ratio(basis, sup_grid(DomainModel::unit_circle(), 64), 0.1, 3, 5);
  const std::string json = bm_report_json(report);
  CHECK(json.find("estimated_C") != std::string::npos);
  CHECK(json.find("ratios") != std::string::npos);
}
