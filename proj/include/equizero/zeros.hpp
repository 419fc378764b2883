#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "equizero/szego.hpp"

namespace equizero {

enum class EnsembleVariant { L2mu, SUm1 };

// Random polynomials f = sum_j c_j p_j with i.i.d. standard complex
// Gaussian c_j; draws are keyed (seed, trial, index).
struct GaussianEnsemble {
  std::shared_ptr<const OrthonormalBasis> basis;
  std::uint64_t seed = 0;
  EnsembleVariant variant = EnsembleVariant::L2mu;

  static GaussianEnsemble l2(const DomainModel& model, int N, std::uint64_t seed);
  static GaussianEnsemble su(int m, int N, std::uint64_t seed);

  int degree() const { return basis->N; }
  int dimension() const { return basis->m; }
};

struct RandomPolynomial {
  std::shared_ptr<const OrthonormalBasis> basis;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::vector<cplx> c;  // Gaussian coefficients in the basis
  std::vector<cplx> b;  // monomial coefficients, b = c^T A

  cplx evaluate(cplx z) const;  // m = 1, stable representation
};

RandomPolynomial sample_polynomial(const GaussianEnsemble& ensemble, std::uint64_t trial);

struct ZeroSample {
  std::vector<cplx> roots;
  int degree_actual = 0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
};

// m = 1: eigenvalues of the balanced companion matrix (monomial bases) or
// colleague matrix (Chebyshev basis), one Newton polish each.
ZeroSample univariate_roots(const RandomPolynomial& poly);

// max over roots of |f(r)| / ((1 + max|b|)(1 + |r|)^N), the ZeroSample
// residual invariant (log-safe).
double root_residual(const RandomPolynomial& poly, const ZeroSample& sample);

struct MassEstimate {
  double mean_fraction = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

MassEstimate empirical_zero_mass(const GaussianEnsemble& ensemble, const RegionSpec& region,
                                 int trials, int threads = 1);

// ---- expected densities (Poincare-Lelong) ----------------------------------

double default_fd_step(PointView z);

// Complex Hessian of log S_N by central differences on the 2m real
// coordinates; one Richardson pass when requested.
CMat complex_hessian_fd(const KernelField& field, PointView z, double step,
                        bool richardson = true);

struct DensityResult {
  double value = 0.0;          // k! e_k(eigenvalues)/pi^k, clipped at 0
  bool curvature_warning = false;
};

DensityResult expected_density_detail(const KernelField& field, PointView z, int k,
                                      double step, bool richardson = true);
double expected_density(const KernelField& field, PointView z, int k, double step);

struct WedgeResult {
  double lhs = 0.0;  // eigenvalue route
  double rhs = 0.0;  // determinant route, same Hessian
  double rel_err = 0.0;
};

WedgeResult wedge_consistency(const KernelField& field, PointView z, double step);

// m! N^m/pi^m (1+||z||^2)^{-(m+1)}: Lebesgue density of (N^m/pi^m) w^m.
double su_flat_reference_density(PointView z, int N, int m);

struct CapturedMassRow {
  int N;
  double r_lo, r_hi;
  double captured;  // N^{-k} integral of expected density over the annulus
};

// Radially symmetric ensembles only (UnitCircle, BallSphere): integrates
// the FD density over annuli around the Silov boundary.
std::vector<CapturedMassRow> density_vs_equilibrium(
    const DomainModel& model, const std::vector<int>& N_list,
    const std::vector<std::pair<double, double>>& annuli);

struct DensityGrid {
  std::vector<Point> points;
  int k = 1;
  std::vector<double> values;
  bool any_curvature_warning = false;
  double hessian_step = 0.0;
};

DensityGrid density_grid(const KernelField& field, const std::vector<Point>& points, int k,
                         double step, int threads = 1);

std::string density_grid_csv(const DensityGrid& grid);

}  // namespace equizero
