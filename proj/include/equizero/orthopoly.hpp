#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "equizero/domain.hpp"
#include "equizero/linalg.hpp"

namespace equizero {

// ---- moments -------------------------------------------------------------

// G[J,L] = int z^J conj(z)^L dmu from closed forms (all four domains have
// them: circle/torus orthogonality, the sphere factorial formula, arcsine
// moments).
CMat moment_matrix(const DomainModel& model, int N);

// Node-based Gram, accumulated at double-double precision.  Throws
// InsufficientResolutionError when the rule cannot integrate degree-N
// Gram moments exactly.
CMat moment_matrix(const QuadratureRule& rule, int N);

// A = L^{-T} from the double-double Cholesky of G, so that A G A^* = I;
// lower triangular with positive diagonal.  min_rel_pivot guards the
// spectral floor (ConditioningError below it, with the smallest-pivot
// estimate attached).
CMat orthonormalize(const CMat& G, double min_rel_pivot = 1e-13);

// ---- bases ----------------------------------------------------------------

enum class BasisForm {
  Identity,             // monomials are already orthonormal (circle, torus)
  Diagonal,             // scaled monomials (sphere, SU frame)
  LowerTriangular,      // generic Gram-Schmidt result
  ChebyshevRecurrence,  // interval: p_0 = 1, p_k = sqrt(2) T_k
};

struct OrthonormalBasis {
  DomainModel source;
  bool su_variant = false;
  int m = 1, N = 0, dim = 0;
  BasisForm form = BasisForm::Identity;
  std::vector<MultiIndex> indices;            // graded order
  CMat coeffs;                                // row j: p_j in monomials
  std::vector<double> log_diag;               // log A_JJ (diagonal forms)
  std::vector<std::pair<int, int>> parents;   // monomial recurrence (index, coord)

  std::vector<cplx> evaluate_all(PointView z) const;

  // log sum_j |p_j(z)|^2, overflow-safe for ||z|| <= 1e6.
  double log_kernel_diag(PointView z) const;

  cplx kernel_offdiag(PointView z, PointView w) const;
};

OrthonormalBasis build_basis(const DomainModel& model, int N);
OrthonormalBasis build_basis(const DomainModel& model, int N, const QuadratureRule& rule);

// SU(m+1) comparison frame: ||z^J||_N^2 = m!(N-|J|)! j_1!...j_m!/(N+m)!.
OrthonormalBasis su_flat_basis(int m, int N);

void export_basis_csv(const OrthonormalBasis& basis, std::ostream& os);

// ---- Bernstein-Markov ------------------------------------------------------

struct BMReport {
  double epsilon = 0.0;
  double estimated_C = 0.0;
  struct Row {
    int degree;
    double ratio;  // max over trials of grid-sup / e^{eps * degree}
  };
  std::vector<Row> ratios;
};

BMReport bm_ratio(const OrthonormalBasis& basis, const std::vector<Point>& sup_grid,
                  double epsilon, int trials, std::uint64_t seed);

std::string bm_report_json(const BMReport& report);

// Sup-norm sampling grid on the Silov boundary (denser than the
// quadrature default; interval uses Chebyshev extrema so polynomial
// sups are hit exactly at matching degrees).
std::vector<Point> sup_grid(const DomainModel& model, int resolution);

}  // namespace equizero
