#pragma once

#include <vector>

#include "equizero/dd.hpp"
#include "equizero/multi_index.hpp"

namespace equizero {

// Dense complex matrix, row-major.
struct CMat {
  int rows = 0, cols = 0;
  std::vector<cplx> a;

  CMat() = default;
  CMat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, cplx(0.0)) {}
  static CMat identity(int n);

  cplx& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
  const cplx& operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }
};

struct DDCMat {
  int n = 0;
  std::vector<DDC> a;

  explicit DDCMat(int n_) : n(n_), a(std::size_t(n_) * n_) {}
  DDC& operator()(int i, int j) { return a[std::size_t(i) * n + j]; }
  const DDC& operator()(int i, int j) const { return a[std::size_t(i) * n + j]; }
};

// Cholesky G = L L^* at double-double precision (handles condition numbers
// to ~1e30).  Returns false on pivot breakdown; pivot_ratio receives
// min_j L_jj^2 / max_j L_jj^2, a cheap proxy for lambda_min/lambda_max.
bool cholesky_dd(const CMat& G, DDCMat& L, double* pivot_ratio = nullptr);

// Inverse of a lower-triangular factor (real positive diagonal).
DDCMat lower_inverse_dd(const DDCMat& L);

CMat to_double(const DDCMat& M);

// max_ij |(A G A^* - I)_ij| evaluated in double-double; A, G are the
// double-precision matrices actually shipped, so this measures the true
// orthonormality defect of the stored basis.
double gram_residual_max(const CMat& A, const CMat& G);

// Plain double Hermitian positive-definite solve (in-place Cholesky),
// for well-conditioned desk-size systems.  Returns false if not PD.
bool hermitian_solve(CMat G, std::vector<cplx>& rhs);

// Largest singular value squared (power iteration on M^* M), and the
// largest eigenvalue of a Hermitian PSD matrix.  Deterministic start
// vector; accurate to a few percent, which is all conditioning gates need.
double spectral_norm_sq(const CMat& M);
double hermitian_lambda_max(const CMat& G);

}  // namespace equizero
