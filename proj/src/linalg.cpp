#include "equizero/linalg.hpp"

#include <cmath>

namespace equizero {

CMat CMat::identity(int n) {
  CMat I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

bool cholesky_dd(const CMat& G, DDCMat& L, double* pivot_ratio) {
  const int n = G.rows;
  L = DDCMat(n);
  double min_piv = 0.0, max_piv = 0.0;
  for (int j = 0; j < n; ++j) {
    DD d(G(j, j).real());
    for (int k = 0; k < j; ++k) d = d - sq_abs(L(j, k));
    if (!(d.hi > 0.0)) {
      if (pivot_ratio) *pivot_ratio = d.hi / (max_piv > 0 ? max_piv : 1.0);
      return false;
    }
    const DD piv = dd_sqrt(d);
    L(j, j) = DDC(piv, DD(0.0));
    if (j == 0) {
      min_piv = max_piv = d.hi;
    } else {
      min_piv = std::min(min_piv, d.hi);
      max_piv = std::max(max_piv, d.hi);
    }
    for (int i = j + 1; i < n; ++i) {
      DDC s(G(i, j).real(), G(i, j).imag());
      for (int k = 0; k < j; ++k) s = s - L(i, k) * conj(L(j, k));
      L(i, j) = s / piv;
    }
  }
  if (pivot_ratio) *pivot_ratio = max_piv > 0.0 ? min_piv / max_piv : 0.0;
  return true;
}

DDCMat lower_inverse_dd(const DDCMat& L) {
  const int n = L.n;
  DDCMat A(n);
  for (int j = 0; j < n; ++j) {
    A(j, j) = DDC(DD(1.0) / L(j, j).re, DD(0.0));
    for (int i = j + 1; i < n; ++i) {
      DDC s(DD(0.0), DD(0.0));
      for (int k = j; k < i; ++k) s = s - L(i, k) * A(k, j);
      A(i, j) = s / L(i, i).re;
    }
  }
  return A;
}

CMat to_double(const DDCMat& M) {
  CMat out(M.n, M.n);
  for (int i = 0; i < M.n; ++i)
    for (int j = 0; j < M.n; ++j)
      out(i, j) = cplx(M(i, j).re.value(), M(i, j).im.value());
  return out;
}

double gram_residual_max(const CMat& A, const CMat& G) {
  const int n = A.rows;
  // B = G A^*
  std::vector<DDC> B(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      DDC s(DD(0.0), DD(0.0));
      for (int k = 0; k < n; ++k) {
        const cplx g = G(i, k);
        const cplx aa = A(j, k);  // (A^*)_{kj} = conj(A_{jk})
        s = s + DDC(g.real(), g.imag()) * DDC(aa.real(), -aa.imag());
      }
      B[std::size_t(i) * n + j] = s;
    }
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      DDC s(DD(0.0), DD(0.0));
      for (int k = 0; k < n; ++k) {
        const cplx aa = A(i, k);
        s = s + DDC(aa.real(), aa.imag()) * B[std::size_t(k) * n + j];
      }
      if (i == j) s.re = s.re - DD(1.0);
      worst = std::max(worst, std::hypot(s.re.value(), s.im.value()));
    }
  return worst;
}

namespace {

std::vector<cplx> start_vector(int n) {
  std::vector<cplx> x(n);
  for (int i = 0; i < n; ++i) x[i] = cplx(1.0 + 0.37 * ((i * 7919) % 13), 0.11 * (i % 5));
  return x;
}

void normalize(std::vector<cplx>& x) {
  double n2 = 0.0;
  for (const cplx& v : x) n2 += std::norm(v);
  const double inv = 1.0 / std::sqrt(n2);
  for (cplx& v : x) v *= inv;
}

}  // namespace

double spectral_norm_sq(const CMat& M) {
  const int n = M.rows;
  std::vector<cplx> x = start_vector(n);
  normalize(x);
  std::vector<cplx> y(n);
  double est = 0.0;
  for (int it = 0; it < 30; ++it) {
    for (int i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += M(i, k) * x[k];
      y[i] = s;
    }
    est = 0.0;
    for (const cplx& v : y) est += std::norm(v);
    for (int i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += std::conj(M(k, i)) * y[k];
      x[i] = s;
    }
    normalize(x);
  }
  return est;
}

double hermitian_lambda_max(const CMat& G) {
  const int n = G.rows;
  std::vector<cplx> x = start_vector(n);
  normalize(x);
  std::vector<cplx> y(n);
  double est = 0.0;
  for (int it = 0; it < 30; ++it) {
    for (int i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += G(i, k) * x[k];
      y[i] = s;
    }
    cplx rayleigh = 0.0;
    for (int i = 0; i < n; ++i) rayleigh += std::conj(x[i]) * y[i];
    est = rayleigh.real();
    x = y;
    normalize(x);
  }
  return est;
}

bool hermitian_solve(CMat G, std::vector<cplx>& rhs) {
  const int n = G.rows;
  // in-place lower Cholesky
  for (int j = 0; j < n; ++j) {
    double d = G(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(G(j, k));
    if (!(d > 0.0)) return false;
    const double piv = std::sqrt(d);
    G(j, j) = piv;
    for (int i = j + 1; i < n; ++i) {
      cplx s = G(i, j);
      for (int k = 0; k < j; ++k) s -= G(i, k) * std::conj(G(j, k));
      G(i, j) = s / piv;
    }
  }
  // forward then backward substitution
  for (int i = 0; i < n; ++i) {
    cplx s = rhs[i];
    for (int k = 0; k < i; ++k) s -= G(i, k) * rhs[k];
    rhs[i] = s / G(i, i).real();
  }
  for (int i = n - 1; i >= 0; --i) {
    cplx s = rhs[i];
    for (int k = i + 1; k < n; ++k) s -= std::conj(G(k, i)) * rhs[k];
    rhs[i] = s / G(i, i).real();
  }
  return true;
}

}  // namespace equizero
