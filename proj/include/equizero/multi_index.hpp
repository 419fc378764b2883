#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace equizero {

using cplx = std::complex<double>;
using Point = std::vector<cplx>;
using PointView = std::span<const cplx>;

// Exponent vector J = (j_1, ..., j_m) for the monomial z^J.
struct MultiIndex {
  std::vector<int> exponents;
  int total = 0;

  int dimension() const { return static_cast<int>(exponents.size()); }
};

bool operator==(const MultiIndex& a, const MultiIndex& b);

// dim P_N = C(N+m, m); throws CapacityError past 2^31.
std::int64_t polynomial_space_dim(int m, int N);

// Exact binomial/multinomial as integer-valued doubles (arguments small
// enough that the product stays below 2^53).
double binomial(int n, int k);
double multinomial(const MultiIndex& J);

// All |J| <= N in the canonical order: graded by total degree, ties broken
// lexicographically with coordinate 1 most significant (higher j_1 first).
// This order is frozen; bases, Gram matrices and CSV exports all use it.
std::vector<MultiIndex> enumerate_multiindices(int m, int N);

std::string format_multiindex(const MultiIndex& J);

// z^J given precomputed coordinate values.
cplx monomial_value(const MultiIndex& J, PointView z);

}  // namespace equizero
