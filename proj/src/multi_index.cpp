#include "equizero/multi_index.hpp"

#include <algorithm>
#include <string>

#include "equizero/errors.hpp"

namespace equizero {

bool operator==(const MultiIndex& a, const MultiIndex& b) {
  return a.exponents == b.exponents;
}

std::int64_t polynomial_space_dim(int m, int N) {
  if (m < 1 || N < 0) throw ArgumentError("polynomial_space_dim: need m >= 1, N >= 0");
  std::int64_t dim = 1;
  for (int i = 1; i <= m; ++i) {
    dim = dim * (N + i) / i;  // exact: product of i consecutive integers divisible by i!
    if (dim > (std::int64_t{1} << 31))
      throw CapacityError("polynomial_space_dim: C(N+m, m) exceeds capacity at m=" +
                          std::to_string(m) + ", N=" + std::to_string(N));
  }
  return dim;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  // r is integer-valued; round away accumulated dust
  return std::round(r);
}

double multinomial(const MultiIndex& J) {
  double r = 1.0;
  int seen = 0;
  for (int j : J.exponents) {
    seen += j;
    r *= binomial(seen, j);
  }
  return r;
}

namespace {

void emit_degree_block(int m, int degree, std::vector<int>& work, int pos, int remaining,
                       std::vector<MultiIndex>& out) {
  if (pos == m - 1) {
    work[pos] = remaining;
    out.push_back(MultiIndex{work, degree});
    return;
  }
  // higher exponent on the more significant coordinate first
  for (int j = remaining; j >= 0; --j) {
    work[pos] = j;
    emit_degree_block(m, degree, work, pos + 1, remaining - j, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multiindices(int m, int N) {
  const std::int64_t dim = polynomial_space_dim(m, N);
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(dim));
  std::vector<int> work(m, 0);
  for (int degree = 0; degree <= N; ++degree)
    emit_degree_block(m, degree, work, 0, degree, out);
  return out;
}

std::string format_multiindex(const MultiIndex& J) {
  std::string s;
  for (std::size_t i = 0; i < J.exponents.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(J.exponents[i]);
  }
  return s;
}

cplx monomial_value(const MultiIndex& J, PointView z) {
  cplx v = 1.0;
  for (std::size_t i = 0; i < J.exponents.size(); ++i)
    for (int p = 0; p < J.exponents[i]; ++p) v *= z[i];
  return v;
}

}  // namespace equizero
