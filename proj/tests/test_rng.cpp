#include <doctest.h>

#include <cmath>

#include "equizero/rng.hpp"

using namespace equizero;

TEST_CASE("philox draws are deterministic and keyed") {
  const GaussianStream s{42};
  const cplx a = s.complex_gaussian(0, 0);
  const cplx b = s.complex_gaussian(0, 0);
  CHECK(a == b);
  CHECK(s.complex_gaussian(0, 1) != a);
  CHECK(s.complex_gaussian(1, 0) != a);
  const GaussianStream other{43};
  CHECK(other.complex_gaussian(0, 0) != a);
}

TEST_CASE("draws are order-independent (counter-based)") {
  const GaussianStream s{7};
  std::vector<cplx> forward(100), backward(100);
  for (int i = 0; i < 100; ++i) forward[i] = s.complex_gaussian(3, i);
  for (int i = 99; i >= 0; --i) backward[i] = s.complex_gaussian(3, i);
  CHECK(forward == backward);
}

TEST_CASE("complex gaussian moments") {
  const GaussianStream s{20240210};
  const int trials = 100000;
  cplx mean = 0.0;
  double second = 0.0;
  for (int t = 0; t < trials; ++t) {
    const cplx c = s.complex_gaussian(t, 0);
    mean += c;
    second += std::norm(c);
  }
  mean /= double(trials);
  second /= double(trials);
  CHECK(std::abs(mean) < 0.0095);        // 3 sigma for the complex mean
  CHECK(std::abs(second - 1.0) < 0.01);  // E|c|^2 = 1
}

TEST_CASE("uniforms cover [0,1)") {
  const GaussianStream s{5};
  double lo = 1.0, hi = 0.0, mean = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform(0, i);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    mean += u;
  }
  mean /= n;
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(mean - 0.5) < 0.01);
}
