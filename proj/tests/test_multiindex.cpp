#include <doctest.h>

#include "equizero/errors.hpp"
#include "equizero/multi_index.hpp"

using namespace equizero;

TEST_CASE("enumeration lengths and order") {
  const auto one = enumerate_multiindices(1, 3);
  REQUIRE(one.size() == 4);
  for (int k = 0; k <= 3; ++k) CHECK(one[k].exponents == std::vector<int>{k});

  CHECK(enumerate_multiindices(2, 3).size() == 10);  // C(5,2)
  const auto trivial = enumerate_multiindices(3, 0);
  REQUIRE(trivial.size() == 1);
  CHECK(trivial[0].exponents == std::vector<int>{0, 0, 0});

  // graded, coordinate 1 most significant
  const auto two = enumerate_multiindices(2, 2);
  CHECK(two[0].exponents == std::vector<int>{0, 0});
  CHECK(two[1].exponents == std::vector<int>{1, 0});
  CHECK(two[2].exponents == std::vector<int>{0, 1});
  CHECK(two[3].exponents == std::vector<int>{2, 0});
  CHECK(two[4].exponents == std::vector<int>{1, 1});
  CHECK(two[5].exponents == std::vector<int>{0, 2});
}

TEST_CASE("enumeration is degree-filtered: lower degree is a prefix") {
  const auto small = enumerate_multiindices(3, 4);
  const auto large = enumerate_multiindices(3, 5);
  REQUIRE(large.size() > small.size());
  for (std::size_t i = 0; i < small.size(); ++i)
    CHECK(small[i].exponents == large[i].exponents);
}

TEST_CASE("dimension formula and capacity guard") {
  CHECK(polynomial_space_dim(2, 3) == 10);
  CHECK(polynomial_space_dim(3, 15) == 816);
  CHECK_THROWS_AS(polynomial_space_dim(8, 200), CapacityError);
}

TEST_CASE("binomial and multinomial are exact") {
  CHECK(binomial(40, 20) == 137846528820.0);
  CHECK(binomial(5, 2) == 10.0);
  MultiIndex J{{2, 1, 1}, 4};
  CHECK(multinomial(J) == 12.0);  // 4!/(2!1!1!)
}

TEST_CASE("monomial evaluation") {
  MultiIndex J{{2, 1}, 3};
  const Point z = {cplx(2.0, 0.0), cplx(0.0, 1.0)};
  CHECK(monomial_value(J, z) == cplx(0.0, 4.0));
}
