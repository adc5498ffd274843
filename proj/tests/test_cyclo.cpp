#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "mixshape/cyclo.hpp"

using namespace mixshape;
using exact::Int;
using exact::IntPoly;
using exact::RatPoly;

TEST_CASE("euler_phi pinned values") {
  CHECK(cyclo::euler_phi(1) == 1);
  CHECK(cyclo::euler_phi(12) == 4);
  CHECK(cyclo::euler_phi(5) == 4);
  CHECK(cyclo::euler_phi(720720) == 138240);
  CHECK_THROWS_AS(cyclo::euler_phi(0), std::invalid_argument);
}

TEST_CASE("phi_bounded_orders pinned sets") {
  CHECK(cyclo::phi_bounded_orders(1).orders == std::vector<unsigned long>{1, 2});
  CHECK(cyclo::phi_bounded_orders(2).orders == std::vector<unsigned long>{1, 2, 3, 4, 6});
  CHECK(cyclo::phi_bounded_orders(4).orders ==
        std::vector<unsigned long>{1, 2, 3, 4, 5, 6, 8, 10, 12});
}

TEST_CASE("phi_bounded_orders is exactly the phi sublevel set") {
  for (unsigned long b = 1; b <= 9; ++b) {
    auto set = cyclo::phi_bounded_orders(b);
    auto next = cyclo::phi_bounded_orders(b + 1);
    // monotone in the bound
    for (unsigned long n : set.orders)
      CHECK(std::find(next.orders.begin(), next.orders.end(), n) != next.orders.end());
    // membership is equivalent to phi(n) <= b over the whole scan range
    std::size_t at = 0;
    for (unsigned long n = 1; n <= 2 * b * b + 2; ++n) {
      bool in = at < set.orders.size() && set.orders[at] == n;
      if (in) ++at;
      CHECK(in == (cyclo::euler_phi(n) <= b));
    }
    CHECK(at == set.orders.size());
  }
}

TEST_CASE("torsion_exponent pinned values and divisibility") {
  CHECK(cyclo::torsion_exponent(1) == 2);
  CHECK(cyclo::torsion_exponent(2) == 12);
  CHECK(cyclo::torsion_exponent(4) == 120);
  for (unsigned long d = 1; d <= 6; ++d) {
    Int m = cyclo::torsion_exponent(d);
    for (unsigned long n : cyclo::phi_bounded_orders(d).orders) CHECK(m % n == 0);
  }
}

TEST_CASE("cyclotomic polynomials by exact division") {
  CHECK(cyclo::cyclotomic_polynomial(1) == IntPoly::from({-1, 1}));
  CHECK(cyclo::cyclotomic_polynomial(2) == IntPoly::from({1, 1}));
  CHECK(cyclo::cyclotomic_polynomial(4) == IntPoly::from({1, 0, 1}));
  CHECK(cyclo::cyclotomic_polynomial(6) == IntPoly::from({1, -1, 1}));
  CHECK(cyclo::cyclotomic_polynomial(12) == IntPoly::from({1, 0, -1, 0, 1}));
  // product over divisors reassembles x^n - 1
  for (unsigned long n : {6ul, 8ul, 12ul, 30ul}) {
    IntPoly prod = IntPoly::from({1});
    for (unsigned long m = 1; m <= n; ++m)
      if (n % m == 0) prod = prod * cyclo::cyclotomic_polynomial(m);
    CHECK(prod == IntPoly::x_power_minus_one(n));
  }
}

TEST_CASE("has_root_of_unity_root pinned values") {
  CHECK(cyclo::has_root_of_unity_root(RatPoly::from({-1, 1}), 1));       // x - 1
  CHECK(cyclo::has_root_of_unity_root(RatPoly::from({1, 0, 1}), 2));     // x^2 + 1
  CHECK(!cyclo::has_root_of_unity_root(RatPoly::from({-1, -1, 1}), 2));  // x^2 - x - 1
  CHECK(!cyclo::has_root_of_unity_root(RatPoly::from({-2, 1}), 1));      // x - 2
  CHECK_THROWS_AS(cyclo::has_root_of_unity_root(RatPoly(), 2), std::invalid_argument);
}

TEST_CASE("every bounded-order cyclotomic is detected") {
  for (unsigned long d = 1; d <= 4; ++d)
    for (unsigned long n : cyclo::phi_bounded_orders(d).orders)
      CHECK(cyclo::has_root_of_unity_root(RatPoly::from(cyclo::cyclotomic_polynomial(n)), d));
}
