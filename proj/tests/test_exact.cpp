#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "mixshape/exact.hpp"

using namespace mixshape::exact;

namespace {

std::mt19937_64 rng(20260808u);

IntMat random_unimodular(std::size_t d, int ops) {
  IntMat u = IntMat::identity(d);
  std::uniform_int_distribution<int> coef(-2, 2);
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  for (int k = 0; k < ops; ++k) {
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    long c = coef(rng);
    for (std::size_t col = 0; col < d; ++col) u.at(i, col) += c * u.at(j, col);
  }
  return u;
}

IntMat random_int_mat(std::size_t d, long lo, long hi) {
  IntMat m(d);
  std::uniform_int_distribution<long> e(lo, hi);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m.at(i, j) = e(rng);
  return m;
}

RatMat random_rat_mat(std::size_t rows, std::size_t cols) {
  RatMat m(rows, cols);
  std::uniform_int_distribution<long> num(-4, 4);
  std::uniform_int_distribution<long> den(1, 3);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = make_rat(num(rng), den(rng));
  return m;
}

RatPoly random_rat_poly(int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<long> num(-3, 3);
  RatVec c(deg(rng) + 1);
  for (Rat& x : c) x = num(rng);
  return RatPoly(std::move(c));
}

}  // namespace

TEST_CASE("rationals stay reduced with positive denominator") {
  Rat r = make_rat(4, -6);
  CHECK(r.get_num() == -2);
  CHECK(r.get_den() == 3);
  CHECK(parse_rat("-7/21") == make_rat(-1, 3));
  CHECK(parse_rat("5") == Rat(5));
  CHECK(rat_to_string(make_rat(6, 4)) == "3/2");
  CHECK_THROWS_AS(make_rat(1, 0), std::invalid_argument);
}

TEST_CASE("charpoly on pinned matrices") {
  CHECK(charpoly(IntMat::identity(2)) == IntPoly::from({1, -2, 1}));
  CHECK(charpoly(IntMat::from_rows({{1, 1}, {1, 0}})) == IntPoly::from({-1, -1, 1}));
  CHECK(charpoly(IntMat::from_rows({{0, -1}, {1, 0}})) == IntPoly::from({1, 0, 1}));
}

TEST_CASE("charpoly is invariant under unimodular similarity") {
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t d = 2 + trial % 3;
    IntMat m = random_int_mat(d, -4, 4);
    IntMat u = random_unimodular(d, 6);
    IntMat u_inv(d);
    {
      RatMat inv = RatMat::from(u).inverse();
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          REQUIRE(inv.at(i, j).get_den() == 1);
          u_inv.at(i, j) = inv.at(i, j).get_num();
        }
    }
    CHECK(charpoly(u * m * u_inv) == charpoly(m));
  }
}

TEST_CASE("charpoly constant term is the signed determinant") {
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t d = 1 + trial % 4;
    IntMat m = random_int_mat(d, -5, 5);
    IntPoly p = charpoly(m);
    Int expected = (d % 2 == 0) ? m.det() : Int(-m.det());
    CHECK(p.coeff(0) == expected);
  }
}

TEST_CASE("rational_kernel on pinned matrices") {
  RatMat id2 = RatMat::identity(2);
  CHECK(rational_kernel(id2).empty());

  RatMat ones(2, 2);
  ones.at(0, 0) = 1; ones.at(0, 1) = 1; ones.at(1, 0) = 1; ones.at(1, 1) = 1;
  auto k1 = rational_kernel(ones);
  REQUIRE(k1.size() == 1);
  CHECK(k1[0] == IntVec{1, -1});

  RatMat multiple(2, 2);
  multiple.at(0, 0) = 1; multiple.at(0, 1) = 2; multiple.at(1, 0) = 2; multiple.at(1, 1) = 4;
  auto k2 = rational_kernel(multiple);
  REQUIRE(k2.size() == 1);
  CHECK(k2[0] == IntVec{2, -1});
}

TEST_CASE("rank + nullity equals the column count") {
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t rows = 1 + trial % 6, cols = 1 + (trial * 7 + 3) % 6;
    RatMat m = random_rat_mat(rows, cols);
    auto kernel = rational_kernel(m);
    CHECK(kernel.size() + m.rank() == cols);
    for (const IntVec& v : kernel) {
      RatVec x(v.begin(), v.end());
      CHECK(is_zero(m.apply(x)));
    }
  }
}

TEST_CASE("poly_gcd on pinned pairs") {
  RatPoly a = RatPoly::from({1, 0, 1});         // x^2 + 1
  RatPoly b = RatPoly::from(IntPoly::x_power_minus_one(4));
  CHECK(poly_gcd(a, b) == a);

  RatPoly fib = RatPoly::from({-1, -1, 1});     // x^2 - x - 1
  RatPoly c12 = RatPoly::from(IntPoly::x_power_minus_one(12));
  CHECK(poly_gcd(fib, c12).degree() == 0);

  RatPoly p = RatPoly::from({2, 4});
  RatPoly monic = poly_gcd(p, RatPoly());
  CHECK(monic == RatPoly(RatVec{make_rat(1, 2), Rat(1)}));
  CHECK_THROWS_AS(poly_gcd(RatPoly(), RatPoly()), std::invalid_argument);
}

TEST_CASE("poly_gcd divides both arguments exactly") {
  for (int trial = 0; trial < 40; ++trial) {
    RatPoly p = random_rat_poly(5), q = random_rat_poly(5);
    if (p.is_zero() && q.is_zero()) continue;
    RatPoly g = poly_gcd(p, q);
    if (g.is_zero()) continue;
    if (!p.is_zero()) CHECK(p.divmod(g).second.is_zero());
    if (!q.is_zero()) CHECK(q.divmod(g).second.is_zero());
  }
}

TEST_CASE("lattice_saturate on pinned bases") {
  CHECK(lattice_saturate({RatVec{make_rat(1, 2), make_rat(1, 2)}}) ==
        std::vector<IntVec>{IntVec{1, 1}});
  CHECK(lattice_saturate({RatVec{Rat(0), Rat(1)}}) == std::vector<IntVec>{IntVec{0, 1}});
  std::vector<IntVec> z2{IntVec{1, 0}, IntVec{0, 1}};
  CHECK(lattice_saturate({RatVec{make_rat(1, 3), Rat(0)}, RatVec{Rat(0), make_rat(2, 5)}}) == z2);
  CHECK_THROWS_AS(lattice_saturate({RatVec{Rat(1), Rat(1)}, RatVec{Rat(2), Rat(2)}}),
                  std::invalid_argument);
}

TEST_CASE("lattice_saturate output is primitive and spans the input") {
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t d = 2 + trial % 3;
    std::size_t k = 1 + trial % d;
    std::vector<RatVec> basis;
    RatMat probe(k, d);
    for (std::size_t i = 0; i < k; ++i) {
      RatVec v(d);
      std::uniform_int_distribution<long> num(-3, 3);
      std::uniform_int_distribution<long> den(1, 4);
      for (std::size_t j = 0; j < d; ++j) v[j] = make_rat(num(rng), den(rng));
      basis.push_back(v);
      for (std::size_t j = 0; j < d; ++j) probe.at(i, j) = v[j];
    }
    if (probe.rank() != k) continue;
    auto sat = lattice_saturate(basis);
    REQUIRE(sat.size() == k);
    // Same rational span: stacking either way does not raise the rank.
    std::vector<RatVec> both;
    for (const RatVec& v : basis) both.push_back(v);
    for (const IntVec& v : sat) both.emplace_back(v.begin(), v.end());
    CHECK(RatMat::from_rows(both).rank() == k);
    for (const IntVec& v : sat) {
      Int g = 0;
      for (const Int& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
      CHECK(g == 1);
    }
  }
}

TEST_CASE("saturation catches non-integral lattices") {
  // span{(1,1)}/2: saturation of the line through (1/2, 1/2) is generated by (1,1).
  auto sat = lattice_saturate({RatVec{make_rat(2, 4), make_rat(1, 2)}});
  CHECK(sat == std::vector<IntVec>{IntVec{1, 1}});
  // A skew plane in Q^3.
  auto plane = lattice_saturate({RatVec{make_rat(1, 2), Rat(0), make_rat(1, 2)},
                                 RatVec{Rat(0), make_rat(1, 3), make_rat(1, 3)}});
  REQUIRE(plane.size() == 2);
  for (const IntVec& v : plane) {
    // Each basis vector lies in the span of {(1,0,1)/2, (0,1,1)/3}: check by rank.
    std::vector<RatVec> stack{RatVec{make_rat(1, 2), Rat(0), make_rat(1, 2)},
                              RatVec{Rat(0), make_rat(1, 3), make_rat(1, 3)},
                              RatVec(v.begin(), v.end())};
    CHECK(RatMat::from_rows(stack).rank() == 2);
  }
}

TEST_CASE("minimal polynomial divides the characteristic polynomial") {
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t d = 2 + trial % 3;
    IntMat m = random_int_mat(d, -3, 3);
    RatPoly mp = minimal_polynomial(m);
    RatPoly cp = RatPoly::from(charpoly(m));
    CHECK(cp.divmod(mp).second.is_zero());
  }
  CHECK(minimal_polynomial(IntMat::identity(3)) == RatPoly::from({-1, 1}));
}

TEST_CASE("integer matrix powers and determinants") {
  IntMat fib = IntMat::from_rows({{1, 1}, {1, 0}});
  IntMat f10 = fib.pow(10);
  CHECK(f10.at(0, 0) == 89);  // F_11
  CHECK(f10.at(0, 1) == 55);
  CHECK(fib.det() == -1);
  CHECK(IntMat::from_rows({{2, 0}, {0, 3}}).det() == 6);
  CHECK(fib.pow(0).is_identity());
}

TEST_CASE("zero polynomial sentinel and exact division") {
  IntPoly zero;
  CHECK(zero.is_zero());
  CHECK(zero.degree() == -1);
  CHECK(IntPoly(IntVec{0, 0, 0}).degree() == -1);
  CHECK_THROWS_AS(zero.leading(), std::invalid_argument);

  IntPoly x4m1 = IntPoly::x_power_minus_one(4);
  IntPoly x2p1 = IntPoly::from({1, 0, 1});
  CHECK(x4m1.divexact(x2p1) == IntPoly::from({-1, 0, 1}));
  // nonzero remainder rejected: x - 2 does not divide x^4 - 1
  CHECK_THROWS_AS(x4m1.divexact(IntPoly::from({-2, 1})), std::invalid_argument);
  CHECK_THROWS_AS(IntPoly::from({0, 0, 0, 1}).divexact(x2p1), std::invalid_argument);
}

TEST_CASE("power_of_x_mod matches plain reduction") {
  RatPoly m = RatPoly::from({-1, -1, 1});
  for (unsigned long e : {0ul, 1ul, 5ul, 12ul, 37ul}) {
    RatVec big(e + 1, Rat(0));
    big[e] = 1;
    CHECK(power_of_x_mod(e, m) == RatPoly(std::move(big)).divmod(m).second);
  }
}
