#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mixshape/limits.hpp"
#include "mixshape/oracle.hpp"

using namespace mixshape;
using exact::IntMat;
using exact::IntVec;
using exact::Rat;
using limits::CRat;
using limits::TrigPoly;
using mixing::EpiSet;

namespace {

const IntMat kS = IntMat::from_rows({{0, -1}, {1, 0}});
const IntMat kT = IntMat::from_rows({{0, -1}, {1, -1}});
const IntMat kFib = IntMat::from_rows({{1, 1}, {1, 0}});

EpiSet plus_minus() {
  return EpiSet({IntMat::from_rows({{1}}), IntMat::from_rows({{-1}})});
}

double to_double(const Rat& r) { return mpq_get_d(r.get_mpq_t()); }

}  // namespace

TEST_CASE("ratio polynomial roots are the eigenvalue quotients") {
  // spectra {i,-i} for both inputs: quotients are 1 and -1 only
  exact::IntPoly r = limits::ratio_polynomial(exact::IntPoly::from({1, 0, 1}),
                                              exact::IntPoly::from({1, 0, 1}));
  auto rq = exact::RatPoly::from(r);
  CHECK(exact::poly_gcd(rq, exact::RatPoly::from({-1, 1})).degree() == 1);  // root 1
  CHECK(exact::poly_gcd(rq, exact::RatPoly::from({1, 1})).degree() == 1);   // root -1
  CHECK(exact::poly_gcd(rq, exact::RatPoly::from({1, 0, 1})).degree() == 0);  // no +-i
}

TEST_CASE("separating_exponent pinned values") {
  CHECK(limits::separating_exponent(EpiSet({kFib})) == 1);
  CHECK(limits::separating_exponent(plus_minus()) == 2);
  CHECK(limits::separating_exponent(EpiSet({kS, kT})) == 12);
  CHECK(limits::separating_exponent(EpiSet({kFib, kFib.pow(2)})) == 1);
}

TEST_CASE("character_limit pinned values") {
  EpiSet pm = plus_minus();
  std::vector<IntVec> ones{IntVec{1}, IntVec{1}};
  CHECK(limits::character_limit(pm, 2, 1, ones) == 1);
  CHECK(limits::character_limit(pm, 2, 0, ones) == 0);
  std::vector<IntVec> zeros{IntVec{0}, IntVec{0}};
  CHECK(limits::character_limit(pm, 2, 0, zeros) == 1);

  EpiSet aa2({kFib, kFib.pow(2)});
  std::vector<IntVec> chars{IntVec{1, 0}, IntVec{0, 1}};
  CHECK(limits::character_limit(aa2, 1, 0, chars) == 0);

  CHECK_THROWS_AS(limits::character_limit(pm, 2, 2, ones), std::invalid_argument);
  CHECK_THROWS_AS(limits::character_limit(pm, 2, 0, {IntVec{1}}), std::invalid_argument);
}

TEST_CASE("character_limit refines consistently to a doubled modulus") {
  EpiSet st({kS, kT});
  std::vector<IntVec> chars{IntVec{1, 0}, IntVec{-1, 0}};
  for (unsigned long k = 0; k < 12; ++k) {
    int coarse = limits::character_limit(st, 12, k, chars);
    int fine0 = limits::character_limit(st, 24, k, chars);
    int fine1 = limits::character_limit(st, 24, k + 12, chars);
    CHECK(coarse == (fine0 == 1 && fine1 == 1 ? 1 : 0));
  }
}

TEST_CASE("trigpoly_limit pinned values") {
  // constants multiply
  EpiSet aa2({kFib, kFib.pow(2)});
  std::vector<TrigPoly> consts{TrigPoly::constant(2, CRat{exact::make_rat(1, 2), Rat(0)}),
                               TrigPoly::constant(2, CRat{Rat(3), Rat(0)})};
  CHECK(limits::trigpoly_limit(aa2, consts, 0) == CRat{exact::make_rat(3, 2), Rat(0)});

  // single characters on {id, -id}
  EpiSet pm = plus_minus();
  std::vector<TrigPoly> chars{TrigPoly::character(IntVec{1}), TrigPoly::character(IntVec{1})};
  auto lim = limits::progression_limits(pm, chars);
  REQUIRE(lim.modulus == 2);
  CHECK(lim.values[0] == CRat{});
  CHECK(lim.values[1] == CRat{Rat(1), Rat(0)});

  // zero-mean inputs on a mixing set vanish at every residue
  TrigPoly f(2);
  f.set_term(IntVec{1, 0}, CRat{Rat(1), Rat(0)});
  f.set_term(IntVec{0, 1}, CRat{Rat(0), exact::make_rat(-2, 3)});
  auto zero_mean = limits::progression_limits(aa2, {f, f});
  for (const CRat& v : zero_mean.values) CHECK(v == CRat{});
}

TEST_CASE("mixing families converge to the product of means") {
  EpiSet aa2({kFib, kFib.pow(2)});
  TrigPoly f(2), g(2);
  f.set_term(IntVec{0, 0}, CRat{exact::make_rat(1, 3), Rat(0)});
  f.set_term(IntVec{1, 0}, CRat{Rat(2), Rat(1)});
  g.set_term(IntVec{0, 0}, CRat{Rat(5), exact::make_rat(1, 7)});
  g.set_term(IntVec{0, 1}, CRat{Rat(-1), Rat(0)});
  CRat expected = CRat{exact::make_rat(1, 3), Rat(0)} * CRat{Rat(5), exact::make_rat(1, 7)};
  auto lim = limits::progression_limits(aa2, {f, g});
  for (const CRat& v : lim.values) CHECK(v == expected);
}

TEST_CASE("limits are linear in each argument") {
  EpiSet st({kS, kT});
  TrigPoly f(2), g(2);
  f.set_term(IntVec{1, 0}, CRat{Rat(1), Rat(0)});
  f.set_term(IntVec{0, 0}, CRat{Rat(1), Rat(0)});
  g.set_term(IntVec{-1, 0}, CRat{Rat(1), Rat(0)});
  g.set_term(IntVec{0, 0}, CRat{Rat(2), Rat(0)});
  auto base = limits::progression_limits(st, {f, g});
  CRat c{exact::make_rat(3, 4), exact::make_rat(-1, 2)};
  TrigPoly fc(2);
  for (const auto& [chi, coeff] : f.terms()) fc.set_term(chi, coeff * c);
  auto scaled = limits::progression_limits(st, {fc, g});
  REQUIRE(base.modulus == scaled.modulus);
  for (unsigned long k = 0; k < base.modulus; ++k) CHECK(scaled.values[k] == base.values[k] * c);
}

TEST_CASE("residue average matches the Cesaro average of exact integrals") {
  EpiSet st({kS, kT});
  TrigPoly f(2), g(2);
  f.set_term(IntVec{1, 0}, CRat{Rat(1), Rat(0)});
  f.set_term(IntVec{0, 0}, CRat{exact::make_rat(1, 2), Rat(0)});
  g.set_term(IntVec{-1, 0}, CRat{Rat(1), Rat(0)});
  g.set_term(IntVec{0, 0}, CRat{exact::make_rat(1, 3), Rat(0)});
  auto lim = limits::progression_limits(st, {f, g});
  double residue_avg_re = 0;
  for (const CRat& v : lim.values) residue_avg_re += to_double(v.re);
  residue_avg_re /= static_cast<double>(lim.modulus);

  unsigned long big_n = lim.modulus * 500;
  double cesaro_re = 0;
  for (unsigned long n = 1; n <= big_n; ++n)
    cesaro_re += to_double(oracle::correlation_integral(st, n, {f, g}).re);
  cesaro_re /= static_cast<double>(big_n);
  CHECK(std::abs(residue_avg_re - cesaro_re) < 1e-3);
}
