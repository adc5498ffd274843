#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "mixshape/families.hpp"
#include "mixshape/groups.hpp"
#include "mixshape/oracle.hpp"

using namespace mixshape;
using exact::IntMat;
using exact::IntVec;
using exact::Rat;
using mixing::EpiSet;
using oracle::BoxSet;

namespace {

const IntMat kS = IntMat::from_rows({{0, -1}, {1, 0}});
const IntMat kT = IntMat::from_rows({{0, -1}, {1, -1}});
const IntMat kFib = IntMat::from_rows({{1, 1}, {1, 0}});

unsigned long count_hits(const EpiSet& f, const std::vector<IntVec>& tuple, unsigned long n_max) {
  unsigned long hits = 0;
  std::vector<IntVec> w = tuple;
  std::vector<IntMat> duals;
  for (const IntMat& t : f.maps) duals.push_back(mixing::dual(t));
  for (unsigned long n = 1; n <= n_max; ++n) {
    IntVec sum(f.dim(), exact::Int(0));
    for (std::size_t k = 0; k < f.size(); ++k) {
      w[k] = duals[k].apply(w[k]);
      for (std::size_t i = 0; i < f.dim(); ++i) sum[i] += w[k][i];
    }
    if (exact::is_zero(sum)) ++hits;
  }
  return hits;
}

BoxSet half_box(std::size_t d) {
  std::vector<std::pair<Rat, Rat>> iv(d, {Rat(0), exact::make_rat(1, 2)});
  return BoxSet(std::move(iv));
}

std::mt19937_64 rng(5150);

IntMat random_epi(std::size_t d) {
  std::uniform_int_distribution<long> e(-3, 3);
  while (true) {
    IntMat m(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m.at(i, j) = e(rng);
    if (m.det() != 0) return m;
  }
}

}  // namespace

TEST_CASE("brute force finds the periodic relation of the rotation pair") {
  EpiSet st({kS, kT});
  auto witness = oracle::brute_force_relation_search(st, 1, 24, 2);
  REQUIRE(witness.has_value());
  CHECK(count_hits(st, *witness, 24) >= 2);
  // the canonical kernel witness also qualifies; in particular it hits at
  // every multiple of 12, where both powers are the identity
  std::vector<IntVec> kernel_witness{IntVec{1, 0}, IntVec{-1, 0}};
  CHECK(count_hits(st, kernel_witness, 24) >= 2);
  CHECK(oracle::verify_witness(st, 12, kernel_witness, 4));
}

TEST_CASE("brute force stays silent on mixing families") {
  CHECK(!oracle::brute_force_relation_search(EpiSet({kFib}), 3, 20, 1).has_value());
  CHECK(!oracle::brute_force_relation_search(EpiSet({kFib, kFib.pow(2)}), 2, 40, 3).has_value());
  // no tuple of height <= 5 persists over every n = 1..8 for the rotations
  CHECK(!oracle::brute_force_relation_search(EpiSet({kS, kT}), 5, 8, 8).has_value());
}

TEST_CASE("witness replay accepts the certificate and rejects perturbations") {
  EpiSet st({kS, kT});
  std::vector<IntVec> cert{IntVec{1, 0}, IntVec{-1, 0}};
  CHECK(oracle::verify_witness(st, 12, cert, 10));
  std::vector<IntVec> bumped{IntVec{1, 1}, IntVec{-1, 0}};
  CHECK(!oracle::verify_witness(st, 12, bumped, 10));
  std::vector<IntVec> zero{IntVec{0, 0}, IntVec{0, 0}};
  CHECK_THROWS_AS(oracle::verify_witness(st, 12, zero, 10), std::invalid_argument);
  CHECK_THROWS_AS(oracle::verify_witness(st, 12, {IntVec{1, 0}}, 10), std::invalid_argument);
}

TEST_CASE("single-entry perturbations of kernel witnesses fail replay") {
  std::uniform_int_distribution<std::size_t> dd(1, 2);
  int tested = 0;
  for (int i = 0; i < 40 && tested < 8; ++i) {
    std::size_t d = dd(rng);
    std::vector<IntMat> maps{random_epi(d), random_epi(d)};
    EpiSet f(maps);
    auto v = mixing::is_mixing_set(f);
    if (mixing::is_mixing(v)) continue;
    auto nm = std::get<mixing::NotMixing>(v);
    REQUIRE(oracle::verify_witness(f, nm.exponent, nm.witness, 12));
    auto bumped = nm.witness;
    bumped[0][0] += 1;
    bool all_zero = true;
    for (const IntVec& vv : bumped) all_zero = all_zero && exact::is_zero(vv);
    if (!all_zero) CHECK(!oracle::verify_witness(f, nm.exponent, bumped, 12));
    ++tested;
  }
  CHECK(tested > 0);
}

TEST_CASE("monte carlo respects the box measure at n = 0") {
  EpiSet single({kFib});
  std::vector<BoxSet> boxes{half_box(2)};
  double est = oracle::mc_correlation(single, 0, boxes, 40000, 11);
  double se = std::sqrt(0.25 * 0.75 / 40000.0);
  CHECK(std::abs(est - 0.25) < 3 * se);
}

TEST_CASE("monte carlo is deterministic given the seed") {
  EpiSet st({kS, kT});
  std::vector<BoxSet> boxes{half_box(2), half_box(2)};
  double a = oracle::mc_correlation(st, 3, boxes, 5000, 99);
  double b = oracle::mc_correlation(st, 3, boxes, 5000, 99);
  CHECK(a == b);
}

TEST_CASE("monte carlo separates mixing from periodic correlation") {
  std::vector<BoxSet> boxes{half_box(2), half_box(2)};
  double mixing_est = oracle::mc_correlation(EpiSet({kFib, kFib.pow(2)}), 20, boxes, 30000, 17);
  double se16 = std::sqrt(0.0625 * 0.9375 / 30000.0);
  CHECK(std::abs(mixing_est - 0.0625) < 3 * se16);
  double periodic_est = oracle::mc_correlation(EpiSet({kS, kT}), 24, boxes, 30000, 17);
  double se4 = std::sqrt(0.25 * 0.75 / 30000.0);
  CHECK(std::abs(periodic_est - 0.25) < 3 * se4);
}

TEST_CASE("box validation") {
  CHECK_THROWS_AS(BoxSet({{Rat(0), Rat(0)}}), std::invalid_argument);
  CHECK_THROWS_AS(BoxSet({{exact::make_rat(1, 2), exact::make_rat(3, 2)}}), std::invalid_argument);
  CHECK(BoxSet({{exact::make_rat(1, 4), exact::make_rat(3, 4)}}).measure() == exact::make_rat(1, 2));
}

TEST_CASE("higher-order refutation of the conjugate family") {
  IntMat gamma = IntMat::from_rows({{1, 2}, {0, 1}});
  IntMat delta = IntMat::from_rows({{1, 0}, {2, 1}});
  EpiSet fam = groups::conjugate_family(gamma, delta, 3);
  auto witness =
      oracle::higher_order_refute(fam, 3, 1, 2, 12, oracle::ProductForm::kGroupPowerQuotients);
  REQUIRE(witness.has_value());
  CHECK(witness->words.size() == 3);
  CHECK(witness->tuple.size() == 3);
  // the group form needs invertible generators
  EpiSet doubled({IntMat::from_rows({{2, 0}, {0, 2}})});
  CHECK_THROWS_AS(
      oracle::higher_order_refute(doubled, 2, 1, 1, 4, oracle::ProductForm::kGroupPowerQuotients),
      std::invalid_argument);
}

TEST_CASE("higher-order search is silent on hyperbolic generators") {
  CHECK(!oracle::higher_order_refute(EpiSet({kFib}), 3, 2, 2, 12).has_value());
  CHECK(!oracle::higher_order_refute(EpiSet({kFib}), 3, 2, 2, 12,
                                     oracle::ProductForm::kGroupPowerQuotients)
             .has_value());
}

TEST_CASE("engine and oracle agree on a quick random sample") {
  std::uniform_int_distribution<std::size_t> dd(1, 2), ss(2, 3);
  for (int i = 0; i < 30; ++i) {
    std::size_t d = dd(rng), s = ss(rng);
    std::vector<IntMat> maps;
    for (std::size_t k = 0; k < s; ++k) maps.push_back(random_epi(d));
    EpiSet f(maps);
    auto v = mixing::is_mixing_set(f);
    if (mixing::is_mixing(v)) {
      CHECK(!oracle::brute_force_relation_search(f, 3, 48, 3).has_value());
    } else {
      auto nm = std::get<mixing::NotMixing>(v);
      CHECK(oracle::verify_witness(f, nm.exponent, nm.witness, 4 * s * d));
    }
  }
}
