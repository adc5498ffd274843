#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mixshape/exact.hpp"
#include "mixshape/groups.hpp"
#include "mixshape/limits.hpp"
#include "mixshape/mixing.hpp"

// Independent brute-force and Monte Carlo checks that validate the decision
// engine from first principles.  Nothing here reuses the kernel solver: all
// searches are direct enumeration, all replay is iterative matrix-vector
// powering.

namespace mixshape::oracle {

// Product of half-open rational intervals inside [0,1)^d.
struct BoxSet {
  explicit BoxSet(std::vector<std::pair<exact::Rat, exact::Rat>> intervals);
  exact::Rat measure() const;
  std::vector<std::pair<exact::Rat, exact::Rat>> intervals;
};

// Enumerates primitive integer tuples (x_1,...,x_s) with entries in
// [-height, height], by increasing max-norm then lexicographically, counting
// the n in [1, horizon] where sum_k dual(T_k)^n x_k vanishes exactly.
// Returns the first tuple with at least min_hits hits.
std::optional<std::vector<exact::IntVec>> brute_force_relation_search(
    const mixing::EpiSet& f, long height, unsigned long horizon, unsigned long min_hits);

// Monte Carlo estimate of m(inter_k T_k^-n B_k): samples x uniformly with
// power-of-two denominators, so the box test after exact powering mod 1 is
// exact and only the sampling is random.  Deterministic given the seed.
double mc_correlation(const mixing::EpiSet& f, unsigned long n,
                      const std::vector<BoxSet>& boxes, std::size_t samples,
                      std::uint64_t seed);

// Replays a NotMixing certificate: true iff sum_k dual(T_k)^{l n} x_k = 0
// exactly for all n = 1..depth.  Rejects shape mismatches and the zero tuple.
bool verify_witness(const mixing::EpiSet& f, unsigned long l,
                    const std::vector<exact::IntVec>& witness, unsigned long depth);

struct HigherOrderWitness {
  std::vector<groups::Word> words;       // one word per position in the nested product
  std::vector<exact::IntVec> tuple;      // persistent character tuple
};

// How the nested products gamma_s ... gamma_1 are parameterized during the
// bounded search:
//   kSemigroupPowers      gamma_i = U_i^n for semigroup words U_i, so every
//                         factor stays inside the generated semigroup;
//   kGroupPowerQuotients  gamma_i = W_i^n W_{i-1}^-n for pairwise distinct
//                         group words (unimodular generators required).
enum class ProductForm { kSemigroupPowers, kGroupPowerQuotients };

// Bounded search for persistent relations of the nested-product form.  A hit
// refutes order-s mixing of the generated semigroup (or group); it is
// re-verified beyond the recurrence bound and its factors are checked to
// escape every finite set before being reported.  Absence is inconclusive.
std::optional<HigherOrderWitness> higher_order_refute(
    const mixing::EpiSet& generators, unsigned order, unsigned word_len, long height,
    unsigned long horizon, ProductForm form = ProductForm::kSemigroupPowers);

// Exact value of int f_1(T_1^n x) ... f_s(T_s^n x) dm(x) at a single n, by
// character orthogonality; used to cross-check Cesaro averages.
limits::CRat correlation_integral(const mixing::EpiSet& f, unsigned long n,
                                  const std::vector<limits::TrigPoly>& fs);

}  // namespace mixshape::oracle
