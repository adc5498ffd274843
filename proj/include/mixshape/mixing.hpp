#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "mixshape/exact.hpp"

// The decision engine: set-mixing verdicts with replayable certificates,
// spectral pre-checks, the commuting-pair criterion, pair quotient witnesses
// and the jointly-mixing combinator.
//
// Convention fixed once: characters are column vectors in Z^d and the dual of
// an epimorphism T is its transpose acting on them.

namespace mixshape::mixing {

// Ordered family {T_1, ..., T_s} of same-dimension integer matrices with
// nonzero determinant (surjectivity of the epimorphism).
struct EpiSet {
  explicit EpiSet(std::vector<exact::IntMat> maps);

  std::size_t dim() const { return maps.front().dim(); }
  std::size_t size() const { return maps.size(); }

  std::vector<exact::IntMat> maps;
};

struct Mixing {
  std::vector<unsigned long> exponents_checked;
};

struct NotMixing {
  unsigned long exponent = 1;
  std::vector<exact::IntVec> witness;   // one character vector per map, not all zero
  std::vector<std::size_t> support;     // indices where the witness is nonzero
};

using MixingVerdict = std::variant<Mixing, NotMixing>;

inline bool is_mixing(const MixingVerdict& v) { return std::holds_alternative<Mixing>(v); }

struct ProvenMixing {};
struct ProvenNotMixing {
  unsigned long exponent = 1;
  std::vector<std::size_t> subset;
};
struct Inconclusive {};
using SpectralPrecheck = std::variant<ProvenMixing, ProvenNotMixing, Inconclusive>;

// Certificate that T_1^l and T_2^l agree on the quotient by the annihilator
// of the stored character sublattice, which is invariant under both duals.
struct QuotientWitness {
  unsigned long exponent = 1;
  std::vector<exact::IntVec> sublattice;  // integer basis of V inter Z^d
};

struct EngineOptions {
  // Adds every exponent 1..max_exponent to the default schedule
  // {l : phi(l) <= d^2}.
  std::optional<unsigned long> max_exponent;
};

// The exponent schedule for dimension d under the given options, ascending.
std::vector<unsigned long> exponent_schedule(std::size_t dim, const EngineOptions& opts = {});

// Dual action on characters: the transpose.
exact::IntMat dual(const exact::IntMat& m);

// True iff the dual has no root of unity among its eigenvalues.  Rejects
// det = 0.
bool is_ergodic(const exact::IntMat& t);

// Basis of {(x_1,...,x_s) in (Q^d)^s : sum_k dual(T_k)^{l n} x_k = 0 for all
// n >= 1}, each tuple scaled to primitive integers.  Finitely many n decide
// membership: the block sequence obeys a reversible linear recurrence of
// order at most s*d, so vanishing at n = 1..s*d forces vanishing everywhere.
// The relation is re-verified at n = s*d+1..2*s*d and a violation throws.
std::vector<std::vector<exact::IntVec>> stabilized_relation_kernel(const EpiSet& f,
                                                                   unsigned long l);

// Decides mixing of the set by scanning the exponent schedule; the smallest
// exponent with a nonzero relation kernel yields NotMixing with the first
// canonical basis tuple as witness.  Requires s >= 2.
MixingVerdict is_mixing_set(const EpiSet& f, const EngineOptions& opts = {});

// Spectrum-only pre-check.  ProvenMixing: all pairs spectrally disjoint at
// every scheduled exponent.  ProvenNotMixing: some subset has either a common
// eigenvalue with more than d members, or a common annihilating polynomial of
// degree below the subset size.  Never contradicts is_mixing_set.
SpectralPrecheck spectral_precheck(const EpiSet& f, const EngineOptions& opts = {});

// Mixing criterion for commuting pairs: true iff dual(T_i)^-1 dual(T_j) has
// no root of unity as an eigenvalue.  Rejects non-commuting input.
bool commuting_pair_criterion(const exact::IntMat& ti, const exact::IntMat& tj);

// Largest subspace invariant under both duals-to-the-l inside
// ker(dual(T_1)^l - dual(T_2)^l), saturated to an integer sublattice.
// Absent exactly when the pair is mixing (cross-validated against the
// engine; disagreement throws).
std::optional<QuotientWitness> pair_quotient_witness(const exact::IntMat& t1,
                                                     const exact::IntMat& t2,
                                                     const EngineOptions& opts = {});

// True iff every member is ergodic and, for s >= 2, the set itself is mixing
// (equivalently: the set extended by the identity is mixing).
bool jointly_mixing(const EpiSet& f, const EngineOptions& opts = {});

}  // namespace mixshape::mixing
