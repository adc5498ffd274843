#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "mixshape/exact.hpp"
#include "mixshape/mixing.hpp"

// Bounded refutation scans for group-level properties: mixing of a generated
// group, ergodicity via dual orbits, finite-order testing, and the
// conjugate-family construction.  A scan can refute, never certify: the
// positive statements quantify over all infinite-order elements.

namespace mixshape::groups {

// Generator-index word; entry v > 0 means generator v-1, v < 0 means the
// inverse of generator -v-1.  Empty word = identity.
using Word = std::vector<int>;

std::string word_to_string(const Word& w);

enum class RefutationReason {
  kRootOfUnityEigenvalue,  // infinite-order element with a root-of-unity eigenvalue
  kFiniteOrderOnly,        // the generated group is finite: every element has finite order
};

struct Refuted {
  Word word;
  exact::IntMat matrix;
  RefutationReason reason;
};

struct CleanUpTo {
  unsigned max_word_length = 0;
  unsigned long words_examined = 0;  // distinct non-identity elements seen
};

using GroupScanReport = std::variant<Refuted, CleanUpTo>;

struct FiniteOrbit {
  std::vector<exact::IntVec> orbit;  // sorted, deterministic
};
struct ExceedsCap {};
using OrbitScanReport = std::variant<FiniteOrbit, ExceedsCap>;

// True iff g^M = I with M the universal torsion exponent for the dimension.
bool is_finite_order(const exact::IntMat& g);

// Exact inverse of a matrix with determinant +-1.
exact::IntMat unimodular_inverse(const exact::IntMat& g);

// Enumerates freely reduced words up to max_len (deduplicated by exact matrix
// equality, breadth-first, generator order fixed) and reports the first
// infinite-order element whose dual has a root-of-unity eigenvalue.  With
// use_inverses every generator must have determinant +-1.
GroupScanReport group_mixing_scan(const mixing::EpiSet& generators, unsigned max_len,
                                  bool use_inverses);

// Breadth-first closure of chi under the duals (and inverse duals of
// unimodular generators).  FiniteOrbit refutes ergodicity of the generated
// group; ExceedsCap is inconclusive.  Rejects chi = 0.
OrbitScanReport dual_orbit_scan(const mixing::EpiSet& generators, const exact::IntVec& chi,
                                std::size_t cap);

// {delta^-i gamma delta^i : i = 1..count}; all members share the
// characteristic polynomial of gamma (asserted).  delta must be unimodular.
mixing::EpiSet conjugate_family(const exact::IntMat& gamma, const exact::IntMat& delta,
                                unsigned count);

}  // namespace mixshape::groups
