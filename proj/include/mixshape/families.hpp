#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "mixshape/exact.hpp"
#include "mixshape/mixing.hpp"

// Constructive generators for the counterexample families.  Every generated
// family is re-verified by the decision engine before being returned; a
// construction that fails verification throws instead of returning.

namespace mixshape::families {

enum class FamilyKind {
  kUnipotentSharp,     // d+1 unipotents, not mixing while every subset is
  kEisensteinPoly,     // irreducible with d distinct real roots
  kEpiSharp,           // ergodic epimorphisms sharing their spectrum
  kBlockTriangular,    // semigroup generators with hyperbolic blocks
  kScaledFreePair,     // twice a free pair of shears
  kRotationPair,       // the order-4 / order-3 pair on T^2
};

// Indexes one construction together with its parameters; ranges are
// validated by the generator of each kind.
struct FamilySpec {
  FamilyKind kind = FamilyKind::kUnipotentSharp;
  unsigned d = 2;           // ambient dimension
  unsigned s = 3;           // family size
  exact::Int q = 17;        // starting prime for the Eisenstein construction
  unsigned d1 = 2, d2 = 2;  // block dimensions
};

using GeneratedFamily = std::variant<mixing::EpiSet, exact::IntPoly>;

// Dispatches to the generator selected by spec.kind.
GeneratedFamily generate(const FamilySpec& spec);

// Monic integer polynomial (x - q)(x - 2q)...(x - dq) + q for the first prime
// >= q whose sign conditions certify d distinct real roots (Sturm count = d);
// Eisenstein at that prime, hence irreducible.  d = 1 degenerates to x.
exact::IntPoly gen_eisenstein_poly(unsigned d, const exact::Int& q,
                                   exact::Int* q_used = nullptr);

// s unipotent automorphisms of T^d built from nilpotents with prescribed
// one-dimensional kernels.  With the default vectors and s = d+1 the family
// is not mixing while every proper subset is; with s <= d it is mixing.
mixing::EpiSet gen_unipotent_family(unsigned d, unsigned s);
mixing::EpiSet gen_unipotent_family(unsigned d, const std::vector<exact::IntVec>& vectors);

// s ergodic epimorphisms of T^d sharing their spectrum, realized as scaled
// conjugates of a companion matrix; the full set is not mixing, every proper
// subset is, and every member is ergodic.
mixing::EpiSet gen_epi_family(unsigned d, unsigned s);

// Two block-triangular semigroup generators [[A, C], [0, B]] with hyperbolic
// diagonal blocks and C in {0, E_11}.
mixing::EpiSet gen_block_triangular(unsigned d1, unsigned d2);

// The concrete scan fixtures.
struct Fixtures {
  mixing::EpiSet st;              // order-4 / order-3 rotation pair on T^2
  mixing::EpiSet free_scaled;     // {2a, 2b} for the standard free pair a, b
  mixing::EpiSet row_stabilizer;  // single shear with a fixed dual character
  mixing::EpiSet lorentz;         // integer generators preserving diag(1,1,-1)
};
Fixtures fixtures();

// First `count` integer matrices with entries in [-bound, bound] preserving
// diag(1,1,-1), det = 1, of infinite order, in enumeration order.
std::vector<exact::IntMat> search_lorentz_generators(long bound, std::size_t count);

// Distinct real roots over the whole line, by a Sturm sequence.
unsigned sturm_real_root_count(const exact::RatPoly& p);

}  // namespace mixshape::families
