#pragma once

#include <vector>

#include "mixshape/exact.hpp"

// Euler-totient utilities and root-of-unity eigenvalue detection.  A root of
// unity that is an eigenvalue of a d x d rational matrix has degree at most d
// over Q, so its order n satisfies phi(n) <= d; this bounds every search here.

namespace mixshape::cyclo {

// All n >= 1 with phi(n) <= bound, sorted ascending.
struct OrderSet {
  unsigned long bound = 0;
  std::vector<unsigned long> orders;
};

// Euler totient by trial division.  Rejects n = 0.
unsigned long euler_phi(unsigned long n);

// Exactly {n >= 1 : phi(n) <= bound}.  The scan range n <= 2*bound^2 + 2 comes
// from phi(n) >= sqrt(n/2); membership is re-verified per element.
OrderSet phi_bounded_orders(unsigned long bound);

// lcm{n : phi(n) <= d}: the universal exponent annihilating every
// finite-order element of GL(d, Q).
exact::Int torsion_exponent(unsigned long d);

// n-th cyclotomic polynomial, by exact division of x^n - 1 by the lower ones.
exact::IntPoly cyclotomic_polynomial(unsigned long n);

// True iff p shares a root with x^M - 1, M = torsion_exponent(d), i.e. iff p
// has a root of unity among its roots (p nonzero, deg p <= d required).
bool has_root_of_unity_root(const exact::RatPoly& p, unsigned long d);

}  // namespace mixshape::cyclo
