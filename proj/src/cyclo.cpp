#include "mixshape/cyclo.hpp"

#include <stdexcept>

namespace mixshape::cyclo {

using exact::Int;
using exact::IntPoly;
using exact::RatPoly;

unsigned long euler_phi(unsigned long n) {
  if (n == 0) throw std::invalid_argument("euler_phi: n must be >= 1");
  unsigned long result = n;
  unsigned long m = n;
  for (unsigned long p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    result -= result / p;
    while (m % p == 0) m /= p;
  }
  if (m > 1) result -= result / m;
  return result;
}

OrderSet phi_bounded_orders(unsigned long bound) {
  if (bound == 0) throw std::invalid_argument("phi_bounded_orders: bound must be >= 1");
  OrderSet set;
  set.bound = bound;
  unsigned long limit = 2 * bound * bound + 2;
  for (unsigned long n = 1; n <= limit; ++n)
    if (euler_phi(n) <= bound) set.orders.push_back(n);
  return set;
}

Int torsion_exponent(unsigned long d) {
  OrderSet set = phi_bounded_orders(d);
  Int m = 1;
  for (unsigned long n : set.orders)
    mpz_lcm_ui(m.get_mpz_t(), m.get_mpz_t(), n);
  return m;
}

IntPoly cyclotomic_polynomial(unsigned long n) {
  if (n == 0) throw std::invalid_argument("cyclotomic_polynomial: n must be >= 1");
  IntPoly phi_n = IntPoly::x_power_minus_one(n);
  for (unsigned long m = 1; m < n; ++m)
    if (n % m == 0) phi_n = phi_n.divexact(cyclotomic_polynomial(m));
  return phi_n;
}

bool has_root_of_unity_root(const RatPoly& p, unsigned long d) {
  if (p.is_zero()) throw std::invalid_argument("has_root_of_unity_root: zero polynomial");
  if (p.degree() == 0) return false;
  Int m = torsion_exponent(d);
  if (!m.fits_ulong_p())
    throw std::invalid_argument("has_root_of_unity_root: dimension out of supported range");
  // gcd(p, x^M - 1) = gcd(p, (x^M - 1) mod p); the reduction keeps the
  // degree below deg p even though M itself can be large.
  RatPoly rem = exact::power_of_x_mod(m.get_ui(), p) - RatPoly::from(std::vector<long>{1});
  if (rem.is_zero()) return true;  // p divides x^M - 1
  return exact::poly_gcd(p, rem).degree() >= 1;
}

}  // namespace mixshape::cyclo
