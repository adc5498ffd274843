#pragma once

#include <map>
#include <vector>

#include "mixshape/exact.hpp"
#include "mixshape/mixing.hpp"

// Correlation-limit evaluation along arithmetic progressions, including the
// selection of the modulus that separates eigenvalues whose ratio is a root
// of unity.

namespace mixshape::limits {

// Exact complex rational.
struct CRat {
  exact::Rat re = 0;
  exact::Rat im = 0;

  CRat() = default;
  CRat(exact::Rat r, exact::Rat i) : re(std::move(r)), im(std::move(i)) {}

  CRat operator+(const CRat& o) const { return {re + o.re, im + o.im}; }
  CRat operator-(const CRat& o) const { return {re - o.re, im - o.im}; }
  CRat operator*(const CRat& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  bool operator==(const CRat& o) const = default;
  bool is_zero() const { return re == 0 && im == 0; }
};

// Trigonometric polynomial: a finite map from characters in Z^d to exact
// complex-rational Fourier coefficients.  Zero coefficients are never stored.
class TrigPoly {
 public:
  explicit TrigPoly(std::size_t dim);
  static TrigPoly constant(std::size_t dim, const CRat& value);
  static TrigPoly character(const exact::IntVec& chi);  // coefficient 1 at chi

  std::size_t dim() const { return dim_; }
  void set_term(const exact::IntVec& chi, const CRat& coeff);
  CRat coeff(const exact::IntVec& chi) const;
  const std::map<exact::IntVec, CRat>& terms() const { return terms_; }

 private:
  std::size_t dim_;
  std::map<exact::IntVec, CRat> terms_;
};

// Per-residue-class exact limit values, residues 0..modulus-1.
struct ProgressionLimit {
  unsigned long modulus = 1;
  std::vector<CRat> values;
};

// Smallest usable modulus from ratio-order detection: the lcm over all n in
// the phi-bounded order set such that some eigenvalue ratio drawn from the
// union of the spectra is a primitive n-th root of unity.  After passing to
// this power, eigenvalue ratios that are roots of unity are all equal to 1.
unsigned long separating_exponent(const mixing::EpiSet& f);

// Limit of the character correlation integral along n = k (mod l): 1 if
// sum_k dual(T_k)^n chi_k vanishes along the whole progression, else 0.
// Decided at the first s*d+1 progression points (reversible recurrence) and
// re-checked at 2*s*d further points.
int character_limit(const mixing::EpiSet& f, unsigned long l, unsigned long residue,
                    const std::vector<exact::IntVec>& chars);

// Exact limit of int f_1(T_1^n x) ... f_s(T_s^n x) dm(x) along n = k (mod l)
// with l = separating_exponent(f): the sum of coefficient products over character
// tuples whose relation persists along the progression.
CRat trigpoly_limit(const mixing::EpiSet& f, const std::vector<TrigPoly>& fs,
                    unsigned long residue);

// All residue classes at once.
ProgressionLimit progression_limits(const mixing::EpiSet& f, const std::vector<TrigPoly>& fs);

// Roots are exactly the quotients mu/lambda with p(lambda) = 0, q(mu) = 0;
// computed from resultants without any factorization.
exact::IntPoly ratio_polynomial(const exact::IntPoly& p, const exact::IntPoly& q);

}  // namespace mixshape::limits
