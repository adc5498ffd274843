#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Exact integer / rational vectors, matrices and univariate polynomials.
// Everything is arbitrary precision; no operation in this module is allowed
// to touch floating point.

namespace mixshape::exact {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// Reduced fraction with positive denominator.
Rat make_rat(const Int& num, const Int& den);
Rat make_rat(long num, long den);

// Parses "p", "-p" or "p/q".
Rat parse_rat(const std::string& s);
std::string rat_to_string(const Rat& r);

bool is_zero(const IntVec& v);
bool is_zero(const RatVec& v);

// Square integer matrix, row-major.  An epimorphism of T^d in the standard
// basis; its dual acts on characters Z^d as the transpose.
class IntMat {
 public:
  explicit IntMat(std::size_t dim);
  static IntMat identity(std::size_t dim);
  static IntMat from_rows(const std::vector<IntVec>& rows);

  std::size_t dim() const { return dim_; }
  Int& at(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  IntMat transpose() const;
  IntMat operator*(const IntMat& rhs) const;
  IntVec apply(const IntVec& v) const;
  IntMat pow(unsigned long e) const;
  Int det() const;  // fraction-free Bareiss elimination
  Int trace() const;
  bool is_identity() const;
  bool operator==(const IntMat& rhs) const = default;

 private:
  std::size_t dim_;
  IntVec a_;
};

// Rational matrix of arbitrary shape; entries always stored reduced.
class RatMat {
 public:
  RatMat(std::size_t rows, std::size_t cols);
  static RatMat identity(std::size_t dim);
  static RatMat from(const IntMat& m);
  static RatMat from_rows(const std::vector<RatVec>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rat& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rat& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  RatMat operator*(const RatMat& rhs) const;
  RatVec apply(const RatVec& v) const;
  RatMat pow(unsigned long e) const;  // square only
  Rat det() const;                    // square only
  RatMat inverse() const;             // throws std::invalid_argument if singular
  std::size_t rank() const;
  bool operator==(const RatMat& rhs) const = default;

 private:
  std::size_t rows_, cols_;
  RatVec a_;
};

// Dense univariate polynomial with integer coefficients, ascending degree.
// The zero polynomial has an empty coefficient list and degree() == -1.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(IntVec coeffs);  // trims trailing zeros
  static IntPoly from(const std::vector<long>& coeffs);
  static IntPoly x_power_minus_one(unsigned long n);  // x^n - 1

  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Int& coeff(std::size_t i) const;  // 0 beyond the stored range
  const IntVec& coeffs() const { return c_; }
  const Int& leading() const;

  IntPoly operator+(const IntPoly& rhs) const;
  IntPoly operator-(const IntPoly& rhs) const;
  IntPoly operator*(const IntPoly& rhs) const;
  // Exact division; throws std::invalid_argument if the remainder is nonzero.
  IntPoly divexact(const IntPoly& rhs) const;
  Int eval(const Int& x) const;
  Rat eval(const Rat& x) const;
  Int content() const;
  bool operator==(const IntPoly& rhs) const = default;

 private:
  IntVec c_;
};

// Rational-coefficient variant; identical shape rules.
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(RatVec coeffs);
  static RatPoly from(const IntPoly& p);
  static RatPoly from(const std::vector<long>& coeffs);

  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Rat& coeff(std::size_t i) const;
  const RatVec& coeffs() const { return c_; }
  const Rat& leading() const;

  RatPoly operator+(const RatPoly& rhs) const;
  RatPoly operator-(const RatPoly& rhs) const;
  RatPoly operator*(const RatPoly& rhs) const;
  // Euclidean division: *this = q * rhs + r with deg r < deg rhs.
  std::pair<RatPoly, RatPoly> divmod(const RatPoly& rhs) const;
  RatPoly monic() const;
  RatPoly derivative() const;
  Rat eval(const Rat& x) const;
  bool operator==(const RatPoly& rhs) const = default;

 private:
  RatVec c_;
};

// x^e mod m over Q, by binary exponentiation in Q[x]/(m).
RatPoly power_of_x_mod(unsigned long e, const RatPoly& m);

// det(xI - m) as a monic integer polynomial (Faddeev-LeVerrier; the interior
// divisions are exact over Z).
IntPoly charpoly(const IntMat& m);
RatPoly charpoly(const RatMat& m);

// Monic minimal polynomial, found as the first linear dependence among
// I, m, m^2, ...
RatPoly minimal_polynomial(const IntMat& m);

// Basis of the right null space {x : m x = 0}, each vector scaled to a
// primitive integer vector (coprime entries, first nonzero entry positive),
// in reduced-echelon order.  Deterministic for fixed input.
std::vector<IntVec> rational_kernel(const RatMat& m);

// Monic gcd over Q; gcd(p, 0) is the monic scaling of p.  Rejects (0, 0).
RatPoly poly_gcd(const RatPoly& p, const RatPoly& q);

// Integer basis, in canonical Hermite echelon form, of span_Q(basis) inter Z^d.
// The input vectors must be linearly independent.
std::vector<IntVec> lattice_saturate(const std::vector<RatVec>& basis);

// Canonical primitive integer scaling of a nonzero rational vector.
IntVec primitive_vector(const RatVec& v);

// Basis of {x in Z^cols : A x = 0} for the integer matrix with the given
// rows, via a unimodular column reduction.
std::vector<IntVec> integer_kernel(const std::vector<IntVec>& rows, std::size_t cols);

// Row-style Hermite normal form of the lattice generated by the rows:
// positive pivots, entries above each pivot reduced, zero rows dropped.
std::vector<IntVec> hermite_rows(std::vector<IntVec> rows);

}  // namespace mixshape::exact
