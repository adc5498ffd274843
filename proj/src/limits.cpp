#include "mixshape/limits.hpp"

#include <algorithm>
#include <set>

#include "mixshape/cyclo.hpp"

namespace mixshape::limits {

using exact::Int;
using exact::IntMat;
using exact::IntPoly;
using exact::IntVec;
using exact::Rat;
using exact::RatPoly;
using exact::RatVec;
using mixing::EpiSet;

TrigPoly::TrigPoly(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("TrigPoly: dimension must be >= 1");
}

TrigPoly TrigPoly::constant(std::size_t dim, const CRat& value) {
  TrigPoly f(dim);
  f.set_term(IntVec(dim, Int(0)), value);
  return f;
}

TrigPoly TrigPoly::character(const IntVec& chi) {
  TrigPoly f(chi.size());
  f.set_term(chi, CRat{Rat(1), Rat(0)});
  return f;
}

void TrigPoly::set_term(const IntVec& chi, const CRat& coeff) {
  if (chi.size() != dim_) throw std::invalid_argument("TrigPoly: character dimension mismatch");
  if (coeff.is_zero())
    terms_.erase(chi);
  else
    terms_[chi] = coeff;
}

CRat TrigPoly::coeff(const IntVec& chi) const {
  auto it = terms_.find(chi);
  return it == terms_.end() ? CRat{} : it->second;
}

namespace {

// Determinant of an integer matrix by fraction-free Bareiss elimination.
Int bareiss_det(std::vector<IntVec> m) {
  std::size_t n = m.size();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : Int(-m[n - 1][n - 1]);
}

// Sylvester resultant of two coefficient sequences taken at their FORMAL
// degrees (leading entries may be zero).
Int sylvester_resultant(const IntVec& f, const IntVec& g) {
  std::size_t m = f.size() - 1, n = g.size() - 1;
  std::size_t size = m + n;
  std::vector<IntVec> s(size, IntVec(size, Int(0)));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k <= m; ++k) s[r][r + k] = f[m - k];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k <= n; ++k) s[n + r][r + k] = g[n - k];
  return bareiss_det(std::move(s));
}

// Newton interpolation through (x_i, y_i), exact over Q.
RatPoly interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys) {
  std::size_t n = xs.size();
  std::vector<Rat> coef = ys;  // divided differences
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level]);
  RatPoly result;
  RatPoly basis = RatPoly::from(std::vector<long>{1});
  for (std::size_t i = 0; i < n; ++i) {
    result = result + basis * RatPoly(RatVec{coef[i]});
    basis = basis * RatPoly(RatVec{-xs[i], Rat(1)});
  }
  return result;
}

IntPoly primitive_int_poly(const RatPoly& p) {
  if (p.is_zero()) return IntPoly();
  Int l = 1;
  for (const Rat& c : p.coeffs())
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  IntVec c(p.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    Rat scaled = p.coeffs()[i] * Rat(l);
    c[i] = scaled.get_num();
  }
  IntPoly q{std::move(c)};
  Int content = q.content();
  IntVec reduced = q.coeffs();
  for (Int& x : reduced) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), content.get_mpz_t());
  return IntPoly(std::move(reduced));
}

}  // namespace

IntPoly ratio_polynomial(const IntPoly& p, const IntPoly& q) {
  if (p.degree() < 1 || q.degree() < 1)
    throw std::invalid_argument("ratio_polynomial: inputs must have degree >= 1");
  std::size_t m = p.degree(), n = q.degree();
  std::size_t points = m * n + 1;
  std::vector<Rat> xs(points), ys(points);
  for (std::size_t t = 0; t < points; ++t) {
    // q(x y) as a formal degree-n polynomial in y, evaluated at x = t.
    IntVec g(n + 1);
    Int tp = 1;
    for (std::size_t k = 0; k <= n; ++k) {
      g[k] = q.coeff(k) * tp;
      tp *= static_cast<long>(t);
    }
    xs[t] = Rat(static_cast<long>(t));
    ys[t] = Rat(sylvester_resultant(p.coeffs(), g));
  }
  return primitive_int_poly(interpolate(xs, ys));
}

unsigned long separating_exponent(const EpiSet& f) {
  std::size_t d = f.dim();
  std::vector<IntPoly> chars;
  chars.reserve(f.size());
  for (const IntMat& t : f.maps) chars.push_back(exact::charpoly(t));

  // Deduplicate identical characteristic polynomials; the ratio set only
  // depends on the union of spectra.
  std::vector<IntPoly> unique_chars;
  for (const IntPoly& p : chars)
    if (std::find(unique_chars.begin(), unique_chars.end(), p) == unique_chars.end())
      unique_chars.push_back(p);

  std::vector<IntPoly> ratios;
  for (std::size_t i = 0; i < unique_chars.size(); ++i)
    for (std::size_t j = i; j < unique_chars.size(); ++j)
      ratios.push_back(ratio_polynomial(unique_chars[i], unique_chars[j]));

  Int l = 1;
  for (unsigned long n : cyclo::phi_bounded_orders(d * d).orders) {
    RatPoly cyclotomic = RatPoly::from(cyclo::cyclotomic_polynomial(n));
    for (const IntPoly& r : ratios) {
      if (exact::poly_gcd(RatPoly::from(r), cyclotomic).degree() < 1) continue;
      mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), n);
      break;
    }
  }
  if (!l.fits_ulong_p()) throw std::logic_error("separating_exponent: modulus out of range");
  return l.get_ui();
}

int character_limit(const EpiSet& f, unsigned long l, unsigned long residue,
                    const std::vector<IntVec>& chars) {
  if (l == 0) throw std::invalid_argument("character_limit: modulus must be >= 1");
  if (residue >= l) throw std::invalid_argument("character_limit: residue out of range");
  if (chars.size() != f.size())
    throw std::invalid_argument("character_limit: one character per map required");
  std::size_t s = f.size(), d = f.dim();
  for (const IntVec& chi : chars)
    if (chi.size() != d) throw std::invalid_argument("character_limit: character dimension mismatch");

  // w_k = dual(T_k)^{residue + l j} chi_k, advanced one progression step at a
  // time.
  std::vector<IntMat> step;
  std::vector<IntVec> w;
  for (std::size_t k = 0; k < s; ++k) {
    const IntMat dk = mixing::dual(f.maps[k]);
    step.push_back(dk.pow(l));
    w.push_back(dk.pow(residue).apply(chars[k]));
  }
  auto total = [&]() {
    IntVec sum(d, Int(0));
    for (const IntVec& wk : w)
      for (std::size_t i = 0; i < d; ++i) sum[i] += wk[i];
    return sum;
  };
  std::size_t depth = s * d;
  for (std::size_t j = 0; j <= depth; ++j) {
    if (!exact::is_zero(total())) return 0;
    for (std::size_t k = 0; k < s; ++k) w[k] = step[k].apply(w[k]);
  }
  // Vanishing at s*d+1 progression points forces vanishing everywhere; check
  // 2*s*d more and fail hard on violation.
  for (std::size_t j = 0; j < 2 * depth; ++j) {
    if (!exact::is_zero(total()))
      throw std::logic_error("character_limit: stabilization check failed");
    for (std::size_t k = 0; k < s; ++k) w[k] = step[k].apply(w[k]);
  }
  return 1;
}

namespace {

CRat limit_with_modulus(const EpiSet& f, const std::vector<TrigPoly>& fs,
                        unsigned long l, unsigned long residue) {
  std::size_t s = f.size();
  if (fs.size() != s)
    throw std::invalid_argument("trigpoly_limit: one function per map required");
  for (const TrigPoly& g : fs)
    if (g.dim() != f.dim())
      throw std::invalid_argument("trigpoly_limit: function dimension mismatch");

  CRat sum;
  std::vector<std::map<IntVec, CRat>::const_iterator> its(s), begins(s), ends(s);
  for (std::size_t k = 0; k < s; ++k) {
    begins[k] = fs[k].terms().begin();
    ends[k] = fs[k].terms().end();
    if (begins[k] == ends[k]) return sum;  // some factor is identically zero
    its[k] = begins[k];
  }
  // Odometer over the product of supports; deterministic summation order.
  while (true) {
    std::vector<IntVec> chars(s);
    for (std::size_t k = 0; k < s; ++k) chars[k] = its[k]->first;
    if (character_limit(f, l, residue, chars) == 1) {
      CRat prod = its[0]->second;
      for (std::size_t k = 1; k < s; ++k) prod = prod * its[k]->second;
      sum = sum + prod;
    }
    std::size_t k = 0;
    while (k < s) {
      if (++its[k] != ends[k]) break;
      its[k] = begins[k];
      ++k;
    }
    if (k == s) break;
  }
  return sum;
}

}  // namespace

CRat trigpoly_limit(const EpiSet& f, const std::vector<TrigPoly>& fs, unsigned long residue) {
  unsigned long l = separating_exponent(f);
  if (residue >= l) throw std::invalid_argument("trigpoly_limit: residue out of range");
  return limit_with_modulus(f, fs, l, residue);
}

ProgressionLimit progression_limits(const EpiSet& f, const std::vector<TrigPoly>& fs) {
  ProgressionLimit out;
  out.modulus = separating_exponent(f);
  out.values.reserve(out.modulus);
  for (unsigned long k = 0; k < out.modulus; ++k)
    out.values.push_back(limit_with_modulus(f, fs, out.modulus, k));
  return out;
}

}  // namespace mixshape::limits
