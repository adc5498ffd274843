#include "mixshape/exact.hpp"

#include <algorithm>
#include <utility>

namespace mixshape::exact {

namespace {

const Int kZero = 0;
const Rat kZeroRat = 0;

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int exact_div(const Int& a, const Int& b) {
  Int q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (r != 0) throw std::logic_error("exact_div: division is not exact");
  return q;
}

}  // namespace

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    Rat r(s);
    r.canonicalize();
    return r;
  }
  return make_rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

std::string rat_to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

bool is_zero(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

// ---------------------------------------------------------------------------
// IntMat

IntMat::IntMat(std::size_t dim) : dim_(dim), a_(dim * dim, Int(0)) {
  if (dim == 0) throw std::invalid_argument("IntMat: dimension must be >= 1");
}

IntMat IntMat::identity(std::size_t dim) {
  IntMat m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1;
  return m;
}

IntMat IntMat::from_rows(const std::vector<IntVec>& rows) {
  IntMat m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size())
      throw std::invalid_argument("IntMat: matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

IntMat IntMat::transpose() const {
  IntMat t(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) t.at(j, i) = at(i, j);
  return t;
}

IntMat IntMat::operator*(const IntMat& rhs) const {
  if (dim_ != rhs.dim_) throw std::invalid_argument("IntMat: dimension mismatch");
  IntMat r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) {
      const Int& x = at(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) r.at(i, j) += x * rhs.at(k, j);
    }
  return r;
}

IntVec IntMat::apply(const IntVec& v) const {
  if (v.size() != dim_) throw std::invalid_argument("IntMat: vector dimension mismatch");
  IntVec r(dim_, Int(0));
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r[i] += at(i, j) * v[j];
  return r;
}

IntMat IntMat::pow(unsigned long e) const {
  IntMat base = *this;
  IntMat acc = identity(dim_);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

Int IntMat::det() const {
  // Bareiss: all intermediate divisions are exact.
  std::size_t n = dim_;
  std::vector<IntVec> m(n, IntVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = at(i, j);
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
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : Int(-m[n - 1][n - 1]);
}

Int IntMat::trace() const {
  Int t = 0;
  for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
  return t;
}

bool IntMat::is_identity() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// RatMat

RatMat::RatMat(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols, Rat(0)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("RatMat: empty shape");
}

RatMat RatMat::identity(std::size_t dim) {
  RatMat m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1;
  return m;
}

RatMat RatMat::from(const IntMat& m) {
  RatMat r(m.dim(), m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) r.at(i, j) = m.at(i, j);
  return r;
}

RatMat RatMat::from_rows(const std::vector<RatVec>& rows) {
  if (rows.empty()) throw std::invalid_argument("RatMat: empty shape");
  RatMat r(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != r.cols_)
      throw std::invalid_argument("RatMat: ragged rows");
    for (std::size_t j = 0; j < r.cols_; ++j) r.at(i, j) = rows[i][j];
  }
  return r;
}

RatMat RatMat::operator*(const RatMat& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("RatMat: shape mismatch");
  RatMat r(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rat& x = at(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) r.at(i, j) += x * rhs.at(k, j);
    }
  return r;
}

RatVec RatMat::apply(const RatVec& v) const {
  if (v.size() != cols_) throw std::invalid_argument("RatMat: vector dimension mismatch");
  RatVec r(rows_, Rat(0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
  return r;
}

RatMat RatMat::pow(unsigned long e) const {
  if (rows_ != cols_) throw std::invalid_argument("RatMat::pow: not square");
  RatMat base = *this;
  RatMat acc = identity(rows_);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

Rat RatMat::det() const {
  if (rows_ != cols_) throw std::invalid_argument("RatMat::det: not square");
  RatMat m = *this;
  Rat d = 1;
  for (std::size_t k = 0; k < rows_; ++k) {
    std::size_t p = k;
    while (p < rows_ && m.at(p, k) == 0) ++p;
    if (p == rows_) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < cols_; ++j) std::swap(m.at(k, j), m.at(p, j));
      d = -d;
    }
    d *= m.at(k, k);
    Rat inv = make_rat(m.at(k, k).get_den(), m.at(k, k).get_num());
    for (std::size_t j = k; j < cols_; ++j) m.at(k, j) *= inv;
    for (std::size_t i = k + 1; i < rows_; ++i) {
      if (m.at(i, k) == 0) continue;
      Rat f = m.at(i, k);
      for (std::size_t j = k; j < cols_; ++j) m.at(i, j) -= f * m.at(k, j);
    }
  }
  return d;
}

RatMat RatMat::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("RatMat::inverse: not square");
  std::size_t n = rows_;
  RatMat m = *this;
  RatMat inv = identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m.at(p, k) == 0) ++p;
    if (p == n) throw std::invalid_argument("RatMat::inverse: singular matrix");
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m.at(k, j), m.at(p, j));
        std::swap(inv.at(k, j), inv.at(p, j));
      }
    Rat piv = make_rat(m.at(k, k).get_den(), m.at(k, k).get_num());
    for (std::size_t j = 0; j < n; ++j) {
      m.at(k, j) *= piv;
      inv.at(k, j) *= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m.at(i, k) == 0) continue;
      Rat f = m.at(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        m.at(i, j) -= f * m.at(k, j);
        inv.at(i, j) -= f * inv.at(k, j);
      }
    }
  }
  return inv;
}

std::size_t RatMat::rank() const {
  RatMat m = *this;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t p = r;
    while (p < rows_ && m.at(p, c) == 0) ++p;
    if (p == rows_) continue;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(m.at(r, j), m.at(p, j));
    Rat inv = make_rat(m.at(r, c).get_den(), m.at(r, c).get_num());
    for (std::size_t j = c; j < cols_; ++j) m.at(r, j) *= inv;
    for (std::size_t i = r + 1; i < rows_; ++i) {
      if (m.at(i, c) == 0) continue;
      Rat f = m.at(i, c);
      for (std::size_t j = c; j < cols_; ++j) m.at(i, j) -= f * m.at(r, j);
    }
    ++r;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Polynomials

IntPoly::IntPoly(IntVec coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPoly IntPoly::from(const std::vector<long>& coeffs) {
  return IntPoly(IntVec(coeffs.begin(), coeffs.end()));
}

IntPoly IntPoly::x_power_minus_one(unsigned long n) {
  IntVec c(n + 1, Int(0));
  c[0] = -1;
  c[n] = 1;
  return IntPoly(std::move(c));
}

const Int& IntPoly::coeff(std::size_t i) const {
  return i < c_.size() ? c_[i] : kZero;
}

const Int& IntPoly::leading() const {
  if (c_.empty()) throw std::invalid_argument("IntPoly: zero polynomial has no leading coefficient");
  return c_.back();
}

IntPoly IntPoly::operator+(const IntPoly& rhs) const {
  IntVec c(std::max(c_.size(), rhs.c_.size()), Int(0));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(i) + rhs.coeff(i);
  return IntPoly(std::move(c));
}

IntPoly IntPoly::operator-(const IntPoly& rhs) const {
  IntVec c(std::max(c_.size(), rhs.c_.size()), Int(0));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(i) - rhs.coeff(i);
  return IntPoly(std::move(c));
}

IntPoly IntPoly::operator*(const IntPoly& rhs) const {
  if (is_zero() || rhs.is_zero()) return IntPoly();
  IntVec c(c_.size() + rhs.c_.size() - 1, Int(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < rhs.c_.size(); ++j) c[i + j] += c_[i] * rhs.c_[j];
  }
  return IntPoly(std::move(c));
}

IntPoly IntPoly::divexact(const IntPoly& rhs) const {
  if (rhs.is_zero()) throw std::invalid_argument("IntPoly::divexact: division by zero");
  if (is_zero()) return IntPoly();
  if (degree() < rhs.degree())
    throw std::invalid_argument("IntPoly::divexact: remainder is nonzero");
  IntVec rem = c_;
  IntVec q(static_cast<std::size_t>(degree() - rhs.degree()) + 1, Int(0));
  for (long k = degree() - rhs.degree(); k >= 0; --k) {
    Int t, r;
    mpz_tdiv_qr(t.get_mpz_t(), r.get_mpz_t(),
                rem[k + rhs.degree()].get_mpz_t(), rhs.leading().get_mpz_t());
    if (r != 0) throw std::invalid_argument("IntPoly::divexact: remainder is nonzero");
    q[k] = t;
    for (long j = 0; j <= rhs.degree(); ++j) rem[k + j] -= t * rhs.c_[j];
  }
  for (const Int& r : rem)
    if (r != 0) throw std::invalid_argument("IntPoly::divexact: remainder is nonzero");
  return IntPoly(std::move(q));
}

Int IntPoly::eval(const Int& x) const {
  Int r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

Rat IntPoly::eval(const Rat& x) const {
  Rat r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = r * x + Rat(c_[i]);
  return r;
}

Int IntPoly::content() const {
  Int g = 0;
  for (const Int& c : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

RatPoly::RatPoly(RatVec coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

RatPoly RatPoly::from(const IntPoly& p) {
  RatVec c(p.coeffs().begin(), p.coeffs().end());
  return RatPoly(std::move(c));
}

RatPoly RatPoly::from(const std::vector<long>& coeffs) {
  return RatPoly(RatVec(coeffs.begin(), coeffs.end()));
}

const Rat& RatPoly::coeff(std::size_t i) const {
  return i < c_.size() ? c_[i] : kZeroRat;
}

const Rat& RatPoly::leading() const {
  if (c_.empty()) throw std::invalid_argument("RatPoly: zero polynomial has no leading coefficient");
  return c_.back();
}

RatPoly RatPoly::operator+(const RatPoly& rhs) const {
  RatVec c(std::max(c_.size(), rhs.c_.size()), Rat(0));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(i) + rhs.coeff(i);
  return RatPoly(std::move(c));
}

RatPoly RatPoly::operator-(const RatPoly& rhs) const {
  RatVec c(std::max(c_.size(), rhs.c_.size()), Rat(0));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(i) - rhs.coeff(i);
  return RatPoly(std::move(c));
}

RatPoly RatPoly::operator*(const RatPoly& rhs) const {
  if (is_zero() || rhs.is_zero()) return RatPoly();
  RatVec c(c_.size() + rhs.c_.size() - 1, Rat(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < rhs.c_.size(); ++j) c[i + j] += c_[i] * rhs.c_[j];
  }
  return RatPoly(std::move(c));
}

std::pair<RatPoly, RatPoly> RatPoly::divmod(const RatPoly& rhs) const {
  if (rhs.is_zero()) throw std::invalid_argument("RatPoly::divmod: division by zero");
  if (degree() < rhs.degree()) return {RatPoly(), *this};
  RatVec rem = c_;
  RatVec q(static_cast<std::size_t>(degree() - rhs.degree()) + 1, Rat(0));
  Rat lead_inv = make_rat(rhs.leading().get_den(), rhs.leading().get_num());
  for (long k = degree() - rhs.degree(); k >= 0; --k) {
    Rat t = rem[k + rhs.degree()] * lead_inv;
    q[k] = t;
    if (t == 0) continue;
    for (long j = 0; j <= rhs.degree(); ++j) rem[k + j] -= t * rhs.c_[j];
  }
  return {RatPoly(std::move(q)), RatPoly(std::move(rem))};
}

RatPoly RatPoly::monic() const {
  if (is_zero()) return RatPoly();
  Rat inv = make_rat(leading().get_den(), leading().get_num());
  RatVec c = c_;
  for (Rat& x : c) x *= inv;
  return RatPoly(std::move(c));
}

RatPoly RatPoly::derivative() const {
  if (c_.size() <= 1) return RatPoly();
  RatVec c(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * Rat(static_cast<long>(i));
  return RatPoly(std::move(c));
}

Rat RatPoly::eval(const Rat& x) const {
  Rat r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

RatPoly power_of_x_mod(unsigned long e, const RatPoly& m) {
  if (m.degree() < 1) throw std::invalid_argument("power_of_x_mod: modulus must have degree >= 1");
  RatPoly acc = RatPoly::from(std::vector<long>{1});
  RatPoly base = RatPoly::from(std::vector<long>{0, 1}).divmod(m).second;
  while (e > 0) {
    if (e & 1) acc = (acc * base).divmod(m).second;
    e >>= 1;
    if (e > 0) base = (base * base).divmod(m).second;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial (Faddeev-LeVerrier)

IntPoly charpoly(const IntMat& m) {
  std::size_t d = m.dim();
  IntVec c(d + 1, Int(0));
  c[d] = 1;
  IntMat mk = IntMat::identity(d);
  for (std::size_t k = 1; k <= d; ++k) {
    mk = m * mk;
    Int ck = exact_div(-mk.trace(), Int(static_cast<long>(k)));
    c[d - k] = ck;
    for (std::size_t i = 0; i < d; ++i) mk.at(i, i) += ck;
  }
  return IntPoly(std::move(c));
}

RatPoly charpoly(const RatMat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("charpoly: not square");
  std::size_t d = m.rows();
  RatVec c(d + 1, Rat(0));
  c[d] = 1;
  RatMat mk = RatMat::identity(d);
  for (std::size_t k = 1; k <= d; ++k) {
    mk = m * mk;
    Rat tr = 0;
    for (std::size_t i = 0; i < d; ++i) tr += mk.at(i, i);
    Rat ck = -tr / Rat(static_cast<long>(k));
    c[d - k] = ck;
    for (std::size_t i = 0; i < d; ++i) mk.at(i, i) += ck;
  }
  return RatPoly(std::move(c));
}

RatPoly minimal_polynomial(const IntMat& m) {
  std::size_t d = m.dim();
  std::vector<IntMat> powers{IntMat::identity(d)};
  for (std::size_t k = 1; k <= d; ++k) {
    powers.push_back(powers.back() * m);
    // Columns are vec(I), vec(m), ..., vec(m^k).
    RatMat sys(d * d, k + 1);
    for (std::size_t c = 0; c <= k; ++c)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          sys.at(i * d + j, c) = powers[c].at(i, j);
    std::vector<IntVec> kern = rational_kernel(sys);
    if (kern.empty()) continue;
    RatVec coeffs(kern[0].begin(), kern[0].end());
    return RatPoly(std::move(coeffs)).monic();
  }
  throw std::logic_error("minimal_polynomial: no dependence up to the dimension");
}

// ---------------------------------------------------------------------------
// Kernels and lattices

IntVec primitive_vector(const RatVec& v) {
  if (is_zero(v)) throw std::invalid_argument("primitive_vector: zero vector");
  Int l = 1;
  for (const Rat& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
  IntVec w(v.size());
  Int g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    w[i] = v[i].get_num() * exact_div(l, Int(v[i].get_den()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), w[i].get_mpz_t());
  }
  for (Int& x : w) x = exact_div(x, g);
  for (const Int& x : w) {
    if (x == 0) continue;
    if (x < 0)
      for (Int& y : w) y = -y;
    break;
  }
  return w;
}

std::vector<IntVec> rational_kernel(const RatMat& m) {
  std::size_t rows = m.rows(), cols = m.cols();
  RatMat a = m;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a.at(p, c) == 0) ++p;
    if (p == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(a.at(r, j), a.at(p, j));
    Rat inv = make_rat(a.at(r, c).get_den(), a.at(r, c).get_num());
    for (std::size_t j = c; j < cols; ++j) a.at(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a.at(i, c) == 0) continue;
      Rat f = a.at(i, c);
      for (std::size_t j = c; j < cols; ++j) a.at(i, j) -= f * a.at(r, j);
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::vector<IntVec> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RatVec v(cols, Rat(0));
    v[f] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -a.at(i, f);
    basis.push_back(primitive_vector(v));
  }
  return basis;
}

RatPoly poly_gcd(const RatPoly& p, const RatPoly& q) {
  if (p.is_zero() && q.is_zero())
    throw std::invalid_argument("poly_gcd: gcd(0, 0) is undefined");
  RatPoly a = p, b = q;
  while (!b.is_zero()) {
    RatPoly r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

namespace {

// One unimodular column operation combining columns j0 and j1 of both mats so
// that row entry (i, j1) becomes zero.
void column_gcd_step(std::vector<IntVec>& a, std::vector<IntVec>& u,
                     std::size_t i, std::size_t j0, std::size_t j1) {
  Int g, p, q;
  mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(),
             a[i][j0].get_mpz_t(), a[i][j1].get_mpz_t());
  Int x = exact_div(a[i][j0], g), y = exact_div(a[i][j1], g);
  for (auto* m : {&a, &u}) {
    for (auto& row : *m) {
      Int c0 = p * row[j0] + q * row[j1];
      Int c1 = x * row[j1] - y * row[j0];
      row[j0] = std::move(c0);
      row[j1] = std::move(c1);
    }
  }
}

}  // namespace

std::vector<IntVec> integer_kernel(const std::vector<IntVec>& rows, std::size_t cols) {
  std::vector<IntVec> a = rows;
  std::vector<IntVec> u(cols, IntVec(cols, Int(0)));
  for (std::size_t i = 0; i < cols; ++i) u[i][i] = 1;
  std::size_t rank = 0;
  for (std::size_t i = 0; i < a.size() && rank < cols; ++i) {
    std::size_t j0 = rank;
    while (j0 < cols && a[i][j0] == 0) ++j0;
    if (j0 == cols) continue;
    if (j0 != rank)
      for (auto* m : {&a, &u})
        for (auto& row : *m) std::swap(row[rank], row[j0]);
    for (std::size_t j = rank + 1; j < cols; ++j)
      if (a[i][j] != 0) column_gcd_step(a, u, i, rank, j);
    ++rank;
  }
  std::vector<IntVec> basis;
  for (std::size_t j = rank; j < cols; ++j) {
    IntVec v(cols);
    for (std::size_t i = 0; i < cols; ++i) v[i] = u[i][j];
    basis.push_back(std::move(v));
  }
  return hermite_rows(std::move(basis));
}

std::vector<IntVec> hermite_rows(std::vector<IntVec> rows) {
  if (rows.empty()) return rows;
  std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      while (rows[i][c] != 0) {
        Int q = floor_div(rows[i][c], rows[r][c]);
        for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= q * rows[r][j];
        if (rows[i][c] != 0) std::swap(rows[r], rows[i]);
      }
    }
    if (rows[r][c] < 0)
      for (Int& x : rows[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      Int q = floor_div(rows[i][c], rows[r][c]);
      if (q == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= q * rows[r][j];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

std::vector<IntVec> lattice_saturate(const std::vector<RatVec>& basis) {
  if (basis.empty()) throw std::invalid_argument("lattice_saturate: empty basis");
  std::size_t d = basis[0].size();
  RatMat b = RatMat::from_rows(basis);
  if (b.rank() != basis.size())
    throw std::invalid_argument("lattice_saturate: input vectors are dependent");
  if (basis.size() == d) {
    // Full span: the saturation is all of Z^d.
    std::vector<IntVec> full(d, IntVec(d, Int(0)));
    for (std::size_t i = 0; i < d; ++i) full[i][i] = 1;
    return full;
  }
  // Rows of `ann` span the annihilator {y : <y, v_i> = 0}; the saturation is
  // exactly the integer kernel of `ann`.
  std::vector<IntVec> ann = rational_kernel(b);
  return integer_kernel(ann, d);
}

}  // namespace mixshape::exact
