#include "mixshape/families.hpp"

#include <algorithm>
#include <array>

#include "mixshape/cyclo.hpp"
#include "mixshape/groups.hpp"

namespace mixshape::families {

using exact::Int;
using exact::IntMat;
using exact::IntPoly;
using exact::IntVec;
using exact::Rat;
using exact::RatMat;
using exact::RatPoly;
using exact::RatVec;
using mixing::EpiSet;

namespace {

int sign_of(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }

// Sign changes in the Sturm chain at +inf / -inf come from the leading
// coefficients and degree parities.
std::vector<RatPoly> sturm_chain(const RatPoly& p) {
  std::vector<RatPoly> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    const RatPoly& a = chain[chain.size() - 2];
    const RatPoly& b = chain.back();
    RatPoly r = a.divmod(b).second;
    RatVec neg(r.coeffs().size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -r.coeffs()[i];
    chain.emplace_back(std::move(neg));
  }
  chain.pop_back();
  return chain;
}

unsigned sign_changes(const std::vector<int>& signs) {
  unsigned changes = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

unsigned sturm_real_root_count(const RatPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("sturm_real_root_count: zero polynomial");
  if (p.degree() == 0) return 0;
  std::vector<RatPoly> chain = sturm_chain(p);
  std::vector<int> at_minus, at_plus;
  for (const RatPoly& q : chain) {
    int lead = sign_of(q.leading());
    at_plus.push_back(lead);
    at_minus.push_back(q.degree() % 2 == 0 ? lead : -lead);
  }
  return sign_changes(at_minus) - sign_changes(at_plus);
}

namespace {

Int next_prime_geq(Int q) {
  if (q < 2) q = 2;
  while (mpz_probab_prime_p(q.get_mpz_t(), 40) == 0) ++q;
  return q;
}

IntPoly shifted_root_product(unsigned d, const Int& q) {
  IntPoly p = IntPoly::from(std::vector<long>{1});
  for (unsigned i = 1; i <= d; ++i) {
    Int root = q * static_cast<long>(i);
    p = p * IntPoly(IntVec{-root, Int(1)});
  }
  IntVec c = p.coeffs();
  c[0] += q;
  return IntPoly(std::move(c));
}

bool eisenstein_holds(const IntPoly& p, const Int& q) {
  for (long k = 0; k < p.degree(); ++k)
    if (p.coeff(k) % q != 0) return false;
  return p.coeff(0) % (q * q) != 0;
}

// Sign alternation at the points (2j+1)q/2, j = 0..d: these certify d
// distinct real roots once |product| beats the +q perturbation.
bool sign_conditions_hold(const IntPoly& p, unsigned d, const Int& q) {
  for (unsigned j = 0; j <= d; ++j) {
    Rat point = exact::make_rat(q * static_cast<long>(2 * j + 1), Int(2));
    int expected = (d - j) % 2 == 0 ? 1 : -1;
    if (sign_of(p.eval(point)) != expected) return false;
  }
  return true;
}

}  // namespace

IntPoly gen_eisenstein_poly(unsigned d, const Int& q_start, Int* q_used) {
  if (d == 0) throw std::invalid_argument("gen_eisenstein_poly: d must be >= 1");
  if (mpz_probab_prime_p(q_start.get_mpz_t(), 40) == 0)
    throw std::invalid_argument("gen_eisenstein_poly: q must be prime");
  if (d == 1) {
    // (x - q) + q collapses to x; kept as the documented degenerate case.
    if (q_used) *q_used = q_start;
    return IntPoly::from(std::vector<long>{0, 1});
  }
  Int q = q_start;
  while (true) {
    IntPoly p = shifted_root_product(d, q);
    if (eisenstein_holds(p, q) && sign_conditions_hold(p, d, q)) {
      if (sturm_real_root_count(RatPoly::from(p)) != d)
        throw std::logic_error("gen_eisenstein_poly: sign conditions held but Sturm count disagrees");
      if (q_used) *q_used = q;
      return p;
    }
    q = next_prime_geq(q + 1);
  }
}

namespace {

// Unimodular matrix whose first column is the given primitive vector,
// obtained by inverting the row reduction that sends v to e_1.
IntMat completion_with_first_column(const IntVec& v) {
  std::size_t d = v.size();
  std::vector<IntVec> w(d, IntVec(d, Int(0)));
  for (std::size_t i = 0; i < d; ++i) w[i][i] = 1;
  IntVec x = v;
  for (std::size_t i = 1; i < d; ++i) {
    if (x[i] == 0) continue;
    Int g, p, q;
    mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), x[0].get_mpz_t(), x[i].get_mpz_t());
    Int a = x[0] / g, b = x[i] / g;
    IntVec row0(d), rowi(d);
    for (std::size_t j = 0; j < d; ++j) {
      row0[j] = p * w[0][j] + q * w[i][j];
      rowi[j] = a * w[i][j] - b * w[0][j];
    }
    w[0] = std::move(row0);
    w[i] = std::move(rowi);
    x[0] = g;
    x[i] = 0;
  }
  if (x[0] < 0) {
    for (Int& e : w[0]) e = -e;
    x[0] = -x[0];
  }
  if (x[0] != 1) throw std::invalid_argument("completion: vector is not primitive");
  return groups::unimodular_inverse(IntMat::from_rows(w));
}

bool rank_equals(const std::vector<IntVec>& vectors, std::size_t expected) {
  std::vector<RatVec> rows;
  for (const IntVec& v : vectors) rows.emplace_back(v.begin(), v.end());
  return RatMat::from_rows(rows).rank() == expected;
}

// Every subset of size <= cap of the given vectors is independent.
bool small_subsets_independent(const std::vector<IntVec>& vectors, std::size_t cap) {
  cap = std::min(cap, vectors.size());
  std::vector<std::size_t> idx;
  auto rec = [&](auto&& self, std::size_t start, std::size_t size) -> bool {
    if (idx.size() == size) {
      std::vector<IntVec> sub;
      for (std::size_t i : idx) sub.push_back(vectors[i]);
      return rank_equals(sub, size);
    }
    for (std::size_t i = start; i < vectors.size(); ++i) {
      idx.push_back(i);
      bool ok = self(self, i + 1, size);
      idx.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  return rec(rec, 0, cap);
}

IntVec dual_kernel_ray(const IntMat& u_inv) {
  // ker(N^T) for N = U J U^-1 is spanned by the last row of U^-1.
  std::size_t d = u_inv.dim();
  IntVec r(d);
  for (std::size_t j = 0; j < d; ++j) r[j] = u_inv.at(d - 1, j);
  return exact::primitive_vector(RatVec(r.begin(), r.end()));
}

void verify_unipotent_family(const EpiSet& family, const std::vector<IntVec>& vectors,
                             bool vectors_independent) {
  std::size_t d = family.dim(), s = family.size();
  for (std::size_t i = 0; i < s; ++i) {
    IntMat n = family.maps[i];
    for (std::size_t r = 0; r < d; ++r) n.at(r, r) -= 1;
    IntMat nd = n.pow(d);
    if (!(nd == IntMat(d)))
      throw std::logic_error("gen_unipotent_family: member is not unipotent");
    std::vector<IntVec> kern = exact::rational_kernel(RatMat::from(n));
    if (kern.size() != 1)
      throw std::logic_error("gen_unipotent_family: nilpotent kernel is not a line");
    IntVec expected = exact::primitive_vector(RatVec(vectors[i].begin(), vectors[i].end()));
    if (kern[0] != expected)
      throw std::logic_error("gen_unipotent_family: kernel does not match the requested vector");
  }
  // Engine verdicts are the source of truth for the mixing shape.
  std::vector<std::size_t> idx;
  auto subsets_mixing = [&](auto&& self, std::size_t start, std::size_t size) -> bool {
    if (idx.size() == size) {
      std::vector<IntMat> sub;
      for (std::size_t i : idx) sub.push_back(family.maps[i]);
      return mixing::is_mixing(mixing::is_mixing_set(EpiSet(sub)));
    }
    for (std::size_t i = start; i < s; ++i) {
      idx.push_back(i);
      bool ok = self(self, i + 1, size);
      idx.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  for (std::size_t size = 2; size < s; ++size)
    if (!subsets_mixing(subsets_mixing, 0, size))
      throw std::logic_error("gen_unipotent_family: a proper subset is not mixing");
  if (s == d + 1 && mixing::is_mixing(mixing::is_mixing_set(family)))
    throw std::logic_error("gen_unipotent_family: d+1 unipotents cannot form a mixing set");
  if (vectors_independent && s >= 2 && !mixing::is_mixing(mixing::is_mixing_set(family)))
    throw std::logic_error("gen_unipotent_family: independent kernels but the family is not mixing");
}

}  // namespace

EpiSet gen_unipotent_family(unsigned d, const std::vector<IntVec>& vectors) {
  if (d < 2) throw std::invalid_argument("gen_unipotent_family: d must be >= 2");
  std::size_t s = vectors.size();
  if (s < 2 || s > d + 1)
    throw std::invalid_argument("gen_unipotent_family: need 2 <= s <= d+1 vectors");
  for (const IntVec& v : vectors)
    if (v.size() != d) throw std::invalid_argument("gen_unipotent_family: vector dimension mismatch");
  // Every proper subset of the kernel vectors must be linearly independent.
  std::size_t proper = s - 1;
  std::vector<std::size_t> idx;
  auto check = [&](auto&& self, std::size_t start) -> void {
    if (idx.size() == proper) {
      std::vector<IntVec> sub;
      for (std::size_t i : idx) sub.push_back(vectors[i]);
      if (!rank_equals(sub, proper))
        throw std::invalid_argument("gen_unipotent_family: a proper subset of the vectors is dependent");
      return;
    }
    for (std::size_t i = start; i < s; ++i) {
      idx.push_back(i);
      self(self, i + 1);
      idx.pop_back();
    }
  };
  check(check, 0);

  // Single nilpotent Jordan block with kernel <e_1>.
  IntMat jordan(d);
  for (unsigned j = 1; j < d; ++j) jordan.at(j - 1, j) = 1;

  bool vectors_independent = rank_equals(vectors, s);
  // The dual kernel rays decide the mixing shape.  An independent kernel set
  // must give an independent ray set; otherwise only the proper subsets are
  // constrained.
  std::size_t ray_cap = vectors_independent ? std::min<std::size_t>(d, s)
                                            : std::min<std::size_t>(d, s - 1);

  std::vector<IntMat> maps;
  std::vector<IntVec> dual_rays;
  for (const IntVec& v : vectors) {
    IntVec prim = exact::primitive_vector(RatVec(v.begin(), v.end()));
    IntMat u = completion_with_first_column(prim);
    // The free completion columns are adjusted until the dual kernel rays
    // stay in general position; the first column (and hence ker N = <v>) is
    // untouched.
    for (long t = 0;; ++t) {
      if (t > 200)
        throw std::logic_error("gen_unipotent_family: no completion kept the dual kernels independent");
      IntMat candidate = u;
      if (t > 0) {
        if (d < 3) throw std::logic_error("gen_unipotent_family: dual kernels collide in dimension 2");
        IntMat shear = IntMat::identity(d);
        shear.at(d - 1, 1) = t;
        candidate = u * shear;
      }
      IntMat cand_inv = groups::unimodular_inverse(candidate);
      IntVec ray = dual_kernel_ray(cand_inv);
      std::vector<IntVec> trial = dual_rays;
      trial.push_back(ray);
      if (!small_subsets_independent(trial, ray_cap)) continue;
      dual_rays.push_back(ray);
      IntMat n = candidate * jordan * cand_inv;
      IntMat t_i = n;
      for (std::size_t r = 0; r < d; ++r) t_i.at(r, r) += 1;
      maps.push_back(std::move(t_i));
      break;
    }
  }
  EpiSet family(std::move(maps));
  verify_unipotent_family(family, vectors, vectors_independent);
  return family;
}

EpiSet gen_unipotent_family(unsigned d, unsigned s) {
  if (d < 2) throw std::invalid_argument("gen_unipotent_family: d must be >= 2");
  if (s < 2 || s > d + 1) throw std::invalid_argument("gen_unipotent_family: need 2 <= s <= d+1");
  std::vector<IntVec> vectors;
  for (unsigned i = 0; i < s && i < d; ++i) {
    IntVec e(d, Int(0));
    e[i] = 1;
    vectors.push_back(std::move(e));
  }
  if (s == d + 1) vectors.push_back(IntVec(d, Int(1)));
  return gen_unipotent_family(d, vectors);
}

namespace {

IntMat companion(const IntPoly& p) {
  std::size_t d = p.degree();
  if (p.leading() != 1) throw std::invalid_argument("companion: polynomial must be monic");
  IntMat c(d);
  for (std::size_t i = 1; i < d; ++i) c.at(i, i - 1) = 1;
  for (std::size_t i = 0; i < d; ++i) c.at(i, d - 1) = -p.coeff(i);
  if (!(exact::charpoly(c) == p)) throw std::logic_error("companion: characteristic polynomial mismatch");
  return c;
}

void verify_epi_family(const EpiSet& family) {
  for (const IntMat& t : family.maps)
    if (!mixing::is_ergodic(t)) throw std::logic_error("gen_epi_family: member is not ergodic");
  if (mixing::is_mixing(mixing::is_mixing_set(family)))
    throw std::logic_error("gen_epi_family: full family is mixing");
  std::size_t s = family.size();
  std::vector<std::size_t> idx;
  auto rec = [&](auto&& self, std::size_t start, std::size_t size) -> void {
    if (idx.size() == size) {
      std::vector<IntMat> sub;
      for (std::size_t i : idx) sub.push_back(family.maps[i]);
      if (!mixing::is_mixing(mixing::is_mixing_set(EpiSet(sub))))
        throw std::logic_error("gen_epi_family: a proper subset is not mixing");
      return;
    }
    for (std::size_t i = start; i < s; ++i) {
      idx.push_back(i);
      self(self, i + 1, size);
      idx.pop_back();
    }
  };
  for (std::size_t size = 2; size < s; ++size) rec(rec, 0, size);
}

}  // namespace

EpiSet gen_epi_family(unsigned d, unsigned s) {
  if (d == 0 || s < 2 || s > d + 1)
    throw std::invalid_argument("gen_epi_family: need d >= 1 and 2 <= s <= d+1");
  if (d == 1) {
    // Same magnitude, opposite signs: not mixing as a pair, each ergodic.
    EpiSet family({IntMat::from_rows({{2}}), IntMat::from_rows({{-2}})});
    verify_epi_family(family);
    return family;
  }
  Int q0 = next_prime_geq(Int(4) * static_cast<long>(d) * static_cast<long>(d) + 1);
  IntPoly p = gen_eisenstein_poly(d, q0);
  IntMat comp_t = companion(p).transpose();

  // diag(1,...,1,2,...,s-1): minimal polynomial (x-1)...(x-(s-1)).
  RatMat a(d, d), a_inv(d, d);
  for (unsigned i = 0; i < d; ++i) {
    long value = (i + 1 <= d - (s - 2)) ? 1 : static_cast<long>(i + 1 - (d - (s - 2)) + 1);
    a.at(i, i) = value;
    a_inv.at(i, i) = exact::make_rat(1, value);
  }

  std::vector<RatMat> scaled;
  Int denominator_lcm = 1;
  RatMat left = RatMat::identity(d), right = RatMat::identity(d);
  for (unsigned j = 1; j <= s; ++j) {
    RatMat m = left * RatMat::from(comp_t) * right;
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        mpz_lcm(denominator_lcm.get_mpz_t(), denominator_lcm.get_mpz_t(),
                m.at(r, c).get_den().get_mpz_t());
    scaled.push_back(std::move(m));
    left = a_inv * left;
    right = right * a;
  }
  std::vector<IntMat> maps;
  for (const RatMat& m : scaled) {
    IntMat t(d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        Rat e = m.at(r, c) * Rat(denominator_lcm);
        if (e.get_den() != 1) throw std::logic_error("gen_epi_family: scaling failed");
        t.at(r, c) = e.get_num();
      }
    maps.push_back(std::move(t));
  }
  EpiSet family(std::move(maps));
  verify_epi_family(family);
  return family;
}

EpiSet gen_block_triangular(unsigned d1, unsigned d2) {
  if (d1 < 2 || d2 < 2) throw std::invalid_argument("gen_block_triangular: blocks must be >= 2");
  auto hyperbolic_block = [](unsigned dim) {
    if (dim == 2) return IntMat::from_rows({{1, 1}, {1, 0}});
    return companion(gen_eisenstein_poly(dim, next_prime_geq(Int(4) * static_cast<long>(dim) * static_cast<long>(dim) + 1)));
  };
  IntMat a = hyperbolic_block(d1), b = hyperbolic_block(d2);
  for (const IntMat* m : {&a, &b})
    if (cyclo::has_root_of_unity_root(RatPoly::from(exact::charpoly(*m)), m->dim()))
      throw std::logic_error("gen_block_triangular: diagonal block is not hyperbolic");
  unsigned d = d1 + d2;
  auto assemble = [&](bool with_corner) {
    IntMat g(d);
    for (unsigned i = 0; i < d1; ++i)
      for (unsigned j = 0; j < d1; ++j) g.at(i, j) = a.at(i, j);
    for (unsigned i = 0; i < d2; ++i)
      for (unsigned j = 0; j < d2; ++j) g.at(d1 + i, d1 + j) = b.at(i, j);
    if (with_corner) g.at(0, d1) = 1;  // C = E_11
    return g;
  };
  EpiSet gens({assemble(false), assemble(true)});
  // Words with distinct block growth are mixing sets; each generator is
  // ergodic.  The higher-order search is exercised in the test suite.
  for (const IntMat& g : gens.maps)
    if (!mixing::is_ergodic(g)) throw std::logic_error("gen_block_triangular: generator not ergodic");
  EpiSet pair({gens.maps[0], gens.maps[1] * gens.maps[0]});
  if (!mixing::is_mixing(mixing::is_mixing_set(pair)))
    throw std::logic_error("gen_block_triangular: distinct-growth word pair is not mixing");
  return gens;
}

std::vector<IntMat> search_lorentz_generators(long bound, std::size_t count) {
  // B^T J B = J with J = diag(1,1,-1), det B = 1, columnwise pruning.
  std::vector<IntMat> found;
  auto q_form = [](const std::array<long, 3>& u, const std::array<long, 3>& v) {
    return u[0] * v[0] + u[1] * v[1] - u[2] * v[2];
  };
  std::vector<std::array<long, 3>> unit_cols, neg_cols;
  for (long x = -bound; x <= bound; ++x)
    for (long y = -bound; y <= bound; ++y)
      for (long z = -bound; z <= bound; ++z) {
        std::array<long, 3> v{x, y, z};
        long n = q_form(v, v);
        if (n == 1) unit_cols.push_back(v);
        if (n == -1) neg_cols.push_back(v);
      }
  for (const auto& c1 : unit_cols) {
    for (const auto& c2 : unit_cols) {
      if (q_form(c1, c2) != 0) continue;
      for (const auto& c3 : neg_cols) {
        if (q_form(c1, c3) != 0 || q_form(c2, c3) != 0) continue;
        long det = c1[0] * (c2[1] * c3[2] - c2[2] * c3[1]) -
                   c2[0] * (c1[1] * c3[2] - c1[2] * c3[1]) +
                   c3[0] * (c1[1] * c2[2] - c1[2] * c2[1]);
        if (det != 1) continue;
        IntMat m(3);
        for (std::size_t i = 0; i < 3; ++i) {
          m.at(i, 0) = c1[i];
          m.at(i, 1) = c2[i];
          m.at(i, 2) = c3[i];
        }
        if (groups::is_finite_order(m)) continue;
        found.push_back(std::move(m));
        if (found.size() == count) return found;
      }
    }
  }
  throw std::logic_error("search_lorentz_generators: search bound exhausted");
}

GeneratedFamily generate(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::kUnipotentSharp:
      return gen_unipotent_family(spec.d, spec.s);
    case FamilyKind::kEisensteinPoly:
      return gen_eisenstein_poly(spec.d, spec.q);
    case FamilyKind::kEpiSharp:
      return gen_epi_family(spec.d, spec.s);
    case FamilyKind::kBlockTriangular:
      return gen_block_triangular(spec.d1, spec.d2);
    case FamilyKind::kScaledFreePair:
      return fixtures().free_scaled;
    case FamilyKind::kRotationPair:
      return fixtures().st;
  }
  throw std::invalid_argument("generate: unknown family kind");
}

Fixtures fixtures() {
  EpiSet st({IntMat::from_rows({{0, -1}, {1, 0}}), IntMat::from_rows({{0, -1}, {1, -1}})});

  IntMat alpha = IntMat::from_rows({{1, 2}, {0, 1}});
  IntMat beta = IntMat::from_rows({{1, 0}, {2, 1}});
  IntMat two = IntMat::from_rows({{2, 0}, {0, 2}});
  EpiSet free_scaled({two * alpha, two * beta});

  EpiSet row_stabilizer({IntMat::from_rows({{1, 1}, {0, 1}})});

  std::vector<IntMat> lorentz = search_lorentz_generators(3, 2);
  for (const IntMat& g : lorentz) {
    IntMat j = IntMat::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, -1}});
    if (!(g.transpose() * j * g == j))
      throw std::logic_error("fixtures: Lorentz generator does not preserve the form");
  }
  return Fixtures{std::move(st), std::move(free_scaled), std::move(row_stabilizer),
                  EpiSet(std::move(lorentz))};
}

}  // namespace mixshape::families
