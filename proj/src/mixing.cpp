#include "mixshape/mixing.hpp"

#include <algorithm>
#include <set>

#include "mixshape/cyclo.hpp"

namespace mixshape::mixing {

using exact::Int;
using exact::IntMat;
using exact::IntVec;
using exact::Rat;
using exact::RatMat;
using exact::RatPoly;
using exact::RatVec;

EpiSet::EpiSet(std::vector<IntMat> m) : maps(std::move(m)) {
  if (maps.empty()) throw std::invalid_argument("EpiSet: at least one map required");
  for (const IntMat& t : maps) {
    if (t.dim() != maps.front().dim())
      throw std::invalid_argument("EpiSet: all maps must share the dimension");
    if (t.det() == 0)
      throw std::invalid_argument("EpiSet: determinant zero, not an epimorphism");
  }
}

std::vector<unsigned long> exponent_schedule(std::size_t dim, const EngineOptions& opts) {
  std::set<unsigned long> ls;
  for (unsigned long l : cyclo::phi_bounded_orders(dim * dim).orders) ls.insert(l);
  if (opts.max_exponent)
    for (unsigned long l = 1; l <= *opts.max_exponent; ++l) ls.insert(l);
  return {ls.begin(), ls.end()};
}

IntMat dual(const IntMat& m) { return m.transpose(); }

bool is_ergodic(const IntMat& t) {
  if (t.det() == 0) throw std::invalid_argument("is_ergodic: determinant zero");
  return !cyclo::has_root_of_unity_root(RatPoly::from(exact::charpoly(t)), t.dim());
}

namespace {

// Horizontal stack [P_1 | ... | P_s] as rational rows.
std::vector<RatVec> block_rows(const std::vector<IntMat>& blocks) {
  std::size_t d = blocks.front().dim();
  std::vector<RatVec> rows(d, RatVec(blocks.size() * d, Rat(0)));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < blocks.size(); ++k)
      for (std::size_t j = 0; j < d; ++j) rows[i][k * d + j] = blocks[k].at(i, j);
  return rows;
}

std::vector<IntVec> split_tuple(const IntVec& flat, std::size_t s, std::size_t d) {
  std::vector<IntVec> tuple(s);
  for (std::size_t k = 0; k < s; ++k)
    tuple[k] = IntVec(flat.begin() + k * d, flat.begin() + (k + 1) * d);
  return tuple;
}

IntVec relation_value(const std::vector<IntMat>& powers, const std::vector<IntVec>& tuple) {
  std::size_t d = powers.front().dim();
  IntVec sum(d, Int(0));
  for (std::size_t k = 0; k < powers.size(); ++k) {
    IntVec y = powers[k].apply(tuple[k]);
    for (std::size_t i = 0; i < d; ++i) sum[i] += y[i];
  }
  return sum;
}

}  // namespace

std::vector<std::vector<IntVec>> stabilized_relation_kernel(const EpiSet& f, unsigned long l) {
  if (l == 0) throw std::invalid_argument("stabilized_relation_kernel: l must be >= 1");
  std::size_t s = f.size(), d = f.dim();
  std::size_t depth = s * d;
  std::vector<IntMat> step;
  step.reserve(s);
  for (const IntMat& t : f.maps) step.push_back(dual(t).pow(l));

  // Fast path: intersect the constraints one n at a time and bail out as soon
  // as the solution space dies.  Columns of `basis` span the current space.
  std::vector<IntMat> current = step;
  RatMat basis = RatMat::identity(s * d);
  std::size_t dim_now = s * d;
  std::vector<std::vector<IntMat>> power_rows;
  for (std::size_t n = 1; n <= depth && dim_now > 0; ++n) {
    power_rows.push_back(current);
    RatMat constraint = RatMat::from_rows(block_rows(current));
    std::vector<IntVec> kern = exact::rational_kernel(constraint * basis);
    if (kern.empty()) {
      dim_now = 0;
      break;
    }
    RatMat next(s * d, kern.size());
    for (std::size_t c = 0; c < kern.size(); ++c) {
      RatVec combo(kern[c].begin(), kern[c].end());
      RatVec col = basis.apply(combo);
      for (std::size_t r = 0; r < s * d; ++r) next.at(r, c) = col[r];
    }
    basis = std::move(next);
    dim_now = kern.size();
    if (n < depth)
      for (std::size_t k = 0; k < s; ++k) current[k] = current[k] * step[k];
  }
  if (dim_now == 0) return {};

  // Canonical basis: solve the full stacked system in one shot so the output
  // does not depend on the intersection order.
  std::vector<RatVec> stacked;
  for (const auto& powers : power_rows)
    for (RatVec& row : block_rows(powers)) stacked.push_back(std::move(row));
  std::vector<IntVec> kern = exact::rational_kernel(RatMat::from_rows(stacked));
  std::vector<std::vector<IntVec>> tuples;
  tuples.reserve(kern.size());
  for (const IntVec& flat : kern) tuples.push_back(split_tuple(flat, s, d));

  // Membership at n = 1..s*d already implies the relation for every n; check
  // the next s*d values anyway and fail hard on violation.
  std::vector<IntMat> verify = power_rows.back();
  for (std::size_t n = depth + 1; n <= 2 * depth; ++n) {
    for (std::size_t k = 0; k < s; ++k) verify[k] = verify[k] * step[k];
    for (const auto& tuple : tuples)
      if (!exact::is_zero(relation_value(verify, tuple)))
        throw std::logic_error("stabilized_relation_kernel: stabilization check failed");
  }
  return tuples;
}

MixingVerdict is_mixing_set(const EpiSet& f, const EngineOptions& opts) {
  if (f.size() < 2) throw std::invalid_argument("is_mixing_set: |F| > 1 required");
  std::vector<unsigned long> schedule = exponent_schedule(f.dim(), opts);
  for (unsigned long l : schedule) {
    auto kernel = stabilized_relation_kernel(f, l);
    if (kernel.empty()) continue;
    NotMixing verdict;
    verdict.exponent = l;
    verdict.witness = kernel.front();
    for (std::size_t k = 0; k < f.size(); ++k)
      if (!exact::is_zero(verdict.witness[k])) verdict.support.push_back(k);
    return verdict;
  }
  return Mixing{std::move(schedule)};
}

namespace {

void subsets_of_size(std::size_t s, std::size_t size,
                     std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == size) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i + (size - cur.size()) <= s; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

RatPoly poly_lcm(const RatPoly& a, const RatPoly& b) {
  return (a * b).divmod(exact::poly_gcd(a, b)).first.monic();
}

}  // namespace

SpectralPrecheck spectral_precheck(const EpiSet& f, const EngineOptions& opts) {
  if (f.size() < 2) throw std::invalid_argument("spectral_precheck: |F| > 1 required");
  std::size_t s = f.size(), d = f.dim();
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t size = 2; size <= s; ++size) subsets_of_size(s, size, subsets);

  bool pair_overlap = false;
  for (unsigned long l : exponent_schedule(d, opts)) {
    std::vector<IntMat> powers;
    powers.reserve(s);
    for (const IntMat& t : f.maps) powers.push_back(t.pow(l));
    std::vector<RatPoly> chars, mins;
    for (const IntMat& p : powers) {
      chars.push_back(RatPoly::from(exact::charpoly(p)));
      mins.push_back(exact::minimal_polynomial(p));
    }
    for (const auto& subset : subsets) {
      // Common eigenvalue across more than d members is fatal.
      if (subset.size() == d + 1) {
        RatPoly g = chars[subset[0]];
        for (std::size_t i = 1; i < subset.size() && g.degree() >= 1; ++i)
          g = exact::poly_gcd(g, chars[subset[i]]);
        if (g.degree() >= 1) return ProvenNotMixing{l, subset};
      }
      // A common annihilating polynomial of degree below the subset size is
      // fatal as well.
      RatPoly lcm = mins[subset[0]];
      for (std::size_t i = 1; i < subset.size(); ++i) lcm = poly_lcm(lcm, mins[subset[i]]);
      if (static_cast<std::size_t>(lcm.degree()) < subset.size())
        return ProvenNotMixing{l, subset};
    }
    for (std::size_t i = 0; i < s && !pair_overlap; ++i)
      for (std::size_t j = i + 1; j < s && !pair_overlap; ++j)
        if (exact::poly_gcd(chars[i], chars[j]).degree() >= 1) pair_overlap = true;
  }
  if (pair_overlap) return Inconclusive{};
  return ProvenMixing{};
}

bool commuting_pair_criterion(const IntMat& ti, const IntMat& tj) {
  if (ti.dim() != tj.dim())
    throw std::invalid_argument("commuting_pair_criterion: dimension mismatch");
  if (ti.det() == 0 || tj.det() == 0)
    throw std::invalid_argument("commuting_pair_criterion: determinant zero");
  if (!(ti * tj == tj * ti))
    throw std::invalid_argument("commuting_pair_criterion: maps do not commute");
  RatMat ratio = RatMat::from(dual(ti)).inverse() * RatMat::from(dual(tj));
  return !cyclo::has_root_of_unity_root(exact::charpoly(ratio), ti.dim());
}

std::optional<QuotientWitness> pair_quotient_witness(const IntMat& t1, const IntMat& t2,
                                                     const EngineOptions& opts) {
  if (t1.dim() != t2.dim())
    throw std::invalid_argument("pair_quotient_witness: dimension mismatch");
  EpiSet pair({t1, t2});
  std::size_t d = t1.dim();
  std::optional<QuotientWitness> found;
  for (unsigned long l : exponent_schedule(d, opts)) {
    IntMat d1 = dual(t1).pow(l), d2 = dual(t2).pow(l);
    RatMat r1 = RatMat::from(d1), r2 = RatMat::from(d2);
    // Constraint rows for W_0 = ker(d1 - d2).
    std::vector<RatVec> rows(d, RatVec(d, Rat(0)));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) rows[i][j] = d1.at(i, j) - d2.at(i, j);
    RatMat constraints = RatMat::from_rows(rows);
    // Shrink W_i to W_{i+1} = W_i inter d1^-1 W_i inter d2^-1 W_i by growing
    // the constraint set until the rank stabilizes.
    while (true) {
      std::size_t rank = constraints.rank();
      if (rank == d) break;
      RatMat via1 = constraints * r1, via2 = constraints * r2;
      std::vector<RatVec> all;
      for (std::size_t i = 0; i < constraints.rows(); ++i) {
        RatVec row(d);
        for (std::size_t j = 0; j < d; ++j) row[j] = constraints.at(i, j);
        all.push_back(std::move(row));
      }
      for (const RatMat* m : {&via1, &via2})
        for (std::size_t i = 0; i < m->rows(); ++i) {
          RatVec row(d);
          for (std::size_t j = 0; j < d; ++j) row[j] = m->at(i, j);
          all.push_back(std::move(row));
        }
      RatMat grown = RatMat::from_rows(all);
      if (grown.rank() == rank) break;
      constraints = std::move(grown);
    }
    if (constraints.rank() == d) continue;  // W = 0 at this exponent
    std::vector<IntVec> kernel = exact::rational_kernel(constraints);
    std::vector<RatVec> rational(kernel.size());
    for (std::size_t i = 0; i < kernel.size(); ++i)
      rational[i] = RatVec(kernel[i].begin(), kernel[i].end());
    found = QuotientWitness{l, exact::lattice_saturate(rational)};
    break;
  }
  bool engine_mixing = is_mixing(is_mixing_set(pair, opts));
  if (engine_mixing == found.has_value())
    throw std::logic_error("pair_quotient_witness: disagreement with the mixing engine");
  return found;
}

bool jointly_mixing(const EpiSet& f, const EngineOptions& opts) {
  for (const IntMat& t : f.maps)
    if (!is_ergodic(t)) return false;
  if (f.size() < 2) return true;
  return is_mixing(is_mixing_set(f, opts));
}

}  // namespace mixshape::mixing
