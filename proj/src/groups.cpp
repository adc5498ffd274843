#include "mixshape/groups.hpp"

#include <deque>
#include <set>
#include <string>

#include "mixshape/cyclo.hpp"

namespace mixshape::groups {

using exact::Int;
using exact::IntMat;
using exact::IntVec;
using exact::RatMat;
using exact::RatPoly;
using mixing::EpiSet;

std::string word_to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (int v : w) {
    if (!out.empty()) out += "*";
    if (v > 0)
      out += "g" + std::to_string(v - 1);
    else
      out += "g" + std::to_string(-v - 1) + "^-1";
  }
  return out;
}

bool is_finite_order(const IntMat& g) {
  if (g.det() == 0) throw std::invalid_argument("is_finite_order: determinant zero");
  std::size_t d = g.dim();
  // A finite-order matrix has only roots of unity as eigenvalues, so every
  // characteristic coefficient is bounded by the corresponding binomial.
  exact::IntPoly p = exact::charpoly(g);
  Int binom = 1;
  for (std::size_t k = 1; k <= d; ++k) {
    binom = binom * static_cast<long>(d - k + 1) / static_cast<long>(k);
    Int c = p.coeff(d - k);
    if (c < 0) c = -c;
    if (c > binom) return false;
  }
  Int m = cyclo::torsion_exponent(d);
  if (!m.fits_ulong_p()) throw std::invalid_argument("is_finite_order: dimension out of supported range");
  return g.pow(m.get_ui()).is_identity();
}

IntMat unimodular_inverse(const IntMat& g) {
  Int det = g.det();
  if (det != 1 && det != -1)
    throw std::invalid_argument("unimodular_inverse: determinant must be +-1");
  RatMat inv = RatMat::from(g).inverse();
  IntMat out(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = 0; j < g.dim(); ++j) {
      const exact::Rat& e = inv.at(i, j);
      if (e.get_den() != 1) throw std::logic_error("unimodular_inverse: non-integer inverse");
      out.at(i, j) = e.get_num();
    }
  return out;
}

namespace {

IntVec flatten(const IntMat& m) {
  IntVec v;
  v.reserve(m.dim() * m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) v.push_back(m.at(i, j));
  return v;
}

struct Letter {
  int code;  // word encoding
  IntMat matrix;
};

// Letters in scan order: g0, g0^-1, g1, g1^-1, ...
std::vector<Letter> letters(const EpiSet& generators, bool use_inverses) {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    out.push_back({static_cast<int>(i) + 1, generators.maps[i]});
    if (use_inverses)
      out.push_back({-static_cast<int>(i) - 1, unimodular_inverse(generators.maps[i])});
  }
  return out;
}

}  // namespace

GroupScanReport group_mixing_scan(const EpiSet& generators, unsigned max_len,
                                  bool use_inverses) {
  if (max_len == 0) throw std::invalid_argument("group_mixing_scan: max_len must be >= 1");
  if (use_inverses)
    for (const IntMat& g : generators.maps) {
      Int det = g.det();
      if (det != 1 && det != -1)
        throw std::invalid_argument("group_mixing_scan: inverses need unimodular generators");
    }
  std::size_t d = generators.dim();
  std::vector<Letter> alpha = letters(generators, use_inverses);

  std::set<IntVec> seen;
  seen.insert(flatten(IntMat::identity(d)));
  std::deque<std::pair<Word, IntMat>> frontier;
  frontier.emplace_back(Word{}, IntMat::identity(d));
  unsigned long examined = 0;
  bool all_finite_order = true;
  Word least_nontrivial_word;
  IntMat least_nontrivial = IntMat::identity(d);
  bool have_nontrivial = false;

  for (unsigned len = 1; len <= max_len && !frontier.empty(); ++len) {
    std::deque<std::pair<Word, IntMat>> next;
    for (const auto& [word, mat] : frontier) {
      for (const Letter& a : alpha) {
        if (!word.empty() && word.back() == -a.code) continue;  // free reduction
        Word w = word;
        w.push_back(a.code);
        IntMat m = mat * a.matrix;
        if (!seen.insert(flatten(m)).second) continue;
        ++examined;
        if (!have_nontrivial) {
          least_nontrivial_word = w;
          least_nontrivial = m;
          have_nontrivial = true;
        }
        if (!is_finite_order(m)) {
          all_finite_order = false;
          if (cyclo::has_root_of_unity_root(RatPoly::from(exact::charpoly(mixing::dual(m))), d))
            return Refuted{w, m, RefutationReason::kRootOfUnityEigenvalue};
        }
        next.emplace_back(std::move(w), std::move(m));
      }
    }
    frontier = std::move(next);
  }
  if (frontier.empty() && all_finite_order) {
    // The closure is complete and torsion, hence the group is finite.
    if (have_nontrivial)
      return Refuted{least_nontrivial_word, least_nontrivial, RefutationReason::kFiniteOrderOnly};
    return Refuted{Word{}, IntMat::identity(d), RefutationReason::kFiniteOrderOnly};
  }
  return CleanUpTo{max_len, examined};
}

OrbitScanReport dual_orbit_scan(const EpiSet& generators, const IntVec& chi, std::size_t cap) {
  if (chi.size() != generators.dim())
    throw std::invalid_argument("dual_orbit_scan: character dimension mismatch");
  if (exact::is_zero(chi)) throw std::invalid_argument("dual_orbit_scan: zero character");
  std::vector<IntMat> actions;
  for (const IntMat& g : generators.maps) {
    actions.push_back(mixing::dual(g));
    Int det = g.det();
    if (det == 1 || det == -1) actions.push_back(mixing::dual(unimodular_inverse(g)));
  }
  std::set<IntVec> orbit;
  std::deque<IntVec> frontier{chi};
  orbit.insert(chi);
  while (!frontier.empty()) {
    IntVec v = std::move(frontier.front());
    frontier.pop_front();
    for (const IntMat& a : actions) {
      IntVec w = a.apply(v);
      if (orbit.contains(w)) continue;
      if (orbit.size() + 1 > cap) return ExceedsCap{};
      orbit.insert(w);
      frontier.push_back(std::move(w));
    }
  }
  return FiniteOrbit{{orbit.begin(), orbit.end()}};
}

EpiSet conjugate_family(const IntMat& gamma, const IntMat& delta, unsigned count) {
  if (count == 0) throw std::invalid_argument("conjugate_family: count must be >= 1");
  if (gamma.det() == 0) throw std::invalid_argument("conjugate_family: gamma must be nondegenerate");
  IntMat delta_inv = unimodular_inverse(delta);  // rejects non-unimodular delta
  exact::IntPoly expected = exact::charpoly(gamma);
  std::vector<IntMat> maps;
  IntMat left = delta_inv, right = delta;
  for (unsigned i = 1; i <= count; ++i) {
    IntMat t = left * gamma * right;
    if (!(exact::charpoly(t) == expected))
      throw std::logic_error("conjugate_family: conjugate changed the characteristic polynomial");
    maps.push_back(std::move(t));
    if (i < count) {
      left = delta_inv * left;
      right = right * delta;
    }
  }
  return EpiSet(std::move(maps));
}

}  // namespace mixshape::groups
