#include "mixshape/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <random>
#include <set>

namespace mixshape::oracle {

using exact::Int;
using exact::IntMat;
using exact::IntVec;
using exact::Rat;
using mixing::EpiSet;

BoxSet::BoxSet(std::vector<std::pair<Rat, Rat>> iv) : intervals(std::move(iv)) {
  for (const auto& [a, b] : intervals)
    if (a < 0 || !(a < b) || b > 1)
      throw std::invalid_argument("BoxSet: intervals must satisfy 0 <= a < b <= 1");
}

Rat BoxSet::measure() const {
  Rat m = 1;
  for (const auto& [a, b] : intervals) m *= (b - a);
  return m;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Balanced coordinate values 0, 1, -1, 2, -2, ..., h, -h.
long balanced_value(std::size_t idx) {
  if (idx == 0) return 0;
  return idx % 2 == 1 ? static_cast<long>((idx + 1) / 2) : -static_cast<long>(idx / 2);
}

// Direct enumeration of integer tuples against per-step coefficient blocks.
// blocks[n][k] multiplies the k-th component at step n+1.  Returns the first
// primitive tuple (by increasing max-norm, then a fixed balanced odometer
// order, sign-canonicalized) whose exact zero count reaches min_hits.
std::optional<std::vector<IntVec>> enumerate_tuples(
    const std::vector<std::vector<IntMat>>& blocks, std::size_t s, std::size_t d,
    long height, unsigned long min_hits) {
  const std::size_t m = s * d;
  const std::size_t steps = blocks.size();

  // One mod-2^64 linear functional per step; a vanishing relation value
  // forces a vanishing projection, so the filter has no false negatives.
  std::uint64_t seed = 0x5eed5eed5eed5eedULL;
  std::vector<std::uint64_t> u(d);
  for (std::size_t i = 0; i < d; ++i) u[i] = splitmix64(seed) | 1;
  // w[c][n]: contribution of coordinate c to the projection at step n.
  std::vector<std::vector<std::uint64_t>> w(m, std::vector<std::uint64_t>(steps, 0));
  for (std::size_t n = 0; n < steps; ++n)
    for (std::size_t k = 0; k < s; ++k)
      for (std::size_t j = 0; j < d; ++j) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < d; ++i) {
          const Int& e = blocks[n][k].at(i, j);
          std::uint64_t ev = static_cast<std::uint64_t>(mpz_get_ui(e.get_mpz_t()));
          if (e < 0) ev = ~ev + 1;
          acc += u[i] * ev;
        }
        w[k * d + j][n] = acc;
      }

  auto exact_hits = [&](const std::vector<long>& x) {
    unsigned long hits = 0;
    for (std::size_t n = 0; n < steps; ++n) {
      bool zero = true;
      for (std::size_t i = 0; i < d && zero; ++i) {
        Int sum = 0;
        for (std::size_t k = 0; k < s; ++k)
          for (std::size_t j = 0; j < d; ++j)
            if (x[k * d + j] != 0) sum += blocks[n][k].at(i, j) * x[k * d + j];
        zero = sum == 0;
      }
      if (zero) ++hits;
    }
    return hits;
  };

  auto as_witness = [&](std::vector<long> x) {
    for (long& v : x) {
      if (v == 0) continue;
      if (v < 0)
        for (long& y : x) y = -y;
      break;
    }
    std::vector<IntVec> tuple(s, IntVec(d));
    for (std::size_t k = 0; k < s; ++k)
      for (std::size_t j = 0; j < d; ++j) tuple[k][j] = x[k * d + j];
    return tuple;
  };

  for (long h = 1; h <= height; ++h) {
    const std::size_t top = 2 * static_cast<std::size_t>(h);
    std::vector<std::size_t> idx(m, 0);
    std::vector<long> x(m, 0);
    std::vector<std::uint64_t> z(steps, 0);
    std::size_t zeros = steps;
    std::size_t at_boundary = 0;
    std::vector<std::vector<long>> shell_candidates;

    auto bump = [&](std::size_t c, long delta) {
      bool was_boundary = std::labs(x[c]) == h;
      x[c] += delta;
      if ((std::labs(x[c]) == h) != was_boundary) at_boundary += was_boundary ? -1 : 1;
      std::uint64_t ud = static_cast<std::uint64_t>(delta);
      const std::uint64_t* wc = w[c].data();
      for (std::size_t n = 0; n < steps; ++n) {
        std::uint64_t before = z[n];
        z[n] = before + ud * wc[n];
        if (before == 0) --zeros;
        if (z[n] == 0) ++zeros;
      }
    };

    while (true) {
      // Advance the odometer (coordinate 0 fastest).
      std::size_t c = 0;
      while (c < m && idx[c] == top) {
        bump(c, balanced_value(0) - balanced_value(top));
        idx[c] = 0;
        ++c;
      }
      if (c == m) break;
      bump(c, balanced_value(idx[c] + 1) - balanced_value(idx[c]));
      ++idx[c];

      if (at_boundary == 0 || zeros < min_hits) continue;
      Int g = 0;
      for (long v : x) mpz_gcd_ui(g.get_mpz_t(), g.get_mpz_t(), std::labs(v));
      if (g != 1) continue;  // scaled copies live in earlier shells
      std::vector<long> cand = x;
      for (long& v : cand) {
        if (v == 0) continue;
        if (v < 0)
          for (long& y : cand) y = -y;
        break;
      }
      shell_candidates.push_back(std::move(cand));
    }
    // The shell's projection survivors, smallest first; confirm exactly and
    // return the least confirmed tuple.
    std::sort(shell_candidates.begin(), shell_candidates.end());
    shell_candidates.erase(std::unique(shell_candidates.begin(), shell_candidates.end()),
                           shell_candidates.end());
    for (const std::vector<long>& cand : shell_candidates)
      if (exact_hits(cand) >= min_hits) return as_witness(cand);
  }
  return std::nullopt;
}

std::vector<std::vector<IntMat>> power_blocks(const EpiSet& f, unsigned long steps) {
  std::vector<IntMat> duals;
  for (const IntMat& t : f.maps) duals.push_back(mixing::dual(t));
  std::vector<std::vector<IntMat>> blocks;
  std::vector<IntMat> current = duals;
  for (unsigned long n = 1; n <= steps; ++n) {
    blocks.push_back(current);
    if (n < steps)
      for (std::size_t k = 0; k < current.size(); ++k) current[k] = current[k] * duals[k];
  }
  return blocks;
}

}  // namespace

std::optional<std::vector<IntVec>> brute_force_relation_search(const EpiSet& f, long height,
                                                               unsigned long horizon,
                                                               unsigned long min_hits) {
  if (height < 1 || horizon < 1 || min_hits < 1)
    throw std::invalid_argument("brute_force_relation_search: bounds must be >= 1");
  return enumerate_tuples(power_blocks(f, horizon), f.size(), f.dim(), height, min_hits);
}

double mc_correlation(const EpiSet& f, unsigned long n, const std::vector<BoxSet>& boxes,
                      std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("mc_correlation: samples must be >= 1");
  if (boxes.size() != f.size())
    throw std::invalid_argument("mc_correlation: one box per map required");
  std::size_t d = f.dim();
  for (const BoxSet& b : boxes)
    if (b.intervals.size() != d) throw std::invalid_argument("mc_correlation: box dimension mismatch");

  std::vector<IntMat> powers;
  for (const IntMat& t : f.maps) powers.push_back(t.pow(n));

  const Int den = Int(1) << 64;
  std::mt19937_64 rng(seed);
  std::size_t hits = 0;
  IntVec num(d);
  for (std::size_t sample = 0; sample < samples; ++sample) {
    for (std::size_t i = 0; i < d; ++i) num[i] = Int(static_cast<unsigned long>(rng()));
    bool inside_all = true;
    for (std::size_t k = 0; k < f.size() && inside_all; ++k) {
      for (std::size_t i = 0; i < d; ++i) {
        // y_i = (P num)_i / den reduced mod 1; interval test by cross
        // multiplication, exact throughout.
        Int y = 0;
        for (std::size_t j = 0; j < d; ++j) y += powers[k].at(i, j) * num[j];
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), y.get_mpz_t(), den.get_mpz_t());
        const Rat& a = boxes[k].intervals[i].first;
        const Rat& b = boxes[k].intervals[i].second;
        if (a.get_num() * den > r * a.get_den() || r * b.get_den() >= b.get_num() * den) {
          inside_all = false;
          break;
        }
      }
    }
    if (inside_all) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

bool verify_witness(const EpiSet& f, unsigned long l, const std::vector<IntVec>& witness,
                    unsigned long depth) {
  if (l < 1 || depth < 1) throw std::invalid_argument("verify_witness: bounds must be >= 1");
  if (witness.size() != f.size())
    throw std::invalid_argument("verify_witness: one character per map required");
  std::size_t d = f.dim();
  bool nonzero = false;
  for (const IntVec& x : witness) {
    if (x.size() != d) throw std::invalid_argument("verify_witness: character dimension mismatch");
    nonzero = nonzero || !exact::is_zero(x);
  }
  if (!nonzero) throw std::invalid_argument("verify_witness: witness must be nonzero");

  std::vector<IntMat> step;
  for (const IntMat& t : f.maps) step.push_back(mixing::dual(t).pow(l));
  std::vector<IntVec> w = witness;
  for (unsigned long n = 1; n <= depth; ++n) {
    IntVec sum(d, Int(0));
    for (std::size_t k = 0; k < f.size(); ++k) {
      w[k] = step[k].apply(w[k]);
      for (std::size_t i = 0; i < d; ++i) sum[i] += w[k][i];
    }
    if (!exact::is_zero(sum)) return false;
  }
  return true;
}

namespace {

struct CandidateWord {
  groups::Word word;
  IntMat matrix;

  CandidateWord(groups::Word w, IntMat m) : word(std::move(w)), matrix(std::move(m)) {}
};

std::vector<CandidateWord> enumerate_words(const EpiSet& gens, unsigned max_len,
                                           bool with_inverses) {
  std::vector<std::pair<int, IntMat>> letters;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    letters.emplace_back(static_cast<int>(i) + 1, gens.maps[i]);
    if (with_inverses)
      letters.emplace_back(-static_cast<int>(i) - 1, groups::unimodular_inverse(gens.maps[i]));
  }
  std::vector<CandidateWord> words;
  std::vector<CandidateWord> frontier;
  frontier.emplace_back(groups::Word{}, IntMat::identity(gens.dim()));
  for (unsigned len = 1; len <= max_len; ++len) {
    std::vector<CandidateWord> next;
    for (const CandidateWord& base : frontier)
      for (const auto& [code, mat] : letters) {
        if (!base.word.empty() && base.word.back() == -code) continue;
        groups::Word word = base.word;
        word.push_back(code);
        next.emplace_back(std::move(word), base.matrix * mat);
      }
    for (const CandidateWord& cw : next) words.push_back(cw);
    frontier = std::move(next);
  }
  return words;
}

}  // namespace

std::optional<HigherOrderWitness> higher_order_refute(const EpiSet& generators, unsigned order,
                                                      unsigned word_len, long height,
                                                      unsigned long horizon, ProductForm form) {
  if (order < 2) throw std::invalid_argument("higher_order_refute: order must be >= 2");
  if (word_len < 1 || height < 1)
    throw std::invalid_argument("higher_order_refute: bounds must be >= 1");
  std::size_t d = generators.dim();
  bool group_case = form == ProductForm::kGroupPowerQuotients;
  if (group_case)
    for (const IntMat& g : generators.maps) {
      Int det = g.det();
      if (det != 1 && det != -1)
        throw std::invalid_argument(
            "higher_order_refute: the group form needs unimodular generators");
    }
  std::vector<CandidateWord> words = enumerate_words(generators, word_len, group_case);

  // Recurrence bound for the nested-product blocks.
  unsigned long bound = 0;
  if (group_case)
    bound = order * d;
  else {
    unsigned long p = 1;
    for (unsigned i = 0; i < order; ++i) {
      p *= d;
      bound += p;
    }
  }
  unsigned long steps = std::max(horizon, bound);

  std::vector<std::size_t> pick(order, 0);
  while (true) {
    bool valid = true;
    if (group_case) {
      // P_i(n) = W_i^n with pairwise distinct W's.
      for (std::size_t a = 0; a < order && valid; ++a)
        for (std::size_t b = a + 1; b < order && valid; ++b)
          if (words[pick[a]].matrix == words[pick[b]].matrix) valid = false;
    } else {
      // P_i(n) = U_i^n ... U_1^n; the i >= 2 factors must escape to infinity.
      for (std::size_t i = 1; i < order && valid; ++i)
        if (groups::is_finite_order(words[pick[i]].matrix)) valid = false;
    }
    if (valid) {
      // Nested-product coefficient blocks per step, generated lazily:
      // group form  D_i(n) = dual(W_i)^n,
      // semigroup   D_i(n) = dual(U_1)^n ... dual(U_i)^n.
      std::vector<IntMat> duals;
      for (std::size_t i = 0; i < order; ++i) duals.push_back(mixing::dual(words[pick[i]].matrix));
      std::vector<IntMat> dual_pow(order, IntMat::identity(d));
      auto next_blocks = [&]() {
        std::vector<IntMat> row;
        for (std::size_t i = 0; i < order; ++i) dual_pow[i] = dual_pow[i] * duals[i];
        if (group_case) {
          row = dual_pow;
        } else {
          IntMat acc = dual_pow[0];
          row.push_back(acc);
          for (std::size_t i = 1; i < order; ++i) {
            acc = acc * dual_pow[i];
            row.push_back(acc);
          }
        }
        return row;
      };
      // Solve the stabilized linear system for this word tuple, intersecting
      // one step at a time and bailing out once the space dies.
      std::size_t m = order * d;
      exact::RatMat basis = exact::RatMat::identity(m);
      std::size_t dim_now = m;
      std::vector<std::vector<IntMat>> used_blocks;
      for (unsigned long n = 1; n <= steps && dim_now > 0; ++n) {
        used_blocks.push_back(next_blocks());
        std::vector<exact::RatVec> rows(d, exact::RatVec(m, exact::Rat(0)));
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t k = 0; k < order; ++k)
            for (std::size_t j = 0; j < d; ++j)
              rows[i][k * d + j] = used_blocks.back()[k].at(i, j);
        auto kern = exact::rational_kernel(exact::RatMat::from_rows(rows) * basis);
        if (kern.empty()) {
          dim_now = 0;
          break;
        }
        exact::RatMat next(m, kern.size());
        for (std::size_t c2 = 0; c2 < kern.size(); ++c2) {
          exact::RatVec combo(kern[c2].begin(), kern[c2].end());
          exact::RatVec col = basis.apply(combo);
          for (std::size_t r = 0; r < m; ++r) next.at(r, c2) = col[r];
        }
        basis = std::move(next);
        dim_now = kern.size();
      }
      std::optional<std::vector<IntVec>> tuple;
      if (dim_now > 0) {
        // Canonical kernel basis from the full stacked system; pick the first
        // basis tuple within the height bound.
        std::vector<exact::RatVec> stacked;
        for (const auto& row_blocks : used_blocks) {
          for (std::size_t i = 0; i < d; ++i) {
            exact::RatVec row(m, exact::Rat(0));
            for (std::size_t k = 0; k < order; ++k)
              for (std::size_t j = 0; j < d; ++j) row[k * d + j] = row_blocks[k].at(i, j);
            stacked.push_back(std::move(row));
          }
        }
        for (const IntVec& flat : exact::rational_kernel(exact::RatMat::from_rows(stacked))) {
          bool small = true;
          for (const Int& e : flat) {
            Int a = e < 0 ? Int(-e) : e;
            if (a > height) small = false;
          }
          if (!small) continue;
          std::vector<IntVec> split(order, IntVec(d));
          for (std::size_t k = 0; k < order; ++k)
            for (std::size_t j = 0; j < d; ++j) split[k][j] = flat[k * d + j];
          tuple = std::move(split);
          break;
        }
      }
      if (tuple) {
        // Persistence beyond the recurrence bound, replayed independently.
        std::vector<std::vector<IntMat>> extended;
        std::vector<IntMat> replay_pow(order, IntMat::identity(d));
        for (unsigned long n = 1; n <= 2 * steps; ++n) {
          for (std::size_t i = 0; i < order; ++i) replay_pow[i] = replay_pow[i] * duals[i];
          if (group_case) {
            extended.push_back(replay_pow);
          } else {
            std::vector<IntMat> row;
            IntMat acc = replay_pow[0];
            row.push_back(acc);
            for (std::size_t i = 1; i < order; ++i) {
              acc = acc * replay_pow[i];
              row.push_back(acc);
            }
            extended.push_back(std::move(row));
          }
        }
        bool persistent = true;
        for (unsigned long n = 0; n < 2 * steps && persistent; ++n) {
          for (std::size_t i = 0; i < d && persistent; ++i) {
            Int sum = 0;
            for (std::size_t k = 0; k < order; ++k)
              for (std::size_t j = 0; j < d; ++j)
                sum += extended[n][k].at(i, j) * (*tuple)[k][j];
            persistent = sum == 0;
          }
        }
        // The escape-to-infinity factors must take pairwise distinct values
        // over the verified range (discreteness then forces divergence).
        if (persistent) {
          bool escaping = true;
          auto flat = [&](const IntMat& q) {
            IntVec v;
            for (std::size_t r = 0; r < d; ++r)
              for (std::size_t c2 = 0; c2 < d; ++c2) v.push_back(q.at(r, c2));
            return v;
          };
          if (group_case) {
            for (std::size_t a = 0; a < order && escaping; ++a)
              for (std::size_t b = a + 1; b < order && escaping; ++b) {
                IntMat qa_inv = groups::unimodular_inverse(words[pick[a]].matrix);
                const IntMat& qb = words[pick[b]].matrix;
                std::set<IntVec> seen;
                IntMat q = IntMat::identity(d);
                for (unsigned long n = 0; n <= 2 * steps && escaping; ++n) {
                  if (!seen.insert(flat(q)).second) escaping = false;
                  q = qb * q * qa_inv;
                }
              }
          } else {
            // Products U_j^n ... U_i^n, i >= 2, must take distinct values
            // over the verified range.
            for (std::size_t i = 1; i < order && escaping; ++i)
              for (std::size_t j = i; j < order && escaping; ++j) {
                std::set<IntVec> seen;
                std::vector<IntMat> pw(j - i + 1, IntMat::identity(d));
                for (unsigned long n = 0; n <= 2 * steps && escaping; ++n) {
                  IntMat q = IntMat::identity(d);
                  for (std::size_t k = j + 1; k-- > i;) q = q * pw[k - i];
                  if (!seen.insert(flat(q)).second) escaping = false;
                  for (std::size_t k = i; k <= j; ++k)
                    pw[k - i] = pw[k - i] * words[pick[k]].matrix;
                }
              }
          }
          if (escaping) {
            HigherOrderWitness witness;
            for (std::size_t i = 0; i < order; ++i) witness.words.push_back(words[pick[i]].word);
            witness.tuple = *tuple;
            return witness;
          }
        }
      }
    }
    // Advance the word odometer.
    std::size_t c = 0;
    while (c < order && ++pick[c] == words.size()) {
      pick[c] = 0;
      ++c;
    }
    if (c == order) break;
  }
  return std::nullopt;
}

limits::CRat correlation_integral(const EpiSet& f, unsigned long n,
                                  const std::vector<limits::TrigPoly>& fs) {
  if (fs.size() != f.size())
    throw std::invalid_argument("correlation_integral: one function per map required");
  std::size_t s = f.size(), d = f.dim();
  std::vector<IntMat> powers;
  for (const IntMat& t : f.maps) powers.push_back(mixing::dual(t).pow(n));

  limits::CRat sum;
  std::vector<std::map<IntVec, limits::CRat>::const_iterator> its(s), begins(s), ends(s);
  for (std::size_t k = 0; k < s; ++k) {
    begins[k] = fs[k].terms().begin();
    ends[k] = fs[k].terms().end();
    if (begins[k] == ends[k]) return sum;
    its[k] = begins[k];
  }
  while (true) {
    IntVec total(d, Int(0));
    for (std::size_t k = 0; k < s; ++k) {
      IntVec y = powers[k].apply(its[k]->first);
      for (std::size_t i = 0; i < d; ++i) total[i] += y[i];
    }
    if (exact::is_zero(total)) {
      limits::CRat prod = its[0]->second;
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

}  // namespace mixshape::oracle
