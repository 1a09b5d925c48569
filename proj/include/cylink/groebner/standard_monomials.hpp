#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "cylink/groebner/buchberger.hpp"

namespace cylink {

/// Monomials outside the leading-term ideal, with counts per weighted degree.
struct StandardMonomialSet {
  std::vector<ExponentVector> monomials;
  std::map<long, std::size_t> graded_counts;

  std::size_t size() const { return monomials.size(); }

  std::size_t count_at(long ell) const {
    auto it = graded_counts.find(ell);
    return it == graded_counts.end() ? 0 : it->second;
  }
};

/// True iff every variable has a pure power among the leading terms.
inline bool is_zero_dimensional(const std::vector<ExponentVector>& lts) {
  unsigned seen = 0;
  for (const auto& m : lts)
    if (std::popcount(m.support()) == 1) seen |= m.support();
  return seen == (1u << num_vars) - 1;
}

template <class Field>
bool is_zero_dimensional(const GroebnerBasis<Field>& G) {
  return is_zero_dimensional(G.leading_terms());
}

/// Dimension of the quotient by the leading-term ideal: the largest set of
/// variables that contains the support of no leading term. Returns -1 for
/// the unit ideal.
inline int krull_dimension(const std::vector<ExponentVector>& lts) {
  for (const auto& m : lts)
    if (m.is_one()) return -1;
  int best = 0;
  for (unsigned s = 0; s < (1u << num_vars); ++s) {
    int size = std::popcount(s);
    if (size <= best) continue;
    bool independent = true;
    for (const auto& m : lts)
      if ((m.support() & ~s) == 0) {
        independent = false;
        break;
      }
    if (independent) best = size;
  }
  return best;
}

template <class Field>
int krull_dimension(const GroebnerBasis<Field>& G) {
  return krull_dimension(G.leading_terms());
}

/// Enumerates the standard monomials of a zero-dimensional leading-term ideal.
/// Monomials come out in lexicographic order of exponent vectors.
inline StandardMonomialSet standard_monomials(const std::vector<ExponentVector>& lts, const WeightSystem& w) {
  if (!is_zero_dimensional(lts)) throw domain_error("standard monomials of a positive-dimensional ideal are infinite");
  std::array<long, num_vars> bound{};
  bound.fill(-1);
  // Leading terms grouped by their last variable so each is tested once, at the
  // depth where its exponent vector becomes fully assigned.
  std::array<std::vector<ExponentVector>, num_vars> by_last;
  for (const auto& m : lts) {
    if (m.is_one()) return {};
    unsigned s = m.support();
    std::size_t last = std::size_t(std::bit_width(s) - 1);
    by_last[last].push_back(m);
    if (std::popcount(s) == 1) {
      long e = m[last];
      bound[last] = bound[last] < 0 ? e : std::min(bound[last], e);
    }
  }

  StandardMonomialSet out;
  ExponentVector cur;
  auto divisible = [&](std::size_t k) {
    for (const auto& m : by_last[k])
      if (m.divides(cur)) return true;
    return false;
  };
  auto walk = [&](auto&& self, std::size_t k, long deg) -> void {
    for (long e = 0; e < bound[k]; ++e) {
      cur.set(k, e);
      if (e > 0 && divisible(k)) break;  // larger e stays divisible
      long dd = deg + e * w[k];
      if (k + 1 == num_vars) {
        out.monomials.push_back(cur);
        ++out.graded_counts[dd];
      } else {
        self(self, k + 1, dd);
      }
    }
    cur.set(k, 0);
  };
  walk(walk, 0, 0);
  return out;
}

template <class Field>
StandardMonomialSet standard_monomials(const GroebnerBasis<Field>& G, const WeightSystem& w) {
  return standard_monomials(G.leading_terms(), w);
}

/// Number of standard monomials of weighted degree exactly ell.
template <class Field>
std::size_t graded_dimension(const GroebnerBasis<Field>& G, const WeightSystem& w, long ell) {
  if (ell < 0) {
    if (!is_zero_dimensional(G)) throw domain_error("graded dimension of a positive-dimensional ideal");
    return 0;
  }
  return standard_monomials(G, w).count_at(ell);
}

}  // namespace cylink
