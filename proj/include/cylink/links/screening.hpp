#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cylink/algebra/io.hpp"
#include "cylink/groebner/standard_monomials.hpp"
#include "cylink/links/weight_system.hpp"

namespace cylink {

/// Retry cap exhausted without finding a member with an isolated singularity.
class no_smooth_member : public error {
 public:
  using error::error;
};

/// Krull dimension of <f, df/dz1, ..., df/dz5> with coefficients reduced mod p.
/// The zero set always contains the origin, so the result is >= 0.
template <class Field>
int singular_locus_dimension(const Polynomial<Field>& f, const WeightSystem& ws, std::uint32_t p,
                             const GroebnerBudget& budget = {}) {
  if (f.is_zero() || !is_weighted_homogeneous(f, ws, ws.degree()))
    throw domain_error("singular locus needs a weighted homogeneous polynomial of degree " + std::to_string(ws.degree()));
  PrimeField F(p);
  std::vector<Polynomial<Field>> gens{f};
  for (auto& g : jacobian(f)) gens.push_back(std::move(g));
  std::vector<Polynomial<PrimeField>> reduced;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    if (gens[k].is_zero()) continue;
    auto r = reduce_mod(gens[k], F);
    if (r.is_zero())
      throw degenerate_reduction(std::string(k == 0 ? "f" : "df/dz" + std::to_string(k)) + " vanishes mod " + std::to_string(p));
    reduced.push_back(std::move(r));
  }
  BuchbergerOptions opt;
  opt.budget = budget;
  opt.selection_weights = ws.weights();
  auto G = buchberger(Ideal<PrimeField>(std::move(reduced)), MonomialOrder{}, opt);
  return krull_dimension(G);
}

struct ScreeningOptions {
  std::vector<std::uint32_t> primes{101, 251, 1993, 1997};
  long coeff_min = 1;
  long coeff_max = 5;
  int retry_cap = 25;
  /// Start from the all-ones polynomial before drawing random coefficients.
  bool try_all_ones = true;
  GroebnerBudget budget;
};

struct ScreeningRecord {
  std::uint32_t prime_used = 0;
  int dimension = -1;
  std::vector<std::uint32_t> primes_tried;
  int resample_count = 0;
};

struct CandidateHypersurface {
  WeightSystem ws;
  std::vector<ExponentVector> basis;
  std::vector<long> coefficients;
  ScreeningRecord screening;

  template <class Field>
  Polynomial<Field> polynomial(const Field& field = Field(), const MonomialOrder& order = {}) const {
    return build_polynomial(ws, coefficients, field, order);
  }
};

namespace detail {

// One pass over the screening primes; true once some prime gives dimension 0.
inline bool screen_once(const WeightSystem& ws, const std::vector<long>& coeffs, const ScreeningOptions& opt,
                        ScreeningRecord& rec) {
  auto f = build_polynomial(ws, coeffs, RationalField());
  rec.primes_tried.clear();
  for (auto p : opt.primes) {
    rec.primes_tried.push_back(p);
    int dim;
    try {
      dim = singular_locus_dimension(f, ws, p, opt.budget);
    } catch (const degenerate_reduction&) {
      continue;
    }
    rec.dimension = dim;
    if (dim == 0) {
      rec.prime_used = p;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// All-ones first, then uniform draws from [coeff_min, coeff_max]; each
/// candidate is screened at the primes in order and accepted at the first
/// prime giving an isolated singularity.
inline CandidateHypersurface sample_smooth_polynomial(const WeightSystem& ws, std::uint64_t seed,
                                                      const ScreeningOptions& opt = {}) {
  CandidateHypersurface c{ws, monomial_basis(ws), {}, {}};
  if (c.basis.empty()) throw domain_error("empty monomial basis for " + ws.to_string());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> draw(opt.coeff_min, opt.coeff_max);
  for (int attempt = 0; attempt <= opt.retry_cap; ++attempt) {
    if (attempt == 0 && opt.try_all_ones) {
      c.coefficients.assign(c.basis.size(), 1);
    } else {
      c.coefficients.resize(c.basis.size());
      for (auto& a : c.coefficients) a = draw(rng);
    }
    c.screening.resample_count = attempt;
    if (detail::screen_once(ws, c.coefficients, opt, c.screening)) return c;
  }
  throw no_smooth_member("no member with an isolated singularity found for " + ws.to_string() + " after " +
                         std::to_string(opt.retry_cap) + " resamples");
}

inline json to_json(const ScreeningRecord& r) {
  return {{"prime_used", r.prime_used},
          {"dimension", r.dimension},
          {"primes_tried", r.primes_tried},
          {"resample_count", r.resample_count}};
}

inline json to_json(const CandidateHypersurface& c) {
  json j = to_json(c.polynomial(RationalField()), c.ws);
  j["screening"] = to_json(c.screening);
  return j;
}

}  // namespace cylink
