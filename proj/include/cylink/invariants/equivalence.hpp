#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cylink/algebra/io.hpp"
#include "cylink/invariants/invariants.hpp"
#include "cylink/links/screening.hpp"
#include "cylink/parallel.hpp"
#include "cylink/random.hpp"

namespace cylink {

using Permutation = std::array<std::size_t, num_vars>;

struct CampaignOptions {
  std::size_t n_permutations = 10;
  std::size_t n_polys_per_perm = 50;
  long coeff_min = 1;   ///< inclusive
  long coeff_max = 99;  ///< inclusive
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint32_t prime = 32003;  ///< 0 computes over the rationals
  ScreeningOptions screening;  ///< coefficient pool fields are overwritten from above
  GroebnerBudget budget;
};

struct EquivalenceSample {
  std::size_t perm_index = 0;
  std::size_t poly_index = 0;
  Weights weights{};
  std::vector<long> coefficients;
  int resamples = 0;
  std::string status = "ok";  ///< ok | timeout | no_smooth_member
  long h30 = -1, h21 = -1;
  int nu = -1;
  long gb_length = -1;
};

struct EquivalenceReport {
  WeightSystem ws;
  std::vector<Permutation> permutations;
  std::vector<EquivalenceSample> samples;
  bool invariants_agree = true;
  long h30 = -1, h21 = -1;
  int nu = -1;
  std::vector<bool> gb_length_constant;  ///< per permutation
  std::vector<long> gb_lengths;          ///< first length seen per permutation
  bool gb_length_varies_across = false;
  std::size_t total_resamples = 0;
  std::size_t failed_cells = 0;
  std::vector<std::size_t> counterexamples;  ///< sample indices disagreeing with the first ok sample
};

/// Identity first, then distinct random permutations.
inline std::vector<Permutation> sample_permutations(std::size_t n, std::uint64_t seed) {
  if (n > 120) throw domain_error("only 120 permutations of 5 slots exist");
  std::vector<Permutation> out;
  std::set<Permutation> seen;
  Permutation p;
  std::iota(p.begin(), p.end(), std::size_t(0));
  std::mt19937_64 rng(seed);
  while (out.size() < n) {
    if (seen.insert(p).second) out.push_back(p);
    std::shuffle(p.begin(), p.end(), rng);
  }
  return out;
}

/// Samples smooth polynomials for permuted copies of ws and compares
/// (h30, h21, nu) across all of them and gb_length within each permutation.
inline EquivalenceReport weak_r_equivalence_campaign(const WeightSystem& ws, const CampaignOptions& opt) {
  EquivalenceReport rep{ws};
  rep.permutations = sample_permutations(opt.n_permutations, splitmix64(opt.seed));
  const std::size_t n = opt.n_permutations * opt.n_polys_per_perm;
  rep.samples.resize(n);
  ScreeningOptions so = opt.screening;
  so.coeff_min = opt.coeff_min;
  so.coeff_max = opt.coeff_max;
  so.try_all_ones = false;
  if (so.budget.unlimited()) so.budget = opt.budget;
  InvariantOptions io;
  io.budget = opt.budget;

  parallel_for(n, opt.workers, [&](std::size_t k) {
    EquivalenceSample& s = rep.samples[k];
    s.perm_index = k / opt.n_polys_per_perm;
    s.poly_index = k % opt.n_polys_per_perm;
    WeightSystem pw = ws.permuted(rep.permutations[s.perm_index]);
    s.weights = pw.weights();
    try {
      auto c = sample_smooth_polynomial(pw, splitmix64(opt.seed ^ splitmix64(k + 1)), so);
      s.coefficients = c.coefficients;
      s.resamples = c.screening.resample_count;
      auto inv = opt.prime ? compute_link_invariants(c.polynomial(PrimeField(opt.prime)), pw, io)
                           : compute_link_invariants(c.polynomial(RationalField()), pw, io);
      s.h30 = inv.hodge.h30;
      s.h21 = inv.hodge.h21;
      s.nu = inv.cn.nu;
      s.gb_length = long(inv.gb_length);
    } catch (const budget_exceeded&) {
      s.status = "timeout";
    } catch (const no_smooth_member&) {
      s.status = "no_smooth_member";
    }
  });

  rep.gb_length_constant.assign(opt.n_permutations, true);
  rep.gb_lengths.assign(opt.n_permutations, -1);
  bool have_ref = false;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = rep.samples[k];
    rep.total_resamples += std::size_t(s.resamples);
    if (s.status != "ok") {
      ++rep.failed_cells;
      continue;
    }
    if (!have_ref) {
      rep.h30 = s.h30, rep.h21 = s.h21, rep.nu = s.nu;
      have_ref = true;
    } else if (s.h30 != rep.h30 || s.h21 != rep.h21 || s.nu != rep.nu) {
      rep.invariants_agree = false;
      rep.counterexamples.push_back(k);
    }
    long& g = rep.gb_lengths[s.perm_index];
    if (g < 0) g = s.gb_length;
    else if (g != s.gb_length) rep.gb_length_constant[s.perm_index] = false;
  }
  for (long g : rep.gb_lengths)
    if (g >= 0 && rep.gb_lengths.front() >= 0 && g != rep.gb_lengths.front()) rep.gb_length_varies_across = true;
  return rep;
}

inline json to_json(const EquivalenceReport& r) {
  json j;
  j["weights"] = r.ws.weights();
  j["invariants_agree"] = r.invariants_agree;
  j["h30"] = r.h30;
  j["h21"] = r.h21;
  j["nu"] = r.nu;
  j["gb_length_varies_across_permutations"] = r.gb_length_varies_across;
  j["total_resamples"] = r.total_resamples;
  j["failed_cells"] = r.failed_cells;
  j["counterexamples"] = r.counterexamples;
  json perms = json::array();
  for (std::size_t p = 0; p < r.permutations.size(); ++p) {
    Weights w = r.ws.permuted(r.permutations[p]).weights();
    perms.push_back({{"weights", w}, {"gb_length", r.gb_lengths[p]}, {"gb_length_constant", bool(r.gb_length_constant[p])}});
  }
  j["permutations"] = std::move(perms);
  json samples = json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"perm", s.perm_index},
                       {"poly", s.poly_index},
                       {"weights", s.weights},
                       {"coefficients", s.coefficients},
                       {"resamples", s.resamples},
                       {"status", s.status},
                       {"h30", s.h30},
                       {"h21", s.h21},
                       {"nu", s.nu},
                       {"gb_length", s.gb_length}});
  j["samples"] = std::move(samples);
  return j;
}

}  // namespace cylink
