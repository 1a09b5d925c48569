#pragma once
// Fixtures and independent oracles shared by the test suites.

#include <unistd.h>

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cylink/cylink.hpp"

namespace cylink::testing {

inline std::string data_path(const std::string& name) { return std::string(CYLINK_TEST_DATA) + "/" + name; }

inline const Weights quintic{1, 1, 1, 1, 1};
inline const Weights example_a{22, 29, 49, 50, 75};
inline const Weights example_b{31, 35, 36, 42, 108};

/// Sparse polynomial from (coefficient, exponents) pairs.
template <class Field = PrimeField>
Polynomial<Field> poly(const std::vector<std::pair<long, ExponentVector>>& terms, const Field& F = Field(),
                       const MonomialOrder& order = {}) {
  std::vector<Term<Field>> ts;
  for (const auto& [c, m] : terms) ts.push_back({F.from_int(c), m});
  return Polynomial<Field>::from_terms(F, order, std::move(ts));
}

/// z1^8 z3 + z1^4 z2^3 z4 + z1 z2^7 + z1 z2 z3 z4 z5 + z2 z3^4 + z4^3 z5 + z5^3
inline std::vector<std::pair<long, ExponentVector>> example_a_terms() {
  return {{1, {8, 0, 1, 0, 0}}, {1, {4, 3, 0, 1, 0}}, {1, {1, 7, 0, 0, 0}}, {1, {1, 1, 1, 1, 1}},
          {1, {0, 1, 4, 0, 0}}, {1, {0, 0, 0, 3, 1}}, {1, {0, 0, 0, 0, 3}}};
}

/// z1^7 z2 + z1^2 z2^2 z3 z4^2 + z1 z2 z3^4 z4 + z1 z2 z3 z4 z5 + z2^6 z4 + z3^7 + z3^4 z5 + z3 z5^2 + z4^6
inline std::vector<std::pair<long, ExponentVector>> example_b_terms() {
  return {{1, {7, 1, 0, 0, 0}}, {1, {2, 2, 1, 2, 0}}, {1, {1, 1, 4, 1, 0}}, {1, {1, 1, 1, 1, 1}}, {1, {0, 6, 0, 1, 0}},
          {1, {0, 0, 7, 0, 0}}, {1, {0, 0, 4, 0, 1}}, {1, {0, 0, 1, 0, 2}}, {1, {0, 0, 0, 6, 0}}};
}

template <class Field = PrimeField>
Polynomial<Field> fermat_quintic(const Field& F = Field(), const MonomialOrder& order = {}) {
  std::vector<std::pair<long, ExponentVector>> t;
  for (std::size_t i = 0; i < num_vars; ++i) t.push_back({1, ExponentVector::unit(i, 5)});
  return poly(t, F, order);
}

/// Jacobian generators with zero partials dropped.
template <class Field>
std::vector<Polynomial<Field>> jacobian_generators(const Polynomial<Field>& f) {
  std::vector<Polynomial<Field>> out;
  for (auto& g : jacobian(f))
    if (!g.is_zero()) out.push_back(std::move(g));
  return out;
}

template <class Field>
GroebnerBasis<Field> jacobian_gb(const Polynomial<Field>& f, const Weights& w, const MonomialOrder& order = {}) {
  BuchbergerOptions opt;
  opt.selection_weights = w;
  return buchberger(Ideal<Field>(jacobian_generators(f)), order, opt);
}

/// Nonzero coefficients of prod_i (1 - t^(d - w_i)) / (1 - t^(w_i)), the Hilbert series of the
/// Milnor algebra of any quasi-smooth degree-d polynomial, by exact power-series arithmetic.
inline std::map<long, long> milnor_hilbert_series(const Weights& w) {
  long d = 0;
  for (long x : w) d += x;
  long top = 0;
  for (long x : w) top += d - 2 * x;
  const std::size_t n = std::size_t(top + 1);
  std::vector<long> s(n, 0);
  s[0] = 1;
  for (long x : w) {
    // times (1 - t^(d-x))
    for (std::size_t i = n; i-- > std::size_t(d - x);) s[i] -= s[i - std::size_t(d - x)];
    // divided by (1 - t^x)
    for (std::size_t i = std::size_t(x); i < n; ++i) s[i] += s[i - std::size_t(x)];
  }
  std::map<long, long> out;
  for (std::size_t i = 0; i < n; ++i)
    if (s[i] != 0) out[long(i)] = s[i];
  return out;
}

/// Brute-force Steenbrink classification of {0..3}^5 for the Fermat quintic.
struct QuinticOracle {
  long mu = 0, mu_plus = 0, mu_zero = 0, mu_minus = 0, h30 = 0, h21 = 0, nu = 0;
};

inline QuinticOracle quintic_oracle() {
  QuinticOracle o;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int e = 0; e < 4; ++e)
          for (int g = 0; g < 4; ++g) {
            int s = a + b + c + e + g;
            ++o.mu;
            if (s == 15) ++o.h30;
            if (s == 10) ++o.h21;
            // l = 1 + s/5
            if (s % 5 == 0) ++o.mu_zero;
            else if (((5 + s) / 5) % 2 == 0) ++o.mu_plus;
            else ++o.mu_minus;
          }
  o.nu = ((o.mu - 3 * (o.mu_plus - o.mu_minus) + 1) % 48 + 48) % 48;
  return o;
}

/// Bounded brute-force count of exponent vectors with sum a_i w_i = d.
inline std::size_t brute_force_basis_size(const Weights& w, long d) {
  std::size_t n = 0;
  for (long a = 0; a * w[0] <= d; ++a)
    for (long b = 0; a * w[0] + b * w[1] <= d; ++b)
      for (long c = 0; a * w[0] + b * w[1] + c * w[2] <= d; ++c)
        for (long e = 0; a * w[0] + b * w[1] + c * w[2] + e * w[3] <= d; ++e) {
          long rest = d - a * w[0] - b * w[1] - c * w[2] - e * w[3];
          if (rest % w[4] == 0) ++n;
        }
  return n;
}

/// Rows of the fixture file, optionally only those with Milnor number <= max_mu.
inline std::vector<Weights> fixture_weights(std::size_t limit = 0, long max_mu = 0) {
  std::vector<Weights> out;
  for (const auto& r : pipeline::read_weights_file(data_path("weights_small.csv"))) {
    if (max_mu && milnor_number(WeightSystem(r.w)) > max_mu) continue;
    out.push_back(r.w);
    if (limit && out.size() == limit) break;
  }
  return out;
}

/// A fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("cylink_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace cylink::testing
