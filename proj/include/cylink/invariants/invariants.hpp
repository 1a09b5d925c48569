#pragma once

#include <gmpxx.h>

#include <chrono>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cylink/groebner/standard_monomials.hpp"
#include "cylink/links/weight_system.hpp"

namespace cylink {

/// Exact product prod_i (d/w_i - 1); throws unless it is an integer.
inline long milnor_number(const WeightSystem& ws) {
  mpq_class prod = 1;
  for (long w : ws.weights()) prod *= mpq_class(ws.degree(), w) - 1;
  prod.canonicalize();
  if (prod.get_den() != 1) throw domain_error("Milnor number of " + ws.to_string() + " is not an integer: " + prod.get_str());
  return prod.get_num().get_si();
}

struct HodgePair {
  long h30 = 0;
  long h21 = 0;
  long b3 = 0;
};

struct SignatureTriple {
  long mu_plus = 0;
  long mu_zero = 0;
  long mu_minus = 0;
  long mu() const { return mu_plus + mu_zero + mu_minus; }
};

struct CNInvariant {
  int nu = 0;     ///< in [0, 48)
  long raw = 0;   ///< mu - 3(mu_plus - mu_minus) + 1 before reduction
};

/// l(alpha) = sum_i (alpha_i + 1) w_i / d
inline mpq_class l_value(const ExponentVector& alpha, const WeightSystem& ws) {
  mpq_class l(ws.weighted_degree(alpha) + ws.degree(), ws.degree());
  l.canonicalize();
  return l;
}

/// Hodge numbers from the graded pieces at 4d - sum(w) and 3d - sum(w).
inline HodgePair sasakian_hodge(const StandardMonomialSet& S, const WeightSystem& ws) {
  long sum_w = 0;
  for (long w : ws.weights()) sum_w += w;
  const long d = ws.degree();
  if (4 * d - sum_w != 3 * d || 3 * d - sum_w != 2 * d) throw std::logic_error("weights do not sum to the degree");
  HodgePair h;
  h.h30 = long(S.count_at(4 * d - sum_w));
  h.h21 = long(S.count_at(3 * d - sum_w));
  h.b3 = 2 * (h.h30 + h.h21);
  return h;
}

inline SignatureTriple steenbrink_signature(const StandardMonomialSet& S, const WeightSystem& ws) {
  SignatureTriple s;
  for (const auto& beta : S.monomials) {
    mpq_class l = l_value(beta, ws);
    if (l.get_den() == 1) {
      ++s.mu_zero;
      continue;
    }
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), l.get_num_mpz_t(), l.get_den_mpz_t());
    if (mpz_even_p(fl.get_mpz_t())) ++s.mu_plus;
    else ++s.mu_minus;
  }
  return s;
}

inline CNInvariant cn_invariant(const SignatureTriple& s) {
  CNInvariant c;
  c.raw = s.mu() - 3 * (s.mu_plus - s.mu_minus) + 1;
  c.nu = int(((c.raw % 48) + 48) % 48);
  return c;
}

struct InvariantOptions {
  MonomialOrder order;
  GroebnerBudget budget;
};

struct LinkInvariants {
  WeightSystem ws;
  std::size_t gb_length = 0;
  long mu = 0;
  SignatureTriple signature;
  HodgePair hodge;
  CNInvariant cn;
  double elapsed_gb_ms = 0;
  double elapsed_inv_ms = 0;
  std::vector<std::string> warnings;
};

namespace detail {

template <class Field>
GroebnerBasis<Field> jacobian_basis(const Polynomial<Field>& f, const WeightSystem& ws, const InvariantOptions& opt) {
  if (f.is_zero() || !is_weighted_homogeneous(f, ws, ws.degree()))
    throw domain_error("expected a weighted homogeneous polynomial of degree " + std::to_string(ws.degree()));
  std::vector<Polynomial<Field>> gens;
  for (auto& g : jacobian(f))
    if (!g.is_zero()) gens.push_back(std::move(g));
  if (gens.empty()) throw domain_error("all partial derivatives vanish");
  BuchbergerOptions bo;
  bo.budget = opt.budget;
  bo.selection_weights = ws.weights();
  auto G = buchberger(Ideal<Field>(std::move(gens)), opt.order, bo);
  if (!is_zero_dimensional(G)) throw domain_error("singularity of the polynomial for " + ws.to_string() + " is not isolated");
  return G;
}

}  // namespace detail

/// One Groebner computation of the Jacobian ideal, then Hodge numbers,
/// signature and CN invariant from the same standard-monomial set.
template <class Field>
LinkInvariants compute_link_invariants(const Polynomial<Field>& f, const WeightSystem& ws, const InvariantOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  auto G = detail::jacobian_basis(f, ws, opt);
  auto t1 = clock::now();
  auto S = standard_monomials(G, ws);
  LinkInvariants r{ws};
  r.gb_length = G.length();
  r.mu = long(S.size());
  r.hodge = sasakian_hodge(S, ws);
  r.signature = steenbrink_signature(S, ws);
  r.cn = cn_invariant(r.signature);
  auto t2 = clock::now();
  r.elapsed_gb_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.elapsed_inv_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  if (r.mu != milnor_number(ws)) r.warnings.push_back("standard monomial count differs from the Milnor number");
  if (r.hodge.h30 != 1) r.warnings.push_back("h30 = " + std::to_string(r.hodge.h30));
  if (r.cn.nu % 2 == 0) r.warnings.push_back("even CN invariant");
  return r;
}

template <class Field>
HodgePair sasakian_hodge(const Polynomial<Field>& f, const WeightSystem& ws, const InvariantOptions& opt = {}) {
  return sasakian_hodge(standard_monomials(detail::jacobian_basis(f, ws, opt), ws), ws);
}

template <class Field>
SignatureTriple steenbrink_signature(const Polynomial<Field>& f, const WeightSystem& ws, const InvariantOptions& opt = {}) {
  return steenbrink_signature(standard_monomials(detail::jacobian_basis(f, ws, opt), ws), ws);
}

template <class Field>
CNInvariant cn_invariant(const Polynomial<Field>& f, const WeightSystem& ws, const InvariantOptions& opt = {}) {
  return cn_invariant(steenbrink_signature(f, ws, opt));
}

inline const char* invariant_csv_header() {
  return "w1,w2,w3,w4,w5,d,gb_length,mu,mu_plus,mu_zero,mu_minus,h30,h21,b3,nu,status,elapsed_gb_ms,elapsed_inv_ms";
}

inline std::string format_ms(double ms) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << ms;
  return os.str();
}

/// One CSV row; `status` is ok unless the caller says otherwise.
inline std::string invariant_csv_row(const LinkInvariants& r, const std::string& status = "ok", bool timings = true) {
  std::ostringstream os;
  for (long w : r.ws.weights()) os << w << ',';
  os << r.ws.degree() << ',' << r.gb_length << ',' << r.mu << ',' << r.signature.mu_plus << ',' << r.signature.mu_zero << ','
     << r.signature.mu_minus << ',' << r.hodge.h30 << ',' << r.hodge.h21 << ',' << r.hodge.b3 << ',' << r.cn.nu << ',' << status
     << ',' << (timings ? format_ms(r.elapsed_gb_ms) : "0") << ',' << (timings ? format_ms(r.elapsed_inv_ms) : "0");
  return os.str();
}

}  // namespace cylink
