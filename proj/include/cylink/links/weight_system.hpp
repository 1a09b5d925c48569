#pragma once

#include <map>
#include <vector>

#include "cylink/algebra/polynomial.hpp"
#include "cylink/algebra/weights.hpp"

namespace cylink {

namespace detail {

inline void enumerate_degree(const Weights& w, std::size_t k, long left, std::array<long, num_vars>& cur,
                             std::vector<ExponentVector>& out) {
  if (k + 1 == num_vars) {
    if (left % w[k] == 0) {
      cur[k] = left / w[k];
      out.emplace_back(cur);
    }
    return;
  }
  for (long a = left / w[k]; a >= 0; --a) {
    cur[k] = a;
    enumerate_degree(w, k + 1, left - a * w[k], cur, out);
  }
}

}  // namespace detail

/// All exponent vectors of weighted degree ell, lexicographically descending
/// (z1^8*z3 comes before z1^4*z2^3*z3).
inline std::vector<ExponentVector> monomials_of_degree(const Weights& w, long ell) {
  std::vector<ExponentVector> out;
  if (ell < 0) return out;
  std::array<long, num_vars> cur{};
  detail::enumerate_degree(w, 0, ell, cur, out);
  return out;
}

/// Degree-d monomials of a weight system, the support of its CY polynomials.
inline std::vector<ExponentVector> monomial_basis(const WeightSystem& ws) {
  return monomials_of_degree(ws.weights(), ws.degree());
}

/// Checks positivity and that some monomial has degree d = sum of weights.
inline WeightSystem validate_weight_system(const Weights& w) {
  WeightSystem ws(w);
  if (monomial_basis(ws).empty()) throw domain_error("no monomial of degree " + std::to_string(ws.degree()) + " for weights " + ws.to_string());
  return ws;
}

/// sum_k c_k * basis_k with the basis in monomial_basis order.
template <class Field>
Polynomial<Field> build_polynomial(const WeightSystem& ws, const std::vector<long>& coefficients, const Field& field = Field(),
                                   const MonomialOrder& order = {}) {
  auto basis = monomial_basis(ws);
  if (coefficients.size() != basis.size())
    throw domain_error("expected " + std::to_string(basis.size()) + " coefficients for " + ws.to_string() + ", got " +
                       std::to_string(coefficients.size()));
  std::vector<Term<Field>> ts;
  ts.reserve(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (coefficients[k] == 0) throw domain_error("coefficients must be nonzero");
    ts.push_back({field.from_int(coefficients[k]), basis[k]});
  }
  return Polynomial<Field>::from_terms(field, order, std::move(ts));
}

/// Sparse construction: only the listed monomials, zero entries dropped.
/// Every monomial must have degree d.
template <class Field>
Polynomial<Field> build_polynomial(const WeightSystem& ws, const std::map<ExponentVector, long>& coefficients,
                                   const Field& field = Field(), const MonomialOrder& order = {}) {
  std::vector<Term<Field>> ts;
  for (const auto& [m, c] : coefficients) {
    if (ws.weighted_degree(m) != ws.degree())
      throw domain_error(m.to_string() + " does not have degree " + std::to_string(ws.degree()));
    if (c != 0) ts.push_back({field.from_int(c), m});
  }
  return Polynomial<Field>::from_terms(field, order, std::move(ts));
}

/// Partial derivatives of f in variable order.
template <class Field>
std::vector<Polynomial<Field>> jacobian(const Polynomial<Field>& f) {
  std::vector<Polynomial<Field>> out;
  for (std::size_t i = 0; i < num_vars; ++i) out.push_back(partial_derivative(f, i));
  return out;
}

}  // namespace cylink
