#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cylink/algebra/exponent.hpp"
#include "cylink/algebra/field.hpp"
#include "cylink/algebra/order.hpp"
#include "cylink/algebra/weights.hpp"
#include "cylink/errors.hpp"

namespace cylink {

template <class Field>
struct Term {
  typename Field::value_type coeff;
  ExponentVector mono;
};

/// Sparse polynomial in z1..z5 over `Field`.
///
/// Terms are kept sorted strictly descending in the polynomial's monomial
/// order with no zero coefficients and no repeated monomials; the zero
/// polynomial has no terms. Values are immutable after construction.
template <class Field>
class Polynomial {
 public:
  using field_type = Field;
  using coeff_type = typename Field::value_type;
  using term_type = Term<Field>;

  explicit Polynomial(Field field = Field(), MonomialOrder order = {}) : field_(std::move(field)), order_(std::move(order)) {}

  /// Builds a polynomial from arbitrary terms: sorts, merges duplicates, drops zeros.
  static Polynomial from_terms(Field field, MonomialOrder order, std::vector<term_type> terms) {
    Polynomial p(std::move(field), std::move(order));
    std::sort(terms.begin(), terms.end(),
              [&](const term_type& a, const term_type& b) { return p.order_.compare(a.mono, b.mono) > 0; });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coeff = p.field_.add(p.terms_.back().coeff, t.coeff);
      } else {
        if (!p.terms_.empty() && p.field_.is_zero(p.terms_.back().coeff)) p.terms_.pop_back();
        p.terms_.push_back(std::move(t));
      }
    }
    if (!p.terms_.empty() && p.field_.is_zero(p.terms_.back().coeff)) p.terms_.pop_back();
    return p;
  }

  /// Wraps terms that are already normalized (sorted descending, distinct, nonzero).
  static Polynomial from_sorted_terms(Field field, MonomialOrder order, std::vector<term_type> terms) {
    Polynomial p(std::move(field), std::move(order));
    p.terms_ = std::move(terms);
    return p;
  }

  static Polynomial monomial(Field field, MonomialOrder order, coeff_type c, const ExponentVector& m) {
    std::vector<term_type> t;
    t.push_back({std::move(c), m});
    return from_terms(std::move(field), std::move(order), std::move(t));
  }

  /// z_{var+1}
  static Polynomial variable(Field field, MonomialOrder order, std::size_t var) {
    auto one = field.one();
    return monomial(std::move(field), std::move(order), one, ExponentVector::unit(var));
  }

  static Polynomial constant(Field field, MonomialOrder order, long long c) {
    auto v = field.from_int(c);
    return monomial(std::move(field), std::move(order), v, ExponentVector{});
  }

  const Field& field() const { return field_; }
  const MonomialOrder& order() const { return order_; }
  const std::vector<term_type>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  const term_type& leading_term() const {
    if (terms_.empty()) throw domain_error("zero polynomial has no leading term");
    return terms_.front();
  }
  const ExponentVector& leading_monomial() const { return leading_term().mono; }
  const coeff_type& leading_coeff() const { return leading_term().coeff; }

  /// Same polynomial re-sorted under another monomial order.
  Polynomial with_order(MonomialOrder order) const {
    if (order == order_) return *this;
    return from_terms(field_, std::move(order), terms_);
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff = field_.neg(t.coeff);
    return r;
  }

  Polynomial operator+(const Polynomial& o) const { return combine(o, false); }
  Polynomial operator-(const Polynomial& o) const { return combine(o, true); }

  Polynomial operator*(const Polynomial& o) const {
    check_compatible(o);
    std::unordered_map<ExponentVector, coeff_type, ExponentVectorHash> acc;
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) {
        auto m = a.mono * b.mono;
        auto c = field_.mul(a.coeff, b.coeff);
        auto it = acc.find(m);
        if (it == acc.end()) acc.emplace(m, std::move(c));
        else it->second = field_.add(it->second, c);
      }
    std::vector<term_type> ts;
    ts.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (!field_.is_zero(c)) ts.push_back({c, m});
    return from_terms(field_, order_, std::move(ts));
  }

  /// c * m * this
  Polynomial mul_term(const coeff_type& c, const ExponentVector& m) const {
    Polynomial r(field_, order_);
    if (field_.is_zero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({field_.mul(c, t.coeff), t.mono * m});
    return r;
  }

  Polynomial scaled(const coeff_type& c) const { return mul_term(c, ExponentVector{}); }

  /// Divides by the leading coefficient.
  Polynomial monic() const {
    if (is_zero() || field_.is_one(leading_coeff())) return *this;
    return scaled(field_.inv(leading_coeff()));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (!(a.field_ == b.field_) || !(a.order_ == b.order_) || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].mono == b.terms_[i].mono) || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
    return true;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) s += " + ";
      const auto& t = terms_[i];
      bool unit = field_.is_one(t.coeff);
      if (!unit || t.mono.is_one()) s += field_.to_string(t.coeff);
      if (!t.mono.is_one()) s += (unit ? "" : "*") + t.mono.to_string();
    }
    return s;
  }

  void check_compatible(const Polynomial& o) const {
    if (!(field_ == o.field_))
      throw mismatch_error("field mismatch: " + field_.descriptor().to_string() + " vs " + o.field_.descriptor().to_string());
    if (!(order_ == o.order_)) throw mismatch_error("order mismatch: " + order_.name() + " vs " + o.order_.name());
  }

 private:
  Polynomial combine(const Polynomial& o, bool subtract) const {
    check_compatible(o);
    Polynomial r(field_, order_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    auto other = [&](const coeff_type& c) { return subtract ? field_.neg(c) : c; };
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size()) {
        r.terms_.push_back(terms_[i++]);
        continue;
      }
      if (i == terms_.size()) {
        r.terms_.push_back({other(o.terms_[j].coeff), o.terms_[j].mono});
        ++j;
        continue;
      }
      auto cmp = order_.compare(terms_[i].mono, o.terms_[j].mono);
      if (cmp > 0) {
        r.terms_.push_back(terms_[i++]);
      } else if (cmp < 0) {
        r.terms_.push_back({other(o.terms_[j].coeff), o.terms_[j].mono});
        ++j;
      } else {
        auto c = subtract ? field_.sub(terms_[i].coeff, o.terms_[j].coeff) : field_.add(terms_[i].coeff, o.terms_[j].coeff);
        if (!field_.is_zero(c)) r.terms_.push_back({std::move(c), terms_[i].mono});
        ++i;
        ++j;
      }
    }
    return r;
  }

  Field field_;
  MonomialOrder order_;
  std::vector<term_type> terms_;
};

/// Formal derivative with respect to z_{var+1} (var is 0-based).
/// In characteristic p the factor a_i is taken mod p, so z^p terms vanish.
template <class Field>
Polynomial<Field> partial_derivative(const Polynomial<Field>& f, std::size_t var) {
  if (var >= num_vars) throw domain_error("variable index out of range");
  const auto& F = f.field();
  std::vector<Term<Field>> ts;
  for (const auto& t : f.terms()) {
    long a = t.mono[var];
    if (a == 0) continue;
    auto c = F.mul(t.coeff, F.from_int(a));
    if (F.is_zero(c)) continue;
    ExponentVector m = t.mono;
    m.set(var, a - 1);
    ts.push_back({std::move(c), m});
  }
  // a > b implies a/z > b/z for monomial orders, so the surviving terms stay sorted.
  return Polynomial<Field>::from_sorted_terms(F, f.order(), std::move(ts));
}

/// True iff every term of the nonzero polynomial f has weighted degree d.
template <class Field>
bool is_weighted_homogeneous(const Polynomial<Field>& f, const Weights& w, long d) {
  if (f.is_zero()) throw domain_error("the zero polynomial has no degree");
  for (const auto& t : f.terms())
    if (weighted_degree(t.mono, w) != d) return false;
  return true;
}

template <class Field>
bool is_weighted_homogeneous(const Polynomial<Field>& f, const WeightSystem& ws, long d) {
  return is_weighted_homogeneous(f, ws.weights(), d);
}

/// Coefficient-wise image in GF(p). Works from any field whose elements reduce mod p.
template <class Field>
Polynomial<PrimeField> reduce_mod(const Polynomial<Field>& f, const PrimeField& target) {
  std::vector<Term<PrimeField>> ts;
  ts.reserve(f.size());
  for (const auto& t : f.terms()) {
    auto c = f.field().to_mod(t.coeff, target.characteristic());
    if (c != 0) ts.push_back({c, t.mono});
  }
  return Polynomial<PrimeField>::from_sorted_terms(target, f.order(), std::move(ts));
}

}  // namespace cylink
