#pragma once

#include <compare>
#include <optional>
#include <string>

#include "cylink/algebra/exponent.hpp"
#include "cylink/algebra/weights.hpp"
#include "cylink/errors.hpp"

namespace cylink {

enum class OrderKind { degrevlex, deglex, lex };

/// Monomial order on ExponentVectors with z1 > z2 > ... > z5.
///
/// The graded orders first compare the degree under the grading (total
/// degree, or the weighted degree when `grading` is set) and break ties
/// reverse-lexicographically or lexicographically. `lex` ignores the grading.
struct MonomialOrder {
  OrderKind kind = OrderKind::degrevlex;
  std::optional<Weights> grading;

  static MonomialOrder degrevlex() { return {OrderKind::degrevlex, std::nullopt}; }
  static MonomialOrder deglex() { return {OrderKind::deglex, std::nullopt}; }
  static MonomialOrder lex() { return {OrderKind::lex, std::nullopt}; }
  static MonomialOrder weighted(OrderKind k, const Weights& w) { return {k, w}; }

  long degree(const ExponentVector& m) const {
    return grading ? weighted_degree(m, *grading) : m.total_degree();
  }

  std::strong_ordering compare(const ExponentVector& a, const ExponentVector& b) const {
    if (kind != OrderKind::lex) {
      long da = degree(a), db = degree(b);
      if (da != db) return da <=> db;
    }
    if (kind == OrderKind::degrevlex) {
      for (std::size_t i = num_vars; i-- > 0;)
        if (a[i] != b[i]) return b[i] <=> a[i];
      return std::strong_ordering::equal;
    }
    for (std::size_t i = 0; i < num_vars; ++i)
      if (a[i] != b[i]) return a[i] <=> b[i];
    return std::strong_ordering::equal;
  }

  bool less(const ExponentVector& a, const ExponentVector& b) const { return compare(a, b) < 0; }

  std::string name() const {
    std::string base = kind == OrderKind::degrevlex ? "degrevlex" : kind == OrderKind::deglex ? "deglex" : "lex";
    if (grading && kind != OrderKind::lex) return "w" + base + cylink::to_string(*grading);
    return base;
  }

  /// Inverse of name(): "degrevlex", "deglex", "lex", "wdegrevlex(1,1,2,2,2)".
  static MonomialOrder parse(const std::string& s) {
    MonomialOrder o;
    std::string base = s;
    if (!s.empty() && s[0] == 'w') {
      auto open = s.find('(');
      auto close = s.find(')');
      if (open == std::string::npos || close == std::string::npos) throw parse_error("bad order '" + s + "'");
      base = s.substr(1, open - 1);
      Weights w{};
      std::size_t pos = open + 1;
      for (std::size_t i = 0; i < num_vars; ++i) {
        std::size_t used = 0;
        w[i] = std::stol(s.substr(pos), &used);
        pos += used + 1;
      }
      o.grading = w;
    }
    if (base == "degrevlex") o.kind = OrderKind::degrevlex;
    else if (base == "deglex") o.kind = OrderKind::deglex;
    else if (base == "lex") o.kind = OrderKind::lex;
    else throw parse_error("unknown monomial order '" + s + "'");
    return o;
  }

  friend bool operator==(const MonomialOrder&, const MonomialOrder&) = default;
};

/// Strict-weak-ordering adaptor: "a comes before b" iff a is larger.
struct DescendingBy {
  const MonomialOrder* order;
  bool operator()(const ExponentVector& a, const ExponentVector& b) const { return order->compare(a, b) > 0; }
};

}  // namespace cylink
