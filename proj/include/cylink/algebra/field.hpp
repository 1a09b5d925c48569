#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "cylink/errors.hpp"

namespace cylink {

/// Runtime tag of a coefficient field, used for serialization and
/// for checking that operands agree.
struct CoefficientField {
  enum class Kind { prime, rational };
  Kind kind = Kind::prime;
  std::uint32_t p = 0;  ///< modulus when kind == prime, 0 otherwise

  friend bool operator==(const CoefficientField&, const CoefficientField&) = default;

  std::string to_string() const {
    return kind == Kind::prime ? "gf(" + std::to_string(p) + ")" : "rationals";
  }
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

namespace detail {

// Parses "123", "-7" or "num/den" into numerator and denominator strings.
inline void split_fraction(std::string_view s, std::string& num, std::string& den) {
  auto slash = s.find('/');
  num = std::string(s.substr(0, slash));
  den = slash == std::string_view::npos ? std::string("1") : std::string(s.substr(slash + 1));
  auto ok = [](const std::string& t) {
    std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  if (!ok(num) || !ok(den)) throw parse_error("malformed coefficient '" + std::string(s) + "'");
}

}  // namespace detail

/// Z/pZ for a prime p < 2^31. Elements are stored canonically in [0, p).
class PrimeField {
 public:
  using value_type = std::uint32_t;

  explicit PrimeField(std::uint32_t p = 32003) : p_(p) {
    if (p >= (1u << 31) || !is_prime(p)) throw domain_error(std::to_string(p) + " is not a prime below 2^31");
  }

  std::uint32_t characteristic() const { return p_; }
  CoefficientField descriptor() const { return {CoefficientField::Kind::prime, p_}; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(value_type a) const { return a == 0; }
  bool is_one(value_type a) const { return a == 1; }

  value_type from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    return value_type(r < 0 ? r + p_ : r);
  }

  value_type add(value_type a, value_type b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const {
    return value_type((std::uint64_t(a) * b) % p_);
  }
  value_type inv(value_type a) const {
    if (a == 0) throw domain_error("division by zero in " + descriptor().to_string());
    // extended Euclid on (a, p)
    std::int64_t t = 0, new_t = 1, r = p_, new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      t -= q * new_t;
      std::swap(t, new_t);
      r -= q * new_r;
      std::swap(r, new_r);
    }
    return value_type(t < 0 ? t + p_ : t);
  }

  /// Image of an element under reduction to GF(q); only defined for q == p.
  std::uint32_t to_mod(value_type a, std::uint32_t q) const {
    if (q != p_) throw mismatch_error("cannot reduce gf(" + std::to_string(p_) + ") to gf(" + std::to_string(q) + ")");
    return a;
  }

  std::string to_string(value_type a) const { return std::to_string(a); }

  value_type parse(std::string_view s) const {
    std::string num, den;
    detail::split_fraction(s, num, den);
    mpz_class n(num), d(den);
    mpz_class pm(p_);
    mpz_class nr = ((n % pm) + pm) % pm;
    mpz_class dr = ((d % pm) + pm) % pm;
    return mul(value_type(nr.get_ui()), inv(value_type(dr.get_ui())));
  }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
};

/// The rationals with arbitrary-precision exact arithmetic.
class RationalField {
 public:
  using value_type = mpq_class;

  std::uint32_t characteristic() const { return 0; }
  CoefficientField descriptor() const { return {CoefficientField::Kind::rational, 0}; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_one(const value_type& a) const { return a == 1; }
  value_type from_int(long long v) const { return value_type(mpz_class(std::to_string(v))); }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw domain_error("division by zero in rationals");
    return 1 / a;
  }

  /// num * den^{-1} mod q; fails when q divides the denominator.
  std::uint32_t to_mod(const value_type& a, std::uint32_t q) const {
    mpz_class qm(q);
    mpz_class n = ((a.get_num() % qm) + qm) % qm;
    mpz_class d = ((a.get_den() % qm) + qm) % qm;
    if (d == 0) throw degenerate_reduction("denominator divisible by " + std::to_string(q));
    PrimeField f(q);
    return f.mul(std::uint32_t(n.get_ui()), f.inv(std::uint32_t(d.get_ui())));
  }

  std::string to_string(const value_type& a) const { return a.get_str(); }

  value_type parse(std::string_view s) const {
    std::string num, den;
    detail::split_fraction(s, num, den);
    mpz_class d(den);
    if (d == 0) throw parse_error("zero denominator in '" + std::string(s) + "'");
    value_type r(mpz_class(num), d);
    r.canonicalize();
    return r;
  }

  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

}  // namespace cylink
