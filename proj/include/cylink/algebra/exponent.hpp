#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <string>

#include "cylink/errors.hpp"

namespace cylink {

/// Number of variables z1..z5 of every ring in this library.
inline constexpr std::size_t num_vars = 5;

/// Exponent vector (a1,...,a5) of a monomial z1^a1 * ... * z5^a5.
class ExponentVector {
 public:
  using value_type = std::uint16_t;
  static constexpr long max_exponent = std::numeric_limits<value_type>::max();

  constexpr ExponentVector() = default;

  ExponentVector(std::initializer_list<long> exps) {
    if (exps.size() != num_vars) throw domain_error("exponent vector needs exactly 5 entries");
    std::size_t i = 0;
    for (long v : exps) e_[i++] = checked(v);
  }

  explicit ExponentVector(const std::array<long, num_vars>& exps) {
    for (std::size_t i = 0; i < num_vars; ++i) e_[i] = checked(exps[i]);
  }

  /// z_{var+1}^power
  static ExponentVector unit(std::size_t var, long power = 1) {
    ExponentVector m;
    m.e_[var] = checked(power);
    return m;
  }

  value_type operator[](std::size_t i) const { return e_[i]; }
  const std::array<value_type, num_vars>& data() const { return e_; }

  void set(std::size_t i, long v) { e_[i] = checked(v); }

  long total_degree() const {
    long s = 0;
    for (auto v : e_) s += v;
    return s;
  }

  bool is_one() const {
    return std::all_of(e_.begin(), e_.end(), [](value_type v) { return v == 0; });
  }

  /// True iff this monomial divides `other`.
  bool divides(const ExponentVector& other) const {
    for (std::size_t i = 0; i < num_vars; ++i)
      if (e_[i] > other.e_[i]) return false;
    return true;
  }

  ExponentVector operator*(const ExponentVector& o) const {
    ExponentVector r;
    for (std::size_t i = 0; i < num_vars; ++i) {
      unsigned s = unsigned(e_[i]) + unsigned(o.e_[i]);
      if (s > unsigned(max_exponent)) throw overflow_error("exponent overflow in monomial product");
      r.e_[i] = value_type(s);
    }
    return r;
  }

  /// Exact quotient; requires o.divides(*this).
  ExponentVector operator/(const ExponentVector& o) const {
    ExponentVector r;
    for (std::size_t i = 0; i < num_vars; ++i) {
      if (o.e_[i] > e_[i]) throw domain_error("monomial quotient is not a monomial");
      r.e_[i] = value_type(e_[i] - o.e_[i]);
    }
    return r;
  }

  friend ExponentVector lcm(const ExponentVector& a, const ExponentVector& b) {
    ExponentVector r;
    for (std::size_t i = 0; i < num_vars; ++i) r.e_[i] = std::max(a.e_[i], b.e_[i]);
    return r;
  }

  friend bool coprime(const ExponentVector& a, const ExponentVector& b) {
    for (std::size_t i = 0; i < num_vars; ++i)
      if (a.e_[i] != 0 && b.e_[i] != 0) return false;
    return true;
  }

  /// Bitmask of the variables with nonzero exponent.
  unsigned support() const {
    unsigned s = 0;
    for (std::size_t i = 0; i < num_vars; ++i)
      if (e_[i] != 0) s |= 1u << i;
    return s;
  }

  /// Coarse divisibility signature: divides(a,b) implies (mask(a) & ~mask(b)) == 0.
  std::uint64_t divmask() const {
    static constexpr std::array<unsigned, 12> thresholds{1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64};
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < num_vars; ++i)
      for (std::size_t k = 0; k < thresholds.size(); ++k)
        if (e_[i] >= thresholds[k]) m |= std::uint64_t{1} << (12 * i + k);
    return m;
  }

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

  /// Plain lexicographic comparison of the raw exponent arrays (z1 most significant).
  friend auto operator<=>(const ExponentVector& a, const ExponentVector& b) { return a.e_ <=> b.e_; }

  /// Human-readable form such as "z1^8*z3"; "1" for the empty monomial.
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < num_vars; ++i) {
      if (e_[i] == 0) continue;
      if (!s.empty()) s += '*';
      s += 'z' + std::to_string(i + 1);
      if (e_[i] > 1) s += '^' + std::to_string(e_[i]);
    }
    return s.empty() ? "1" : s;
  }

  std::size_t hash() const {
    std::uint64_t lo = 0;
    for (std::size_t i = 0; i < 4; ++i) lo |= std::uint64_t(e_[i]) << (16 * i);
    std::uint64_t h = lo * 0x9E3779B97F4A7C15ull ^ (std::uint64_t(e_[4]) * 0xC2B2AE3D27D4EB4Full);
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ull;
    h ^= h >> 32;
    return std::size_t(h);
  }

  template <class H>
  friend H AbslHashValue(H h, const ExponentVector& m) {
    return H::combine(std::move(h), m.e_);
  }

 private:
  static value_type checked(long v) {
    if (v < 0) throw domain_error("negative exponent");
    if (v > max_exponent) throw overflow_error("exponent exceeds 65535");
    return value_type(v);
  }

  std::array<value_type, num_vars> e_{};
};

struct ExponentVectorHash {
  std::size_t operator()(const ExponentVector& m) const { return m.hash(); }
};

}  // namespace cylink
