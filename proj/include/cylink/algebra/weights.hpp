#pragma once

#include <algorithm>
#include <array>
#include <string>

#include "cylink/algebra/exponent.hpp"
#include "cylink/errors.hpp"

namespace cylink {

using Weights = std::array<long, num_vars>;

inline long weighted_degree(const ExponentVector& m, const Weights& w) {
  long s = 0;
  for (std::size_t i = 0; i < num_vars; ++i) s += long(m[i]) * w[i];
  return s;
}

inline std::string to_string(const Weights& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < num_vars; ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s + ")";
}

/// Positive weights (w1..w5) with the Calabi-Yau degree d = w1 + ... + w5.
class WeightSystem {
 public:
  explicit WeightSystem(const Weights& w) : w_(w) {
    for (long x : w_)
      if (x < 1) throw domain_error("weights must be positive: " + cylink::to_string(w));
    d_ = 0;
    for (long x : w_) d_ += x;
  }

  const Weights& weights() const { return w_; }
  long operator[](std::size_t i) const { return w_[i]; }
  long degree() const { return d_; }

  long weighted_degree(const ExponentVector& m) const { return cylink::weighted_degree(m, w_); }

  /// Slot i of the result carries weight w[perm[i]].
  WeightSystem permuted(const std::array<std::size_t, num_vars>& perm) const {
    Weights r{};
    for (std::size_t i = 0; i < num_vars; ++i) r[i] = w_[perm[i]];
    return WeightSystem(r);
  }

  /// Ascending weight tuple; the key used to join datasets.
  Weights canonical() const {
    Weights r = w_;
    std::sort(r.begin(), r.end());
    return r;
  }

  std::string to_string() const { return cylink::to_string(w_); }

  friend bool operator==(const WeightSystem& a, const WeightSystem& b) { return a.w_ == b.w_; }

 private:
  Weights w_;
  long d_;
};

}  // namespace cylink
