#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cylink/errors.hpp"

namespace cylink::learn {

namespace detail {

inline void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw domain_error("metric inputs must be nonempty and of equal length");
}

inline double mean(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

}  // namespace detail

inline double mse(std::span<const double> y, std::span<const double> yhat) {
  detail::check_lengths(y, yhat);
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - yhat[i]) * (y[i] - yhat[i]);
  return s / double(y.size());
}

inline double mae(std::span<const double> y, std::span<const double> yhat) {
  detail::check_lengths(y, yhat);
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) s += std::abs(y[i] - yhat[i]);
  return s / double(y.size());
}

/// 1 - SS_res / SS_tot; undefined when y is constant.
inline double r2(std::span<const double> y, std::span<const double> yhat) {
  detail::check_lengths(y, yhat);
  double m = detail::mean(y), ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_tot += (y[i] - m) * (y[i] - m);
    ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
  }
  if (ss_tot == 0) throw domain_error("R^2 is undefined for constant targets");
  return 1 - ss_res / ss_tot;
}

/// Fraction of predictions within 0.05 * (max y - min y) of the truth.
inline double accuracy(std::span<const double> y, std::span<const double> yhat, double fraction = 0.05) {
  detail::check_lengths(y, yhat);
  auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  double bound = fraction * (*hi - *lo);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (std::abs(y[i] - yhat[i]) <= bound) ++hit;
  return double(hit) / double(y.size());
}

/// Sample product-moment correlation.
inline double pmcc(std::span<const double> x, std::span<const double> y) {
  detail::check_lengths(x, y);
  if (x.size() < 2) throw domain_error("PMCC needs at least two points");
  double mx = detail::mean(x), my = detail::mean(y), sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) throw domain_error("PMCC is undefined for a constant series");
  return sxy / std::sqrt(sxx * syy);
}

struct Metrics {
  double r2 = 0, mae = 0, accuracy = 0, mse = 0;
};

inline Metrics evaluate(std::span<const double> y, std::span<const double> yhat) {
  return {r2(y, yhat), mae(y, yhat), accuracy(y, yhat), mse(y, yhat)};
}

/// Mean and standard error (sample standard deviation / sqrt(n)).
struct MeanSE {
  double mean = 0, se = 0;
};

inline MeanSE mean_se(const std::vector<double>& v) {
  MeanSE r;
  if (v.empty()) return r;
  r.mean = detail::mean(v);
  if (v.size() < 2) return r;
  double ss = 0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(ss / double(v.size() - 1)) / std::sqrt(double(v.size()));
  return r;
}

}  // namespace cylink::learn
