#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cylink/errors.hpp"

namespace cylink::learn {

/// Fully connected network, ReLU on hidden layers, identity output.
/// Parameters live in one flat array: for each layer, W (row-major,
/// out x in) followed by b.
class MLP {
 public:
  MLP() : MLP(std::vector<int>{5, 16, 32, 16, 1}) {}

  explicit MLP(std::vector<int> widths) : widths_(std::move(widths)) {
    if (widths_.size() < 2 || widths_.back() != 1) throw domain_error("network needs an input layer and a scalar output");
    std::size_t off = 0;
    for (std::size_t k = 0; k + 1 < widths_.size(); ++k) {
      w_off_.push_back(off);
      off += std::size_t(widths_[k]) * widths_[k + 1];
      b_off_.push_back(off);
      off += std::size_t(widths_[k + 1]);
    }
    params_.assign(off, 0.0);
  }

  /// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases.
  static MLP initialized(std::uint64_t seed, std::vector<int> widths = {5, 16, 32, 16, 1}) {
    MLP m(std::move(widths));
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < m.num_layers(); ++k) {
      double a = 1.0 / std::sqrt(double(m.widths_[k]));
      std::uniform_real_distribution<double> u(-a, a);
      std::size_t end = m.b_off_[k] + std::size_t(m.widths_[k + 1]);
      for (std::size_t i = m.w_off_[k]; i < end; ++i) m.params_[i] = u(rng);
    }
    return m;
  }

  const std::vector<int>& widths() const { return widths_; }
  std::size_t num_layers() const { return widths_.size() - 1; }
  std::size_t input_dim() const { return std::size_t(widths_.front()); }
  std::vector<double>& parameters() { return params_; }
  const std::vector<double>& parameters() const { return params_; }

  double& weight(std::size_t layer, std::size_t out, std::size_t in) {
    return params_[w_off_[layer] + out * std::size_t(widths_[layer]) + in];
  }
  double& bias(std::size_t layer, std::size_t out) { return params_[b_off_[layer] + out]; }
  double weight(std::size_t layer, std::size_t out, std::size_t in) const {
    return params_[w_off_[layer] + out * std::size_t(widths_[layer]) + in];
  }
  double bias(std::size_t layer, std::size_t out) const { return params_[b_off_[layer] + out]; }

  double forward(std::span<const double> x) const {
    if (x.size() != input_dim()) throw domain_error("input has the wrong dimension");
    for (double v : x)
      if (!std::isfinite(v)) throw domain_error("non-finite network input");
    std::vector<double> a(x.begin(), x.end()), z;
    for (std::size_t k = 0; k < num_layers(); ++k) {
      affine(k, a, z);
      if (k + 1 < num_layers())
        for (double& v : z) v = v > 0 ? v : 0;
      a.swap(z);
    }
    return a[0];
  }

  /// Mean squared error over rows `idx` of X (row-major, input_dim columns)
  /// and its gradient with respect to every parameter.
  double loss_and_gradient(std::span<const double> X, std::span<const double> y, std::span<const std::size_t> idx,
                           std::vector<double>& grad) const {
    grad.assign(params_.size(), 0.0);
    const std::size_t L = num_layers(), n_in = input_dim();
    std::vector<std::vector<double>> acts(L + 1);  // post-activation per layer, acts[0] = input
    std::vector<double> delta, prev;
    double loss = 0;
    for (std::size_t r : idx) {
      acts[0].assign(X.begin() + std::ptrdiff_t(r * n_in), X.begin() + std::ptrdiff_t((r + 1) * n_in));
      for (std::size_t k = 0; k < L; ++k) {
        affine(k, acts[k], acts[k + 1]);
        if (k + 1 < L)
          for (double& v : acts[k + 1]) v = v > 0 ? v : 0;
      }
      double err = acts[L][0] - y[r];
      loss += err * err;
      delta.assign(1, 2 * err / double(idx.size()));
      for (std::size_t k = L; k-- > 0;) {
        const std::size_t in = std::size_t(widths_[k]), out = std::size_t(widths_[k + 1]);
        const auto& a = acts[k];
        for (std::size_t o = 0; o < out; ++o) {
          double* gw = &grad[w_off_[k] + o * in];
          for (std::size_t i = 0; i < in; ++i) gw[i] += delta[o] * a[i];
          grad[b_off_[k] + o] += delta[o];
        }
        if (k == 0) break;
        prev.assign(in, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
          const double* w = &params_[w_off_[k] + o * in];
          for (std::size_t i = 0; i < in; ++i) prev[i] += w[i] * delta[o];
        }
        for (std::size_t i = 0; i < in; ++i)
          if (a[i] <= 0) prev[i] = 0;
        delta.swap(prev);
      }
    }
    return loss / double(idx.size());
  }

 private:
  void affine(std::size_t k, const std::vector<double>& a, std::vector<double>& z) const {
    const std::size_t in = std::size_t(widths_[k]), out = std::size_t(widths_[k + 1]);
    z.assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double* w = &params_[w_off_[k] + o * in];
      double s = params_[b_off_[k] + o];
      for (std::size_t i = 0; i < in; ++i) s += w[i] * a[i];
      z[o] = s;
    }
  }

  std::vector<int> widths_;
  std::vector<std::size_t> w_off_, b_off_;
  std::vector<double> params_;
};

}  // namespace cylink::learn
