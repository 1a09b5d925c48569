#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "cylink/algebra/weights.hpp"
#include "cylink/learn/metrics.hpp"
#include "cylink/learn/mlp.hpp"
#include "cylink/parallel.hpp"
#include "cylink/random.hpp"

namespace cylink::learn {

using json = nlohmann::json;

/// Weight systems with one scalar target each.
struct Dataset {
  std::vector<Weights> weights;
  std::vector<double> targets;

  std::size_t size() const { return weights.size(); }
  void add(const Weights& w, double y) {
    weights.push_back(w);
    targets.push_back(y);
  }
  Dataset subset(const std::vector<std::size_t>& idx) const {
    Dataset d;
    for (auto i : idx) d.add(weights[i], targets[i]);
    return d;
  }
};

/// Model input: the weights sorted ascending.
inline std::array<double, num_vars> features(const Weights& w) {
  Weights s = w;
  std::sort(s.begin(), s.end());
  std::array<double, num_vars> x{};
  for (std::size_t i = 0; i < num_vars; ++i) x[i] = double(s[i]);
  return x;
}

struct Standardizer {
  std::array<double, num_vars> mean{}, scale{};

  static Standardizer fit(const Dataset& d) {
    Standardizer s;
    s.scale.fill(1.0);
    if (d.size() == 0) return s;
    for (const auto& w : d.weights) {
      auto x = features(w);
      for (std::size_t i = 0; i < num_vars; ++i) s.mean[i] += x[i];
    }
    for (double& m : s.mean) m /= double(d.size());
    std::array<double, num_vars> var{};
    for (const auto& w : d.weights) {
      auto x = features(w);
      for (std::size_t i = 0; i < num_vars; ++i) var[i] += (x[i] - s.mean[i]) * (x[i] - s.mean[i]);
    }
    for (std::size_t i = 0; i < num_vars; ++i) {
      double sd = std::sqrt(var[i] / double(d.size()));
      s.scale[i] = sd > 0 ? sd : 1.0;
    }
    return s;
  }

  std::array<double, num_vars> apply(const Weights& w) const {
    auto x = features(w);
    for (std::size_t i = 0; i < num_vars; ++i) x[i] = (x[i] - mean[i]) / scale[i];
    return x;
  }
};

struct TrainConfig {
  double lr = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  int epochs = 500;
  std::size_t batch_size = 32;
  int patience = 50;  ///< epochs without improvement of the training loss; 0 disables
  bool standardize = true;
  std::uint64_t seed = 0;
  std::vector<int> widths{5, 16, 32, 16, 1};
};

class training_diverged : public error {
 public:
  training_diverged(const std::string& what, std::vector<double> trajectory)
      : error(what), trajectory_(std::move(trajectory)) {}
  const std::vector<double>& trajectory() const { return trajectory_; }

 private:
  std::vector<double> trajectory_;
};

/// Standardizer plus network; predicts from raw weight tuples.
struct Regressor {
  Standardizer norm;
  MLP net;
  std::uint64_t seed = 0;

  double predict(const Weights& w) const {
    auto x = norm.apply(w);
    return net.forward(x);
  }

  std::vector<double> predict(const std::vector<Weights>& ws) const {
    std::vector<double> out;
    out.reserve(ws.size());
    for (const auto& w : ws) out.push_back(predict(w));
    return out;
  }
};

struct TrainResult {
  Regressor model;
  std::vector<double> loss_trajectory;  ///< mean batch loss per epoch
  int best_epoch = 0;
};

/// Mini-batch Adam on MSE. Reshuffles every epoch from the seed and keeps
/// the parameters of the epoch with the lowest training loss.
inline TrainResult train(const Dataset& data, const TrainConfig& cfg) {
  if (data.size() == 0) throw domain_error("cannot train on an empty dataset");
  if (cfg.lr <= 0 || cfg.epochs < 1 || cfg.batch_size == 0) throw domain_error("invalid training configuration");
  for (double y : data.targets)
    if (!std::isfinite(y)) throw domain_error("non-finite training target");

  TrainResult res;
  Regressor& m = res.model;
  m.seed = cfg.seed;
  if (cfg.standardize) {
    m.norm = Standardizer::fit(data);
  } else {
    m.norm.scale.fill(1.0);
  }
  m.net = MLP::initialized(splitmix64(cfg.seed), cfg.widths);
  if (m.net.input_dim() != num_vars) throw domain_error("network input must have 5 entries");

  std::vector<double> X;
  X.reserve(data.size() * num_vars);
  for (const auto& w : data.weights) {
    auto x = m.norm.apply(w);
    X.insert(X.end(), x.begin(), x.end());
  }

  auto& p = m.net.parameters();
  std::vector<double> mom(p.size(), 0.0), vel(p.size(), 0.0), grad, best = p;
  double best_loss = std::numeric_limits<double>::infinity();
  int since_best = 0;
  long step = 0;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::mt19937_64 rng(splitmix64(cfg.seed + 1));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::span<const std::size_t> idx(order.data() + start, end - start);
      double loss = m.net.loss_and_gradient(X, data.targets, idx, grad);
      if (!std::isfinite(loss)) {
        res.loss_trajectory.push_back(loss);
        throw training_diverged("training loss became non-finite at epoch " + std::to_string(epoch), res.loss_trajectory);
      }
      epoch_loss += loss;
      ++batches;
      ++step;
      const double c1 = 1 - std::pow(cfg.beta1, double(step)), c2 = 1 - std::pow(cfg.beta2, double(step));
      for (std::size_t i = 0; i < p.size(); ++i) {
        mom[i] = cfg.beta1 * mom[i] + (1 - cfg.beta1) * grad[i];
        vel[i] = cfg.beta2 * vel[i] + (1 - cfg.beta2) * grad[i] * grad[i];
        p[i] -= cfg.lr * (mom[i] / c1) / (std::sqrt(vel[i] / c2) + cfg.eps);
      }
    }
    epoch_loss /= double(batches);
    res.loss_trajectory.push_back(epoch_loss);
    if (epoch_loss < best_loss) {
      best_loss = epoch_loss;
      best = p;
      res.best_epoch = epoch;
      since_best = 0;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      break;
    }
  }
  p = best;
  return res;
}

struct FoldResult {
  std::vector<std::size_t> test_indices;
  Metrics metrics;
  int epochs_run = 0;
};

struct RegressionReport {
  std::size_t k = 0;
  double train_fraction = 0;
  std::vector<FoldResult> folds;
  MeanSE r2, mae, accuracy;
};

/// k contiguous chunks of a seeded shuffle; sizes differ by at most one.
inline std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || n < k) throw domain_error("k-fold needs 2 <= k <= n");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    std::size_t len = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(order.begin() + std::ptrdiff_t(pos), order.begin() + std::ptrdiff_t(pos + len));
    pos += len;
  }
  return folds;
}

namespace detail {

inline RegressionReport summarize(std::vector<FoldResult> folds, double train_fraction) {
  RegressionReport rep;
  rep.k = folds.size();
  rep.train_fraction = train_fraction;
  std::vector<double> r, a, acc;
  for (const auto& f : folds) {
    r.push_back(f.metrics.r2);
    a.push_back(f.metrics.mae);
    acc.push_back(f.metrics.accuracy);
  }
  rep.r2 = mean_se(r);
  rep.mae = mean_se(a);
  rep.accuracy = mean_se(acc);
  rep.folds = std::move(folds);
  return rep;
}

inline FoldResult fit_and_score(const Dataset& data, const std::vector<std::size_t>& train_idx,
                                const std::vector<std::size_t>& test_idx, TrainConfig cfg) {
  auto tr = train(data.subset(train_idx), cfg);
  Dataset test = data.subset(test_idx);
  auto pred = tr.model.predict(test.weights);
  FoldResult f;
  f.test_indices = test_idx;
  f.metrics = evaluate(test.targets, pred);
  f.epochs_run = int(tr.loss_trajectory.size());
  return f;
}

}  // namespace detail

/// Shuffled k-fold cross-validation with a fresh model per fold.
inline RegressionReport cross_validate(const Dataset& data, const TrainConfig& cfg, std::size_t k = 5, unsigned workers = 1) {
  auto parts = kfold_partition(data.size(), k, splitmix64(cfg.seed ^ 0x5eedull));
  std::vector<FoldResult> folds(k);
  parallel_for(k, workers, [&](std::size_t f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < k; ++g)
      if (g != f) train_idx.insert(train_idx.end(), parts[g].begin(), parts[g].end());
    std::sort(train_idx.begin(), train_idx.end());
    TrainConfig c = cfg;
    c.seed = splitmix64(cfg.seed + f + 1);
    folds[f] = detail::fit_and_score(data, train_idx, parts[f], c);
  });
  return detail::summarize(std::move(folds), double(k - 1) / double(k));
}

/// Train on the `fraction` of rows with the smallest targets (ties broken by
/// ascending weight tuple), test on the rest.
inline RegressionReport extrapolation_split(const Dataset& data, const TrainConfig& cfg, double fraction = 0.95) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (data.targets[a] != data.targets[b]) return data.targets[a] < data.targets[b];
    return features(data.weights[a]) < features(data.weights[b]);
  });
  auto cut = std::size_t(std::floor(fraction * double(data.size())));
  if (cut == 0 || cut >= data.size()) throw domain_error("extrapolation split leaves an empty side");
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + std::ptrdiff_t(cut));
  std::vector<std::size_t> test_idx(order.begin() + std::ptrdiff_t(cut), order.end());
  std::vector<FoldResult> folds{detail::fit_and_score(data, train_idx, test_idx, cfg)};
  return detail::summarize(std::move(folds), fraction);
}

struct ClassificationReport {
  std::size_t n = 0;
  std::size_t positives = 0;
  MeanSE accuracy;
  double majority_rate = 0;
};

/// Binary probe between two classes of an integer label (e.g. CN values 1
/// and 25): labels relabeled to 0/1, regressed with the same network, read
/// out at threshold 0.5.
inline ClassificationReport binary_probe(const Dataset& labelled, double negative, double positive, const TrainConfig& cfg,
                                         std::size_t k = 5, unsigned workers = 1) {
  Dataset d;
  for (std::size_t i = 0; i < labelled.size(); ++i) {
    if (labelled.targets[i] == negative) d.add(labelled.weights[i], 0.0);
    else if (labelled.targets[i] == positive) d.add(labelled.weights[i], 1.0);
  }
  ClassificationReport rep;
  rep.n = d.size();
  for (double y : d.targets) rep.positives += y > 0.5;
  if (rep.n < k) throw domain_error("too few rows in the two probe classes");
  rep.majority_rate = double(std::max(rep.positives, rep.n - rep.positives)) / double(rep.n);
  auto parts = kfold_partition(d.size(), k, splitmix64(cfg.seed ^ 0xc1a55ull));
  std::vector<double> acc(k);
  parallel_for(k, workers, [&](std::size_t f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < k; ++g)
      if (g != f) train_idx.insert(train_idx.end(), parts[g].begin(), parts[g].end());
    TrainConfig c = cfg;
    c.seed = splitmix64(cfg.seed + f + 1);
    auto tr = train(d.subset(train_idx), c);
    std::size_t hit = 0;
    for (auto i : parts[f]) hit += (tr.model.predict(d.weights[i]) >= 0.5) == (d.targets[i] > 0.5);
    acc[f] = double(hit) / double(parts[f].size());
  });
  rep.accuracy = mean_se(acc);
  return rep;
}

inline json to_json(const Regressor& m) {
  json layers = json::array();
  const MLP& net = m.net;
  for (std::size_t k = 0; k < net.num_layers(); ++k) {
    std::size_t in = std::size_t(net.widths()[k]), out = std::size_t(net.widths()[k + 1]);
    std::vector<double> W, b;
    for (std::size_t o = 0; o < out; ++o) {
      for (std::size_t i = 0; i < in; ++i) W.push_back(net.weight(k, o, i));
      b.push_back(net.bias(k, o));
    }
    layers.push_back({{"in", in}, {"out", out}, {"W", W}, {"b", b}});
  }
  return {{"widths", net.widths()},
          {"layers", layers},
          {"normalization", {{"mean", m.norm.mean}, {"scale", m.norm.scale}}},
          {"features", "weights sorted ascending"},
          {"seed", m.seed}};
}

inline Regressor regressor_from_json(const json& j) {
  try {
    Regressor m;
    m.net = MLP(j.at("widths").get<std::vector<int>>());
    m.seed = j.value("seed", std::uint64_t(0));
    m.norm.mean = j.at("normalization").at("mean").get<std::array<double, num_vars>>();
    m.norm.scale = j.at("normalization").at("scale").get<std::array<double, num_vars>>();
    const auto& layers = j.at("layers");
    if (layers.size() != m.net.num_layers()) throw parse_error("checkpoint layer count does not match widths");
    for (std::size_t k = 0; k < layers.size(); ++k) {
      auto W = layers[k].at("W").get<std::vector<double>>();
      auto b = layers[k].at("b").get<std::vector<double>>();
      std::size_t in = std::size_t(m.net.widths()[k]), out = std::size_t(m.net.widths()[k + 1]);
      if (W.size() != in * out || b.size() != out) throw parse_error("checkpoint layer " + std::to_string(k) + " has wrong shape");
      for (std::size_t o = 0; o < out; ++o) {
        for (std::size_t i = 0; i < in; ++i) m.net.weight(k, o, i) = W[o * in + i];
        m.net.bias(k, o) = b[o];
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw parse_error(std::string("model checkpoint: ") + e.what());
  }
}

inline json to_json(const RegressionReport& r) {
  json folds = json::array();
  for (const auto& f : r.folds)
    folds.push_back({{"test_size", f.test_indices.size()},
                     {"r2", f.metrics.r2},
                     {"mae", f.metrics.mae},
                     {"accuracy", f.metrics.accuracy},
                     {"mse", f.metrics.mse},
                     {"epochs", f.epochs_run}});
  return {{"k", r.k},
          {"train_fraction", r.train_fraction},
          {"folds", folds},
          {"r2", {{"mean", r.r2.mean}, {"se", r.r2.se}}},
          {"mae", {{"mean", r.mae.mean}, {"se", r.mae.se}}},
          {"accuracy", {{"mean", r.accuracy.mean}, {"se", r.accuracy.se}}}};
}

inline json to_json(const ClassificationReport& r) {
  return {{"n", r.n},
          {"positives", r.positives},
          {"accuracy", {{"mean", r.accuracy.mean}, {"se", r.accuracy.se}}},
          {"majority_rate", r.majority_rate}};
}

}  // namespace cylink::learn
