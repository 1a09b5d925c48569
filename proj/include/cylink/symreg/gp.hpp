#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "cylink/learn/metrics.hpp"
#include "cylink/parallel.hpp"
#include "cylink/random.hpp"
#include "cylink/symreg/expression.hpp"

namespace cylink::symreg {

struct GPConfig {
  std::size_t population = 1000;
  int generations = 40;
  std::size_t tournament = 7;
  double p_crossover = 0.8;
  double p_subtree_mutation = 0.08;
  double p_point_mutation = 0.06;
  double p_constant_mutation = 0.06;  ///< remainder is reproduction
  /// Size penalty per node, in units of the mean absolute deviation of the training targets.
  double parsimony = 0.001;
  int max_depth = 10;
  int init_min_depth = 2;
  int init_max_depth = 6;
  double const_min = -20, const_max = 20;
  double validation_fraction = 0.1;
  std::size_t n_results = 20;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct RankedExpression {
  Expression expr;
  double fitness = 0;
  double train_mae = 0;
  double validation_mae = 0;
  double validation_r2 = std::numeric_limits<double>::quiet_NaN();
  double flagged_fraction = 0;
};

struct EvolutionResult {
  std::vector<RankedExpression> ranked;  ///< ascending fitness
  std::vector<double> best_train_mae;    ///< per generation, generation 0 first
  std::vector<std::size_t> train_indices, validation_indices;
};

namespace detail {

struct Columns {
  std::array<std::vector<double>, num_vars> x;
  std::vector<double> y;
  std::size_t size() const { return y.size(); }
};

inline Columns columns(const std::vector<std::array<double, num_vars>>& X, const std::vector<double>& y,
                       const std::vector<std::size_t>& idx) {
  Columns c;
  for (auto i : idx) {
    for (std::size_t v = 0; v < num_vars; ++v) c.x[v].push_back(X[i][v]);
    c.y.push_back(y[i]);
  }
  return c;
}

struct Scored {
  double mae = std::numeric_limits<double>::infinity();
  double flagged = 0;
};

inline Scored score(const Expression& e, const Columns& c) {
  std::vector<char> flags;
  auto pred = e.eval_columns(c.x, &flags);
  Scored s;
  double sum = 0;
  std::size_t nf = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    sum += std::abs(pred[k] - c.y[k]);
    nf += std::size_t(flags[k]);
  }
  s.mae = std::isfinite(sum) ? sum / double(c.size()) : std::numeric_limits<double>::infinity();
  s.flagged = double(nf) / double(c.size());
  return s;
}

class Breeder {
 public:
  Breeder(const GPConfig& cfg, std::mt19937_64& rng) : cfg_(cfg), rng_(rng) {}

  Node random_terminal() {
    if (coin(0.6)) return {Op::var, std::uint8_t(std::uniform_int_distribution<int>(0, 4)(rng_)), 0};
    return {Op::constant, 0, random_constant()};
  }

  double random_constant() {
    // Half integers so exact small constants are reachable, half reals.
    if (coin(0.5))
      return double(std::uniform_int_distribution<long>(long(std::ceil(cfg_.const_min)), long(std::floor(cfg_.const_max)))(rng_));
    return std::uniform_real_distribution<double>(cfg_.const_min, cfg_.const_max)(rng_);
  }

  Op random_op() { return Op(std::uniform_int_distribution<int>(0, 3)(rng_)); }

  void grow(std::vector<Node>& out, int depth, bool full) {
    bool leaf = depth <= 1 || (!full && coin(0.3));
    if (leaf) {
      out.push_back(random_terminal());
      return;
    }
    out.push_back({random_op(), 0, 0});
    grow(out, depth - 1, full);
    grow(out, depth - 1, full);
  }

  Expression random_tree(int depth, bool full) {
    std::vector<Node> n;
    grow(n, depth, full);
    return Expression(std::move(n));
  }

  /// Subtree root, biased 90:10 toward operators when the tree has any.
  std::size_t pick_node(const Expression& e) {
    const auto& n = e.nodes();
    std::vector<std::size_t> ops, leaves;
    for (std::size_t i = 0; i < n.size(); ++i) (n[i].is_leaf() ? leaves : ops).push_back(i);
    auto& pool = (!ops.empty() && coin(0.9)) ? ops : leaves;
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng_)];
  }

  static Expression splice(const Expression& host, std::size_t at, const std::vector<Node>& sub) {
    const auto& n = host.nodes();
    std::size_t end = host.subtree_end(at);
    std::vector<Node> out(n.begin(), n.begin() + std::ptrdiff_t(at));
    out.insert(out.end(), sub.begin(), sub.end());
    out.insert(out.end(), n.begin() + std::ptrdiff_t(end), n.end());
    return Expression(std::move(out));
  }

  Expression crossover(const Expression& a, const Expression& b) {
    std::size_t i = pick_node(a), j = pick_node(b);
    std::vector<Node> sub(b.nodes().begin() + std::ptrdiff_t(j), b.nodes().begin() + std::ptrdiff_t(b.subtree_end(j)));
    auto child = splice(a, i, sub);
    return child.depth() <= cfg_.max_depth ? child : a;
  }

  Expression subtree_mutation(const Expression& a) {
    std::size_t i = pick_node(a);
    std::vector<Node> sub;
    grow(sub, std::uniform_int_distribution<int>(1, 4)(rng_), false);
    auto child = splice(a, i, sub);
    return child.depth() <= cfg_.max_depth ? child : a;
  }

  Expression point_mutation(const Expression& a) {
    Expression c = a;
    auto& n = c.mutable_nodes();
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, n.size() - 1)(rng_);
    if (!n[i].is_leaf()) n[i].op = random_op();
    else n[i] = random_terminal();
    return c;
  }

  Expression constant_mutation(const Expression& a) {
    Expression c = a;
    auto& n = c.mutable_nodes();
    std::vector<std::size_t> consts;
    for (std::size_t i = 0; i < n.size(); ++i)
      if (n[i].op == Op::constant) consts.push_back(i);
    if (consts.empty()) return point_mutation(a);
    auto& v = n[consts[std::uniform_int_distribution<std::size_t>(0, consts.size() - 1)(rng_)]].value;
    v += std::normal_distribution<double>(0.0, 0.1 * std::max(1.0, std::abs(v)))(rng_);
    return c;
  }

  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

 private:
  const GPConfig& cfg_;
  std::mt19937_64& rng_;
};

}  // namespace detail

/// Seeded genetic programming on (features, target) rows. Fitness is
/// training MAE + parsimony * size (scaled by the target spread) +
/// a penalty proportional to the fraction of protected divisions.
/// Returns the size/MAE Pareto front of everything in the final
/// population, ranked by fitness.
inline EvolutionResult evolve(const std::vector<std::array<double, num_vars>>& X, const std::vector<double>& y,
                              const GPConfig& cfg) {
  if (X.empty() || X.size() != y.size()) throw domain_error("symbolic regression needs nonempty aligned data");
  if (cfg.population < 2 || cfg.tournament == 0 || cfg.max_depth < 1) throw domain_error("invalid GP configuration");
  std::mt19937_64 rng(splitmix64(cfg.seed));
  detail::Breeder br(cfg, rng);

  EvolutionResult res;
  std::vector<std::size_t> order(X.size());
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::shuffle(order.begin(), order.end(), rng);
  auto n_val = std::size_t(std::floor(cfg.validation_fraction * double(X.size())));
  if (X.size() - n_val == 0) n_val = 0;
  res.validation_indices.assign(order.begin(), order.begin() + std::ptrdiff_t(n_val));
  res.train_indices.assign(order.begin() + std::ptrdiff_t(n_val), order.end());
  auto train = detail::columns(X, y, res.train_indices);
  auto valid = detail::columns(X, y, res.validation_indices);

  double ymean = std::accumulate(train.y.begin(), train.y.end(), 0.0) / double(train.size());
  double spread = 0;
  for (double v : train.y) spread += std::abs(v - ymean);
  spread /= double(train.size());
  const double scale = spread > 0 ? spread : 1.0;

  struct Ind {
    Expression e;
    detail::Scored s;
    double fitness = std::numeric_limits<double>::infinity();
  };
  auto fitness_of = [&](const Ind& ind) {
    return ind.s.mae + cfg.parsimony * scale * double(ind.e.size()) + ind.s.flagged * scale;
  };
  auto evaluate = [&](std::vector<Ind>& pop) {
    parallel_for(pop.size(), cfg.workers, [&](std::size_t i) {
      pop[i].s = detail::score(pop[i].e, train);
      pop[i].fitness = fitness_of(pop[i]);
    });
  };

  // Ramped half-and-half.
  std::vector<Ind> pop;
  const int span = std::max(1, cfg.init_max_depth - cfg.init_min_depth + 1);
  for (std::size_t i = 0; i < cfg.population; ++i) {
    int depth = std::min(cfg.max_depth, cfg.init_min_depth + int(i % std::size_t(span)));
    pop.push_back({br.random_tree(depth, (i / std::size_t(span)) % 2 == 0), {}, 0});
  }
  evaluate(pop);

  auto best_by = [&](auto key) {
    return std::size_t(std::min_element(pop.begin(), pop.end(), [&](const Ind& a, const Ind& b) { return key(a) < key(b); }) -
                       pop.begin());
  };
  auto by_fitness = [](const Ind& a) { return a.fitness; };
  auto by_mae = [](const Ind& a) { return a.s.mae; };
  res.best_train_mae.push_back(pop[best_by(by_mae)].s.mae);

  auto tournament = [&]() -> const Ind& {
    std::size_t best = std::uniform_int_distribution<std::size_t>(0, pop.size() - 1)(rng);
    for (std::size_t t = 1; t < cfg.tournament; ++t) {
      std::size_t c = std::uniform_int_distribution<std::size_t>(0, pop.size() - 1)(rng);
      if (pop[c].fitness < pop[best].fitness) best = c;
    }
    return pop[best];
  };

  for (int g = 0; g < cfg.generations; ++g) {
    std::vector<Ind> next;
    next.reserve(cfg.population);
    next.push_back(pop[best_by(by_fitness)]);
    next.push_back(pop[best_by(by_mae)]);
    while (next.size() < cfg.population) {
      double r = std::uniform_real_distribution<double>(0, 1)(rng);
      const Ind& p = tournament();
      Expression child;
      if (r < cfg.p_crossover) child = br.crossover(p.e, tournament().e);
      else if ((r -= cfg.p_crossover) < cfg.p_subtree_mutation) child = br.subtree_mutation(p.e);
      else if ((r -= cfg.p_subtree_mutation) < cfg.p_point_mutation) child = br.point_mutation(p.e);
      else if ((r -= cfg.p_point_mutation) < cfg.p_constant_mutation) child = br.constant_mutation(p.e);
      else child = p.e;
      next.push_back({std::move(child), {}, 0});
    }
    pop = std::move(next);
    evaluate(pop);
    res.best_train_mae.push_back(pop[best_by(by_mae)].s.mae);
  }

  // Pareto front on (size, train MAE), then rank by fitness.
  std::map<std::string, const Ind*> unique;
  for (const auto& ind : pop)
    if (std::isfinite(ind.s.mae)) unique.emplace(ind.e.to_prefix(), &ind);
  std::vector<const Ind*> cand;
  for (auto& [k, p] : unique) cand.push_back(p);
  std::vector<const Ind*> front;
  for (const Ind* a : cand) {
    bool dominated = false;
    for (const Ind* b : cand)
      if (b != a && b->e.size() <= a->e.size() && b->s.mae <= a->s.mae && (b->e.size() < a->e.size() || b->s.mae < a->s.mae)) {
        dominated = true;
        break;
      }
    if (!dominated) front.push_back(a);
  }
  std::sort(front.begin(), front.end(), [](const Ind* a, const Ind* b) {
    if (a->fitness != b->fitness) return a->fitness < b->fitness;
    return a->e.size() < b->e.size();
  });
  if (front.size() > cfg.n_results) front.resize(cfg.n_results);
  for (const Ind* p : front) {
    RankedExpression r;
    r.expr = p->e;
    r.fitness = p->fitness;
    r.train_mae = p->s.mae;
    r.flagged_fraction = p->s.flagged;
    if (valid.size() > 0) {
      auto pred = p->e.eval_columns(valid.x);
      r.validation_mae = learn::mae(valid.y, pred);
      try {
        r.validation_r2 = learn::r2(valid.y, pred);
      } catch (const domain_error&) {
      }
    } else {
      r.validation_mae = r.train_mae;
    }
    res.ranked.push_back(std::move(r));
  }
  return res;
}

inline json to_json(const RankedExpression& r) {
  return {{"prefix", r.expr.to_prefix()},
          {"infix", r.expr.to_infix()},
          {"size", r.expr.size()},
          {"fitness", r.fitness},
          {"train_mae", r.train_mae},
          {"validation_mae", r.validation_mae},
          {"validation_r2", std::isfinite(r.validation_r2) ? json(r.validation_r2) : json(nullptr)},
          {"tree", r.expr.to_json()}};
}

}  // namespace cylink::symreg
