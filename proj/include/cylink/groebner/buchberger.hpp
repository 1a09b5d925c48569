#pragma once

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylink/algebra/polynomial.hpp"
#include "cylink/errors.hpp"

namespace cylink {

/// Nonempty list of generators sharing field and monomial order.
template <class Field>
class Ideal {
 public:
  explicit Ideal(std::vector<Polynomial<Field>> gens) : gens_(std::move(gens)) {
    if (gens_.empty()) throw domain_error("an ideal needs at least one generator");
    for (const auto& g : gens_) gens_.front().check_compatible(g);
  }

  const std::vector<Polynomial<Field>>& generators() const { return gens_; }
  const Field& field() const { return gens_.front().field(); }

 private:
  std::vector<Polynomial<Field>> gens_;
};

/// Caps for a single Buchberger run; zero means unlimited.
struct GroebnerBudget {
  std::size_t max_pairs = 0;       ///< live critical pairs in the queue
  std::size_t max_reductions = 0;  ///< S-polynomial reductions performed
  std::chrono::milliseconds max_time{0};

  bool unlimited() const { return max_pairs == 0 && max_reductions == 0 && max_time.count() == 0; }
};

struct GroebnerStats {
  std::size_t pairs_created = 0;
  std::size_t pairs_reduced = 0;
  std::size_t zero_reductions = 0;
  std::size_t coprime_skipped = 0;
  std::size_t chain_skipped = 0;
  std::size_t max_queue = 0;
  std::size_t basis_size = 0;
  double elapsed_ms = 0;
};

/// Raised when a Buchberger run exhausts its budget; carries the statistics so far.
class budget_exceeded : public error {
 public:
  /// `which` is one of "pairs", "reductions", "time".
  budget_exceeded(std::string which, const std::string& detail, GroebnerStats stats)
      : error("groebner budget exceeded: " + detail), which_(std::move(which)), stats_(stats) {}
  const std::string& which() const { return which_; }
  const GroebnerStats& stats() const { return stats_; }

 private:
  std::string which_;
  GroebnerStats stats_;
};

struct BuchbergerOptions {
  GroebnerBudget budget;
  /// When every generator is homogeneous for these weights, pairs are
  /// selected by weighted lcm degree and every intermediate remainder is
  /// checked to stay homogeneous.
  std::optional<Weights> selection_weights;
};

/// Reduced Groebner basis: monic elements sorted by leading monomial ascending.
template <class Field>
struct GroebnerBasis {
  MonomialOrder order;
  std::vector<Polynomial<Field>> elements;
  GroebnerStats stats;

  std::size_t length() const { return elements.size(); }

  std::vector<ExponentVector> leading_terms() const {
    std::vector<ExponentVector> lt;
    lt.reserve(elements.size());
    for (const auto& g : elements) lt.push_back(g.leading_monomial());
    return lt;
  }
};

namespace detail {

// Sparse accumulator for reductions: coefficients in a hash map and the
// live monomials in a max-heap. A monomial is in the heap iff it is a key
// of the map, so popping needs no duplicate handling.
template <class Field>
class Accumulator {
 public:
  using coeff_type = typename Field::value_type;

  Accumulator(const Field& field, const MonomialOrder& order) : field_(field), order_(order) {}

  // acc += c * shift * terms[from..]
  void add_scaled(const std::vector<Term<Field>>& terms, std::size_t from, const coeff_type& c,
                  const ExponentVector& shift) {
    auto cmp = [this](const ExponentVector& a, const ExponentVector& b) { return order_.compare(a, b) < 0; };
    for (std::size_t k = from; k < terms.size(); ++k) {
      ExponentVector m = terms[k].mono * shift;
      auto v = field_.mul(c, terms[k].coeff);
      auto [it, inserted] = coeffs_.try_emplace(m, v);
      if (inserted) {
        heap_.push_back(m);
        std::push_heap(heap_.begin(), heap_.end(), cmp);
      } else {
        it->second = field_.add(it->second, v);
      }
    }
  }

  bool pop_leading(Term<Field>& out) {
    auto cmp = [this](const ExponentVector& a, const ExponentVector& b) { return order_.compare(a, b) < 0; };
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), cmp);
      ExponentVector m = heap_.back();
      heap_.pop_back();
      auto it = coeffs_.find(m);
      coeff_type c = std::move(it->second);
      coeffs_.erase(it);
      if (!field_.is_zero(c)) {
        out = {std::move(c), m};
        return true;
      }
    }
    return false;
  }

  void clear() {
    coeffs_.clear();
    heap_.clear();
  }

 private:
  const Field& field_;
  const MonomialOrder& order_;
  absl::flat_hash_map<ExponentVector, coeff_type, ExponentVectorHash> coeffs_;
  std::vector<ExponentVector> heap_;
};

// Ordered list of divisors; lookup returns the first whose leading monomial divides.
struct DivisorTable {
  std::vector<ExponentVector> lms;
  std::vector<std::uint64_t> masks;
  std::vector<std::uint32_t> ids;

  std::optional<std::uint32_t> find(const ExponentVector& m) const {
    const std::uint64_t not_m = ~m.divmask();
    for (std::size_t k = 0; k < lms.size(); ++k)
      if ((masks[k] & not_m) == 0 && lms[k].divides(m)) return ids[k];
    return std::nullopt;
  }

  void insert_at(std::size_t pos, const ExponentVector& lm, std::uint32_t id) {
    lms.insert(lms.begin() + pos, lm);
    masks.insert(masks.begin() + pos, lm.divmask());
    ids.insert(ids.begin() + pos, id);
  }

  void erase_at(std::size_t pos) {
    lms.erase(lms.begin() + pos);
    masks.erase(masks.begin() + pos);
    ids.erase(ids.begin() + pos);
  }
};

// Fully reduces the accumulator contents against monic divisors.
template <class Field, class Lookup>
std::vector<Term<Field>> reduce_accumulated(Accumulator<Field>& acc, const Field& F, Lookup&& lookup) {
  std::vector<Term<Field>> rem;
  Term<Field> t;
  while (acc.pop_leading(t)) {
    const Polynomial<Field>* g = lookup(t.mono);
    if (g == nullptr) {
      rem.push_back(std::move(t));
      continue;
    }
    auto c = F.mul(F.neg(t.coeff), F.inv(g->leading_coeff()));
    acc.add_scaled(g->terms(), 1, c, t.mono / g->leading_monomial());
  }
  return rem;
}

}  // namespace detail

/// Remainder of p on division by G: p - r lies in <G> and no term of r is
/// divisible by a leading monomial of G. Among several divisors the first
/// one in the order of G is used, which makes the result deterministic.
template <class Field>
Polynomial<Field> normal_form(const Polynomial<Field>& p, std::span<const Polynomial<Field>> G) {
  std::vector<const Polynomial<Field>*> divisors;
  for (const auto& g : G) {
    p.check_compatible(g);
    if (!g.is_zero()) divisors.push_back(&g);
  }
  if (p.is_zero()) return p;
  detail::Accumulator<Field> acc(p.field(), p.order());
  acc.add_scaled(p.terms(), 0, p.field().one(), ExponentVector{});
  std::vector<std::uint64_t> masks;
  for (auto* g : divisors) masks.push_back(g->leading_monomial().divmask());
  auto rem = detail::reduce_accumulated(acc, p.field(), [&](const ExponentVector& m) -> const Polynomial<Field>* {
    const std::uint64_t not_m = ~m.divmask();
    for (std::size_t k = 0; k < divisors.size(); ++k)
      if ((masks[k] & not_m) == 0 && divisors[k]->leading_monomial().divides(m)) return divisors[k];
    return nullptr;
  });
  return Polynomial<Field>::from_sorted_terms(p.field(), p.order(), std::move(rem));
}

template <class Field>
Polynomial<Field> normal_form(const Polynomial<Field>& p, const std::vector<Polynomial<Field>>& G) {
  return normal_form(p, std::span<const Polynomial<Field>>(G));
}

/// S-polynomial of two nonzero polynomials.
template <class Field>
Polynomial<Field> s_polynomial(const Polynomial<Field>& f, const Polynomial<Field>& g) {
  f.check_compatible(g);
  const auto& F = f.field();
  auto l = lcm(f.leading_monomial(), g.leading_monomial());
  auto a = f.mul_term(F.inv(f.leading_coeff()), l / f.leading_monomial());
  auto b = g.mul_term(F.inv(g.leading_coeff()), l / g.leading_monomial());
  return a - b;
}

namespace detail {

template <class Field>
class BuchbergerRun {
 public:
  using Poly = Polynomial<Field>;

  BuchbergerRun(const Ideal<Field>& I, const MonomialOrder& order, const BuchbergerOptions& opt)
      : field_(I.field()), order_(order), opt_(opt), acc_(field_, order_), start_(std::chrono::steady_clock::now()) {
    std::vector<Poly> gens;
    for (const auto& g : I.generators()) {
      auto h = g.with_order(order_);
      if (!h.is_zero()) gens.push_back(h.monic());
    }
    homogeneous_ = opt_.selection_weights.has_value() && !gens.empty();
    if (homogeneous_) {
      for (const auto& g : gens)
        if (!is_weighted_homogeneous(g, *opt_.selection_weights, weighted_degree(g.leading_monomial(), *opt_.selection_weights)))
          homogeneous_ = false;
    }
    for (auto& g : gens) {
      Item it;
      it.i = std::uint32_t(inputs_.size());
      it.j = generator_tag;
      it.lcm = g.leading_monomial();
      it.sdeg = selection_degree(it.lcm);
      inputs_.push_back(std::move(g));
      push_item(std::move(it));
    }
  }

  GroebnerBasis<Field> run() {
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), item_after_);
      std::uint32_t id = heap_.back();
      heap_.pop_back();
      if (!alive_[id]) continue;
      alive_[id] = 0;
      --live_;
      const Item it = items_[id];
      check_budget();
      acc_.clear();
      if (it.j == generator_tag) {
        acc_.add_scaled(inputs_[it.i].terms(), 0, field_.one(), ExponentVector{});
      } else {
        const Entry& a = entries_[it.i];
        const Entry& b = entries_[it.j];
        acc_.add_scaled(a.poly.terms(), 1, field_.one(), it.lcm / a.lm);
        acc_.add_scaled(b.poly.terms(), 1, field_.neg(field_.one()), it.lcm / b.lm);
        ++stats_.pairs_reduced;
      }
      auto rem = reduce_accumulated(acc_, field_, [this](const ExponentVector& m) -> const Poly* {
        auto k = table_.find(m);
        return k ? &entries_[*k].poly : nullptr;
      });
      if (rem.empty()) {
        if (it.j != generator_tag) ++stats_.zero_reductions;
        continue;
      }
      auto h = Poly::from_sorted_terms(field_, order_, std::move(rem)).monic();
      if (homogeneous_ && !is_weighted_homogeneous(h, *opt_.selection_weights, it.sdeg))
        throw std::logic_error("remainder of a homogeneous critical pair is not homogeneous");
      insert(std::move(h));
    }
    return finish();
  }

 private:
  static constexpr std::uint32_t generator_tag = 0xffffffffu;

  struct Entry {
    Poly poly;
    ExponentVector lm;
    bool active;
  };

  struct Item {
    std::uint32_t i = 0, j = 0;
    ExponentVector lcm;
    long sdeg = 0;
    std::uint64_t seq = 0;
  };

  long selection_degree(const ExponentVector& m) const {
    return homogeneous_ ? weighted_degree(m, *opt_.selection_weights) : m.total_degree();
  }

  void push_item(Item it) {
    it.seq = seq_++;
    auto id = std::uint32_t(items_.size());
    items_.push_back(it);
    alive_.push_back(1);
    ++live_;
    heap_.push_back(id);
    std::push_heap(heap_.begin(), heap_.end(), item_after_);
    stats_.max_queue = std::max(stats_.max_queue, live_);
  }

  void check_budget() {
    const auto& b = opt_.budget;
    if (b.max_pairs && live_ > b.max_pairs) fail("pairs", "pair queue exceeded " + std::to_string(b.max_pairs));
    if (b.max_reductions && stats_.pairs_reduced >= b.max_reductions)
      fail("reductions", "reductions exceeded " + std::to_string(b.max_reductions));
    if (b.max_time.count() && elapsed() > std::chrono::duration<double, std::milli>(b.max_time))
      fail("time", "wall time exceeded " + std::to_string(b.max_time.count()) + " ms");
  }

  [[noreturn]] void fail(const std::string& which, const std::string& why) {
    stats_.basis_size = table_.ids.size();
    stats_.elapsed_ms = elapsed().count();
    throw budget_exceeded(which, why, stats_);
  }

  std::chrono::duration<double, std::milli> elapsed() const { return std::chrono::steady_clock::now() - start_; }

  // Gebauer-Moeller installation of a new basis element.
  void insert(Poly h) {
    const auto t = std::uint32_t(entries_.size());
    const ExponentVector lm_t = h.leading_monomial();
    entries_.push_back({std::move(h), lm_t, true});

    struct Cand {
      ExponentVector l;
      long deg;
      std::uint32_t k;
      bool coprime;
    };
    std::vector<Cand> cands;
    cands.reserve(table_.ids.size());
    for (std::size_t pos = 0; pos < table_.ids.size(); ++pos) {
      auto k = table_.ids[pos];
      auto l = lcm(table_.lms[pos], lm_t);
      cands.push_back({l, selection_degree(l), k, coprime(table_.lms[pos], lm_t)});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.deg != b.deg) return a.deg < b.deg;
      if (a.l != b.l) return a.l < b.l;
      return a.k < b.k;
    });
    std::vector<ExponentVector> minimal;
    std::vector<std::uint64_t> minimal_masks;
    std::vector<Item> fresh;
    for (std::size_t g = 0; g < cands.size();) {
      std::size_t e = g;
      bool any_coprime = false;
      while (e < cands.size() && cands[e].l == cands[g].l) any_coprime |= cands[e++].coprime;
      const auto& l = cands[g].l;
      const std::uint64_t not_l = ~l.divmask();
      bool covered = false;
      for (std::size_t q = 0; q < minimal.size() && !covered; ++q)
        covered = (minimal_masks[q] & not_l) == 0 && minimal[q].divides(l);
      if (covered) {
        stats_.chain_skipped += e - g;
      } else {
        minimal.push_back(l);
        minimal_masks.push_back(l.divmask());
        if (any_coprime) {
          stats_.coprime_skipped += e - g;
        } else {
          stats_.chain_skipped += e - g - 1;
          fresh.push_back({cands[g].k, t, l, cands[g].deg, 0});
        }
      }
      g = e;
    }

    // Drop queued pairs made redundant by the new leading monomial.
    for (std::uint32_t id : heap_) {
      if (!alive_[id]) continue;
      const Item& p = items_[id];
      if (p.j == generator_tag || !lm_t.divides(p.lcm)) continue;
      if (lcm(entries_[p.i].lm, lm_t) != p.lcm && lcm(entries_[p.j].lm, lm_t) != p.lcm) {
        alive_[id] = 0;
        --live_;
        ++stats_.chain_skipped;
      }
    }
    compact_heap();

    // Retire basis elements whose leading monomial the new one divides.
    for (std::size_t pos = table_.ids.size(); pos-- > 0;) {
      if (lm_t.divides(table_.lms[pos])) {
        entries_[table_.ids[pos]].active = false;
        table_.erase_at(pos);
      }
    }
    auto pos = std::lower_bound(table_.lms.begin(), table_.lms.end(), lm_t,
                                [this](const ExponentVector& a, const ExponentVector& b) { return order_.less(a, b); });
    table_.insert_at(std::size_t(pos - table_.lms.begin()), lm_t, t);

    for (auto& f : fresh) {
      ++stats_.pairs_created;
      push_item(f);
    }
  }

  void compact_heap() {
    if (heap_.size() < 1024 || live_ * 2 > heap_.size()) return;
    std::erase_if(heap_, [this](std::uint32_t id) { return !alive_[id]; });
    std::make_heap(heap_.begin(), heap_.end(), item_after_);
  }

  GroebnerBasis<Field> finish() {
    GroebnerBasis<Field> gb;
    gb.order = order_;
    // Ascending leading monomials: tails only need the already-finished smaller elements.
    DivisorTable done;
    std::vector<Poly> out;
    out.reserve(table_.ids.size());
    for (std::size_t pos = 0; pos < table_.ids.size(); ++pos) {
      const Poly& g = entries_[table_.ids[pos]].poly;
      acc_.clear();
      acc_.add_scaled(g.terms(), 1, field_.one(), ExponentVector{});
      auto tail = reduce_accumulated(acc_, field_, [&](const ExponentVector& m) -> const Poly* {
        auto k = done.find(m);
        return k ? &out[*k] : nullptr;
      });
      std::vector<Term<Field>> ts;
      ts.reserve(tail.size() + 1);
      ts.push_back(g.leading_term());
      for (auto& x : tail) ts.push_back(std::move(x));
      out.push_back(Poly::from_sorted_terms(field_, order_, std::move(ts)));
      done.insert_at(done.lms.size(), g.leading_monomial(), std::uint32_t(out.size() - 1));
    }
    gb.elements = std::move(out);
    stats_.basis_size = gb.elements.size();
    stats_.elapsed_ms = elapsed().count();
    gb.stats = stats_;
    return gb;
  }

  const Field& field_;
  MonomialOrder order_;
  BuchbergerOptions opt_;
  Accumulator<Field> acc_;
  std::chrono::steady_clock::time_point start_;
  bool homogeneous_ = false;

  std::vector<Poly> inputs_;
  std::vector<Entry> entries_;
  DivisorTable table_;
  std::vector<Item> items_;
  std::vector<char> alive_;
  std::vector<std::uint32_t> heap_;
  std::size_t live_ = 0;
  std::uint64_t seq_ = 0;
  GroebnerStats stats_;

  struct ItemAfter {
    const BuchbergerRun* run;
    bool operator()(std::uint32_t a, std::uint32_t b) const {
      const Item& x = run->items_[a];
      const Item& y = run->items_[b];
      if (x.sdeg != y.sdeg) return x.sdeg > y.sdeg;
      auto c = run->order_.compare(x.lcm, y.lcm);
      if (c != 0) return c > 0;
      return x.seq > y.seq;
    }
  } item_after_{this};
};

}  // namespace detail

/// Reduced Groebner basis of I under `order` (Buchberger's algorithm with
/// the Gebauer-Moeller criteria and the normal selection strategy).
/// Throws budget_exceeded when opt.budget runs out.
template <class Field>
GroebnerBasis<Field> buchberger(const Ideal<Field>& I, const MonomialOrder& order, const BuchbergerOptions& opt = {}) {
  detail::BuchbergerRun<Field> run(I, order, opt);
  return run.run();
}

}  // namespace cylink
