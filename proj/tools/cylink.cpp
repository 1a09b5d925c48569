// Command line front end: one subcommand per library operation.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "cylink/cylink.hpp"

using namespace cylink;
namespace pl = cylink::pipeline;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string field = "gf:32003";
  std::string order = "degrevlex";
  unsigned workers = 1;
  std::string budget = "time=600,pairs=2000000";
};

Weights parse_weights(const std::vector<std::string>& args) {
  std::vector<long> v;
  for (const auto& a : args) {
    std::stringstream ss(a);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = pl::detail::trim(tok);
      if (tok.empty()) continue;
      long x;
      if (!pl::detail::parse_long(tok, x)) throw parse_error("bad weight '" + tok + "'");
      v.push_back(x);
    }
  }
  if (v.size() != num_vars) throw parse_error("expected 5 weights, got " + std::to_string(v.size()));
  Weights w{};
  std::copy(v.begin(), v.end(), w.begin());
  return w;
}

// "600" (seconds) or "time=600,pairs=N,reductions=N"; 0 means unlimited.
GroebnerBudget parse_budget(const std::string& s) {
  GroebnerBudget b;
  long v;
  if (pl::detail::parse_long(s, v)) {
    b.max_time = std::chrono::seconds(v);
    return b;
  }
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto eq = tok.find('=');
    if (eq == std::string::npos || !pl::detail::parse_long(tok.substr(eq + 1), v) || v < 0)
      throw parse_error("bad budget entry '" + tok + "'");
    auto key = tok.substr(0, eq);
    if (key == "time") b.max_time = std::chrono::seconds(v);
    else if (key == "pairs") b.max_pairs = std::size_t(v);
    else if (key == "reductions") b.max_reductions = std::size_t(v);
    else throw parse_error("unknown budget key '" + key + "'");
  }
  return b;
}

// "gf:32003", "32003" or "rational"
std::optional<std::uint32_t> parse_field(const std::string& s) {
  if (s == "rational" || s == "q" || s == "Q") return std::nullopt;
  std::string t = s.rfind("gf:", 0) == 0 ? s.substr(3) : s;
  long p;
  if (!pl::detail::parse_long(t, p) || p < 2) throw parse_error("bad field '" + s + "'");
  return std::uint32_t(p);
}

std::vector<long> parse_coeffs(const std::string& s) {
  std::vector<long> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    long x;
    if (!pl::detail::parse_long(pl::detail::trim(tok), x)) throw parse_error("bad coefficient '" + tok + "'");
    v.push_back(x);
  }
  return v;
}

// Coefficients from --coeffs, or from the screening protocol.
std::vector<long> pick_coefficients(const WeightSystem& ws, const std::string& coeffs, const Globals& g) {
  if (coeffs == "ones") return std::vector<long>(monomial_basis(ws).size(), 1);
  if (!coeffs.empty() && coeffs != "sample") return parse_coeffs(coeffs);
  ScreeningOptions so;
  so.budget = parse_budget(g.budget);
  return sample_smooth_polynomial(ws, task_seed(g.seed, ws.weights()), so).coefficients;
}

template <class Fn>
auto with_field(const Globals& g, Fn&& fn) {
  auto p = parse_field(g.field);
  if (p) return fn(PrimeField(*p));
  return fn(RationalField());
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw error("cannot write " + path);
  out << j.dump(2) << '\n';
}

learn::Dataset dataset_from(const std::string& records, const std::string& published, const std::string& target) {
  learn::Dataset d;
  auto pick = [&](const std::optional<long>& gb, const std::optional<long>& h21, const std::optional<long>& nu) {
    return target == "gb_length" ? gb : target == "h21" ? h21 : nu;
  };
  if (!records.empty()) {
    for (const auto& r : pl::read_records_csv(records)) {
      if (r.status != "ok") continue;
      auto v = pick(r.gb_length, r.h21, r.nu);
      if (v) d.add(r.w, double(*v));
    }
  }
  if (!published.empty()) {
    for (const auto& [k, r] : pl::ingest_published_invariants(published).rows) {
      auto v = pick(r.gb_length, r.h21, r.nu);
      if (v) d.add(k, double(*v));
    }
  }
  if (d.size() == 0) throw error("no rows with target '" + target + "'");
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calabi-Yau link invariants: Groebner engine, batch pipeline and surrogates"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "global seed")->capture_default_str();
  app.add_option("--field", g.field, "gf:<p> or rational")->capture_default_str();
  app.add_option("--order", g.order, "degrevlex | deglex | lex | w<order>(w1,...,w5)")->capture_default_str();
  app.add_option("--workers", g.workers, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--budget", g.budget, "per-ideal budget: seconds, or time=S,pairs=N,reductions=N")->capture_default_str();

  std::vector<std::string> wargs;
  std::string coeffs, json_out, out_dir, input, kind, records, cy, published, target = "h21", model_out, report_out, gb_model,
                                                                               h21_model;
  bool include_hard = false, retry_failed = false, extrapolation = false, formula_only = false;
  std::string timings = "on";
  std::size_t max_tasks = 0, perms = 10, polys = 50, k = 5;
  int epochs = 500, generations = 40;
  std::size_t population = 1000;
  double parsimony = 0.001;

  auto* basis = app.add_subcommand("basis", "degree-d monomials of a weight system");
  basis->add_option("weights", wargs, "w1 w2 w3 w4 w5 or w1,w2,w3,w4,w5")->required();

  auto* sample = app.add_subcommand("sample", "screen for a member with an isolated singularity");
  sample->add_option("weights", wargs)->required();
  sample->add_option("--json", json_out, "write candidate JSON here (default stdout)");

  auto add_poly_opts = [&](CLI::App* s) {
    s->add_option("weights", wargs)->required();
    s->add_option("--coeffs", coeffs, "ones | sample | comma list in basis order")->default_val("ones");
  };
  auto* groebner = app.add_subcommand("groebner", "Groebner basis of the Jacobian ideal");
  add_poly_opts(groebner);
  groebner->add_option("--json", json_out, "write the basis as JSON");
  auto* hodge = app.add_subcommand("hodge", "Sasakian Hodge numbers");
  add_poly_opts(hodge);
  auto* cn = app.add_subcommand("cn", "Milnor number, Steenbrink signature and CN invariant");
  add_poly_opts(cn);

  auto* batch = app.add_subcommand("batch", "invariants for every system of a weights file");
  batch->add_option("--input", input, "CSV with w1..w5[,h21_cy]")->required();
  batch->add_option("--out", out_dir, "output directory")->required();
  batch->add_flag("--include-hard", include_hard, "also run the known expensive systems");
  batch->add_option("--timings", timings, "on | off")->check(CLI::IsMember({"on", "off"}));
  batch->add_flag("--retry-failed", retry_failed, "recompute journaled timeouts and errors");
  batch->add_option("--max-tasks", max_tasks, "stop after this many new tasks");

  auto* weak = app.add_subcommand("check-weak-r", "invariants across permutations and random coefficients");
  weak->add_option("weights", wargs)->required();
  weak->add_option("--perms", perms)->capture_default_str();
  weak->add_option("--polys", polys)->capture_default_str();
  weak->add_option("--json", json_out, "write the full report here");

  auto* ingest = app.add_subcommand("ingest", "validate and summarize an external table");
  ingest->add_option("file", input)->required();
  ingest->add_option("--kind", kind)->required()->check(CLI::IsMember({"cy_hodge", "published_invariants"}));

  auto* conj = app.add_subcommand("conjecture", "check h21 of links against Calabi-Yau h21");
  conj->add_option("--records", records, "records.csv from a batch");
  conj->add_option("--published", published, "published invariants CSV");
  conj->add_option("--cy", cy, "CY Hodge CSV")->required();
  conj->add_option("--json", json_out);

  auto* trainc = app.add_subcommand("train", "cross-validate and fit the regressor");
  trainc->add_option("--records", records);
  trainc->add_option("--published", published);
  trainc->add_option("--target", target)->check(CLI::IsMember({"h21", "gb_length", "cn-probe"}))->capture_default_str();
  trainc->add_option("--k", k)->capture_default_str();
  trainc->add_option("--epochs", epochs)->capture_default_str();
  trainc->add_flag("--extrapolation", extrapolation, "train on the 95% smallest targets, test on the rest");
  trainc->add_option("--model", model_out, "write the model fitted on all rows");
  trainc->add_option("--report", report_out, "write the report JSON (default stdout)");

  auto* sr = app.add_subcommand("symreg", "genetic-programming search for a closed form");
  sr->add_option("--records", records);
  sr->add_option("--published", published);
  sr->add_option("--target", target)->check(CLI::IsMember({"h21", "gb_length"}))->capture_default_str();
  sr->add_option("--population", population)->capture_default_str();
  sr->add_option("--generations", generations)->capture_default_str();
  sr->add_option("--parsimony", parsimony)->capture_default_str();
  sr->add_option("--json", json_out);

  auto* predict = app.add_subcommand("predict", "surrogate predictions (default: the expensive systems)");
  predict->add_option("--input", input, "weights CSV");
  predict->add_option("--gb-model", gb_model);
  predict->add_option("--h21-model", h21_model);
  predict->add_flag("--formula-only", formula_only, "only the closed-form h21 formula");
  predict->add_option("--cy", cy, "CY Hodge CSV for the bound check");

  auto* plots = app.add_subcommand("plots", "histogram and scatter data with SVG renderings");
  plots->add_option("--records", records)->required();
  plots->add_option("--cy", cy);
  plots->add_option("--out", out_dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    MonomialOrder order = MonomialOrder::parse(g.order);
    if (*basis) {
      auto ws = validate_weight_system(parse_weights(wargs));
      auto b = monomial_basis(ws);
      std::cout << "# " << ws.to_string() << " d=" << ws.degree() << " terms=" << b.size() << '\n';
      for (const auto& m : b) std::cout << m.to_string() << '\n';
    } else if (*sample) {
      auto ws = validate_weight_system(parse_weights(wargs));
      ScreeningOptions so;
      so.budget = parse_budget(g.budget);
      write_json(to_json(sample_smooth_polynomial(ws, task_seed(g.seed, ws.weights()), so)), json_out);
    } else if (*groebner || *hodge || *cn) {
      auto ws = validate_weight_system(parse_weights(wargs));
      auto c = pick_coefficients(ws, coeffs, g);
      InvariantOptions io;
      io.order = order;
      io.budget = parse_budget(g.budget);
      std::uint32_t p = parse_field(g.field).value_or(0);
      return with_field(g, [&](const auto& F) {
        auto f = build_polynomial(ws, c, F, order);
        if (*groebner) {
          std::vector<std::decay_t<decltype(f)>> gens;
          for (auto& d : jacobian(f))
            if (!d.is_zero()) gens.push_back(d);
          BuchbergerOptions bo;
          bo.budget = io.budget;
          bo.selection_weights = ws.weights();
          std::cout << groebner_summary_header() << '\n';
          try {
            auto G = buchberger(Ideal(gens), order, bo);
            long count = is_zero_dimensional(G) ? long(standard_monomials(G, ws).size()) : -1;
            std::cout << groebner_summary_row(ws.weights(), p, order, long(G.length()), count, G.stats.elapsed_ms, "ok") << '\n';
            if (!json_out.empty()) write_json(to_json(G), json_out);
          } catch (const budget_exceeded& b) {
            std::cout << groebner_summary_row(ws.weights(), p, order, long(b.stats().basis_size), -1, b.stats().elapsed_ms, "timeout")
                      << '\n';
            return 2;
          }
          return 0;
        }
        auto inv = compute_link_invariants(f, ws, io);
        for (const auto& w : inv.warnings) std::cerr << "warning: " << w << '\n';
        if (*hodge) {
          std::cout << "h30=" << inv.hodge.h30 << " h21=" << inv.hodge.h21 << " b3=" << inv.hodge.b3 << '\n';
        } else {
          std::cout << "mu=" << inv.mu << " mu_plus=" << inv.signature.mu_plus << " mu_zero=" << inv.signature.mu_zero
                    << " mu_minus=" << inv.signature.mu_minus << " nu=" << inv.cn.nu << " raw=" << inv.cn.raw << '\n';
        }
        return 0;
      });
    } else if (*batch) {
      pl::BatchOptions bo;
      bo.weights_file = input;
      bo.out_dir = out_dir;
      bo.workers = g.workers;
      bo.seed = g.seed;
      auto p = parse_field(g.field);
      if (!p) throw error("batch runs need a prime field");
      bo.prime = *p;
      bo.order = order;
      bo.budget = parse_budget(g.budget);
      bo.include_hard = include_hard;
      bo.timings = timings == "on";
      bo.retry_failed = retry_failed;
      bo.max_new_tasks = max_tasks;
      auto r = pl::run_batch(bo);
      std::cerr << "systems=" << r.total << " computed=" << r.computed << " reused=" << r.reused << " ok=" << r.ok
                << " timeout=" << r.timeout << " error=" << r.error << " pending=" << r.pending << " excluded_hard=" << r.excluded_hard
                << '\n';
      return r.exit_code;
    } else if (*weak) {
      auto ws = validate_weight_system(parse_weights(wargs));
      CampaignOptions co;
      co.n_permutations = perms;
      co.n_polys_per_perm = polys;
      co.seed = g.seed;
      co.workers = g.workers;
      co.budget = parse_budget(g.budget);
      co.prime = parse_field(g.field).value_or(0);
      auto rep = weak_r_equivalence_campaign(ws, co);
      std::cout << "invariants_agree=" << (rep.invariants_agree ? "true" : "false") << " h30=" << rep.h30 << " h21=" << rep.h21
                << " nu=" << rep.nu << " failed_cells=" << rep.failed_cells << " resamples=" << rep.total_resamples << '\n';
      for (std::size_t i = 0; i < rep.permutations.size(); ++i)
        std::cout << ws.permuted(rep.permutations[i]).to_string() << " gb_length=" << rep.gb_lengths[i]
                  << (rep.gb_length_constant[i] ? " constant" : " varies") << '\n';
      if (!json_out.empty()) write_json(to_json(rep), json_out);
      return rep.invariants_agree && rep.failed_cells == 0 ? 0 : 2;
    } else if (*ingest) {
      if (kind == "cy_hodge") {
        auto t = pl::ingest_cy_hodge(input);
        for (const auto& w : t.warnings) std::cerr << "warning: " << w << '\n';
        std::cout << "rows=" << t.h21.size() << '\n';
      } else {
        auto t = pl::ingest_published_invariants(input);
        for (const auto& w : t.warnings) std::cerr << "warning: " << w << '\n';
        std::cout << "rows=" << t.rows.size() << '\n';
      }
    } else if (*conj) {
      auto table = pl::ingest_cy_hodge(cy);
      std::vector<std::pair<Weights, long>> hs;
      if (!records.empty()) hs = pl::h21_of(pl::read_records_csv(records));
      if (!published.empty()) {
        auto more = pl::h21_of(pl::ingest_published_invariants(published));
        hs.insert(hs.end(), more.begin(), more.end());
      }
      auto rep = pl::conjecture_check(hs, table);
      write_json(to_json(rep), json_out);
      return rep.violations ? 2 : 0;
    } else if (*trainc) {
      learn::TrainConfig tc;
      tc.seed = g.seed;
      tc.epochs = epochs;
      json out;
      if (target == "cn-probe") {
        auto d = dataset_from(records, published, "nu");
        out = to_json(learn::binary_probe(d, 1, 25, tc, k, g.workers));
      } else {
        auto d = dataset_from(records, published, target);
        out = extrapolation ? to_json(learn::extrapolation_split(d, tc)) : to_json(learn::cross_validate(d, tc, k, g.workers));
        if (!model_out.empty()) write_json(to_json(learn::train(d, tc).model), model_out);
      }
      out["target"] = target;
      write_json(out, report_out);
    } else if (*sr) {
      auto d = dataset_from(records, published, target);
      std::vector<std::array<double, num_vars>> X;
      for (const auto& w : d.weights) X.push_back(learn::features(w));
      symreg::GPConfig gc;
      gc.seed = g.seed;
      gc.population = population;
      gc.generations = generations;
      gc.parsimony = parsimony;
      gc.workers = g.workers;
      auto res = symreg::evolve(X, d.targets, gc);
      json arr = json::array();
      for (const auto& r : res.ranked) {
        std::cout << "size=" << r.expr.size() << " train_mae=" << r.train_mae << " val_mae=" << r.validation_mae << "  "
                  << r.expr.to_infix() << '\n';
        arr.push_back(symreg::to_json(r));
      }
      if (!json_out.empty()) write_json(arr, json_out);
    } else if (*predict) {
      std::vector<Weights> systems;
      if (input.empty()) systems = pl::hard_list();
      else
        for (const auto& r : pl::read_weights_file(input)) systems.push_back(r.w);
      std::optional<learn::Regressor> gm, hm;
      auto load = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw error("cannot read " + path);
        return learn::regressor_from_json(json::parse(in));
      };
      if (!formula_only) {
        if (gb_model.empty() || h21_model.empty()) throw error("predict needs --gb-model and --h21-model (or --formula-only)");
        gm = load(gb_model);
        hm = load(h21_model);
      }
      std::optional<pl::CyHodgeTable> table;
      if (!cy.empty()) table = pl::ingest_cy_hodge(cy);
      auto preds = pl::predict_remaining(systems, gm ? &*gm : nullptr, hm ? &*hm : nullptr, table ? &*table : nullptr);
      std::cout << pl::prediction_csv_header() << '\n';
      for (const auto& p : preds) std::cout << pl::prediction_csv_row(p) << '\n';
    } else if (*plots) {
      pl::PlotInputs pi;
      pi.records = pl::read_records_csv(records);
      std::optional<pl::CyHodgeTable> table;
      if (!cy.empty()) {
        table = pl::ingest_cy_hodge(cy);
        pi.cy = &*table;
      }
      for (const auto& f : pl::emit_plots(pi, out_dir)) std::cout << f << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
