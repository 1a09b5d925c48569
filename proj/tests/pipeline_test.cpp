#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace cylink;
using namespace cylink::pipeline;
using namespace cylink::testing;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

BatchOptions options(const fs::path& input, const fs::path& out) {
  BatchOptions o;
  o.weights_file = input.string();
  o.out_dir = out.string();
  o.timings = false;
  o.seed = 3;
  return o;
}

const char* small_systems = "w1,w2,w3,w4,w5\n1,1,1,1,1\n1,1,1,1,2\n2,2,2,3,3\n22,29,49,50,75\n";

}  // namespace

TEST(Batch, QuinticRecord) {
  auto dir = temp_dir("quintic");
  auto in = write_text(dir / "in.csv", "1,1,1,1,1\n");
  auto r = run_batch(options(in, dir / "out"));
  EXPECT_EQ(r.total, 1u);
  EXPECT_EQ(r.ok, 1u);
  EXPECT_EQ(r.exit_code, 0);
  auto rows = read_records_csv((dir / "out" / "records.csv").string());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].status, "ok");
  EXPECT_EQ(rows[0].h30, 1);
  EXPECT_EQ(rows[0].h21, 101);
  EXPECT_EQ(rows[0].nu, 5);
  EXPECT_EQ(rows[0].mu, 1024);
  EXPECT_EQ(rows[0].d, 5);
  auto text = slurp(dir / "out" / "records.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), invariant_csv_header());
  EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
  fs::remove_all(dir);
}

TEST(Batch, ExampleARecord) {
  auto dir = temp_dir("example_a");
  auto in = write_text(dir / "in.csv", "w1,w2,w3,w4,w5\n22,29,49,50,75\n");
  auto r = run_batch(options(in, dir / "out"));
  EXPECT_EQ(r.ok, 1u);
  auto rows = read_records_csv((dir / "out" / "records.csv").string());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].h30, 1);
  EXPECT_EQ(rows[0].h21, 2);
  EXPECT_EQ(rows[0].nu, 27);
  EXPECT_EQ(rows[0].b3, 6);
  // the all-ones member is smooth, so its coefficients are journaled as ones
  std::ifstream j(dir / "out" / "journal.jsonl");
  std::string line;
  std::getline(j, line);
  auto e = json::parse(line);
  EXPECT_EQ(e["coefficients"], json(std::vector<long>(7, 1)));
  EXPECT_EQ(e["screening"]["resample_count"], 0);
  fs::remove_all(dir);
}

TEST(Batch, RerunIsIdempotent) {
  auto dir = temp_dir("rerun");
  auto in = write_text(dir / "in.csv", small_systems);
  auto first = run_batch(options(in, dir / "out"));
  EXPECT_EQ(first.computed, 4u);
  auto bytes = slurp(dir / "out" / "records.csv");
  auto journal = slurp(dir / "out" / "journal.jsonl");
  auto second = run_batch(options(in, dir / "out"));
  EXPECT_EQ(second.computed, 0u);
  EXPECT_EQ(second.reused, 4u);
  EXPECT_EQ(slurp(dir / "out" / "records.csv"), bytes);
  EXPECT_EQ(slurp(dir / "out" / "journal.jsonl"), journal);

  // a fresh directory with the same seed reproduces the records byte for byte, whatever the worker count
  auto o = options(in, dir / "again");
  o.workers = 3;
  run_batch(o);
  EXPECT_EQ(slurp(dir / "again" / "records.csv"), bytes);
  fs::remove_all(dir);
}

TEST(Batch, InterruptedBatchResumes) {
  auto dir = temp_dir("resume");
  auto in = write_text(dir / "in.csv", small_systems);
  run_batch(options(in, dir / "full"));

  auto o = options(in, dir / "part");
  o.max_new_tasks = 2;
  auto a = run_batch(o);
  EXPECT_EQ(a.computed, 2u);
  EXPECT_EQ(a.pending, 2u);
  EXPECT_EQ(a.exit_code, 2);
  auto manifest = json::parse(slurp(dir / "part" / "manifest.json"));
  EXPECT_EQ(manifest["resume_cursor"], 2);
  EXPECT_NE(slurp(dir / "part" / "records.csv").find("pending"), std::string::npos);

  o.max_new_tasks = 0;
  auto b = run_batch(o);
  EXPECT_EQ(b.reused, 2u);
  EXPECT_EQ(b.computed, 2u);
  EXPECT_EQ(b.exit_code, 0);
  EXPECT_EQ(slurp(dir / "part" / "records.csv"), slurp(dir / "full" / "records.csv"));
  fs::remove_all(dir);
}

TEST(Batch, TornJournalLineIsDropped) {
  auto dir = temp_dir("torn");
  auto in = write_text(dir / "in.csv", small_systems);
  auto o = options(in, dir / "out");
  o.max_new_tasks = 3;
  run_batch(o);
  auto full = slurp(dir / "out" / "journal.jsonl");
  // crash in the middle of writing the fourth entry
  std::ofstream(dir / "out" / "journal.jsonl", std::ios::binary | std::ios::app) << "{\"index\":3,\"weights\":[22,29";
  o.max_new_tasks = 0;
  auto r = run_batch(o);
  EXPECT_EQ(r.reused, 3u);
  EXPECT_EQ(r.computed, 1u);
  EXPECT_EQ(r.ok, 4u);
  auto journal = slurp(dir / "out" / "journal.jsonl");
  EXPECT_EQ(journal.rfind(full, 0), 0u);
  EXPECT_EQ(journal.find("[22,29\n"), std::string::npos);
  std::istringstream lines(journal);
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    EXPECT_NO_THROW(json::parse(line));
    ++n;
  }
  EXPECT_EQ(n, 4u);
  run_batch(options(in, dir / "clean"));
  EXPECT_EQ(slurp(dir / "out" / "records.csv"), slurp(dir / "clean" / "records.csv"));
  fs::remove_all(dir);
}

TEST(Batch, SettingsMismatchRefused) {
  auto dir = temp_dir("mismatch");
  auto in = write_text(dir / "in.csv", "1,1,1,1,1\n");
  run_batch(options(in, dir / "out"));
  auto o = options(in, dir / "out");
  o.seed = 4;
  EXPECT_THROW(run_batch(o), error);
  fs::remove_all(dir);
}

TEST(Batch, TimeoutsAreRecordedAndRetried) {
  auto dir = temp_dir("timeout");
  auto in = write_text(dir / "in.csv", "1,1,1,1,1\n1,1,1,1,2\n");
  auto o = options(in, dir / "out");
  o.budget = GroebnerBudget{0, 3, std::chrono::milliseconds(0)};
  auto r = run_batch(o);
  EXPECT_EQ(r.timeout, 2u);
  EXPECT_EQ(r.exit_code, 2);
  auto rows = read_records_csv((dir / "out" / "records.csv").string());
  EXPECT_EQ(rows[0].status, "timeout");
  EXPECT_FALSE(rows[0].h21.has_value());
  EXPECT_EQ(run_batch(o).computed, 0u);
  o.retry_failed = true;
  EXPECT_EQ(run_batch(o).computed, 2u);
  fs::remove_all(dir);
}

TEST(Batch, HardSystemsExcludedByDefault) {
  auto dir = temp_dir("hard");
  auto in = write_text(dir / "in.csv", "1,1,1,1,1\n42,28,12,1,1\n");
  auto r = run_batch(options(in, dir / "out"));
  EXPECT_EQ(r.excluded_hard, 1u);
  EXPECT_EQ(r.total, 1u);
  EXPECT_EQ(json::parse(slurp(dir / "out" / "manifest.json"))["excluded_hard"], 1);
  EXPECT_TRUE(is_hard({140, 93, 40, 6, 1}));
  EXPECT_FALSE(is_hard(example_a));
  EXPECT_EQ(hard_list().size(), 6u);
  fs::remove_all(dir);
}

TEST(Ingest, CyHodge) {
  auto dir = temp_dir("ingest");
  auto t = ingest_cy_hodge(write_text(dir / "a.csv", "1,1,1,1,1,101\n").string());
  EXPECT_EQ(t.h21.at({1, 1, 1, 1, 1}), 101);
  auto h = ingest_cy_hodge(write_text(dir / "b.csv", "w1,w2,w3,w4,w5,h21_cy\n75,50,49,29,22,2\n").string());
  EXPECT_EQ(h.h21.at(example_a), 2);
  EXPECT_THROW(ingest_cy_hodge(write_text(dir / "c.csv", "1,1,1,1,2,86\n2,1,1,1,1,86\n").string()), parse_error);
  EXPECT_THROW(ingest_cy_hodge(write_text(dir / "d.csv", "1,1,1,1,1,-4\n").string()), parse_error);
  EXPECT_THROW(ingest_cy_hodge(write_text(dir / "e.csv", "1,1,0,1,1,4\n").string()), parse_error);
  EXPECT_THROW(ingest_cy_hodge(write_text(dir / "f.csv", "w1,w2,w3,w4,w5,h\n1,1,1,1,1,4\n").string()), parse_error);
  auto empty = ingest_cy_hodge(write_text(dir / "g.csv", "").string());
  EXPECT_TRUE(empty.h21.empty());
  EXPECT_EQ(empty.warnings.size(), 1u);
  EXPECT_THROW(ingest_cy_hodge((dir / "missing.csv").string()), parse_error);
  fs::remove_all(dir);
}

TEST(Ingest, PublishedInvariants) {
  auto dir = temp_dir("published");
  auto p = write_text(dir / "p.csv", "w1,w2,w3,w4,w5,gb_length,h21,nu\n1,1,1,1,1,5,101,5\n75,50,49,29,22,,2,27\n");
  auto t = ingest_published_invariants(p.string());
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows.at(quintic).gb_length, 5);
  EXPECT_FALSE(t.rows.at(example_a).gb_length.has_value());
  EXPECT_EQ(t.rows.at(example_a).nu, 27);
  EXPECT_FALSE(t.rows.at(example_a).mu.has_value());
  EXPECT_THROW(ingest_published_invariants(write_text(dir / "q.csv", "w1,w2,w3,w4,w5,foo\n1,1,1,1,1,3\n").string()), parse_error);
  EXPECT_THROW(ingest_published_invariants(write_text(dir / "r.csv", "w1,w2,w3,w4,w5,h21\n1,1,1,1,1,x\n").string()), parse_error);
  fs::remove_all(dir);
}

TEST(Ingest, FixtureWeightsFile) {
  auto rows = read_weights_file(data_path("weights_small.csv"));
  EXPECT_EQ(rows.size(), 1271u);
  std::set<Weights> seen;
  for (const auto& r : rows) {
    EXPECT_TRUE(r.h21_cy.has_value());
    EXPECT_TRUE(seen.insert(canonical(r.w)).second);
  }
  EXPECT_EQ(rows.front().w, quintic);
  EXPECT_EQ(rows.front().h21_cy, 101);
}

TEST(Conjecture, Check) {
  CyHodgeTable cy;
  cy.h21[quintic] = 101;
  cy.h21[example_a] = 5;
  cy.h21[canonical({1, 1, 1, 1, 2})] = 103;
  std::vector<std::pair<Weights, long>> computed{{quintic, 101}, {{75, 50, 49, 29, 22}, 2}, {{2, 1, 1, 1, 1}, 104}, {example_b, 7}};
  auto r = conjecture_check(computed, cy);
  EXPECT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.violations, 1u);
  EXPECT_EQ(r.equalities, 1u);
  ASSERT_EQ(r.missing.size(), 1u);
  EXPECT_EQ(r.missing[0], example_b);
  ASSERT_TRUE(r.pmcc.has_value());
  EXPECT_NEAR(*r.pmcc, learn::pmcc(std::vector<double>{101, 2, 104}, std::vector<double>{101, 5, 103}), 1e-12);
  auto j = to_json(r);
  EXPECT_EQ(j["violating_systems"].size(), 1u);
  EXPECT_EQ(j["violating_systems"][0]["h21_cy"], 103);
}

TEST(Predictions, RemainingSystems) {
  CyHodgeTable cy;
  const std::vector<long> bounds{348, 387, 462, 491, 246, 275};
  for (std::size_t i = 0; i < 6; ++i) cy.h21[hard_list()[i]] = bounds[i];
  auto preds = predict_remaining(hard_list(), nullptr, nullptr, &cy);
  const std::vector<long> expected{338, 377, 447, 476, 243, 272};
  ASSERT_EQ(preds.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(preds[i].sr_h21, expected[i]) << to_string(preds[i].w);
    EXPECT_EQ(preds[i].h21_cy, bounds[i]);
    EXPECT_TRUE(preds[i].within_bound);
    EXPECT_FALSE(preds[i].nn_h21.has_value());
  }
  auto row = prediction_csv_row(preds[0]);
  EXPECT_EQ(row.rfind("1,1,8,19,28,,,338,", 0), 0u) << row;
  EXPECT_NE(row.find(",348,true"), std::string::npos);

  learn::TrainConfig cfg;
  cfg.epochs = 2;
  learn::Dataset d;
  d.add(quintic, 101);
  d.add(example_a, 2);
  auto m = learn::train(d, cfg).model;
  auto with_nn = predict_remaining({quintic}, &m, &m);
  EXPECT_TRUE(with_nn[0].nn_gb_length.has_value());
  EXPECT_EQ(*with_nn[0].nn_h21, m.predict(quintic));
}

TEST(Plots, EmitsFiles) {
  auto dir = temp_dir("plots");
  RecordRow r;
  r.w = example_a;
  r.status = "ok";
  r.h21 = 2;
  r.gb_length = 40;
  r.nu = 27;
  RecordRow q = r;
  q.w = quintic;
  q.h21 = 101;
  q.nu = 5;
  RecordRow bad = r;
  bad.status = "timeout";
  CyHodgeTable cy;
  cy.h21[quintic] = 101;
  PlotInputs in{{r, q, bad}, &cy, {{1, 1.5}, {2, 2.5}}, 10};
  auto files = emit_plots(in, (dir / "plots").string());
  for (const char* f : {"gb_length_hist.csv", "h21_hist.svg", "nu_hist.csv", "hs_vs_hcy.csv", "pred_vs_true.svg"})
    EXPECT_NE(std::find(files.begin(), files.end(), f), files.end()) << f;
  for (const auto& f : files) EXPECT_TRUE(fs::exists(dir / "plots" / f)) << f;
  auto nu = slurp(dir / "plots" / "nu_hist.csv");
  EXPECT_NE(nu.find("\n27,1\n"), std::string::npos);
  EXPECT_NE(nu.find("\n5,1\n"), std::string::npos);
  EXPECT_NE(nu.find("\n25,0\n"), std::string::npos);
  auto scatter = slurp(dir / "plots" / "hs_vs_hcy.csv");
  EXPECT_NE(scatter.find("1,1,1,1,1,101,101"), std::string::npos);
  EXPECT_EQ(scatter.find("22,29"), std::string::npos);

  PlotInputs single{{r}, nullptr, {}, 30};
  emit_plots(single, (dir / "single").string());
  auto only = slurp(dir / "single" / "nu_hist.csv");
  std::size_t nonzero = 0;
  std::istringstream lines(only);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) nonzero += line.substr(line.find(',') + 1) != "0";
  EXPECT_EQ(nonzero, 1u);

  EXPECT_THROW(emit_plots(PlotInputs{{bad}, nullptr, {}, 30}, (dir / "none").string()), domain_error);
  fs::remove_all(dir);
}
