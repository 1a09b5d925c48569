#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "cylink/algebra/io.hpp"
#include "cylink/invariants/invariants.hpp"
#include "cylink/links/screening.hpp"
#include "cylink/parallel.hpp"
#include "cylink/pipeline/tables.hpp"
#include "cylink/random.hpp"

namespace cylink::pipeline {

namespace fs = std::filesystem;

/// Weight systems whose Groebner computations are known to be far more
/// expensive than the rest; skipped unless explicitly requested.
inline const std::vector<Weights>& hard_list() {
  static const std::vector<Weights> hard{{1, 1, 8, 19, 28},  {1, 1, 9, 21, 32},   {1, 1, 11, 26, 39},
                                         {1, 1, 12, 28, 42}, {1, 6, 34, 81, 122}, {1, 6, 40, 93, 140}};
  return hard;
}

inline bool is_hard(const Weights& w) {
  auto c = canonical(w);
  for (const auto& h : hard_list())
    if (h == c) return true;
  return false;
}

struct BatchOptions {
  std::string weights_file;
  std::string out_dir;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  std::uint32_t prime = 32003;
  MonomialOrder order;
  GroebnerBudget budget{2'000'000, 0, std::chrono::minutes(10)};
  int retry_cap = 25;
  bool include_hard = false;
  /// Write elapsed times; off makes records.csv byte-identical across runs.
  bool timings = true;
  /// Recompute entries whose journaled status is not ok.
  bool retry_failed = false;
  /// Stop scheduling after this many new tasks (0 = no limit).
  std::size_t max_new_tasks = 0;
};

struct BatchResult {
  std::size_t total = 0;
  std::size_t computed = 0;
  std::size_t reused = 0;
  std::size_t ok = 0, timeout = 0, error = 0, pending = 0;
  std::size_t excluded_hard = 0;
  int exit_code = 0;  ///< 0 all ok, 2 some records not ok or pending
};

namespace detail {

inline json budget_json(const GroebnerBudget& b) {
  return {{"max_pairs", b.max_pairs}, {"max_reductions", b.max_reductions}, {"max_time_ms", b.max_time.count()}};
}

inline json manifest_identity(const BatchOptions& opt, const std::vector<Weights>& tasks) {
  return {{"weights", tasks},
          {"seed", opt.seed},
          {"field", {{"kind", "gf"}, {"p", opt.prime}}},
          {"order", opt.order.name()},
          {"budget", budget_json(opt.budget)},
          {"retry_cap", opt.retry_cap},
          {"timings", opt.timings}};
}

inline void write_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

// Reads the journal; a torn trailing line is cut off so appends stay well formed.
inline std::vector<json> load_journal(const fs::path& path) {
  std::vector<json> entries;
  if (!fs::exists(path)) return entries;
  std::string data;
  {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    data = ss.str();
  }
  std::size_t pos = 0, good = 0;
  while (pos < data.size()) {
    auto nl = data.find('\n', pos);
    if (nl == std::string::npos) break;
    try {
      entries.push_back(json::parse(data.substr(pos, nl - pos)));
    } catch (const json::exception&) {
      break;
    }
    pos = nl + 1;
    good = pos;
  }
  if (good < data.size()) fs::resize_file(path, good);
  return entries;
}

inline json run_task(const Weights& w, std::size_t index, const BatchOptions& opt) {
  const std::uint64_t seed = task_seed(opt.seed, w);
  json e{{"index", index}, {"weights", w}, {"seed", seed}};
  std::string stage = "validate";
  try {
    WeightSystem ws = validate_weight_system(w);
    stage = "screening";
    ScreeningOptions so;
    so.retry_cap = opt.retry_cap;
    so.budget = opt.budget;
    auto cand = sample_smooth_polynomial(ws, seed, so);
    e["coefficients"] = cand.coefficients;
    e["screening"] = to_json(cand.screening);
    stage = "groebner";
    InvariantOptions io;
    io.order = opt.order;
    io.budget = opt.budget;
    auto inv = compute_link_invariants(cand.polynomial(PrimeField(opt.prime), opt.order), ws, io);
    e["status"] = "ok";
    e["record"] = {{"d", ws.degree()},
                   {"gb_length", inv.gb_length},
                   {"mu", inv.mu},
                   {"mu_plus", inv.signature.mu_plus},
                   {"mu_zero", inv.signature.mu_zero},
                   {"mu_minus", inv.signature.mu_minus},
                   {"h30", inv.hodge.h30},
                   {"h21", inv.hodge.h21},
                   {"b3", inv.hodge.b3},
                   {"nu", inv.cn.nu},
                   {"nu_raw", inv.cn.raw},
                   {"elapsed_gb_ms", opt.timings ? inv.elapsed_gb_ms : 0.0},
                   {"elapsed_inv_ms", opt.timings ? inv.elapsed_inv_ms : 0.0}};
    if (!inv.warnings.empty()) e["warnings"] = inv.warnings;
  } catch (const budget_exceeded& b) {
    e["status"] = "timeout";
    e["stage"] = stage;
    e["message"] = b.what();
  } catch (const cylink::error& x) {
    e["status"] = "error";
    e["stage"] = stage;
    e["message"] = x.what();
  }
  return e;
}

inline std::string record_row(const Weights& w, const json* e, bool timings) {
  std::ostringstream os;
  long d = 0;
  for (long x : w) {
    os << x << ',';
    d += x;
  }
  os << d << ',';
  if (e && e->at("status") == "ok") {
    const auto& r = e->at("record");
    os << r["gb_length"] << ',' << r["mu"] << ',' << r["mu_plus"] << ',' << r["mu_zero"] << ',' << r["mu_minus"] << ',' << r["h30"]
       << ',' << r["h21"] << ',' << r["b3"] << ',' << r["nu"] << ",ok," << (timings ? format_ms(r["elapsed_gb_ms"]) : "0") << ','
       << (timings ? format_ms(r["elapsed_inv_ms"]) : "0");
  } else {
    os << ",,,,,,,,," << (e ? e->at("status").get<std::string>() : "pending") << ",,";
  }
  return os.str();
}

// Single consumer of finished entries: appends each as one journal line.
class JournalWriter {
 public:
  explicit JournalWriter(const fs::path& path) : out_(path, std::ios::binary | std::ios::app) {
    if (!out_) throw error("cannot append to " + path.string());
    thread_ = std::thread([this] { loop(); });
  }
  ~JournalWriter() { close(); }

  void push(json e) {
    {
      std::lock_guard lock(mu_);
      queue_.push_back(std::move(e));
    }
    cv_.notify_one();
  }

  void close() {
    {
      std::lock_guard lock(mu_);
      if (done_) return;
      done_ = true;
    }
    cv_.notify_one();
    thread_.join();
  }

 private:
  void loop() {
    std::unique_lock lock(mu_);
    while (true) {
      cv_.wait(lock, [this] { return done_ || !queue_.empty(); });
      while (!queue_.empty()) {
        json e = std::move(queue_.front());
        queue_.pop_front();
        lock.unlock();
        out_ << e.dump() << '\n';
        out_.flush();
        lock.lock();
      }
      if (done_) return;
    }
  }

  std::ofstream out_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<json> queue_;
  bool done_ = false;
  std::thread thread_;
};

}  // namespace detail

/// Computes invariants for every weight system of the input file into
/// out_dir (manifest.json, journal.jsonl, records.csv). Entries already in
/// the journal are reused, so an interrupted batch resumes where it stopped.
inline BatchResult run_batch(const BatchOptions& opt) {
  auto rows = read_weights_file(opt.weights_file);
  BatchResult res;
  std::vector<Weights> tasks;
  for (const auto& r : rows) {
    if (!opt.include_hard && is_hard(r.w)) {
      ++res.excluded_hard;
      continue;
    }
    tasks.push_back(r.w);
  }
  res.total = tasks.size();

  fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  const fs::path manifest_path = dir / "manifest.json", journal_path = dir / "journal.jsonl", records_path = dir / "records.csv";
  json identity = detail::manifest_identity(opt, tasks);
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    json old;
    try {
      old = json::parse(in);
    } catch (const json::exception&) {
      throw error(manifest_path.string() + " is not valid JSON");
    }
    if (old.value("batch", json()) != identity)
      throw error(opt.out_dir + " holds a batch with different inputs or settings; use a fresh output directory");
  }

  auto journal = detail::load_journal(journal_path);
  std::vector<const json*> latest(tasks.size(), nullptr);
  for (const auto& e : journal) {
    auto i = e.at("index").get<std::size_t>();
    if (i < tasks.size() && e.at("weights").get<Weights>() == tasks[i]) latest[i] = &e;
  }
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    bool done = latest[i] && (latest[i]->at("status") == "ok" || !opt.retry_failed);
    if (done) ++res.reused;
    else todo.push_back(i);
  }
  if (opt.max_new_tasks && todo.size() > opt.max_new_tasks) todo.resize(opt.max_new_tasks);

  json manifest{{"batch", identity}, {"input", opt.weights_file}, {"excluded_hard", res.excluded_hard}};
  detail::write_atomic(manifest_path, manifest.dump(2) + "\n");

  std::vector<json> fresh(todo.size());
  {
    detail::JournalWriter writer(journal_path);
    parallel_for(todo.size(), opt.workers, [&](std::size_t k) {
      fresh[k] = detail::run_task(tasks[todo[k]], todo[k], opt);
      writer.push(fresh[k]);
    });
    writer.close();
  }
  res.computed = todo.size();
  for (std::size_t k = 0; k < todo.size(); ++k) latest[todo[k]] = &fresh[k];

  std::ostringstream csv;
  csv << invariant_csv_header() << '\n';
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    csv << detail::record_row(tasks[i], latest[i], opt.timings) << '\n';
    if (!latest[i]) ++res.pending;
    else if (latest[i]->at("status") == "ok") ++res.ok;
    else if (latest[i]->at("status") == "timeout") ++res.timeout;
    else ++res.error;
  }
  detail::write_atomic(records_path, csv.str());

  manifest["status"] = {{"ok", res.ok}, {"timeout", res.timeout}, {"error", res.error}, {"pending", res.pending}};
  std::size_t cursor = 0;
  while (cursor < tasks.size() && latest[cursor]) ++cursor;
  manifest["resume_cursor"] = cursor;
  detail::write_atomic(manifest_path, manifest.dump(2) + "\n");
  res.exit_code = (res.timeout || res.error || res.pending) ? 2 : 0;
  return res;
}

}  // namespace cylink::pipeline
