#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cylink/learn/train.hpp"
#include "cylink/pipeline/tables.hpp"
#include "cylink/symreg/expression.hpp"

namespace cylink::pipeline {

using json = nlohmann::json;

struct ConjectureRow {
  Weights w{};
  long h_s = 0, h_cy = 0;
  bool holds = false, equal = false;
};

struct ConjectureReport {
  std::vector<ConjectureRow> rows;
  std::size_t violations = 0, equalities = 0;
  std::vector<Weights> missing;  ///< computed systems with no CY value
  std::optional<double> pmcc;
};

/// h_S <= h_CY for every computed system with a known CY value.
inline ConjectureReport conjecture_check(const std::vector<std::pair<Weights, long>>& computed, const CyHodgeTable& cy) {
  ConjectureReport rep;
  std::vector<double> xs, ys;
  for (const auto& [w, hs] : computed) {
    auto it = cy.h21.find(canonical(w));
    if (it == cy.h21.end()) {
      rep.missing.push_back(w);
      continue;
    }
    ConjectureRow r{w, hs, it->second, hs <= it->second, hs == it->second};
    rep.violations += !r.holds;
    rep.equalities += r.equal;
    xs.push_back(double(hs));
    ys.push_back(double(it->second));
    rep.rows.push_back(r);
  }
  try {
    rep.pmcc = learn::pmcc(xs, ys);
  } catch (const domain_error&) {
  }
  return rep;
}

inline std::vector<std::pair<Weights, long>> h21_of(const std::vector<RecordRow>& records) {
  std::vector<std::pair<Weights, long>> out;
  for (const auto& r : records)
    if (r.status == "ok" && r.h21) out.emplace_back(r.w, *r.h21);
  return out;
}

inline std::vector<std::pair<Weights, long>> h21_of(const PublishedTable& t) {
  std::vector<std::pair<Weights, long>> out;
  for (const auto& [k, r] : t.rows)
    if (r.h21) out.emplace_back(k, *r.h21);
  return out;
}

inline json to_json(const ConjectureReport& r) {
  json missing = json::array();
  for (const auto& w : r.missing) missing.push_back(w);
  json violations = json::array();
  for (const auto& row : r.rows)
    if (!row.holds) violations.push_back({{"weights", row.w}, {"h21_s", row.h_s}, {"h21_cy", row.h_cy}});
  return {{"checked", r.rows.size()},
          {"violations", r.violations},
          {"equalities", r.equalities},
          {"missing", missing},
          {"violating_systems", violations},
          {"pmcc", r.pmcc ? json(*r.pmcc) : json(nullptr)}};
}

struct Prediction {
  Weights w{};
  std::optional<double> nn_gb_length, nn_h21;
  double sr_h21_raw = 0;
  long sr_h21 = 0;  ///< nearest integer
  std::optional<long> h21_cy;
  bool within_bound = true;
};

/// Surrogate predictions; either model may be absent, the closed-form h21 formula is always evaluated.
inline std::vector<Prediction> predict_remaining(const std::vector<Weights>& systems, const learn::Regressor* gb_model,
                                                 const learn::Regressor* h21_model, const CyHodgeTable* cy = nullptr) {
  std::vector<Prediction> out;
  for (const auto& w : systems) {
    Prediction p;
    p.w = w;
    if (gb_model) p.nn_gb_length = gb_model->predict(w);
    if (h21_model) p.nn_h21 = h21_model->predict(w);
    p.sr_h21_raw = symreg::paper_formula_h21(w);
    p.sr_h21 = std::lround(p.sr_h21_raw);
    if (cy) {
      auto it = cy->h21.find(canonical(w));
      if (it != cy->h21.end()) p.h21_cy = it->second;
    }
    if (p.h21_cy) {
      p.within_bound = p.sr_h21 <= *p.h21_cy && (!p.nn_h21 || std::lround(*p.nn_h21) <= *p.h21_cy);
    }
    out.push_back(p);
  }
  return out;
}

inline const char* prediction_csv_header() { return "w1,w2,w3,w4,w5,nn_gb_length,nn_h21,sr_h21,sr_h21_raw,h21_cy,within_bound"; }

inline std::string prediction_csv_row(const Prediction& p) {
  std::ostringstream os;
  for (long x : p.w) os << x << ',';
  if (p.nn_gb_length) os << std::lround(*p.nn_gb_length);
  os << ',';
  if (p.nn_h21) os << std::lround(*p.nn_h21);
  os << ',' << p.sr_h21 << ',';
  os.setf(std::ios::fixed);
  os.precision(3);
  os << p.sr_h21_raw << ',';
  if (p.h21_cy) os << *p.h21_cy;
  os << ',' << (p.within_bound ? "true" : "false");
  return os.str();
}

namespace detail {

struct Bin {
  double lo, hi;
  std::size_t count;
};

inline std::vector<Bin> histogram(const std::vector<double>& v, std::size_t bins) {
  std::vector<Bin> out;
  if (v.empty()) return out;
  auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  double lo = *lo_it, hi = *hi_it;
  if (hi == lo) hi = lo + 1;
  double width = (hi - lo) / double(bins);
  for (std::size_t b = 0; b < bins; ++b) out.push_back({lo + width * double(b), lo + width * double(b + 1), 0});
  for (double x : v) {
    auto b = std::size_t((x - lo) / width);
    out[std::min(b, bins - 1)].count++;
  }
  return out;
}

inline std::string svg_bars(const std::vector<Bin>& bins, const std::string& title, const std::string& xlabel) {
  const double W = 640, H = 400, ml = 60, mr = 20, mt = 40, mb = 50;
  std::size_t top = 1;
  for (const auto& b : bins) top = std::max(top, b.count);
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  double pw = W - ml - mr, ph = H - mt - mb, bw = bins.empty() ? 0 : pw / double(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) {
    double h = ph * double(bins[i].count) / double(top);
    s << "<rect x=\"" << ml + bw * double(i) << "\" y=\"" << mt + ph - h << "\" width=\"" << std::max(bw - 1, 0.5) << "\" height=\"" << h
      << "\" fill=\"#4a7ab7\"/>\n";
  }
  s << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  if (!bins.empty()) {
    s << "<text x=\"" << ml << "\" y=\"" << mt + ph + 15 << "\" text-anchor=\"middle\">" << bins.front().lo << "</text>\n";
    s << "<text x=\"" << ml + pw << "\" y=\"" << mt + ph + 15 << "\" text-anchor=\"middle\">" << bins.back().hi << "</text>\n";
  }
  s << "<text x=\"" << ml - 5 << "\" y=\"" << mt + 4 << "\" text-anchor=\"end\">" << top << "</text>\n";
  s << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

inline std::string svg_scatter(const std::vector<std::pair<double, double>>& pts, const std::string& title, const std::string& xlabel,
                               const std::string& ylabel, bool diagonal) {
  const double W = 520, H = 520, m = 60;
  double lo = 0, hi = 1;
  bool first = true;
  for (auto [x, y] : pts) {
    if (first) lo = hi = x, first = false;
    lo = std::min({lo, x, y});
    hi = std::max({hi, x, y});
  }
  if (hi == lo) hi = lo + 1;
  auto sx = [&](double v) { return m + (W - 2 * m) * (v - lo) / (hi - lo); };
  auto sy = [&](double v) { return H - m - (H - 2 * m) * (v - lo) / (hi - lo); };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  s << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << W - 2 * m << "\" height=\"" << H - 2 * m
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (diagonal)
    s << "<line x1=\"" << sx(lo) << "\" y1=\"" << sy(lo) << "\" x2=\"" << sx(hi) << "\" y2=\"" << sy(hi)
      << "\" stroke=\"#c33\" stroke-dasharray=\"4 3\"/>\n";
  for (auto [x, y] : pts) s << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"2\" fill=\"#4a7ab7\" fill-opacity=\"0.6\"/>\n";
  s << "<text x=\"" << m << "\" y=\"" << H - m + 15 << "\" text-anchor=\"middle\">" << lo << "</text>\n";
  s << "<text x=\"" << W - m << "\" y=\"" << H - m + 15 << "\" text-anchor=\"middle\">" << hi << "</text>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  s << "<text x=\"15\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << H / 2 << ")\">" << ylabel
    << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw error("cannot write " + p.string());
  out << text;
}

inline std::string bins_csv(const std::vector<Bin>& bins) {
  std::ostringstream s;
  s << "bin_lo,bin_hi,count\n";
  for (const auto& b : bins) s << b.lo << ',' << b.hi << ',' << b.count << '\n';
  return s.str();
}

}  // namespace detail

struct PlotInputs {
  std::vector<RecordRow> records;
  const CyHodgeTable* cy = nullptr;
  std::vector<std::pair<double, double>> predicted_vs_true;  ///< (true, predicted)
  std::size_t bins = 30;
};

/// Writes histogram and scatter data (CSV) plus SVG renderings; returns the file names written.
inline std::vector<std::string> emit_plots(const PlotInputs& in, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  fs::path dir(out_dir);
  std::vector<std::string> written;
  std::vector<double> gb, h21;
  std::array<std::size_t, 24> nu_counts{};
  for (const auto& r : in.records) {
    if (r.status != "ok") continue;
    if (r.gb_length) gb.push_back(double(*r.gb_length));
    if (r.h21) h21.push_back(double(*r.h21));
    if (r.nu && *r.nu % 2 == 1 && *r.nu >= 1 && *r.nu <= 47) nu_counts[std::size_t(*r.nu / 2)]++;
  }
  if (gb.empty() && h21.empty()) throw domain_error("no ok records to plot");
  auto emit = [&](const std::string& name, const std::string& text) {
    detail::write_file(dir / name, text);
    written.push_back(name);
  };

  auto gb_bins = detail::histogram(gb, in.bins);
  emit("gb_length_hist.csv", detail::bins_csv(gb_bins));
  emit("gb_length_hist.svg", detail::svg_bars(gb_bins, "Groebner basis length", "length"));
  auto h_bins = detail::histogram(h21, in.bins);
  emit("h21_hist.csv", detail::bins_csv(h_bins));
  emit("h21_hist.svg", detail::svg_bars(h_bins, "Sasakian h21", "h21"));

  std::vector<detail::Bin> nu_bins;
  std::ostringstream nu_csv;
  nu_csv << "nu,count\n";
  for (std::size_t k = 0; k < 24; ++k) {
    nu_csv << 2 * k + 1 << ',' << nu_counts[k] << '\n';
    nu_bins.push_back({double(2 * k + 1), double(2 * k + 2), nu_counts[k]});
  }
  nu_bins.back().hi = 47;
  emit("nu_hist.csv", nu_csv.str());
  emit("nu_hist.svg", detail::svg_bars(nu_bins, "CN invariant", "nu (odd values 1..47)"));

  if (in.cy) {
    std::vector<std::pair<double, double>> pts;
    std::ostringstream s;
    s << "w1,w2,w3,w4,w5,h21_s,h21_cy\n";
    for (const auto& r : in.records) {
      if (r.status != "ok" || !r.h21) continue;
      auto it = in.cy->h21.find(canonical(r.w));
      if (it == in.cy->h21.end()) continue;
      for (long x : r.w) s << x << ',';
      s << *r.h21 << ',' << it->second << '\n';
      pts.emplace_back(double(*r.h21), double(it->second));
    }
    emit("hs_vs_hcy.csv", s.str());
    emit("hs_vs_hcy.svg", detail::svg_scatter(pts, "Sasakian vs Calabi-Yau h21", "h21 (link)", "h21 (CY)", true));
  }
  if (!in.predicted_vs_true.empty()) {
    std::ostringstream s;
    s << "true,predicted\n";
    for (auto [t, p] : in.predicted_vs_true) s << t << ',' << p << '\n';
    emit("pred_vs_true.csv", s.str());
    emit("pred_vs_true.svg", detail::svg_scatter(in.predicted_vs_true, "Predicted vs true", "true", "predicted", true));
  }
  return written;
}

}  // namespace cylink::pipeline
