#pragma once

#include <sstream>
#include <string>

#include "cylink/algebra/io.hpp"
#include "cylink/groebner/buchberger.hpp"

namespace cylink {

template <class Field>
json to_json(const GroebnerBasis<Field>& G) {
  json j;
  j["order"] = G.order.name();
  j["length"] = G.length();
  json els = json::array();
  for (const auto& g : G.elements) els.push_back(to_json(g));
  j["elements"] = std::move(els);
  j["stats"] = {{"pairs_created", G.stats.pairs_created},   {"pairs_reduced", G.stats.pairs_reduced},
                {"zero_reductions", G.stats.zero_reductions}, {"coprime_skipped", G.stats.coprime_skipped},
                {"chain_skipped", G.stats.chain_skipped},   {"max_queue", G.stats.max_queue}};
  return j;
}

inline const char* groebner_summary_header() { return "weights,p,order,length,standard_monomial_count,elapsed_ms,status"; }

/// weights are written as w1 w2 w3 w4 w5 so the row stays one CSV field per column.
inline std::string groebner_summary_row(const Weights& w, std::uint32_t p, const MonomialOrder& order, long length,
                                        long standard_count, double elapsed_ms, const std::string& status) {
  std::ostringstream os;
  for (std::size_t i = 0; i < num_vars; ++i) os << (i ? " " : "") << w[i];
  os << ',' << p << ',' << '"' << order.name() << '"' << ',' << length << ',' << standard_count << ',';
  os.setf(std::ios::fixed);
  os.precision(3);
  os << elapsed_ms << ',' << status;
  return os.str();
}

}  // namespace cylink
