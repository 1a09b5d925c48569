#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cylink/algebra/polynomial.hpp"

namespace cylink {

using json = nlohmann::json;

inline json to_json(const CoefficientField& f) {
  if (f.kind == CoefficientField::Kind::prime) return {{"kind", "gf"}, {"p", f.p}};
  return {{"kind", "rational"}};
}

inline CoefficientField field_from_json(const json& j) {
  auto kind = j.at("kind").get<std::string>();
  if (kind == "gf") return {CoefficientField::Kind::prime, j.at("p").get<std::uint32_t>()};
  if (kind == "rational") return {CoefficientField::Kind::rational, 0};
  throw parse_error("unknown field kind '" + kind + "'");
}

/// {"weights":[..], "degree":d, "field":{...}, "order":"degrevlex", "terms":[{"c":"3","e":[..]}]}
/// `weights`/`degree` are emitted only when a grading context is supplied.
template <class Field>
json to_json(const Polynomial<Field>& f, const std::optional<WeightSystem>& ws = std::nullopt) {
  json j;
  if (ws) {
    j["weights"] = ws->weights();
    j["degree"] = ws->degree();
  }
  j["field"] = to_json(f.field().descriptor());
  j["order"] = f.order().name();
  json terms = json::array();
  for (const auto& t : f.terms()) {
    std::vector<int> e(t.mono.data().begin(), t.mono.data().end());
    terms.push_back({{"c", f.field().to_string(t.coeff)}, {"e", e}});
  }
  j["terms"] = std::move(terms);
  return j;
}

/// Reads a polynomial written by to_json. The field in the document must match `field`.
template <class Field>
Polynomial<Field> polynomial_from_json(const json& j, const Field& field) {
  try {
    if (!(field_from_json(j.at("field")) == field.descriptor()))
      throw mismatch_error("document field " + field_from_json(j.at("field")).to_string() + " differs from " +
                           field.descriptor().to_string());
    MonomialOrder order = j.contains("order") ? MonomialOrder::parse(j["order"].get<std::string>()) : MonomialOrder{};
    std::vector<Term<Field>> ts;
    for (const auto& t : j.at("terms")) {
      auto e = t.at("e").get<std::vector<long>>();
      if (e.size() != num_vars) throw parse_error("exponent vector must have 5 entries");
      std::array<long, num_vars> a{};
      std::copy(e.begin(), e.end(), a.begin());
      ts.push_back({field.parse(t.at("c").get<std::string>()), ExponentVector(a)});
    }
    auto p = Polynomial<Field>::from_terms(field, order, std::move(ts));
    if (j.contains("weights") && j.contains("degree") && !p.is_zero()) {
      auto w = j["weights"].get<std::vector<long>>();
      if (w.size() != num_vars) throw parse_error("weights must have 5 entries");
      Weights ww{};
      std::copy(w.begin(), w.end(), ww.begin());
      if (!is_weighted_homogeneous(p, ww, j["degree"].get<long>()))
        throw parse_error("polynomial is not weighted homogeneous of the declared degree");
    }
    return p;
  } catch (const json::exception& e) {
    throw parse_error(std::string("polynomial JSON: ") + e.what());
  }
}

}  // namespace cylink
