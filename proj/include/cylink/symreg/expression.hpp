#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cylink/algebra/weights.hpp"
#include "cylink/errors.hpp"

namespace cylink::symreg {

using json = nlohmann::json;

enum class Op : std::uint8_t { add, sub, mul, div, var, constant };

struct Node {
  Op op = Op::constant;
  std::uint8_t var = 0;
  double value = 0;

  bool is_leaf() const { return op == Op::var || op == Op::constant; }
  friend bool operator==(const Node&, const Node&) = default;
};

inline constexpr double protected_threshold = 1e-12;

/// Binary expression tree over {+,-,*,/} with leaves w0..w4 and constants,
/// stored in prefix order.
class Expression {
 public:
  Expression() = default;
  explicit Expression(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty() || subtree_end(0) != nodes_.size()) throw parse_error("malformed prefix expression");
  }

  static Expression variable(int i) { return Expression({Node{Op::var, std::uint8_t(i), 0}}); }
  static Expression constant(double c) { return Expression({Node{Op::constant, 0, c}}); }
  static Expression binary(Op op, const Expression& a, const Expression& b) {
    std::vector<Node> n{Node{op, 0, 0}};
    n.insert(n.end(), a.nodes_.begin(), a.nodes_.end());
    n.insert(n.end(), b.nodes_.begin(), b.nodes_.end());
    return Expression(std::move(n));
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  std::vector<Node>& mutable_nodes() { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  /// One past the last node of the subtree rooted at i.
  std::size_t subtree_end(std::size_t i) const {
    std::size_t need = 1;
    while (need > 0) {
      if (i >= nodes_.size()) return nodes_.size() + 1;
      need += nodes_[i++].is_leaf() ? 0 : 2;
      --need;
    }
    return i;
  }

  int depth() const {
    std::size_t pos = 0;
    return depth_at(pos);
  }

  /// Value at a point; sets *flagged when a protected division fired.
  double eval(std::span<const double> w, bool* flagged = nullptr) const {
    std::size_t pos = 0;
    return eval_at(pos, w, flagged);
  }

  /// Values at many points given column-wise (cols[i][k] = w_i of point k).
  /// flags[k] is set when a protected division fired at point k.
  std::vector<double> eval_columns(const std::array<std::vector<double>, num_vars>& cols, std::vector<char>* flags = nullptr) const {
    std::size_t n = cols[0].size();
    if (flags) flags->assign(n, 0);
    std::size_t pos = 0;
    return eval_cols_at(pos, cols, n, flags);
  }

  /// "(+ (* 14.91 w1) w0)"
  std::string to_prefix() const {
    std::size_t pos = 0;
    std::string s;
    prefix_at(pos, s);
    return s;
  }

  /// Infix with constants at 4 significant digits.
  std::string to_infix() const {
    std::size_t pos = 0;
    return infix_at(pos, true);
  }

  static Expression parse_prefix(const std::string& s) {
    std::vector<Node> nodes;
    std::size_t i = 0;
    int open = 0;
    auto skip = [&] {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    while (true) {
      skip();
      if (i >= s.size()) break;
      char c = s[i];
      if (c == '(') {
        ++i;
        skip();
        if (i >= s.size()) throw parse_error("unterminated expression");
        char o = s[i++];
        Op op = o == '+' ? Op::add : o == '-' ? Op::sub : o == '*' ? Op::mul : o == '/' ? Op::div : Op::constant;
        if (op == Op::constant) throw parse_error(std::string("unknown operator '") + o + "'");
        nodes.push_back({op, 0, 0});
        ++open;
      } else if (c == ')') {
        ++i;
        if (--open < 0) throw parse_error("unbalanced ')'");
      } else if (c == 'w') {
        ++i;
        if (i >= s.size() || s[i] < '0' || s[i] > '4') throw parse_error("variables are w0..w4");
        nodes.push_back({Op::var, std::uint8_t(s[i++] - '0'), 0});
      } else {
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != ')' && s[j] != '(') ++j;
        double v = 0;
        auto [p, ec] = std::from_chars(s.data() + i, s.data() + j, v);
        if (ec != std::errc() || p != s.data() + j) throw parse_error("bad token '" + s.substr(i, j - i) + "'");
        nodes.push_back({Op::constant, 0, v});
        i = j;
      }
    }
    if (open != 0) throw parse_error("unbalanced '('");
    return Expression(std::move(nodes));
  }

  json to_json() const {
    std::size_t pos = 0;
    return json_at(pos);
  }

  static Expression from_json(const json& j) {
    std::vector<Node> nodes;
    from_json_into(j, nodes);
    return Expression(std::move(nodes));
  }

  friend bool operator==(const Expression&, const Expression&) = default;

 private:
  static const char* symbol(Op op) { return op == Op::add ? "+" : op == Op::sub ? "-" : op == Op::mul ? "*" : "/"; }

  static std::string shortest(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  }

  static double apply(Op op, double a, double b, bool& flagged) {
    switch (op) {
      case Op::add: return a + b;
      case Op::sub: return a - b;
      case Op::mul: return a * b;
      default:
        if (std::abs(b) < protected_threshold) {
          flagged = true;
          return 1.0;
        }
        return a / b;
    }
  }

  int depth_at(std::size_t& pos) const {
    const Node& n = nodes_[pos++];
    if (n.is_leaf()) return 1;
    int a = depth_at(pos);
    int b = depth_at(pos);
    return 1 + std::max(a, b);
  }

  double eval_at(std::size_t& pos, std::span<const double> w, bool* flagged) const {
    const Node& n = nodes_[pos++];
    if (n.op == Op::var) return w[n.var];
    if (n.op == Op::constant) return n.value;
    double a = eval_at(pos, w, flagged);
    double b = eval_at(pos, w, flagged);
    bool f = false;
    double r = apply(n.op, a, b, f);
    if (f && flagged) *flagged = true;
    return r;
  }

  std::vector<double> eval_cols_at(std::size_t& pos, const std::array<std::vector<double>, num_vars>& cols, std::size_t n,
                                   std::vector<char>* flags) const {
    const Node& node = nodes_[pos++];
    if (node.op == Op::var) return cols[node.var];
    if (node.op == Op::constant) return std::vector<double>(n, node.value);
    auto a = eval_cols_at(pos, cols, n, flags);
    auto b = eval_cols_at(pos, cols, n, flags);
    switch (node.op) {
      case Op::add:
        for (std::size_t k = 0; k < n; ++k) a[k] += b[k];
        break;
      case Op::sub:
        for (std::size_t k = 0; k < n; ++k) a[k] -= b[k];
        break;
      case Op::mul:
        for (std::size_t k = 0; k < n; ++k) a[k] *= b[k];
        break;
      default:
        for (std::size_t k = 0; k < n; ++k) {
          if (std::abs(b[k]) < protected_threshold) {
            a[k] = 1.0;
            if (flags) (*flags)[k] = 1;
          } else {
            a[k] /= b[k];
          }
        }
    }
    return a;
  }

  void prefix_at(std::size_t& pos, std::string& s) const {
    const Node& n = nodes_[pos++];
    if (n.op == Op::var) {
      s += "w" + std::to_string(n.var);
    } else if (n.op == Op::constant) {
      s += shortest(n.value);
    } else {
      s += "(";
      s += symbol(n.op);
      s += " ";
      prefix_at(pos, s);
      s += " ";
      prefix_at(pos, s);
      s += ")";
    }
  }

  std::string infix_at(std::size_t& pos, bool top) const {
    const Node& n = nodes_[pos++];
    if (n.op == Op::var) return "w" + std::to_string(n.var);
    if (n.op == Op::constant) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4g", n.value);
      return buf;
    }
    std::string a = infix_at(pos, false);
    std::string b = infix_at(pos, false);
    std::string e = a + " " + symbol(n.op) + " " + b;
    return top ? e : "(" + e + ")";
  }

  json json_at(std::size_t& pos) const {
    const Node& n = nodes_[pos++];
    if (n.op == Op::var) return {{"var", n.var}};
    if (n.op == Op::constant) return {{"const", n.value}};
    json a = json_at(pos);
    json b = json_at(pos);
    return {{"op", symbol(n.op)}, {"args", {a, b}}};
  }

  static void from_json_into(const json& j, std::vector<Node>& out) {
    if (j.contains("var")) {
      int v = j["var"].get<int>();
      if (v < 0 || v > 4) throw parse_error("variables are w0..w4");
      out.push_back({Op::var, std::uint8_t(v), 0});
    } else if (j.contains("const")) {
      out.push_back({Op::constant, 0, j["const"].get<double>()});
    } else {
      auto s = j.at("op").get<std::string>();
      Op op = s == "+" ? Op::add : s == "-" ? Op::sub : s == "*" ? Op::mul : s == "/" ? Op::div : Op::constant;
      if (op == Op::constant || j.at("args").size() != 2) throw parse_error("bad operator node");
      out.push_back({op, 0, 0});
      from_json_into(j["args"][0], out);
      from_json_into(j["args"][1], out);
    }
  }

  std::vector<Node> nodes_;
};

/// The published h21 surrogate, in prefix form over ascending-sorted weights w0 <= ... <= w4.
inline const char* paper_formula_prefix() {
  return "(+ (/ (* (* 14.91 w1) (+ (* w0 w4) (* w3 (+ w0 w3)))) (* (* (* w0 w1) w2) w3)) "
         "(/ (* (* (* 10.02 w2) w3) (+ (+ w0 w4) 0.77)) (* (* (* w0 w1) w2) w3)))";
}

inline Expression paper_formula_tree() { return Expression::parse_prefix(paper_formula_prefix()); }

/// 14.91 w1 (w0 w4 + w3 (w0 + w3)) / (w0 w1 w2 w3) + 10.02 w2 w3 (w0 + w4 + 0.77) / (w0 w1 w2 w3)
/// with w0..w4 the weights in ascending order.
inline double paper_formula_h21(const Weights& weights) {
  Weights s = weights;
  std::sort(s.begin(), s.end());
  if (s[0] <= 0) throw domain_error("weights must be positive");
  const double w0 = double(s[0]), w1 = double(s[1]), w2 = double(s[2]), w3 = double(s[3]), w4 = double(s[4]);
  const double den = ((w0 * w1) * w2) * w3;
  return ((14.91 * w1) * ((w0 * w4) + (w3 * (w0 + w3)))) / den + (((10.02 * w2) * w3) * ((w0 + w4) + 0.77)) / den;
}

}  // namespace cylink::symreg
