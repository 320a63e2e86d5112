#pragma once

// Expression language: parse tree, recursive-descent parser and printer.
// The grammar is documented in docs/grammar.md.

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qseries/error.hpp"
#include "qseries/rational.hpp"

namespace qseries {

enum class NodeKind { Number, Symbol, Neg, Add, Sub, Mul, Div, Pow, Call, Sum };
enum class SumRange { From, UpTo, All };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::Number;
  Rational value;                 // Number
  std::string name;               // Symbol, Call, Sum index
  std::vector<NodePtr> args;      // operands, call arguments, or the Sum body
  SumRange range = SumRange::From;
  std::int64_t bound = 0;         // Sum bound
  std::size_t offset = 0;         // byte offset in the source
};

namespace expr_detail {

enum class Slot { Value, Param, Base, Int, Any };

struct Signature {
  std::vector<Slot> slots;
  bool variadic_tail = false;  // last slot repeats
};

inline const std::map<std::string, Signature>& signatures() {
  using S = Slot;
  static const std::map<std::string, Signature> table = {
      {"j", {{S::Param, S::Base}}},
      {"J", {{S::Int, S::Int}}},
      {"Jbar", {{S::Int, S::Int}}},
      {"Jm", {{S::Int}}},
      {"m", {{S::Param, S::Base, S::Param}}},
      {"g", {{S::Param, S::Base}}},
      {"f", {{S::Int, S::Int, S::Int, S::Param, S::Param, S::Base}}},
      {"poch", {{S::Param, S::Base, S::Int}}},
      {"pochinf", {{S::Param, S::Base}}},
      {"gauss", {{S::Int, S::Int}}},
      {"pt", {{S::Param, S::Base}}},
      {"star", {{S::Param}}},
      {"sg", {{S::Int}}},
      {"rescale", {{S::Value, S::Int}}},
      {"dissect", {{S::Value, S::Int, S::Int}}},
      {"wdissect", {{S::Value, S::Int, S::Int}, true}},
  };
  return table;
}

/// Separator printed before argument i of a call.
inline std::string separator(const std::string& fn, std::size_t i) {
  if (fn == "J" || fn == "Jbar" || fn == "gauss") return ", ";
  if (fn == "f" && i < 3) return ", ";
  if (fn == "wdissect" && i > 2) return ", ";
  return "; ";
}

inline bool monomial_shaped(const Node& n) {
  switch (n.kind) {
    case NodeKind::Number:
    case NodeKind::Symbol:
      return true;
    case NodeKind::Neg:
      return monomial_shaped(*n.args[0]);
    case NodeKind::Mul:
    case NodeKind::Div:
      return monomial_shaped(*n.args[0]) && monomial_shaped(*n.args[1]);
    case NodeKind::Pow:
      return monomial_shaped(*n.args[0]);
    default:
      return false;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr parse_all() {
    auto e = parse_expr();
    skip();
    if (pos_ != s_.size()) fail("expected operator or end of input");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg, std::optional<std::size_t> at = std::nullopt) const {
    throw ParseError("syntax error: " + msg, at.value_or(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool ident_start() {
    skip();
    return pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_');
  }
  std::string ident() {
    skip();
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(s_.substr(start, pos_ - start));
  }
  std::int64_t integer() {
    skip();
    bool negative = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      negative = true;
      ++pos_;
      skip();
    }
    const auto start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    auto v = std::stoll(std::string(s_.substr(start, pos_ - start)));
    return negative ? -v : v;
  }

  static NodePtr make(NodeKind k, std::size_t at, std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->offset = at;
    n->args = std::move(args);
    return n;
  }

  NodePtr parse_expr() {
    auto left = parse_term();
    for (;;) {
      skip();
      const auto at = pos_;
      if (accept('+')) {
        left = make(NodeKind::Add, at, {left, parse_term()});
      } else if (accept('-')) {
        left = make(NodeKind::Sub, at, {left, parse_term()});
      } else {
        return left;
      }
    }
  }

  /// A term; a number written directly before an identifier ("2n") multiplies it.
  NodePtr parse_term() {
    auto left = parse_unary();
    for (;;) {
      skip();
      const auto at = pos_;
      if (accept('*')) {
        left = make(NodeKind::Mul, at, {left, parse_unary()});
      } else if (accept('/')) {
        left = make(NodeKind::Div, at, {left, parse_unary()});
      } else if (left->kind == NodeKind::Number && at == left_end_ && ident_start() && pos_ == at) {
        left = make(NodeKind::Mul, at, {left, parse_unary()});
      } else {
        return left;
      }
    }
  }

  NodePtr parse_unary() {
    skip();
    const auto at = pos_;
    if (accept('-')) return make(NodeKind::Neg, at, {parse_unary()});
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_primary();
    skip();
    const auto at = pos_;
    if (accept('^')) {
      skip();
      NodePtr e;
      const auto eat = pos_;
      if (accept('-')) {
        e = make(NodeKind::Neg, eat, {parse_power()});
      } else {
        e = parse_power();
      }
      return make(NodeKind::Pow, at, {base, e});
    }
    return base;
  }

  NodePtr parse_primary() {
    skip();
    const auto at = pos_;
    if (pos_ >= s_.size()) fail("expected expression");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Number;
      n->value = Rational(std::string(s_.substr(at, pos_ - at)));
      n->offset = at;
      left_end_ = pos_;
      return n;
    }
    if (accept('(')) {
      auto e = parse_expr();
      expect(')');
      return e;
    }
    if (ident_start()) {
      const std::string name = ident();
      if (name == "sum" && peek('(')) return parse_sum(at);
      if (peek('(') && signatures().count(name)) return parse_call(name, at);
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Symbol;
      n->name = name;
      n->offset = at;
      return n;
    }
    fail("expected expression");
  }

  NodePtr parse_call(const std::string& name, std::size_t at) {
    expect('(');
    std::vector<NodePtr> args;
    for (;;) {
      skip();
      if (peek(';') || peek(',') || peek(')')) fail("expected expression");
      args.push_back(parse_expr());
      if (accept(';') || accept(',')) continue;
      expect(')');
      break;
    }
    const auto& sig = signatures().at(name);
    const auto want = sig.slots.size();
    if (args.size() != want && !(sig.variadic_tail && args.size() >= want))
      throw ParseError("arity mismatch: " + name + " takes " + std::to_string(want) + (sig.variadic_tail ? " or more" : "") +
                           " arguments, got " + std::to_string(args.size()),
                       at);
    for (std::size_t i = 0; i < args.size(); ++i) {
      const Slot slot = sig.slots[std::min(i, want - 1)];
      if ((slot == Slot::Param || slot == Slot::Base) && !monomial_shaped(*args[i]))
        throw ParseError("argument " + std::to_string(i + 1) + " of " + name + " must be a monomial", args[i]->offset);
    }
    auto n = make(NodeKind::Call, at, std::move(args));
    auto m = std::const_pointer_cast<Node>(n);
    m->name = name;
    return n;
  }

  NodePtr parse_sum(std::size_t at) {
    expect('(');
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Sum;
    n->offset = at;
    n->name = ident();
    skip();
    if (s_.substr(pos_, 2) == ">=") {
      pos_ += 2;
      n->range = SumRange::From;
      n->bound = integer();
    } else if (s_.substr(pos_, 2) == "<=") {
      pos_ += 2;
      n->range = SumRange::UpTo;
      n->bound = integer();
    } else if (s_.substr(pos_, 2) == "in") {
      pos_ += 2;
      skip();
      if (!accept('Z')) fail("expected 'Z'");
      n->range = SumRange::All;
    } else {
      fail("expected '>=', '<=' or 'in Z'");
    }
    expect(')');
    n->args.push_back(parse_term());
    return n;
  }

  std::size_t left_end_ = static_cast<std::size_t>(-1);
};

}  // namespace expr_detail

inline NodePtr parse_expression(std::string_view text) { return expr_detail::Parser(text).parse_all(); }

namespace expr_detail {

inline int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub:
      return 1;
    case NodeKind::Mul:
    case NodeKind::Div:
      return 2;
    case NodeKind::Neg:
      return 3;
    case NodeKind::Pow:
      return 4;
    case NodeKind::Number:
      return n.value.get_den() == 1 ? 5 : 2;
    default:
      return 5;
  }
}

inline std::string print(const Node& n);

inline std::string wrap(const Node& child, int need, bool sum_needs_parens) {
  const std::string s = print(child);
  if (precedence(child) < need || (sum_needs_parens && child.kind == NodeKind::Sum)) return "(" + s + ")";
  return s;
}

inline std::string print(const Node& n) {
  switch (n.kind) {
    case NodeKind::Number:
      return n.value.get_str();
    case NodeKind::Symbol:
      return n.name;
    case NodeKind::Neg:
      return "-" + wrap(*n.args[0], 3, true);
    case NodeKind::Add:
      return wrap(*n.args[0], 1, false) + " + " + wrap(*n.args[1], 2, false);
    case NodeKind::Sub:
      return wrap(*n.args[0], 1, false) + " - " + wrap(*n.args[1], 2, false);
    case NodeKind::Mul:
      return wrap(*n.args[0], 2, true) + "*" + wrap(*n.args[1], 3, true);
    case NodeKind::Div:
      return wrap(*n.args[0], 2, true) + "/" + wrap(*n.args[1], 3, true);
    case NodeKind::Pow:
      return wrap(*n.args[0], 5, true) + "^" + wrap(*n.args[1], 5, true);
    case NodeKind::Call: {
      std::string out = n.name + "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += separator(n.name, i);
        out += print(*n.args[i]);
      }
      return out + ")";
    }
    case NodeKind::Sum: {
      std::string out = "sum(" + n.name;
      if (n.range == SumRange::From) out += ">=" + std::to_string(n.bound);
      else if (n.range == SumRange::UpTo) out += "<=" + std::to_string(n.bound);
      else out += " in Z";
      return out + ") " + wrap(*n.args[0], 2, true);
    }
  }
  return {};
}

}  // namespace expr_detail

/// Canonical text that parses back to an equivalent tree.
inline std::string to_string(const Node& n) { return expr_detail::print(n); }
inline std::string to_string(const NodePtr& n) { return expr_detail::print(*n); }

}  // namespace qseries
