#pragma once

// Evaluation of parsed expressions to truncated series, and the structural reading of sums
// as Eulerian descriptors for the dual transform.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qseries/descriptor.hpp"
#include "qseries/expr.hpp"
#include "qseries/qfunctions.hpp"
#include "qseries/series.hpp"
#include "qseries/term_sum.hpp"

namespace qseries {

namespace eval_detail {

template <class E>
bool rethrow_as(const Error& e, const std::string& msg) {
  if (dynamic_cast<const E*>(&e)) throw E(msg);
  return false;
}

/// Rethrows e with the failing call appended, keeping its type.
[[noreturn]] inline void rethrow_with_context(const Error& e, const std::string& where) {
  const std::string msg = std::string(e.what()) + " (in " + where + ")";
  rethrow_as<Pole>(e, msg) || rethrow_as<Degenerate>(e, msg) || rethrow_as<ThetaZero>(e, msg) ||
      rethrow_as<NotInvertible>(e, msg) || rethrow_as<NonConvergent>(e, msg) || rethrow_as<RefineLattice>(e, msg) ||
      rethrow_as<BeyondTruncation>(e, msg) || rethrow_as<ShapeError>(e, msg) || rethrow_as<LatticeMismatch>(e, msg);
  throw Error(msg);
}

class Evaluator {
 public:
  Evaluator(Lattice lat, const Bindings& params, std::int64_t work) : lat_(lat), params_(params), work_(work) {}

  QSeries eval(const Node& n) {
    switch (n.kind) {
      case NodeKind::Number:
        return scale(one(lat_), n.value);
      case NodeKind::Symbol:
        return symbol(n);
      case NodeKind::Neg:
        return neg(eval(*n.args[0]));
      case NodeKind::Add:
        return cap(add(eval(*n.args[0]), eval(*n.args[1])));
      case NodeKind::Sub:
        return cap(sub(eval(*n.args[0]), eval(*n.args[1])));
      case NodeKind::Mul:
        return cap(mul(eval(*n.args[0]), eval(*n.args[1])));
      case NodeKind::Div: {
        QSeries a = eval(*n.args[0]);
        QSeries b = eval(*n.args[1]);
        return cap(mul(a, inverse(b, a)));
      }
      case NodeKind::Pow:
        return power(n);
      case NodeKind::Call:
        try {
          return call(n);
        } catch (const ParseError&) {
          throw;
        } catch (const Error& e) {
          rethrow_with_context(e, to_string(n));
        }
      case NodeKind::Sum:
        return sum(n);
    }
    throw Error("unknown node");
  }

  Rational constant(const Node& n) {
    QSeries v = eval(n);
    if (v.is_zero() && v.is_exact()) return 0;
    if (!v.is_exact() || v.term_count() != 1 || v.low_num() != 0)
      throw ShapeError("expected a constant, got " + to_string(v) + " from " + to_string(n));
    return v.dense().front();
  }

  std::int64_t integer(const Node& n) {
    Rational c = constant(n);
    if (!is_integer(c)) throw ShapeError("expected an integer, got " + c.get_str() + " from " + to_string(n));
    return to_int64(c);
  }

  ParamValue param(const Node& n) {
    QSeries v = eval(n);
    if (!v.is_exact() || v.term_count() != 1)
      throw ShapeError("non-monomial value " + to_string(v) + " in a parameter slot: " + to_string(n));
    return {v.dense().front(), v.valuation()};
  }

  Exponent base(const Node& n) {
    ParamValue p = param(n);
    if (p.c != 1 || p.e <= 0) throw ShapeError("base must be a positive power of q, got " + to_string(n));
    return p.e;
  }

  std::map<std::string, std::int64_t>& index() { return index_; }

 private:
  Lattice lat_;
  const Bindings& params_;
  std::int64_t work_;
  std::map<std::string, std::int64_t> index_;

  Exponent order() const { return lat_.exponent(work_); }

  QSeries cap(const QSeries& f) const {
    if (f.is_exact() || f.order_num() <= work_) return f;
    return truncate_num(f, work_);
  }

  /// Inverse of b good enough that a * (1/b) is known to the working order.
  QSeries inverse(const QSeries& b, const QSeries& a) const {
    if (b.is_zero()) {
      if (b.is_exact()) throw Pole("division by zero");
      throw NotInvertible("not invertible at this truncation: divisor is " + to_string(b));
    }
    if (b.is_exact() && b.term_count() > 1) {
      const auto va = a.is_zero() ? 0 : a.low_num();
      return invert(truncate_num(b, std::max(work_ - va + 2 * b.low_num() + 1, b.low_num() + 1)));
    }
    return invert(b);
  }

  QSeries symbol(const Node& n) const {
    if (n.name == "q") return make_monomial(1, 1, lat_);
    if (auto it = index_.find(n.name); it != index_.end()) return scale(one(lat_), it->second);
    if (auto it = params_.find(n.name); it != params_.end()) return make_monomial(it->second, lat_);
    throw Error("unbound symbol '" + n.name + "' at offset " + std::to_string(n.offset));
  }

  QSeries power(const Node& n) {
    QSeries b = eval(*n.args[0]);
    const Rational k = constant(*n.args[1]);
    if (b.is_exact() && b.term_count() == 1) {
      const Rational c = b.dense().front();
      if (is_integer(k)) return make_monomial(qseries::pow(c, to_int64(k)), b.valuation() * Exponent::from_rational(k), lat_);
      if (c != 1) throw ShapeError("fractional power of a non-unit coefficient in " + to_string(n));
      return make_monomial(1, b.valuation() * Exponent::from_rational(k), lat_);
    }
    if (!is_integer(k)) throw ShapeError("fractional power of a series in " + to_string(n));
    const auto e = to_int64(k);
    if (e >= 0) return cap(pow(b, e));
    QSeries inv = inverse(b, one(lat_));
    return cap(pow(inv, -e));
  }

  QSeries call(const Node& n) {
    const auto& a = n.args;
    const std::string& f = n.name;
    const Exponent o = order();
    if (f == "j") return theta_j(param(*a[0]), base(*a[1]), o, lat_);
    if (f == "J" || f == "Jbar") {
      const auto kind = f == "J" ? ThetaKind::Plain : ThetaKind::Bar;
      return theta_J(Exponent::from_rational(constant(*a[0])), Exponent::from_rational(constant(*a[1])), kind, o, lat_);
    }
    if (f == "Jm") return theta_J(0, Exponent::from_rational(constant(*a[0])), ThetaKind::Eta, o, lat_);
    if (f == "m") return appell_m(param(*a[0]), base(*a[1]), param(*a[2]), o, lat_);
    if (f == "g") return universal_g(param(*a[0]), base(*a[1]), o, lat_);
    if (f == "f")
      return hecke_f(integer(*a[0]), integer(*a[1]), integer(*a[2]), param(*a[3]), param(*a[4]), base(*a[5]), o, lat_);
    if (f == "poch") return pochhammer(param(*a[0]), base(*a[1]), integer(*a[2]), o, lat_);
    if (f == "pochinf") return pochhammer_inf(param(*a[0]), base(*a[1]), o, lat_);
    if (f == "gauss") return gaussian_binomial(integer(*a[0]), integer(*a[1]), lat_);
    if (f == "pt") return partial_theta(param(*a[0]), base(*a[1]), o, lat_);
    if (f == "star") return starred_sum(param(*a[0]), o, lat_);
    if (f == "sg") return scale(one(lat_), integer(*a[0]) >= 0 ? 1 : -1);
    if (f == "rescale") {
      const Rational r = constant(*a[1]);
      if (r <= 0) throw ShapeError("rescale needs a positive factor");
      const Rational inner = Rational(work_) / r;
      Integer up;
      mpz_cdiv_q(up.get_mpz_t(), inner.get_num().get_mpz_t(), inner.get_den().get_mpz_t());
      Evaluator sub(lat_, params_, up.get_si());
      sub.index_ = index_;
      return cap(rescale(sub.eval(*a[0]), r));
    }
    if (f == "dissect") return dissect(eval(*a[0]), integer(*a[1]), integer(*a[2]));
    if (f == "wdissect") {
      const auto M = integer(*a[1]);
      if (static_cast<std::int64_t>(a.size()) != M + 2)
        throw ShapeError("wdissect with modulus " + std::to_string(M) + " needs " + std::to_string(M) + " weights");
      std::vector<Rational> w;
      for (std::size_t i = 2; i < a.size(); ++i) w.push_back(constant(*a[i]));
      return dissect_weighted(eval(*a[0]), w);
    }
    throw Error("unknown function " + f);
  }

  /// Adds the factor node to the plan (numerator or denominator).
  void compile(const Node& n, TermPlan& t, bool numerator) {
    switch (n.kind) {
      case NodeKind::Mul:
        compile(*n.args[0], t, numerator);
        compile(*n.args[1], t, numerator);
        return;
      case NodeKind::Div:
        compile(*n.args[0], t, numerator);
        compile(*n.args[1], t, !numerator);
        return;
      case NodeKind::Neg:
        t.coeff = -t.coeff;
        compile(*n.args[0], t, numerator);
        return;
      case NodeKind::Pow:
        if (n.args[0]->kind == NodeKind::Call && n.args[0]->name == "poch") {
          const auto k = integer(*n.args[1]);
          for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) compile(*n.args[0], t, k < 0 ? !numerator : numerator);
          return;
        }
        break;
      case NodeKind::Call:
        if (n.name == "poch") {
          const ParamValue x = param(*n.args[0]);
          const Exponent b = base(*n.args[1]);
          t.pochhammer(x.c, lat_.numerator(x.e), lat_.numerator(b), integer(*n.args[2]), numerator);
          return;
        }
        break;
      default:
        break;
    }
    QSeries v = eval(n);
    if (!v.is_exact()) throw ShapeError("summand factor is not a polynomial: " + to_string(n));
    if (v.is_zero()) {
      if (numerator) {
        t.coeff = 0;
        return;
      }
      throw Degenerate("degenerate term: factor " + to_string(n) + " vanishes in a denominator");
    }
    const auto& d = v.dense();
    const Rational lead = d.front();
    if (numerator) {
      t.coeff *= lead;
      t.shift += v.low_num();
    } else {
      t.coeff /= lead;
      t.shift -= v.low_num();
    }
    if (v.term_count() == 1) return;
    if (v.term_count() == 2) {
      const auto k = static_cast<std::int64_t>(d.size()) - 1;
      Binomial b{-d.back() / lead, k};
      (numerator ? t.num : t.den).push_back(std::move(b));
      return;
    }
    QSeries normalized = scale(shift_num(v, -v.low_num()), 1 / lead);
    (numerator ? t.poly : t.den_poly).push_back(std::move(normalized));
  }

  QSeries sum(const Node& n) {
    const std::string& var = n.name;
    const Node& body = *n.args[0];
    const auto saved = index_.find(var) != index_.end() ? std::optional<std::int64_t>(index_[var]) : std::nullopt;
    auto plan = [&](std::int64_t k) -> std::optional<TermPlan> {
      index_[var] = k;
      TermPlan t;
      compile(body, t, true);
      return t;
    };
    QSeries out;
    try {
      switch (n.range) {
        case SumRange::From: out = sum_terms(plan, SumDirection::Up, n.bound, work_, lat_); break;
        case SumRange::UpTo: out = sum_terms(plan, SumDirection::Down, n.bound, work_, lat_); break;
        case SumRange::All: out = sum_terms(plan, SumDirection::Both, 0, work_, lat_); break;
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      const std::string where = "sum at offset " + std::to_string(n.offset) + ", " + var + " = " + std::to_string(index_[var]);
      if (saved) index_[var] = *saved; else index_.erase(var);
      rethrow_with_context(e, where);
    }
    if (saved) index_[var] = *saved; else index_.erase(var);
    return out;
  }
};

}  // namespace eval_detail

/// Evaluates an expression to the given order, retrying with a larger working order whenever
/// divisions or negative valuations leave the result short.
inline QSeries evaluate(const Node& e, Exponent order, Lattice lat = {}, const Bindings& params = {}) {
  const auto target = lat.numerator(order);
  std::int64_t slack = 4 * lat.den;
  for (int attempt = 0; attempt < 8; ++attempt) {
    eval_detail::Evaluator ev(lat, params, target + slack);
    QSeries r = ev.eval(e);
    if (r.is_exact()) return r;
    if (r.order_num() >= target) return truncate_num(r, target);
    slack = 2 * slack + (target - r.order_num());
  }
  throw BeyondTruncation("could not reach order " + order.str() + " for " + to_string(e));
}

inline QSeries evaluate(const NodePtr& e, Exponent order, Lattice lat = {}, const Bindings& params = {}) {
  return evaluate(*e, order, lat, params);
}

inline QSeries evaluate(std::string_view text, Exponent order, Lattice lat = {}, const Bindings& params = {}) {
  return evaluate(*parse_expression(text), order, lat, params);
}

// ---- structural reading ----------------------------------------------------

namespace eval_detail {

inline IndexPoly as_index_poly(const Node& n, const std::string& var) {
  switch (n.kind) {
    case NodeKind::Number:
      return IndexPoly::constant(n.value);
    case NodeKind::Symbol:
      if (n.name == var) return IndexPoly::linear(1, 0);
      throw ShapeError("symbol '" + n.name + "' in an index polynomial");
    case NodeKind::Neg:
      return -as_index_poly(*n.args[0], var);
    case NodeKind::Add:
      return as_index_poly(*n.args[0], var) + as_index_poly(*n.args[1], var);
    case NodeKind::Sub:
      return as_index_poly(*n.args[0], var) - as_index_poly(*n.args[1], var);
    case NodeKind::Mul:
      return as_index_poly(*n.args[0], var) * as_index_poly(*n.args[1], var);
    case NodeKind::Div: {
      IndexPoly d = as_index_poly(*n.args[1], var);
      if (!d.is_constant() || d.c == 0) throw ShapeError("division by a non-constant in an index polynomial");
      return (1 / d.c) * as_index_poly(*n.args[0], var);
    }
    case NodeKind::Pow: {
      IndexPoly k = as_index_poly(*n.args[1], var);
      if (!k.is_constant() || k.c < 0 || k.c > 2 || !is_integer(k.c)) throw ShapeError("bad power in an index polynomial");
      IndexPoly b = as_index_poly(*n.args[0], var);
      IndexPoly out = IndexPoly::constant(1);
      for (int i = 0; i < to_int64(k.c); ++i) out = out * b;
      return out;
    }
    default:
      throw ShapeError("unsupported node in an index polynomial: " + to_string(n));
  }
}

inline SymMonomial mono_mul(SymMonomial x, const SymMonomial& y, int sign) {
  if (sign > 0) {
    x.coeff *= y.coeff;
    x.ratio *= y.ratio;
  } else {
    x.coeff /= y.coeff;
    x.ratio /= y.ratio;
  }
  x.q = x.q + Rational(sign) * y.q;
  for (const auto& [name, p] : y.params) {
    x.params[name] = x.params[name] + Rational(sign) * p;
    if (x.params[name].is_zero()) x.params.erase(name);
  }
  return x;
}

inline SymMonomial as_monomial(const Node& n, const std::string& var) {
  SymMonomial m;
  switch (n.kind) {
    case NodeKind::Number:
      m.coeff = n.value;
      return m;
    case NodeKind::Symbol:
      if (n.name == "q") {
        m.q = IndexPoly::constant(1);
      } else if (n.name == var) {
        throw ShapeError("the summation index may only appear in exponents");
      } else {
        m.params[n.name] = IndexPoly::constant(1);
      }
      return m;
    case NodeKind::Neg:
      m = as_monomial(*n.args[0], var);
      m.coeff = -m.coeff;
      return m;
    case NodeKind::Mul:
      return mono_mul(as_monomial(*n.args[0], var), as_monomial(*n.args[1], var), 1);
    case NodeKind::Div:
      return mono_mul(as_monomial(*n.args[0], var), as_monomial(*n.args[1], var), -1);
    case NodeKind::Pow: {
      const SymMonomial b = as_monomial(*n.args[0], var);
      const IndexPoly p = as_index_poly(*n.args[1], var);
      if (p.is_constant()) {
        m.q = p.c * b.q;
        for (const auto& [name, poly] : b.params) m.params[name] = p.c * poly;
        if (b.coeff != 1 || b.ratio != 1) {
          if (!is_integer(p.c)) throw ShapeError("fractional power of a constant");
          m.coeff = qseries::pow(b.coeff, to_int64(p.c));
          m.ratio = qseries::pow(b.ratio, to_int64(p.c));
        }
        return m;
      }
      if (!b.q.is_constant() || b.ratio != 1) throw ShapeError("index-dependent base raised to an index-dependent power");
      m.q = b.q.c * p;
      for (const auto& [name, poly] : b.params) {
        if (!poly.is_constant()) throw ShapeError("index-dependent base raised to an index-dependent power");
        m.params[name] = poly.c * p;
      }
      if (b.coeff != 1) {
        if (p.a != 0 || !is_integer(p.b) || !is_integer(p.c)) throw ShapeError("constant raised to a non-linear power");
        m.coeff = qseries::pow(b.coeff, to_int64(p.c));
        m.ratio = qseries::pow(b.coeff, to_int64(p.b));
      }
      return m;
    }
    default:
      throw ShapeError("not a monomial: " + to_string(n));
  }
}

inline SymArg as_arg(const Node& n, const std::string& var) {
  SymMonomial m = as_monomial(n, var);
  if (m.ratio != 1) throw ShapeError("Pochhammer argument with an index-dependent constant: " + to_string(n));
  SymArg a;
  a.c = m.coeff;
  a.e = m.q;
  for (const auto& [name, p] : m.params) {
    if (!p.is_constant() || !is_integer(p.c)) throw ShapeError("Pochhammer argument with an index-dependent parameter");
    a.params[name] = to_int64(p.c);
  }
  return a;
}

inline PochSpec as_poch(const Node& call, const std::string& var) {
  PochSpec p;
  p.arg = as_arg(*call.args[0], var);
  SymMonomial b = as_monomial(*call.args[1], var);
  if (b.coeff != 1 || b.ratio != 1 || !b.params.empty() || !b.q.is_constant() || b.q.c <= 0)
    throw ShapeError("Pochhammer base must be a positive power of q");
  p.base = Exponent::from_rational(b.q.c);
  IndexPoly len = as_index_poly(*call.args[2], var);
  if (len.a != 0 || !is_integer(len.b) || !is_integer(len.c)) throw ShapeError("Pochhammer length must be linear in the index");
  p.lam = to_int64(len.b);
  p.mu = to_int64(len.c);
  return p;
}

inline void read_body(const Node& n, EulerianDescriptor& d, bool numerator) {
  const std::string& var = d.index;
  switch (n.kind) {
    case NodeKind::Mul:
      read_body(*n.args[0], d, numerator);
      read_body(*n.args[1], d, numerator);
      return;
    case NodeKind::Div:
      read_body(*n.args[0], d, numerator);
      read_body(*n.args[1], d, !numerator);
      return;
    case NodeKind::Neg:
      d.pre.coeff = -d.pre.coeff;
      read_body(*n.args[0], d, numerator);
      return;
    case NodeKind::Call:
      if (n.name == "poch") {
        (numerator ? d.num : d.den).push_back(as_poch(n, var));
        return;
      }
      break;
    case NodeKind::Pow:
      if (n.args[0]->kind == NodeKind::Call && n.args[0]->name == "poch") {
        IndexPoly k = as_index_poly(*n.args[1], var);
        if (!k.is_constant() || !is_integer(k.c)) throw ShapeError("Pochhammer power must be an integer");
        const auto e = to_int64(k.c);
        for (std::int64_t i = 0; i < (e < 0 ? -e : e); ++i)
          ((e < 0) != numerator ? d.num : d.den).push_back(as_poch(*n.args[0], var));
        return;
      }
      break;
    case NodeKind::Add:
    case NodeKind::Sub:
      // 1 - M or 1 + M is a Pochhammer factor of length one.
      if (n.args[0]->kind == NodeKind::Number && n.args[0]->value == 1) {
        PochSpec p;
        p.arg = as_arg(*n.args[1], var);
        if (n.kind == NodeKind::Add) p.arg.c = -p.arg.c;
        p.lam = 0;
        p.mu = 1;
        (numerator ? d.num : d.den).push_back(std::move(p));
        return;
      }
      throw ShapeError("sum inside a summand must have the form 1 - M: " + to_string(n));
    default:
      break;
  }
  d.pre = mono_mul(d.pre, as_monomial(n, var), numerator ? 1 : -1);
}

inline void scale_all(DescriptorSum& s, const SymMonomial& m) {
  for (auto& t : s.terms) t.pre = mono_mul(t.pre, m, 1);
}

}  // namespace eval_detail

/// Reads a sum expression (or a linear combination of sums) as Eulerian descriptors.
inline DescriptorSum to_descriptor(const Node& n) {
  using namespace eval_detail;
  switch (n.kind) {
    case NodeKind::Sum: {
      EulerianDescriptor d;
      d.index = n.name;
      d.bound = n.bound;
      d.range = n.range == SumRange::From ? IndexRange::From : (n.range == SumRange::UpTo ? IndexRange::UpTo : IndexRange::All);
      read_body(*n.args[0], d, true);
      return {{d}};
    }
    case NodeKind::Add:
    case NodeKind::Sub: {
      DescriptorSum a = to_descriptor(*n.args[0]);
      DescriptorSum b = to_descriptor(*n.args[1]);
      if (n.kind == NodeKind::Sub) scale_all(b, SymMonomial{-1, 1, {}, {}});
      a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
      return a;
    }
    case NodeKind::Neg: {
      DescriptorSum a = to_descriptor(*n.args[0]);
      scale_all(a, SymMonomial{-1, 1, {}, {}});
      return a;
    }
    case NodeKind::Mul: {
      const bool left_sum = n.args[0]->kind == NodeKind::Sum || n.args[0]->kind == NodeKind::Add ||
                            n.args[0]->kind == NodeKind::Sub || n.args[0]->kind == NodeKind::Neg;
      const Node& s = left_sum ? *n.args[0] : *n.args[1];
      const Node& m = left_sum ? *n.args[1] : *n.args[0];
      DescriptorSum a = to_descriptor(s);
      scale_all(a, as_monomial(m, ""));
      return a;
    }
    default:
      throw ShapeError("not a sum: " + to_string(n));
  }
}

inline DescriptorSum to_descriptor(std::string_view text) { return to_descriptor(*parse_expression(text)); }

}  // namespace qseries
