#pragma once

// Structured one-index q-sums and the q -> 1/q rewrite.
//
// A descriptor term is
//   coeff * ratio^n * q^{P(n)} * prod_k a_k^{P_k(n)} * prod (x; q^f)_{L(n)} / prod (x; q^f)_{L(n)}
// with P quadratic in n and each Pochhammer argument x = c q^{e(n)} prod a_k^{m_k}.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qseries/qfunctions.hpp"
#include "qseries/series.hpp"
#include "qseries/term_sum.hpp"

namespace qseries {

using Bindings = std::map<std::string, ParamValue>;

/// a n^2 + b n + c with rational coefficients.
struct IndexPoly {
  Rational a, b, c;

  static IndexPoly constant(const Rational& v) { return {0, 0, v}; }
  static IndexPoly linear(const Rational& slope, const Rational& v) { return {0, slope, v}; }

  Rational at(std::int64_t n) const { return a * n * n + b * n + c; }
  bool is_constant() const { return a == 0 && b == 0; }
  bool is_zero() const { return a == 0 && b == 0 && c == 0; }
  int degree() const { return a != 0 ? 2 : (b != 0 ? 1 : 0); }

  friend IndexPoly operator+(const IndexPoly& x, const IndexPoly& y) { return {x.a + y.a, x.b + y.b, x.c + y.c}; }
  friend IndexPoly operator-(const IndexPoly& x, const IndexPoly& y) { return {x.a - y.a, x.b - y.b, x.c - y.c}; }
  IndexPoly operator-() const { return {-a, -b, -c}; }
  friend IndexPoly operator*(const Rational& k, const IndexPoly& x) { return {k * x.a, k * x.b, k * x.c}; }
  friend IndexPoly operator*(const IndexPoly& x, const IndexPoly& y) {
    if (x.degree() + y.degree() > 2) throw ShapeError("index polynomial of degree above 2");
    return {x.a * y.c + x.b * y.b + x.c * y.a, x.b * y.c + x.c * y.b, x.c * y.c};
  }
  friend bool operator==(const IndexPoly& x, const IndexPoly& y) { return x.a == y.a && x.b == y.b && x.c == y.c; }

  /// p(n + k).
  IndexPoly shifted(std::int64_t k) const { return {a, b + 2 * a * k, at(k)}; }

  std::string str(const std::string& var = "n") const {
    std::string out;
    auto put = [&](const Rational& coef, const std::string& mono) {
      if (coef == 0) return;
      Rational mag = abs(coef);
      std::string body;
      if (mono.empty()) {
        body = mag.get_str();
      } else if (mag == 1) {
        body = mono;
      } else if (mag.get_den() == 1) {
        body = mag.get_str() + "*" + mono;
      } else {
        body = "(" + mag.get_str() + ")*" + mono;
      }
      if (out.empty()) {
        out = coef < 0 ? "-" + body : body;
      } else {
        out += coef < 0 ? " - " + body : " + " + body;
      }
    };
    put(a, var + "^2");
    put(b, var);
    put(c, "");
    return out.empty() ? "0" : out;
  }
};

/// c * q^{e(n)} * prod a_k^{m_k}; used as a Pochhammer argument.
struct SymArg {
  Rational c = 1;
  IndexPoly e;
  std::map<std::string, std::int64_t> params;

  ParamValue bind(std::int64_t n, const Bindings& b) const;
  friend bool operator==(const SymArg&, const SymArg&) = default;
};

/// (arg; q^base)_{lam n + mu}.
struct PochSpec {
  SymArg arg;
  Exponent base = 1;
  std::int64_t lam = 1;
  std::int64_t mu = 0;

  std::int64_t length(std::int64_t n) const { return lam * n + mu; }
  friend bool operator==(const PochSpec&, const PochSpec&) = default;
};

/// coeff * ratio^n * q^{q(n)} * prod a_k^{P_k(n)}.
struct SymMonomial {
  Rational coeff = 1;
  Rational ratio = 1;
  IndexPoly q;
  std::map<std::string, IndexPoly> params;

  friend bool operator==(const SymMonomial&, const SymMonomial&) = default;
};

enum class IndexRange { From, UpTo, All };

struct EulerianDescriptor {
  std::string index = "n";
  IndexRange range = IndexRange::From;
  std::int64_t bound = 0;  // n >= bound, or n <= bound
  SymMonomial pre;
  std::vector<PochSpec> num;
  std::vector<PochSpec> den;

  bool is_partial_theta() const { return num.empty() && den.empty(); }
};

/// A finite sum of descriptors plus an exact monomial part (constants such as the 2 in 2 - ...).
struct DescriptorSum {
  std::vector<EulerianDescriptor> terms;
};

namespace detail {

inline Rational rational_pow(const Rational& base, const Rational& e) {
  if (e.get_den() != 1) throw ShapeError("non-integer power of a constant");
  if (!e.get_num().fits_slong_p()) throw ShapeError("power out of range");
  return qseries::pow(base, e.get_num().get_si());
}

inline ParamValue param_of(const std::string& name, const Bindings& b) {
  auto it = b.find(name);
  if (it == b.end()) throw Error("no binding for parameter " + name);
  return it->second;
}

}  // namespace detail

inline ParamValue SymArg::bind(std::int64_t n, const Bindings& b) const {
  ParamValue out(c, Exponent::from_rational(e.at(n)));
  for (const auto& [name, k] : params) out = out * detail::param_of(name, b).pow(k);
  return out;
}

/// Exact monomial value of the prefactor at index n.
inline ParamValue bind_monomial(const SymMonomial& m, std::int64_t n, const Bindings& b) {
  ParamValue out(m.coeff * qseries::pow(m.ratio, n), Exponent::from_rational(m.q.at(n)));
  for (const auto& [name, poly] : m.params) {
    const Rational k = poly.at(n);
    if (k.get_den() != 1) throw ShapeError("parameter " + name + " raised to a non-integer power");
    out = out * detail::param_of(name, b).pow(k.get_num().get_si());
  }
  return out;
}

inline TermPlan descriptor_term(const EulerianDescriptor& d, std::int64_t n, const Bindings& b, Lattice lat) {
  TermPlan t;
  const ParamValue pre = bind_monomial(d.pre, n, b);
  t.coeff = pre.c;
  t.shift = lat.numerator(pre.e);
  for (const auto* list : {&d.num, &d.den}) {
    const bool numerator = list == &d.num;
    for (const auto& p : *list) {
      const ParamValue x = p.arg.bind(n, b);
      t.pochhammer(x.c, lat.numerator(x.e), detail::base_num(p.base, lat), p.length(n), numerator);
    }
  }
  return t;
}

inline QSeries evaluate_descriptor(const EulerianDescriptor& d, Exponent order, Lattice lat = {},
                                   const Bindings& b = {}) {
  auto plan = [&](std::int64_t n) -> std::optional<TermPlan> { return descriptor_term(d, n, b, lat); };
  const auto o = lat.numerator(order);
  switch (d.range) {
    case IndexRange::From:
      return sum_terms(plan, SumDirection::Up, d.bound, o, lat);
    case IndexRange::UpTo:
      return sum_terms(plan, SumDirection::Down, d.bound, o, lat);
    case IndexRange::All:
      break;
  }
  return sum_terms(plan, SumDirection::Both, 0, o, lat);
}

inline QSeries evaluate_descriptor(const DescriptorSum& s, Exponent order, Lattice lat = {}, const Bindings& b = {}) {
  QSeries acc = QSeries::zero_num(lat, lat.numerator(order));
  for (const auto& d : s.terms) acc = add(acc, evaluate_descriptor(d, order, lat, b));
  return acc;
}

namespace detail {

/// Multiplies (mult = 1) or divides (mult = -1) the prefactor by (-x)^L q^{-e(n) L - f C(L,2)}.
inline void absorb_released(SymMonomial& pre, const PochSpec& p, int mult) {
  const Rational lam = p.lam;
  const Rational mu = p.mu;
  const IndexPoly len = IndexPoly::linear(lam, mu);
  const Rational f = p.base.to_rational();
  // C(L,2) = (L^2 - L)/2
  const IndexPoly choose2 = Rational(1, 2) * (len * len - len);
  const IndexPoly qpart = -(p.arg.e * len) - f * choose2;
  const Rational negc = -p.arg.c;
  Rational coeff = rational_pow(negc, mu);
  Rational ratio = rational_pow(negc, lam);
  if (mult < 0) {
    coeff = 1 / coeff;
    ratio = 1 / ratio;
  }
  pre.coeff *= coeff;
  pre.ratio *= ratio;
  pre.q = pre.q + Rational(mult) * qpart;
  for (const auto& [name, k] : p.arg.params) {
    auto& slot = pre.params[name];
    slot = slot + Rational(mult * k) * len;
    if (slot.is_zero()) pre.params.erase(name);
  }
}

}  // namespace detail

/// q -> 1/q applied to the summand. With x = c q^e the factor (c q^{-e}; q^{-f})_L becomes
/// (c^{-1} q^e; q^f)_L (-c)^L q^{-eL - fC(L,2)}.
inline EulerianDescriptor invert_q(const EulerianDescriptor& d) {
  EulerianDescriptor out = d;
  out.pre.q = -d.pre.q;
  out.num.clear();
  out.den.clear();
  auto flip = [&](const PochSpec& p, bool numerator) {
    PochSpec dst = p;
    dst.arg.c = 1 / p.arg.c;
    dst.arg.e = p.arg.e;
    for (auto& [name, k] : dst.arg.params) k = -k;
    detail::absorb_released(out.pre, p, numerator ? 1 : -1);
    (numerator ? out.num : out.den).push_back(std::move(dst));
  };
  for (const auto& p : d.num) flip(p, true);
  for (const auto& p : d.den) flip(p, false);
  return out;
}

inline DescriptorSum invert_q(const DescriptorSum& s) {
  DescriptorSum out;
  for (const auto& d : s.terms) out.terms.push_back(invert_q(d));
  return out;
}

/// q^deg * p(1/q) for an exact Laurent polynomial p with top exponent deg.
inline QSeries reciprocal_polynomial(const QSeries& p) {
  if (!p.is_exact()) throw ShapeError("reciprocal_polynomial needs an exact polynomial, got order " + p.order_text());
  if (p.is_zero()) return p;
  const auto& d = p.dense();
  std::vector<Rational> out(d.rbegin(), d.rend());
  return QSeries::from_dense(p.lattice(), 0, std::move(out));
}

/// lhs - rhs at the smaller of the two orders.
inline QSeries remainder(const QSeries& lhs, const QSeries& rhs) { return sub(lhs, rhs); }

/// An Appell-Lerch candidate  coeff * q^shift * prod a^k * m(x, q^base, z)  with z possibly unresolved.
struct AppellCandidate {
  Rational coeff = 1;
  Exponent shift = 0;
  std::map<std::string, std::int64_t> params;
  ParamValue x;
  std::map<std::string, std::int64_t> x_params;
  Exponent base = 1;
  std::optional<ParamValue> z;  // nullopt prints as '*'

  friend bool operator==(const AppellCandidate&, const AppellCandidate&) = default;
};

namespace detail {

inline std::string param_text(const std::map<std::string, std::int64_t>& params) {
  std::string out;
  for (const auto& [name, k] : params) {
    if (k == 0) continue;
    out += "*" + name;
    if (k != 1) out += "^(" + std::to_string(k) + ")";
  }
  return out;
}

inline std::string monomial_text(const Rational& c, Exponent e, const std::map<std::string, std::int64_t>& params) {
  std::string out;
  const bool unit = (c == 1 || c == -1);
  if (e == 0 && params.empty()) return c.get_str();
  if (c == -1) out = "-";
  if (!unit) out = c.get_den() == 1 ? c.get_str() : "(" + c.get_str() + ")";
  std::string body;
  if (e != 0) body = power_text(e);
  std::string ptext = param_text(params);
  if (body.empty() && !ptext.empty()) ptext.erase(0, 1);
  body += ptext;
  if (!unit) return out + "*" + body;
  return out + body;
}

}  // namespace detail

inline std::string to_string(const AppellCandidate& c) {
  std::string pre = detail::monomial_text(c.coeff, c.shift, c.params);
  std::string out = pre == "1" ? "" : (pre == "-1" ? "-" : pre + "*");
  out += "m(" + detail::monomial_text(c.x.c, c.x.e, c.x_params) + "; " + detail::power_text(c.base) + "; ";
  out += c.z ? detail::monomial_text(c.z->c, c.z->e, {}) : std::string("*");
  return out + ")";
}

/// Applies m(x,q,z) = x^{-1} m(x^{-1},q,z^{-1}) when x carries a negative power of q.
inline AppellCandidate flip_normalized(AppellCandidate c) {
  if (c.x.e >= 0) return c;
  c.coeff /= c.x.c;
  c.shift = c.shift - c.x.e;
  for (const auto& [name, k] : c.x_params) {
    c.params[name] -= k;
    if (c.params[name] == 0) c.params.erase(name);
  }
  c.x = c.x.inverse();
  for (auto& [name, k] : c.x_params) k = -k;
  if (c.z) c.z = c.z->inverse();
  return c;
}

/// Step (iii): a partial theta sum s * X^n q^{M C(n+1,2)} over n >= 0, read after q -> 1/q, is
/// exchanged for s(1/q) m(-X(1/q), q^M, *).
inline std::vector<AppellCandidate> heuristic_candidates(const EulerianDescriptor& d, bool normalize = true) {
  if (!d.is_partial_theta()) throw ShapeError("shape mismatch: heuristic needs a sum without Pochhammer factors");
  if (d.range != IndexRange::From) throw ShapeError("shape mismatch: heuristic needs a sum over n >= n0");
  SymMonomial pre = d.pre;
  pre.q = pre.q.shifted(d.bound);
  for (auto& [name, poly] : pre.params) poly = poly.shifted(d.bound);
  pre.coeff *= qseries::pow(pre.ratio, d.bound);
  if (pre.q.a <= 0) throw ShapeError("shape mismatch: exponent is not a positive quadratic in n");
  const Rational A = pre.q.a;
  const Exponent M = Exponent::from_rational(2 * A);
  AppellCandidate c;
  c.coeff = pre.coeff;
  c.shift = Exponent::from_rational(-pre.q.c);
  c.base = M;
  // X = ratio q^{B-A} prod a^{b_k}; after q -> 1/q the argument is -ratio q^{A-B}.
  c.x = ParamValue(-pre.ratio, Exponent::from_rational(A - pre.q.b));
  for (const auto& [name, poly] : pre.params) {
    if (poly.a != 0) throw ShapeError("shape mismatch: parameter " + name + " carries a quadratic power");
    if (poly.b.get_den() != 1 || poly.c.get_den() != 1) throw ShapeError("shape mismatch: fractional power");
    if (poly.b != 0) c.x_params[name] = poly.b.get_num().get_si();
    if (poly.c != 0) c.params[name] = poly.c.get_num().get_si();
  }
  return {normalize ? flip_normalized(c) : c};
}

/// Splits numerator factors (u; q^k)_1 = 1 - u into two summands, so a sum such as
/// sum q^(12n^2+n) (1 - q^(22n+11)) becomes two plain partial theta sums.
inline std::vector<EulerianDescriptor> split_unit_factors(const EulerianDescriptor& d) {
  for (std::size_t i = 0; i < d.num.size(); ++i) {
    const PochSpec& p = d.num[i];
    if (p.lam != 0 || p.mu != 1) continue;
    EulerianDescriptor keep = d;
    keep.num.erase(keep.num.begin() + static_cast<std::ptrdiff_t>(i));
    EulerianDescriptor other = keep;
    other.pre.coeff *= -p.arg.c;
    other.pre.q = other.pre.q + p.arg.e;
    for (const auto& [name, k] : p.arg.params)
      other.pre.params[name] = other.pre.params[name] + IndexPoly::constant(k);
    auto out = split_unit_factors(keep);
    auto rest = split_unit_factors(other);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
  return {d};
}

inline std::vector<AppellCandidate> heuristic_candidates(const DescriptorSum& s, bool normalize = true) {
  std::vector<AppellCandidate> out;
  for (const auto& t : s.terms)
    for (const auto& d : split_unit_factors(t)) {
      auto part = heuristic_candidates(d, normalize);
      out.insert(out.end(), part.begin(), part.end());
    }
  return out;
}

/// Evaluates candidates once each z is supplied.
inline QSeries evaluate_candidates(const std::vector<AppellCandidate>& cs, Exponent order, Lattice lat = {},
                                   const Bindings& b = {}) {
  QSeries acc = QSeries::zero_num(lat, lat.numerator(order));
  for (const auto& c : cs) {
    if (!c.z) throw Error("candidate " + to_string(c) + " has an unresolved z");
    ParamValue x = c.x;
    for (const auto& [name, k] : c.x_params) x = x * detail::param_of(name, b).pow(k);
    ParamValue pre(c.coeff, c.shift);
    for (const auto& [name, k] : c.params) pre = pre * detail::param_of(name, b).pow(k);
    const auto slack = std::max<std::int64_t>(0, -lat.numerator(pre.e));
    QSeries m = appell_m(x, c.base, *c.z, lat.exponent(lat.numerator(order) + slack), lat);
    acc = add(acc, truncate_num(mul(make_monomial(pre, lat), m), lat.numerator(order)));
  }
  return acc;
}

// ---- text form -----------------------------------------------------------

namespace detail {

inline std::string sym_arg_text(const SymArg& a, const std::string& var) {
  std::string out;
  if (a.c == -1) out = "-";
  else if (a.c != 1) out = (a.c.get_den() == 1 ? a.c.get_str() : "(" + a.c.get_str() + ")") + "*";
  std::string body;
  if (!a.e.is_zero()) body = a.e.is_constant() && a.e.c == 1 ? "q" : "q^(" + a.e.str(var) + ")";
  std::string ptext = param_text(a.params);
  if (body.empty()) {
    if (ptext.empty()) return a.c.get_str();
    ptext.erase(0, 1);
  }
  body += ptext;
  return out + body;
}

inline std::string length_text(std::int64_t lam, std::int64_t mu, const std::string& var) {
  IndexPoly p = IndexPoly::linear(lam, mu);
  return p.str(var);
}

}  // namespace detail

inline std::string to_string(const PochSpec& p, const std::string& var = "n") {
  return "poch(" + detail::sym_arg_text(p.arg, var) + "; " + detail::power_text(p.base) + "; " +
         detail::length_text(p.lam, p.mu, var) + ")";
}

/// Text in the expression grammar, e.g. "sum(n>=0) q^(2*n^2) / poch(-q; q; 2*n)".
inline std::string to_string(const EulerianDescriptor& d) {
  const std::string& v = d.index;
  std::string out = "sum(" + v;
  switch (d.range) {
    case IndexRange::From: out += ">=" + std::to_string(d.bound); break;
    case IndexRange::UpTo: out += "<=" + std::to_string(d.bound); break;
    case IndexRange::All: out += " in Z"; break;
  }
  out += ") ";
  std::vector<std::string> factors;
  const auto& m = d.pre;
  if (m.coeff != 1) factors.push_back(m.coeff.get_den() == 1 && m.coeff > 0 ? m.coeff.get_str() : "(" + m.coeff.get_str() + ")");
  if (m.ratio != 1) factors.push_back("(" + m.ratio.get_str() + ")^" + v);
  if (!m.q.is_zero()) factors.push_back("q^(" + m.q.str(v) + ")");
  for (const auto& [name, poly] : m.params) factors.push_back(name + "^(" + poly.str(v) + ")");
  for (const auto& p : d.num) factors.push_back(to_string(p, v));
  if (factors.empty()) factors.push_back("1");
  for (std::size_t i = 0; i < factors.size(); ++i) out += (i ? " * " : "") + factors[i];
  for (const auto& p : d.den) out += " / " + to_string(p, v);
  return out;
}

inline std::string to_string(const DescriptorSum& s) {
  std::string out;
  for (std::size_t i = 0; i < s.terms.size(); ++i) out += (i ? " + " : "") + to_string(s.terms[i]);
  return out.empty() ? "0" : out;
}

}  // namespace qseries
