#pragma once

// Truncated Laurent series in q with exact rational coefficients.
//
// Exponents live on a lattice (1/D)Z. Internally every exponent is stored as
// its numerator over D; coefficients are kept densely between the lowest and
// highest nonzero term. A series either carries a finite truncation order
// (coefficients at exponents >= order are unknown) or is exact, in which case
// it is a Laurent polynomial known completely.

#include <gmp.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qseries/error.hpp"
#include "qseries/exponent.hpp"
#include "qseries/rational.hpp"

namespace qseries {

/// The monomial c*q^e used for every specialized argument (x, z, a, b, ...).
struct ParamValue {
  Rational c = 1;
  Exponent e = 0;

  ParamValue() = default;
  ParamValue(Rational coeff, Exponent exp) : c(std::move(coeff)), e(exp) {
    if (c == 0) throw Error("parameter value must have a nonzero coefficient");
  }

  friend ParamValue operator*(const ParamValue& a, const ParamValue& b) { return {a.c * b.c, a.e + b.e}; }
  friend ParamValue operator/(const ParamValue& a, const ParamValue& b) { return {a.c / b.c, a.e - b.e}; }
  ParamValue inverse() const { return {1 / c, -e}; }
  ParamValue pow(std::int64_t k) const { return {qseries::pow(c, k), e * Exponent(k)}; }
  friend bool operator==(const ParamValue& a, const ParamValue& b) { return a.c == b.c && a.e == b.e; }

  std::string str() const;
};

/// c * q^e with c rational; shorthand used by tests and the corpus.
inline ParamValue pv(const Rational& c, Exponent e = 0) { return {c, e}; }
inline ParamValue qpow(Exponent e) { return {1, e}; }

class QSeries {
 public:
  /// Exact zero on the integer lattice.
  QSeries() = default;

  static QSeries exact_zero(Lattice lat = {}) {
    QSeries s;
    s.den_ = lat.den;
    return s;
  }
  /// O(q^order): zero with a finite truncation order (order given as a lattice numerator).
  static QSeries zero_num(Lattice lat, std::int64_t order_num) {
    QSeries s;
    s.den_ = lat.den;
    s.order_ = order_num;
    return s;
  }
  /// Builds from dense coefficients starting at numerator lo; drops terms at or beyond order.
  static QSeries from_dense(Lattice lat, std::int64_t lo, std::vector<Rational> coeffs,
                            std::int64_t order_num = detail::kInfinite) {
    QSeries s;
    s.den_ = lat.den;
    s.lo_ = lo;
    s.order_ = order_num;
    s.coeffs_ = std::move(coeffs);
    s.trim();
    return s;
  }
  static QSeries monomial_num(Lattice lat, const Rational& c, std::int64_t e_num,
                              std::int64_t order_num = detail::kInfinite) {
    if (c == 0 || e_num >= order_num) return zero_num(lat, order_num);
    return from_dense(lat, e_num, {c}, order_num);
  }

  Lattice lattice() const noexcept { return {den_}; }
  bool is_exact() const noexcept { return order_ == detail::kInfinite; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// Truncation order as a lattice numerator; kInfinite when exact.
  std::int64_t order_num() const noexcept { return order_; }
  Exponent order() const {
    if (is_exact()) throw Error("exact series has no truncation order");
    return lattice().exponent(order_);
  }
  /// Lowest stored numerator, or the order when the series is zero to its order.
  std::int64_t low_num() const noexcept { return coeffs_.empty() ? order_ : lo_; }
  /// Highest stored numerator; only meaningful when nonzero.
  std::int64_t high_num() const noexcept { return lo_ + static_cast<std::int64_t>(coeffs_.size()) - 1; }
  Exponent valuation() const { return lattice().exponent(low_num()); }

  Rational coeff_num(std::int64_t k) const {
    if (k >= order_) throw BeyondTruncation("coefficient at q^" + lattice().exponent(k).str() +
                                            " is beyond the truncation order " + order_text());
    if (coeffs_.empty() || k < lo_ || k > high_num()) return 0;
    return coeffs_[static_cast<std::size_t>(k - lo_)];
  }
  /// Raw dense storage from low_num(); may contain interior zeros.
  const std::vector<Rational>& dense() const noexcept { return coeffs_; }

  /// Nonzero terms in ascending exponent order.
  std::vector<std::pair<Exponent, Rational>> terms() const {
    std::vector<std::pair<Exponent, Rational>> out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) out.emplace_back(lattice().exponent(lo_ + static_cast<std::int64_t>(i)), coeffs_[i]);
    return out;
  }
  std::size_t term_count() const {
    return static_cast<std::size_t>(std::count_if(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c != 0; }));
  }
  bool all_integer() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.get_den() == 1; });
  }

  std::string order_text() const { return is_exact() ? "exact" : lattice().exponent(order_).str(); }

  friend QSeries add(const QSeries& f, const QSeries& g);
  friend QSeries scale(const QSeries& f, const Rational& c);
  friend QSeries shift_num(const QSeries& f, std::int64_t k);
  friend QSeries truncate_num(const QSeries& f, std::int64_t order_num);
  friend QSeries mul(const QSeries& f, const QSeries& g);
  friend QSeries invert(const QSeries& f);

 private:
  void trim() {
    if (order_ != detail::kInfinite) {
      auto max_len = order_ - lo_;
      if (max_len <= 0) {
        coeffs_.clear();
      } else if (static_cast<std::int64_t>(coeffs_.size()) > max_len) {
        coeffs_.resize(static_cast<std::size_t>(max_len));
      }
    }
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    std::size_t first = 0;
    while (first < coeffs_.size() && coeffs_[first] == 0) ++first;
    if (first == coeffs_.size()) {
      coeffs_.clear();
      lo_ = 0;
    } else if (first > 0) {
      coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
      lo_ += static_cast<std::int64_t>(first);
    }
  }

  std::int64_t den_ = 1;
  std::int64_t lo_ = 0;
  std::int64_t order_ = detail::kInfinite;
  std::vector<Rational> coeffs_;
};

namespace detail {

inline void require_same_lattice(const QSeries& f, const QSeries& g) {
  if (f.lattice() != g.lattice())
    throw LatticeMismatch("lattice mismatch: 1/" + std::to_string(f.lattice().den) + " vs 1/" +
                          std::to_string(g.lattice().den));
}

/// Splits coefficients into integer numerators over a common denominator.
inline Integer common_numerators(const std::vector<Rational>& v, std::vector<Integer>& out) {
  Integer den = 1;
  for (const auto& c : v)
    if (c.get_den() != 1) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  out.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (den == 1) {
      out[i] = v[i].get_num();
    } else {
      out[i] = den / v[i].get_den();
      out[i] *= v[i].get_num();
    }
  }
  return den;
}

}  // namespace detail

/// c*q^e + O(q^order).
inline QSeries make_monomial(const Rational& c, Exponent e, Exponent order, Lattice lat = {}) {
  return QSeries::monomial_num(lat, c, lat.numerator(e), lat.numerator(order));
}
/// Exact monomial c*q^e.
inline QSeries make_monomial(const Rational& c, Exponent e, Lattice lat = {}) {
  return QSeries::monomial_num(lat, c, lat.numerator(e));
}
inline QSeries make_monomial(const ParamValue& p, Lattice lat = {}) { return make_monomial(p.c, p.e, lat); }
inline QSeries one(Lattice lat = {}) { return QSeries::monomial_num(lat, 1, 0); }

inline QSeries add(const QSeries& f, const QSeries& g) {
  detail::require_same_lattice(f, g);
  auto order = std::min(f.order_, g.order_);
  if (f.is_zero() && g.is_zero()) return QSeries::zero_num(f.lattice(), order);
  std::int64_t lo = f.is_zero() ? g.lo_ : (g.is_zero() ? f.lo_ : std::min(f.lo_, g.lo_));
  std::int64_t hi = std::max(f.is_zero() ? lo : f.high_num(), g.is_zero() ? lo : g.high_num());
  if (order != detail::kInfinite) hi = std::min(hi, order - 1);
  if (hi < lo) return QSeries::zero_num(f.lattice(), order);
  std::vector<Rational> out(static_cast<std::size_t>(hi - lo + 1));
  for (const QSeries* s : {&f, &g}) {
    for (std::size_t i = 0; i < s->coeffs_.size(); ++i) {
      auto k = s->lo_ + static_cast<std::int64_t>(i);
      if (k > hi) break;
      if (s->coeffs_[i] != 0) out[static_cast<std::size_t>(k - lo)] += s->coeffs_[i];
    }
  }
  return QSeries::from_dense(f.lattice(), lo, std::move(out), order);
}

inline QSeries scale(const QSeries& f, const Rational& c) {
  if (c == 0) return QSeries::zero_num(f.lattice(), f.order_);
  QSeries r = f;
  for (auto& x : r.coeffs_) x *= c;
  return r;
}

inline QSeries neg(const QSeries& f) { return scale(f, -1); }
inline QSeries sub(const QSeries& f, const QSeries& g) { return add(f, neg(g)); }

/// Multiplication by q^(k/D).
inline QSeries shift_num(const QSeries& f, std::int64_t k) {
  QSeries r = f;
  r.lo_ += k;
  r.order_ = detail::sat_add(r.order_, k);
  return r;
}

/// Forgets every coefficient at or beyond the given numerator.
inline QSeries truncate_num(const QSeries& f, std::int64_t order_num) {
  if (order_num >= f.order_) return f;
  QSeries r = f;
  r.order_ = order_num;
  r.trim();
  return r;
}
inline QSeries truncate(const QSeries& f, Exponent order) { return truncate_num(f, f.lattice().numerator(order)); }

/// Convolution. The result order follows the lowest-exponent window rule:
/// min(f.order + v_g, g.order + v_f).
inline QSeries mul(const QSeries& f, const QSeries& g) {
  detail::require_same_lattice(f, g);
  auto order = std::min(detail::sat_add(f.order_, g.low_num()), detail::sat_add(g.order_, f.low_num()));
  if (f.is_zero() || g.is_zero()) {
    if (order == detail::kInfinite) return QSeries::exact_zero(f.lattice());
    return QSeries::zero_num(f.lattice(), order);
  }
  auto lo = f.lo_ + g.lo_;
  auto len = static_cast<std::int64_t>(f.coeffs_.size() + g.coeffs_.size() - 1);
  if (order != detail::kInfinite) len = std::min(len, order - lo);
  if (len <= 0) return QSeries::zero_num(f.lattice(), order);

  std::vector<Integer> fi, gi;
  Integer fd = detail::common_numerators(f.coeffs_, fi);
  Integer gd = detail::common_numerators(g.coeffs_, gi);
  std::vector<Integer> acc(static_cast<std::size_t>(len));
  const auto glen = static_cast<std::int64_t>(gi.size());
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(fi.size()) && i < len; ++i) {
    if (fi[static_cast<std::size_t>(i)] == 0) continue;
    const auto jmax = std::min(glen, len - i);
    mpz_srcptr a = fi[static_cast<std::size_t>(i)].get_mpz_t();
    for (std::int64_t j = 0; j < jmax; ++j) {
      const auto& b = gi[static_cast<std::size_t>(j)];
      if (b == 0) continue;
      mpz_addmul(acc[static_cast<std::size_t>(i + j)].get_mpz_t(), a, b.get_mpz_t());
    }
  }
  Integer den = fd * gd;
  std::vector<Rational> out(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k) {
    if (acc[k] == 0) continue;
    out[k] = Rational(acc[k], den);
    out[k].canonicalize();
  }
  return QSeries::from_dense(f.lattice(), lo, std::move(out), order);
}

/// Multiplicative inverse. For f = c q^v (1 + ...) known to order O the
/// inverse is known to order O - 2v. Exact monomials invert exactly.
inline QSeries invert(const QSeries& f) {
  if (f.is_zero()) throw NotInvertible("series is zero to order " + f.order_text() + "; not invertible at this truncation");
  const auto v = f.lo_;
  const Rational& c = f.coeffs_.front();
  if (f.is_exact()) {
    if (f.coeffs_.size() == 1) return QSeries::from_dense(f.lattice(), -v, {1 / c});
    throw NotInvertible("exact polynomial with several terms must be truncated before inversion");
  }
  const auto order = f.order_ - 2 * v;
  const auto len = f.order_ - v;  // relative precision
  std::vector<Rational> a(static_cast<std::size_t>(len));
  for (std::size_t i = 0; i < f.coeffs_.size() && i < a.size(); ++i) a[i] = f.coeffs_[i] / c;
  std::vector<Rational> g(static_cast<std::size_t>(len));
  g[0] = 1;
  bool integral = std::all_of(a.begin(), a.end(), [](const Rational& x) { return x.get_den() == 1; });
  if (integral) {
    std::vector<Integer> ai(a.size()), gi(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) ai[i] = a[i].get_num();
    gi[0] = 1;
    for (std::size_t k = 1; k < gi.size(); ++k) {
      Integer s = 0;
      for (std::size_t i = 1; i <= k; ++i)
        if (ai[i] != 0) mpz_addmul(s.get_mpz_t(), ai[i].get_mpz_t(), gi[k - i].get_mpz_t());
      gi[k] = -s;
    }
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = gi[k];
  } else {
    Rational t;
    for (std::size_t k = 1; k < g.size(); ++k) {
      Rational s = 0;
      for (std::size_t i = 1; i <= k; ++i) {
        if (a[i] == 0 || g[k - i] == 0) continue;
        t = a[i] * g[k - i];
        s += t;
      }
      g[k] = -s;
    }
  }
  Rational inv_c = 1 / c;
  for (auto& x : g) x *= inv_c;
  return QSeries::from_dense(f.lattice(), -v, std::move(g), order);
}

inline QSeries divide(const QSeries& f, const QSeries& g) { return mul(f, invert(g)); }

inline QSeries pow(const QSeries& f, std::int64_t k) {
  if (k < 0) return pow(invert(f), -k);
  QSeries result = one(f.lattice());
  QSeries base = f;
  auto e = static_cast<std::uint64_t>(k);
  while (e) {
    if (e & 1U) result = mul(result, base);
    e >>= 1U;
    if (e) base = mul(base, base);
  }
  return result;
}

inline QSeries operator+(const QSeries& f, const QSeries& g) { return add(f, g); }
inline QSeries operator-(const QSeries& f, const QSeries& g) { return sub(f, g); }
inline QSeries operator-(const QSeries& f) { return neg(f); }
inline QSeries operator*(const QSeries& f, const QSeries& g) { return mul(f, g); }
inline QSeries operator/(const QSeries& f, const QSeries& g) { return divide(f, g); }
inline QSeries operator*(const Rational& c, const QSeries& f) { return scale(f, c); }

/// Expansion of 1/(1 - u q^(k/D)) to the given order numerator.
/// For k < 0 the rewrite -sum_{i>=1} u^{-i} q^{-ik} is used.
inline QSeries geometric_factor_num(const Rational& u, std::int64_t k, std::int64_t order_num, Lattice lat) {
  if (k == 0) {
    if (u == 1) throw Pole("pole: 1/(1 - q^0) with unit coefficient");
    return QSeries::monomial_num(lat, 1 / (1 - u), 0, order_num);
  }
  if (u == 0) return QSeries::monomial_num(lat, 1, 0, order_num);
  std::vector<Rational> out;
  if (k > 0) {
    if (order_num <= 0) return QSeries::zero_num(lat, order_num);
    out.resize(static_cast<std::size_t>(order_num));
    Rational p = 1;
    for (std::int64_t e = 0; e < order_num; e += k) {
      out[static_cast<std::size_t>(e)] = p;
      p *= u;
    }
    return QSeries::from_dense(lat, 0, std::move(out), order_num);
  }
  const auto step = -k;
  if (order_num <= step) return QSeries::zero_num(lat, order_num);
  out.resize(static_cast<std::size_t>(order_num - step));
  Rational inv = 1 / u;
  Rational p = -inv;
  for (std::int64_t e = step; e < order_num; e += step) {
    out[static_cast<std::size_t>(e - step)] = p;
    p *= inv;
  }
  return QSeries::from_dense(lat, step, std::move(out), order_num);
}

inline QSeries geometric_factor(const Rational& u, Exponent e, Exponent order, Lattice lat = {}) {
  return geometric_factor_num(u, lat.numerator(e), lat.numerator(order), lat);
}

/// f * (1 - u q^(k/D)), exact when f is exact.
inline QSeries mul_binomial_num(const QSeries& f, const Rational& u, std::int64_t k) {
  return mul(f, add(one(f.lattice()), QSeries::monomial_num(f.lattice(), -u, k)));
}

/// Substitution q -> q^r for positive rational r on the same lattice.
inline QSeries rescale(const QSeries& f, const Rational& r) {
  if (r <= 0) throw Error("rescale factor must be positive");
  const Lattice lat = f.lattice();
  auto map_num = [&](std::int64_t k) -> std::int64_t {
    Rational v = make_rational(k) * r;
    if (!is_integer(v))
      throw RefineLattice("rescale by " + r.get_str() + " leaves lattice 1/" + std::to_string(lat.den) +
                          "; refine the lattice first");
    return to_int64(v);
  };
  std::int64_t order = detail::kInfinite;
  if (!f.is_exact()) {
    Rational o = make_rational(f.order_num()) * r;
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), o.get_num_mpz_t(), o.get_den_mpz_t());
    order = c.get_si();
  }
  if (f.is_zero()) return f.is_exact() ? QSeries::exact_zero(lat) : QSeries::zero_num(lat, order);
  auto terms = f.terms();
  auto lo = map_num(lat.numerator(terms.front().first));
  auto hi = map_num(lat.numerator(terms.back().first));
  std::vector<Rational> out(static_cast<std::size_t>(hi - lo + 1));
  for (auto& [e, c] : terms) out[static_cast<std::size_t>(map_num(lat.numerator(e)) - lo)] = c;
  return QSeries::from_dense(lat, lo, std::move(out), order);
}

/// Moves f onto a finer lattice (new denominator must be a multiple of the old).
inline QSeries refine(const QSeries& f, Lattice target) {
  const Lattice lat = f.lattice();
  if (target.den % lat.den != 0)
    throw LatticeMismatch("lattice 1/" + std::to_string(target.den) + " does not refine 1/" + std::to_string(lat.den));
  const auto m = target.den / lat.den;
  std::int64_t order = f.is_exact() ? detail::kInfinite : f.order_num() * m;
  if (f.is_zero()) return f.is_exact() ? QSeries::exact_zero(target) : QSeries::zero_num(target, order);
  std::vector<Rational> out(static_cast<std::size_t>((f.high_num() - f.low_num()) * m + 1));
  for (std::size_t i = 0; i < f.dense().size(); ++i) out[i * static_cast<std::size_t>(m)] = f.dense()[i];
  return QSeries::from_dense(target, f.low_num() * m, std::move(out), order);
}

/// Terms whose exponent numerator is congruent to t mod M, each multiplied by weight.
inline QSeries dissect(const QSeries& f, std::int64_t modulus, std::int64_t residue, const Rational& weight = 1) {
  if (modulus <= 0) throw Error("dissection modulus must be positive");
  std::vector<Rational> out(f.dense().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto k = f.low_num() + static_cast<std::int64_t>(i);
    if (detail::mod(k, modulus) == detail::mod(residue, modulus)) out[i] = f.dense()[i] * weight;
  }
  return QSeries::from_dense(f.lattice(), f.low_num(), std::move(out), f.order_num());
}

/// Coefficientwise weights indexed by exponent numerator mod weights.size().
inline QSeries dissect_weighted(const QSeries& f, const std::vector<Rational>& weights) {
  if (weights.empty()) throw Error("weighted dissection needs at least one weight");
  const auto m = static_cast<std::int64_t>(weights.size());
  std::vector<Rational> out(f.dense().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto k = f.low_num() + static_cast<std::int64_t>(i);
    out[i] = f.dense()[i] * weights[static_cast<std::size_t>(detail::mod(k, m))];
  }
  return QSeries::from_dense(f.lattice(), f.low_num(), std::move(out), f.order_num());
}

inline Rational coefficient(const QSeries& f, Exponent e) { return f.coeff_num(f.lattice().numerator(e)); }

struct Mismatch {
  Exponent exponent;
  Rational lhs;
  Rational rhs;
};

struct Comparison {
  bool pass = true;
  Exponent order;
  std::optional<Mismatch> mismatch;
};

/// Exact coefficient comparison below order.
inline Comparison equal_to_order(const QSeries& f, const QSeries& g, Exponent order) {
  detail::require_same_lattice(f, g);
  const Lattice lat = f.lattice();
  const auto o = lat.numerator(order);
  if (o > f.order_num() || o > g.order_num())
    throw BeyondTruncation("comparison order " + order.str() + " exceeds available truncation (" + f.order_text() +
                           ", " + g.order_text() + ")");
  Comparison result{true, order, std::nullopt};
  std::int64_t lo = std::min(f.is_zero() ? o : f.low_num(), g.is_zero() ? o : g.low_num());
  for (std::int64_t k = lo; k < o; ++k) {
    auto a = f.coeff_num(k);
    auto b = g.coeff_num(k);
    if (a != b) {
      result.pass = false;
      result.mismatch = Mismatch{lat.exponent(k), a, b};
      break;
    }
  }
  return result;
}

namespace detail {

inline std::string power_text(Exponent e) {
  if (e == 1) return "q";
  if (e.is_integer() && e.num() > 0) return "q^" + e.str();
  return "q^(" + e.str() + ")";
}

}  // namespace detail

/// Canonical ascending text, e.g. "2 + 2*q + 2*q^3 + O(q^10)".
inline std::string to_string(const QSeries& f) {
  std::string out;
  for (const auto& [e, c] : f.terms()) {
    bool negative = c < 0;
    Rational mag = negative ? Rational(-c) : c;
    std::string term;
    if (e == 0) {
      term = mag.get_str();
    } else if (mag == 1) {
      term = detail::power_text(e);
    } else {
      term = mag.get_str() + "*" + detail::power_text(e);
    }
    if (out.empty()) {
      out = (negative ? "-" : "") + term;
    } else {
      out += (negative ? " - " : " + ") + term;
    }
  }
  if (!f.is_exact()) {
    std::string tail = "O(" + detail::power_text(f.order()) + ")";
    out = out.empty() ? tail : out + " + " + tail;
  } else if (out.empty()) {
    out = "0";
  }
  return out;
}

inline std::string ParamValue::str() const {
  if (e == 0) return c.get_str();
  std::string p = detail::power_text(e);
  if (c == 1) return p;
  if (c == -1) return "-" + p;
  return c.get_str() + "*" + p;
}

}  // namespace qseries
