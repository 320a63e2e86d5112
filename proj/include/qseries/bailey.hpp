#pragma once

// Bailey pairs, the conjugate pair built from delta_n = (-1)^n q^{C(n+1,2)} (a)_n / (1-a),
// and the resulting transformation
//   sum (-1)^n q^{C(n+1,2)} (a)_n beta_n = (q)_inf/(aq)_inf sum (-1)^n q^{C(n+1,2)} (a)_n/(q)_n alpha_n.
//
// A pair relative to (a, q^f) uses (a q^f; q^f) and (q^f; q^f) throughout while
// alpha and beta keep their own closed forms in q.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qseries/qfunctions.hpp"
#include "qseries/series.hpp"
#include "qseries/term_sum.hpp"

namespace qseries {

struct Relative {
  ParamValue a;
  Exponent base = 1;

  std::string str() const { return "(a, base) = (" + a.str() + ", " + detail::power_text(base) + ")"; }
  friend bool operator==(const Relative& x, const Relative& y) { return x.a == y.a && x.base == y.base; }
};

struct BaileyPairSpec {
  std::string name;
  std::string source;
  std::string alpha_text;
  std::string beta_text;
  std::int64_t lattice_den = 1;
  /// Exact Laurent polynomial alpha_n on the given lattice.
  std::function<QSeries(std::int64_t, Lattice)> alpha;
  /// beta_n as a single term plan.
  std::function<TermPlan(std::int64_t, Lattice)> beta;
  std::vector<Relative> candidates;
  std::optional<Relative> relative;  // fixed by validate_relative

  Lattice lattice() const { return {lattice_den}; }
};

namespace bailey_detail {

inline QSeries mono(const Rational& c, Exponent e, Lattice lat) { return make_monomial(c, e, lat); }

/// 1 + q^step + ... + q^{(count-1) step}.
inline QSeries geo(Exponent step, std::int64_t count, Lattice lat) {
  if (count <= 0) return QSeries::exact_zero(lat);
  const auto s = lat.numerator(step);
  std::vector<Rational> out(static_cast<std::size_t>((count - 1) * s + 1));
  for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i * s)] = 1;
  return QSeries::from_dense(lat, 0, std::move(out));
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) { return detail::floor_div(a, b); }

inline std::vector<Relative> default_candidates() {
  std::vector<Relative> out;
  for (Exponent base : {Exponent(1, 2), Exponent(1), Exponent(2)})
    for (Exponent e : {Exponent(0), Exponent(1, 2), Exponent(1), Exponent(3, 2), Exponent(2)})
      out.push_back({qpow(e), base});
  return out;
}

/// Slater's A-type pieces alpha_{3n-1}, alpha_{3n}, alpha_{3n+1} from quadratic exponents.
struct Quad {
  std::int64_t a, b, c;
  Exponent at(std::int64_t n) const { return a * n * n + b * n + c; }
};

inline std::function<QSeries(std::int64_t, Lattice)> slater_a(Quad minus, Quad zero, Quad plus1, Quad plus2) {
  return [=](std::int64_t k, Lattice lat) {
    const auto r = detail::mod(k, 3);
    if (r == 2) return mono(1, minus.at((k + 1) / 3), lat);
    if (r == 0) return mono(1, zero.at(k / 3), lat);
    const auto n = (k - 1) / 3;
    return add(mono(-1, plus1.at(n), lat), mono(-1, plus2.at(n), lat));
  };
}

inline std::function<QSeries(std::int64_t, Lattice)> slater_c(Quad even, Quad odd) {
  return [=](std::int64_t k, Lattice lat) {
    const auto n = k / 2;
    const Rational sign = (n % 2 == 0) ? 1 : -1;
    if (k % 2 == 0) return mono(sign, even.at(n), lat);
    return mono(-sign, odd.at(n), lat);
  };
}

inline std::function<QSeries(std::int64_t, Lattice)> warnaar_chi(std::int64_t shift) {
  // (-1)^{floor((4n+1)/3)} q^{(n+shift) n / 3} (1 - q^{2n+1})/(1 - q), zero for n = 1 mod 3.
  return [=](std::int64_t n, Lattice lat) {
    if (detail::mod(n, 3) == 1) return QSeries::exact_zero(lat);
    const Rational sign = (floor_div(4 * n + 1, 3) % 2 == 0) ? 1 : -1;
    return mul(mono(sign, Exponent((n + shift) * n, 3), lat), geo(1, 2 * n + 1, lat));
  };
}

/// q^{shift(n)} / prod of Pochhammer denominators (c q^e; q^step)_{len(n)}.
struct PochDen {
  Rational c;
  Exponent e;
  Exponent step;
  std::int64_t mult;  // length = mult * n
};

inline std::function<TermPlan(std::int64_t, Lattice)> beta_of(std::function<Exponent(std::int64_t)> shift,
                                                              std::vector<PochDen> dens) {
  return [=](std::int64_t n, Lattice lat) {
    TermPlan t;
    t.shift = lat.numerator(shift(n));
    for (const auto& d : dens) t.pochhammer(d.c, lat.numerator(d.e), lat.numerator(d.step), d.mult * n, false);
    return t;
  };
}

}  // namespace bailey_detail

/// Right side of the defining relation: sum_{r=0}^n alpha_r / ((a q^f)_{n+r} (q^f)_{n-r}).
inline QSeries beta_from_alpha(const BaileyPairSpec& pair, const Relative& rel, std::int64_t n, Exponent order,
                               Lattice lat) {
  if (n < 0) throw Error("beta_from_alpha needs n >= 0");
  const auto f = detail::base_num(rel.base, lat);
  const auto ea = lat.numerator(rel.a.e);
  const auto o = lat.numerator(order);
  QSeries acc = QSeries::zero_num(lat, o);
  for (std::int64_t r = 0; r <= n; ++r) {
    QSeries alpha = pair.alpha(r, lat);
    if (alpha.is_zero()) continue;
    TermPlan t;
    t.poly.push_back(alpha);
    t.pochhammer(rel.a.c, ea + f, f, n + r, false);
    t.pochhammer(1, f, f, n - r, false);
    acc = add(acc, evaluate_plan(t, o, lat));
  }
  return acc;
}

inline QSeries beta_closed(const BaileyPairSpec& pair, std::int64_t n, Exponent order, Lattice lat) {
  return evaluate_plan(pair.beta(n, lat), lat.numerator(order), lat);
}

/// Compares the closed beta_n with the defining sum for n = 0..max_n.
inline Comparison check_pair(const BaileyPairSpec& pair, const Relative& rel, std::int64_t max_n, Exponent order,
                             Lattice lat, std::int64_t* failing_n = nullptr) {
  for (std::int64_t n = 0; n <= max_n; ++n) {
    auto c = equal_to_order(beta_from_alpha(pair, rel, n, order, lat), beta_closed(pair, n, order, lat), order);
    if (!c.pass) {
      if (failing_n) *failing_n = n;
      return c;
    }
  }
  return {true, order, std::nullopt};
}

struct RelativeValidation {
  std::vector<Relative> matching;
  std::optional<Relative> chosen;  // set iff exactly one candidate matches
};

/// Tries every candidate (a, base) against the defining relation for n <= max_n on the half-integer lattice.
inline RelativeValidation validate_relative(const BaileyPairSpec& pair, std::int64_t max_n = 8,
                                            Exponent order = 24) {
  RelativeValidation out;
  const Lattice lat{2};
  for (const auto& cand : pair.candidates) {
    if (check_pair(pair, cand, max_n, order, lat).pass) out.matching.push_back(cand);
  }
  if (out.matching.size() == 1) out.chosen = out.matching.front();
  return out;
}

/// The ten pairs used for the fifth, seventh and tenth order duals.
inline std::vector<BaileyPairSpec> bailey_pair_specs() {
  using namespace bailey_detail;
  using Q = Quad;
  std::vector<BaileyPairSpec> out;
  auto sq = [](std::int64_t a, std::int64_t b) {
    return [=](std::int64_t n) { return Exponent(a * n * n + b * n); };
  };
  auto add_pair = [&](std::string name, std::string source, std::string at, std::string bt, std::int64_t den,
                      std::function<QSeries(std::int64_t, Lattice)> alpha,
                      std::function<TermPlan(std::int64_t, Lattice)> beta) {
    BaileyPairSpec s;
    s.name = std::move(name);
    s.source = std::move(source);
    s.alpha_text = std::move(at);
    s.beta_text = std::move(bt);
    s.lattice_den = den;
    s.alpha = std::move(alpha);
    s.beta = std::move(beta);
    s.candidates = default_candidates();
    out.push_back(std::move(s));
  };

  add_pair("WarnaarP12", "Warnaar, p. 12",
           "(-1)^floor((4n+1)/3) q^((n-2)n/3) (1-q^(2n+1))/(1-q) [n != 1 mod 3]", "q^(n(n-1)) / (q;q)_(2n)", 1,
           warnaar_chi(-2), beta_of(sq(1, -1), {{1, 1, 1, 2}}));
  add_pair("Warnaar4.6", "Warnaar, (4.6)",
           "(-1)^floor((4n+1)/3) q^((2n-1)n/3) (1-q^(2n+1))/(1-q) [n != 1 mod 3]", "1 / (q;q)_(2n)", 1,
           [](std::int64_t n, Lattice lat) {
             if (detail::mod(n, 3) == 1) return QSeries::exact_zero(lat);
             const Rational sign = (detail::floor_div(4 * n + 1, 3) % 2 == 0) ? 1 : -1;
             return mul(mono(sign, Exponent((2 * n - 1) * n, 3), lat), geo(1, 2 * n + 1, lat));
           },
           beta_of(sq(0, 0), {{1, 1, 1, 2}}));
  add_pair("Warnaar4.4", "Warnaar, (4.4)", "(-1)^n q^((3n-1)n/4) (1-q^(2n+1))/(1-q)",
           "1 / ((q^2;q^2)_n (-q^(1/2);q)_n)", 2,
           [](std::int64_t n, Lattice lat) {
             const Rational sign = (n % 2 == 0) ? 1 : -1;
             return mul(mono(sign, Exponent((3 * n - 1) * n, 4), lat), geo(1, 2 * n + 1, lat));
           },
           beta_of(sq(0, 0), {{1, 2, 2, 1}, {-1, Exponent(1, 2), 1, 1}}));
  add_pair("SlaterA2", "Slater, A2",
           "a(3n-1) = q^(6n^2-n), a(3n) = q^(6n^2+n), a(3n+1) = -q^(6n^2+5n+1) - q^(6n^2+7n+2)",
           "1 / (q^2;q)_(2n)", 1, slater_a(Q{6, -1, 0}, Q{6, 1, 0}, Q{6, 5, 1}, Q{6, 7, 2}),
           beta_of(sq(0, 0), {{1, 2, 1, 2}}));
  add_pair("SlaterA4", "Slater, A4",
           "a(3n-1) = q^(6n^2-4n), a(3n) = q^(6n^2+4n), a(3n+1) = -q^(6n^2+8n+2) - q^(6n^2+4n)",
           "q^n / (q^2;q)_(2n)", 1, slater_a(Q{6, -4, 0}, Q{6, 4, 0}, Q{6, 8, 2}, Q{6, 4, 0}),
           beta_of(sq(0, 1), {{1, 2, 1, 2}}));
  add_pair("SlaterA6", "Slater, A6",
           "a(3n-1) = q^(3n^2+n), a(3n) = q^(3n^2-n), a(3n+1) = -q^(3n^2+n) - q^(3n^2+5n+2)",
           "q^(n^2) / (q^2;q)_(2n)", 1, slater_a(Q{3, 1, 0}, Q{3, -1, 0}, Q{3, 1, 0}, Q{3, 5, 2}),
           beta_of(sq(1, 0), {{1, 2, 1, 2}}));
  add_pair("SlaterA8", "Slater, A8",
           "a(3n-1) = q^(3n^2-2n), a(3n) = q^(3n^2+2n), a(3n+1) = -q^(3n^2+4n+1) - q^(3n^2+2n)",
           "q^(n^2+n) / (q^2;q)_(2n)", 1, slater_a(Q{3, -2, 0}, Q{3, 2, 0}, Q{3, 4, 1}, Q{3, 2, 0}),
           beta_of(sq(1, 1), {{1, 2, 1, 2}}));
  add_pair("SlaterC3", "Slater, C3", "a(2n) = (-1)^n q^(3n^2+n), a(2n+1) = (-1)^(n+1) q^(3n^2+5n+2)",
           "1 / ((q^3;q^2)_n (q;q)_n)", 1, slater_c(Q{3, 1, 0}, Q{3, 5, 2}),
           beta_of(sq(0, 0), {{1, 3, 2, 1}, {1, 1, 1, 1}}));
  add_pair("SlaterC4", "Slater, C4", "a(2n) = (-1)^n q^(3n^2+3n), a(2n+1) = (-1)^(n+1) q^(3n^2+3n)",
           "q^n / ((q^3;q^2)_n (q;q)_n)", 1, slater_c(Q{3, 3, 0}, Q{3, 3, 0}),
           beta_of(sq(0, 1), {{1, 3, 2, 1}, {1, 1, 1, 1}}));
  add_pair("SlaterG2", "Slater, G2",
           "a(2n) = q^(3n^2+n/2) (1-q^(2n+1/2))/(1-q^(1/2)), a(2n-1) = q^(3n^2-n/2) (1-q^(-2n+1/2))/(1-q^(1/2))",
           "1 / ((q^2;q^2)_n (-q^(3/2);q)_n)", 2,
           [](std::int64_t k, Lattice lat) {
             if (k % 2 == 0) {
               const auto n = k / 2;
               return mul(mono(1, Exponent(6 * n * n + n, 2), lat), geo(Exponent(1, 2), 4 * n + 1, lat));
             }
             const auto n = (k + 1) / 2;
             return mul(mono(-1, Exponent(6 * n * n - n, 2) + Exponent(-4 * n + 1, 2), lat),
                        geo(Exponent(1, 2), 4 * n - 1, lat));
           },
           beta_of(sq(0, 0), {{1, 2, 2, 1}, {-1, Exponent(3, 2), 1, 1}}));
  return out;
}

/// Registry with relative parameters fixed by validation. Immutable once built.
class BaileyRegistry {
 public:
  BaileyRegistry() : pairs_(bailey_pair_specs()) {
    for (auto& p : pairs_) {
      auto v = validate_relative(p);
      p.relative = v.chosen;
      matches_.push_back(std::move(v.matching));
    }
  }

  const std::vector<BaileyPairSpec>& pairs() const { return pairs_; }
  const std::vector<Relative>& matches(std::size_t i) const { return matches_.at(i); }

  const BaileyPairSpec* find(const std::string& name) const {
    for (const auto& p : pairs_)
      if (p.name == name) return &p;
    return nullptr;
  }

  static const BaileyRegistry& instance() {
    static const BaileyRegistry reg;
    return reg;
  }

 private:
  std::vector<BaileyPairSpec> pairs_;
  std::vector<std::vector<Relative>> matches_;
};

/// Both sides of the transformation for a validated pair.
inline std::pair<QSeries, QSeries> lemma_sides(const BaileyPairSpec& pair, Exponent order) {
  if (!pair.relative) throw Error("pair " + pair.name + " has no validated relative parameters");
  const Relative& rel = *pair.relative;
  Lattice lat = pair.lattice();
  if (!rel.a.e.is_integer() || !rel.base.is_integer()) lat = {2};
  const auto f = detail::base_num(rel.base, lat);
  const auto ea = lat.numerator(rel.a.e);
  const auto o = lat.numerator(order);
  auto left = [&](std::int64_t n) -> std::optional<TermPlan> {
    TermPlan t = pair.beta(n, lat);
    t.coeff *= (n % 2 == 0) ? 1 : -1;
    t.shift += f * detail::binom2(n + 1);
    t.pochhammer(rel.a.c, ea, f, n, true);
    return t;
  };
  auto right = [&](std::int64_t n) -> std::optional<TermPlan> {
    QSeries alpha = pair.alpha(n, lat);
    if (alpha.is_zero()) return std::nullopt;
    TermPlan t;
    t.coeff = (n % 2 == 0) ? 1 : -1;
    t.shift = f * detail::binom2(n + 1);
    t.poly.push_back(std::move(alpha));
    t.pochhammer(rel.a.c, ea, f, n, true);
    t.pochhammer(1, f, f, n, false);
    return t;
  };
  QSeries lhs = sum_terms(left, SumDirection::Up, 0, o, lat);
  QSeries rsum = sum_terms(right, SumDirection::Up, 0, o, lat);
  const Exponent fb = lat.exponent(f);
  QSeries ratio = divide(pochhammer_inf(qpow(fb), fb, order, lat),
                         pochhammer_inf(ParamValue(rel.a.c, rel.a.e + fb), fb, order, lat));
  return {lhs, truncate_num(mul(ratio, rsum), o)};
}

/// gamma_n from its defining tail sum with delta_r = (-1)^r q^{C(r+1,2)} (a)_r / (1 - a).
inline QSeries gamma_from_delta(const Relative& rel, std::int64_t n, Exponent order, Lattice lat = {}) {
  if (rel.a.c == 1 && rel.a.e == 0) throw Degenerate("degenerate: delta_n divides by 1 - a with a = 1");
  const auto f = detail::base_num(rel.base, lat);
  const auto ea = lat.numerator(rel.a.e);
  auto plan = [&](std::int64_t r) -> std::optional<TermPlan> {
    TermPlan t;
    t.coeff = (r % 2 == 0) ? 1 : -1;
    t.shift = f * detail::binom2(r + 1);
    t.pochhammer(rel.a.c, ea, f, r, true);
    t.den.push_back({rel.a.c, ea});
    t.pochhammer(rel.a.c, ea + f, f, r + n, false);
    t.pochhammer(1, f, f, r - n, false);
    return t;
  };
  return sum_terms(plan, SumDirection::Up, n, lat.numerator(order), lat);
}

/// Closed form (-1)^n q^{C(n+1,2)} (q)_inf/(q)_n (a)_n/(aq)_inf / (1 - a).
inline QSeries gamma_closed(const Relative& rel, std::int64_t n, Exponent order, Lattice lat = {}) {
  if (rel.a.c == 1 && rel.a.e == 0) throw Degenerate("degenerate: gamma_n divides by 1 - a with a = 1");
  const auto f = detail::base_num(rel.base, lat);
  const auto ea = lat.numerator(rel.a.e);
  const auto o = lat.numerator(order);
  TermPlan t;
  t.coeff = (n % 2 == 0) ? 1 : -1;
  t.shift = f * detail::binom2(n + 1);
  t.pochhammer(rel.a.c, ea, f, n, true);
  t.pochhammer(1, f, f, n, false);
  t.den.push_back({rel.a.c, ea});
  const Exponent fb = lat.exponent(f);
  QSeries ratio = divide(pochhammer_inf(qpow(fb), fb, order, lat),
                         pochhammer_inf(ParamValue(rel.a.c, rel.a.e + fb), fb, order, lat));
  QSeries term = evaluate_plan(t, o - std::min<std::int64_t>(0, ratio.low_num()), lat);
  return truncate_num(mul(term, ratio), o);
}

/// sum beta_n delta_n and sum alpha_n gamma_n for a validated pair.
inline std::pair<QSeries, QSeries> pairing_sides(const BaileyPairSpec& pair, Exponent order) {
  if (!pair.relative) throw Error("pair " + pair.name + " has no validated relative parameters");
  const Relative& rel = *pair.relative;
  if (rel.a.c == 1 && rel.a.e == 0) throw Degenerate("degenerate: conjugate pair needs a != 1");
  auto [lhs, rhs] = lemma_sides(pair, order);
  Lattice lat = lhs.lattice();
  // delta_n and gamma_n share the factor 1/(1 - a) with the two sides above.
  QSeries inv = invert(truncate_num(sub(one(lat), make_monomial(rel.a, lat)), lat.numerator(order) + 1));
  return {truncate_num(mul(lhs, inv), lat.numerator(order)), truncate_num(mul(rhs, inv), lat.numerator(order))};
}

/// sum_r (-1)^r q^{C(r,2)} (a)_r (c/a)^r / ((c)_r (q)_r) against (c/a)_inf / (c)_inf.
inline Comparison phi11_check(const ParamValue& a, const ParamValue& c, Exponent order, Lattice lat = {}) {
  const auto one_num = lat.numerator(1);
  const auto ea = lat.numerator(a.e);
  const auto ec = lat.numerator(c.e);
  const auto o = lat.numerator(order);
  const ParamValue ratio = c / a;
  auto plan = [&](std::int64_t r) -> std::optional<TermPlan> {
    TermPlan t;
    t.coeff = qseries::pow(-ratio.c, r);
    t.shift = one_num * detail::binom2(r) + r * (ec - ea);
    t.pochhammer(a.c, ea, one_num, r, true);
    t.pochhammer(c.c, ec, one_num, r, false);
    t.pochhammer(1, one_num, one_num, r, false);
    return t;
  };
  QSeries lhs = sum_terms(plan, SumDirection::Up, 0, o, lat);
  QSeries top = pochhammer_inf(ratio, 1, order, lat);
  QSeries rhs = top.is_zero() ? QSeries::zero_num(lat, o)
                              : truncate_num(mul(top, invert(pochhammer_inf(c, 1, order, lat))), o);
  return equal_to_order(lhs, rhs, order);
}

}  // namespace qseries
