#pragma once

// Theta functions, Appell-Lerch sums, the universal mock theta function,
// Hecke-type double sums and friends, all as truncated series.
//
// Every function takes its base as an explicit power q^m, so mixed bases
// such as m(-q^11, q^24, q^4) are expressed directly.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qseries/series.hpp"
#include "qseries/term_sum.hpp"

namespace qseries {

namespace detail {

inline std::int64_t base_num(Exponent base, Lattice lat) {
  if (base <= Exponent(0)) throw Error("base exponent must be positive, got " + base.str());
  return lat.numerator(base);
}

inline std::int64_t binom2(std::int64_t n) { return n * (n - 1) / 2; }

/// Adds sum over n of coef(n) q^{E(n)} where E is a convex quadratic, walking away
/// from start in direction dir until E stays above the order.
template <class Exp, class Coef>
void walk_quadratic(std::map<std::int64_t, Rational>& acc, std::int64_t start, std::int64_t dir, std::int64_t order,
                    Exp exponent, Coef coef) {
  for (std::int64_t n = start;; n += dir) {
    const auto e = exponent(n);
    if (e < order) {
      Rational c = coef(n);
      if (c != 0) acc[e] += c;
    } else if (exponent(n + dir) >= e) {
      return;
    }
  }
}

inline QSeries from_map(const std::map<std::int64_t, Rational>& acc, std::int64_t order, Lattice lat) {
  if (acc.empty()) return QSeries::zero_num(lat, order);
  const auto lo = acc.begin()->first;
  std::vector<Rational> out(static_cast<std::size_t>(acc.rbegin()->first - lo + 1));
  for (const auto& [e, c] : acc) out[static_cast<std::size_t>(e - lo)] = c;
  return QSeries::from_dense(lat, lo, std::move(out), order);
}

/// Divides the bilateral sum S by j(z; q^m) so that the quotient is known to order.
template <class SumAt>
QSeries divide_by_theta(SumAt sum_at, const ParamValue& z, Exponent base, std::int64_t order, Lattice lat);

}  // namespace detail

QSeries theta_j(const ParamValue& x, Exponent base, Exponent order, Lattice lat = {});

/// (x; q^base)_n. Exact for n >= 0; negative n uses (x;q)_{-N} = 1/prod_{i=1..N}(1 - x q^{-i}).
inline QSeries pochhammer(const ParamValue& x, Exponent base, std::int64_t n, Exponent order, Lattice lat = {}) {
  const auto m = detail::base_num(base, lat);
  const auto e = lat.numerator(x.e);
  if (n >= 0) {
    QSeries r = one(lat);
    for (std::int64_t i = 0; i < n; ++i) r = mul_binomial_num(r, x.c, e + i * m);
    return r;
  }
  TermPlan plan;
  plan.pochhammer(x.c, e, m, n, true);
  for (const auto& b : plan.den)
    if (b.is_zero())
      throw Degenerate("degenerate Pochhammer: (" + x.str() + "; q^" + base.str() + ")_" + std::to_string(n) +
                       " has a vanishing factor");
  return evaluate_plan(plan, lat.numerator(order), lat);
}

/// (x; q^base)_inf truncated to order; only factors that can matter are multiplied.
inline QSeries pochhammer_inf(const ParamValue& x, Exponent base, Exponent order, Lattice lat = {}) {
  const auto m = detail::base_num(base, lat);
  const auto e = lat.numerator(x.e);
  const auto o = lat.numerator(order);
  TermPlan plan;
  std::int64_t vneg = 0;
  for (std::int64_t i = 0; e + i * m <= 0; ++i) {
    const auto k = e + i * m;
    if (k == 0 && x.c == 1) return QSeries::exact_zero(lat);
    plan.num.push_back({x.c, k});
    vneg += k < 0 ? k : 0;
  }
  const auto first_pos = e > 0 ? 0 : (-e) / m + 1;
  for (std::int64_t i = first_pos; e + i * m < o - vneg; ++i) plan.num.push_back({x.c, e + i * m});
  return evaluate_plan(plan, o, lat);
}

inline QSeries theta_j(const ParamValue& x, Exponent base, Exponent order, Lattice lat) {
  const auto m = detail::base_num(base, lat);
  const auto e = lat.numerator(x.e);
  const auto o = lat.numerator(order);
  std::map<std::int64_t, Rational> acc;
  const Rational neg_c = -x.c;
  auto exponent = [&](std::int64_t n) { return m * detail::binom2(n) + n * e; };
  auto coef = [&](std::int64_t n) { return qseries::pow(neg_c, n); };
  detail::walk_quadratic(acc, 0, 1, o, exponent, coef);
  detail::walk_quadratic(acc, -1, -1, o, exponent, coef);
  return detail::from_map(acc, o, lat);
}

enum class ThetaKind { Plain, Bar, Eta };

/// J_{a,m} = j(q^a; q^m), Jbar_{a,m} = j(-q^a; q^m), and J_m = prod_{i>=1}(1 - q^{mi}).
inline QSeries theta_J(Exponent a, Exponent m, ThetaKind kind, Exponent order, Lattice lat = {}) {
  switch (kind) {
    case ThetaKind::Plain:
      return theta_j(qpow(a), m, order, lat);
    case ThetaKind::Bar:
      return theta_j(pv(-1, a), m, order, lat);
    case ThetaKind::Eta:
      return pochhammer_inf(qpow(m), m, order, lat);
  }
  throw Error("unknown theta kind");
}

inline QSeries J(std::int64_t a, std::int64_t m, Exponent order, Lattice lat = {}) {
  return theta_J(a, m, ThetaKind::Plain, order, lat);
}
inline QSeries Jbar(std::int64_t a, std::int64_t m, Exponent order, Lattice lat = {}) {
  return theta_J(a, m, ThetaKind::Bar, order, lat);
}
inline QSeries Jm(std::int64_t m, Exponent order, Lattice lat = {}) { return theta_J(0, m, ThetaKind::Eta, order, lat); }

namespace detail {

template <class SumAt>
QSeries divide_by_theta(SumAt sum_at, const ParamValue& z, Exponent base, std::int64_t order, Lattice lat) {
  const auto m = base_num(base, lat);
  const auto ez = lat.numerator(z.e);
  if (z.c == 1 && ez % m == 0)
    throw ThetaZero("theta zero: j(" + z.str() + "; q^" + base.str() + ") vanishes identically");
  // Find the valuation of the theta denominator.
  std::int64_t probe = order > 0 ? order : 1;
  QSeries jz;
  for (int tries = 0;; ++tries) {
    jz = theta_j(z, base, lat.exponent(probe), lat);
    if (!jz.is_zero()) break;
    if (tries > 16) throw ThetaZero("theta zero: j(" + z.str() + "; q^" + base.str() + ") is zero to working order");
    probe = probe * 2 + 8;
  }
  const auto vj = jz.low_num();
  QSeries s = sum_at(order + vj);
  if (s.is_zero()) return QSeries::zero_num(lat, order);
  const auto vs = s.low_num();
  const auto need = std::max(order + 2 * vj - vs, vj + 1);
  if (need > jz.order_num()) jz = theta_j(z, base, lat.exponent(need), lat);
  return truncate_num(mul(s, invert(jz)), order);
}

inline void check_appell_pole(const ParamValue& x, const ParamValue& z, std::int64_t m, std::int64_t shift,
                              Lattice lat) {
  // Denominator 1 - x z q^{m r + shift} vanishes when x z = 1 and the exponent hits zero.
  if (x.c * z.c != 1) return;
  const auto total = lat.numerator(x.e) + lat.numerator(z.e) + shift;
  if (total % m != 0) return;
  const auto r = -total / m;
  throw Pole("pole: denominator 1 - x*z*q^(...) vanishes at r = " + std::to_string(r) + " for x = " + x.str() +
             ", z = " + z.str());
}

}  // namespace detail

/// m(x, q^base, z) from the defining bilateral sum.
inline QSeries appell_m(const ParamValue& x, Exponent base, const ParamValue& z, Exponent order, Lattice lat = {}) {
  const auto m = detail::base_num(base, lat);
  detail::check_appell_pole(x, z, m, -m, lat);
  const auto ex = lat.numerator(x.e);
  const auto ez = lat.numerator(z.e);
  const Rational u = x.c * z.c;
  const Rational neg_zc = -z.c;
  auto sum_at = [&](std::int64_t o) {
    auto plan = [&](std::int64_t r) -> std::optional<TermPlan> {
      TermPlan t;
      t.coeff = qseries::pow(neg_zc, r);
      t.shift = m * detail::binom2(r) + r * ez;
      t.den.push_back({u, m * (r - 1) + ex + ez});
      return t;
    };
    return sum_terms(plan, SumDirection::Both, 0, o, lat);
  };
  return detail::divide_by_theta(sum_at, z, base, lat.numerator(order), lat);
}

/// m(x, q^base, z) from the shifted form -z/j(z) sum (-1)^r q^{C(r+1,2)} z^r / (1 - q^r x z).
inline QSeries appell_m_shifted(const ParamValue& x, Exponent base, const ParamValue& z, Exponent order,
                                Lattice lat = {}) {
  const auto m = detail::base_num(base, lat);
  detail::check_appell_pole(x, z, m, 0, lat);
  const auto ex = lat.numerator(x.e);
  const auto ez = lat.numerator(z.e);
  const Rational u = x.c * z.c;
  const Rational neg_zc = -z.c;
  auto sum_at = [&](std::int64_t o) {
    auto plan = [&](std::int64_t r) -> std::optional<TermPlan> {
      TermPlan t;
      t.coeff = -z.c * qseries::pow(neg_zc, r);
      t.shift = m * detail::binom2(r + 1) + (r + 1) * ez;
      t.den.push_back({u, m * r + ex + ez});
      return t;
    };
    return sum_terms(plan, SumDirection::Both, 0, o, lat);
  };
  return detail::divide_by_theta(sum_at, z, base, lat.numerator(order), lat);
}

/// g(x, q^base) = sum_{n>=0} q^{n(n+1)} / ((x)_{n+1} (q/x)_{n+1}).
inline QSeries universal_g(const ParamValue& x, Exponent base, Exponent order, Lattice lat = {}) {
  const auto m = detail::base_num(base, lat);
  const auto ex = lat.numerator(x.e);
  const Rational inv = 1 / x.c;
  auto plan = [&](std::int64_t n) -> std::optional<TermPlan> {
    TermPlan t;
    t.shift = m * n * (n + 1);
    t.pochhammer(x.c, ex, m, n + 1, false);
    t.pochhammer(inv, m - ex, m, n + 1, false);
    return t;
  };
  return sum_terms(plan, SumDirection::Up, 0, lat.numerator(order), lat);
}

/// g(x, q^base) from x^{-1}(-1 + sum_{n>=0} q^{n^2} / ((x)_{n+1} (q/x)_n)).
inline QSeries universal_g_def(const ParamValue& x, Exponent base, Exponent order, Lattice lat = {}) {
  const auto m = detail::base_num(base, lat);
  const auto ex = lat.numerator(x.e);
  const auto o = lat.numerator(order);
  const Rational inv = 1 / x.c;
  auto plan = [&](std::int64_t n) -> std::optional<TermPlan> {
    TermPlan t;
    t.shift = m * n * n;
    t.pochhammer(x.c, ex, m, n + 1, false);
    t.pochhammer(inv, m - ex, m, n, false);
    return t;
  };
  // Multiplying by x^{-1} = c^{-1} q^{-e} lowers the order by e.
  QSeries s = sum_terms(plan, SumDirection::Up, 0, o + ex, lat);
  s = sub(s, one(lat));
  return truncate_num(mul(s, QSeries::monomial_num(lat, inv, -ex)), o);
}

/// Hecke-type double sum f_{A,B,C}(x, y, q^base) over the same-sign quadrants.
inline QSeries hecke_f(std::int64_t A, std::int64_t B, std::int64_t C, const ParamValue& x, const ParamValue& y,
                       Exponent base, Exponent order, Lattice lat = {}) {
  if (A <= 0 || C <= 0 || B < 0)
    throw ShapeError("f_{" + std::to_string(A) + "," + std::to_string(B) + "," + std::to_string(C) +
                     "}: quadrant growth bound needs A > 0, C > 0 and B >= 0");
  const auto m = detail::base_num(base, lat);
  const auto ex = lat.numerator(x.e);
  const auto ey = lat.numerator(y.e);
  const auto o = lat.numerator(order);
  // With B >= 0 the cross term B*r*s is nonnegative on both quadrants, so
  // phi(r) + psi(s) below is a separable lower bound for the exponent.
  auto phi = [&](std::int64_t r) { return m * A * detail::binom2(r) + r * ex; };
  auto psi = [&](std::int64_t s) { return m * C * detail::binom2(s) + s * ey; };
  auto exact = [&](std::int64_t r, std::int64_t s) { return phi(r) + psi(s) + m * B * r * s; };
  auto min_psi = [&](std::int64_t from, std::int64_t dir) {
    std::int64_t best = psi(from);
    for (std::int64_t s = from + dir;; s += dir) {
      auto v = psi(s);
      if (v >= best) return best;
      best = v;
    }
  };
  const Rational neg_x = -x.c, neg_y = -y.c;
  std::map<std::int64_t, Rational> acc;
  for (int quadrant = 0; quadrant < 2; ++quadrant) {
    const std::int64_t start = quadrant == 0 ? 0 : -1;
    const std::int64_t dir = quadrant == 0 ? 1 : -1;
    const int sg = quadrant == 0 ? 1 : -1;
    const auto psi_floor = min_psi(start, dir);
    for (std::int64_t r = start;; r += dir) {
      const auto pr = phi(r);
      if (pr + psi_floor >= o) {
        if (phi(r + dir) >= pr) break;
        continue;
      }
      const Rational xr = qseries::pow(neg_x, r);
      for (std::int64_t s = start;; s += dir) {
        const auto lb = pr + psi(s);
        if (lb >= o) {
          if (psi(s + dir) >= psi(s)) break;
          continue;
        }
        const auto e = exact(r, s);
        if (e < o) acc[e] += sg * xr * qseries::pow(neg_y, s);
      }
    }
  }
  return detail::from_map(acc, o, lat);
}

/// Bilateral definition of the starred sum:
/// (1/Jbar_{0,1}) sum_n (1 + 1/x) q^{n(n+1)/2} / ((1 + x q^n)(1 + q^n/x)).
inline QSeries starred_sum(const ParamValue& x, Exponent order, Lattice lat = {}) {
  const auto ex = lat.numerator(x.e);
  const auto one_num = lat.numerator(1);
  if (x.c == -1 && ex % one_num == 0)
    throw Pole("pole: a factor 1 + x q^n is the constant zero for x = " + x.str());
  const Rational inv = 1 / x.c;
  auto sum_at = [&](std::int64_t o) {
    auto plan = [&](std::int64_t n) -> std::optional<TermPlan> {
      TermPlan t;
      t.shift = one_num * detail::binom2(n + 1);
      t.num.push_back({-inv, -ex});
      t.den.push_back({-x.c, ex + n * one_num});
      t.den.push_back({-inv, n * one_num - ex});
      return t;
    };
    return sum_terms(plan, SumDirection::Both, 0, o, lat);
  };
  return detail::divide_by_theta(sum_at, pv(-1, 0), 1, lat.numerator(order), lat);
}

/// The two bilateral series whose equality with an Appell-Lerch expression is
/// checked by bilateral_m_closed.
inline std::pair<QSeries, QSeries> bilateral_m_sum(const ParamValue& a, const ParamValue& b, Exponent order,
                                                   Lattice lat = {}) {
  const auto ea = lat.numerator(a.e);
  const auto eb = lat.numerator(b.e);
  const auto one_num = lat.numerator(1);
  const auto o = lat.numerator(order);
  const Rational ia = 1 / a.c, ib = 1 / b.c;
  auto first = [&](std::int64_t n) -> std::optional<TermPlan> {
    TermPlan t;
    t.coeff = qseries::pow(ia, n + 1) * qseries::pow(ib, n);
    t.shift = one_num * n * n - (n + 1) * ea - n * eb;
    t.pochhammer(-ia, -ea, one_num, n + 1, false);
    t.pochhammer(-ib, one_num - eb, one_num, n, false);
    return t;
  };
  auto second = [&](std::int64_t n) -> std::optional<TermPlan> {
    TermPlan t;
    t.shift = one_num * (n + 1);
    t.pochhammer(-a.c, ea + one_num, one_num, n, true);
    t.pochhammer(-b.c, eb, one_num, n + 1, true);
    return t;
  };
  return {sum_terms(first, SumDirection::Both, 0, o, lat), sum_terms(second, SumDirection::Both, 0, o, lat)};
}

/// Gaussian binomial [n choose k]_q; zero outside 0 <= k <= n.
inline QSeries gaussian_binomial(std::int64_t n, std::int64_t k, Lattice lat = {}) {
  if (k < 0 || n < 0 || k > n) return QSeries::exact_zero(lat);
  k = std::min(k, n - k);
  std::vector<Integer> g(1, Integer(1));
  for (std::int64_t i = 1; i <= k; ++i) {
    const auto up = n - k + i;
    g.resize(g.size() + static_cast<std::size_t>(up));
    for (auto j = static_cast<std::int64_t>(g.size()) - 1; j >= up; --j)
      g[static_cast<std::size_t>(j)] -= g[static_cast<std::size_t>(j - up)];
    for (std::size_t j = static_cast<std::size_t>(i); j < g.size(); ++j) g[j] += g[j - static_cast<std::size_t>(i)];
    g.resize(g.size() - static_cast<std::size_t>(i));
  }
  const auto d = lat.numerator(1);
  std::vector<Rational> out(static_cast<std::size_t>((static_cast<std::int64_t>(g.size()) - 1) * d + 1));
  for (std::size_t j = 0; j < g.size(); ++j) out[j * static_cast<std::size_t>(d)] = Rational(g[j]);
  return QSeries::from_dense(lat, 0, std::move(out));
}

/// Partial theta function sum_{n>=0} (-1)^n x^n q^{base*C(n+1,2)}.
inline QSeries partial_theta(const ParamValue& x, Exponent base, Exponent order, Lattice lat = {}) {
  const auto m = detail::base_num(base, lat);
  const auto e = lat.numerator(x.e);
  const auto o = lat.numerator(order);
  std::map<std::int64_t, Rational> acc;
  const Rational neg_c = -x.c;
  detail::walk_quadratic(
      acc, 0, 1, o, [&](std::int64_t n) { return m * detail::binom2(n + 1) + n * e; },
      [&](std::int64_t n) { return qseries::pow(neg_c, n); });
  return detail::from_map(acc, o, lat);
}

}  // namespace qseries
