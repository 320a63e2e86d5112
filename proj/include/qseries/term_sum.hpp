#pragma once

// Term-by-term evaluation of one-index q-sums.
//
// A term is coeff * q^shift * prod(1 - u q^k) / prod(1 - u q^k) * prod(poly).
// Its exact valuation is known before any series arithmetic, which drives
// both the per-term precision and the range cutoff of a summation.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qseries/series.hpp"

namespace qseries {

/// The factor 1 - u q^(k/D).
struct Binomial {
  Rational u;
  std::int64_t k = 0;

  bool is_zero() const { return k == 0 && u == 1; }
  bool is_one() const { return u == 0; }
  std::int64_t valuation() const { return (k < 0 && u != 0) ? k : 0; }
  Rational leading() const {
    if (u == 0) return 1;
    if (k < 0) return -u;
    if (k == 0) return 1 - u;
    return 1;
  }
};

struct TermPlan {
  Rational coeff = 1;
  std::int64_t shift = 0;
  std::vector<Binomial> num;
  std::vector<Binomial> den;
  std::vector<QSeries> poly;      // exact Laurent polynomials in the numerator
  std::vector<QSeries> den_poly;  // and in the denominator

  bool is_zero() const {
    if (coeff == 0) return true;
    for (const auto& b : num)
      if (b.is_zero()) return true;
    for (const auto& p : poly)
      if (p.is_zero()) return true;
    return false;
  }

  /// Exact valuation; throws Degenerate when a denominator factor vanishes.
  std::int64_t valuation() const {
    std::int64_t v = shift;
    for (const auto& b : num) v += b.valuation();
    for (const auto& b : den) {
      if (b.is_zero()) throw Degenerate("degenerate Pochhammer: denominator factor 1 - q^0 vanishes");
      v -= b.valuation();
    }
    for (const auto& p : poly) v += p.low_num();
    for (const auto& p : den_poly) {
      if (p.is_zero()) throw Degenerate("degenerate term: zero polynomial in a denominator");
      v -= p.low_num();
    }
    return v;
  }

  /// (x; q^step)_len with x = c q^(e/D), appended to the numerator or denominator.
  /// Negative lengths follow (x;q)_{-N} = 1 / prod_{i=1..N} (1 - x q^{-i}).
  void pochhammer(const Rational& c, std::int64_t e, std::int64_t step, std::int64_t len, bool in_numerator) {
    if (len >= 0) {
      auto& dst = in_numerator ? num : den;
      for (std::int64_t i = 0; i < len; ++i) dst.push_back({c, e + i * step});
    } else {
      auto& dst = in_numerator ? den : num;
      for (std::int64_t i = 1; i <= -len; ++i) dst.push_back({c, e - i * step});
    }
  }
};

namespace detail {

inline void addmul(Integer& r, const Integer& a, const Integer& b) { mpz_addmul(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t()); }
inline void submul(Integer& r, const Integer& a, const Integer& b) { mpz_submul(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t()); }
inline void addmul(Rational& r, const Rational& a, const Rational& b) { r += a * b; }
inline void submul(Rational& r, const Rational& a, const Rational& b) { r -= a * b; }

/// Unit factor 1 - w q^s with s > 0 after splitting off the monomial part.
struct UnitBinomial {
  Rational w;
  std::int64_t s;
};

template <class T>
T convert(const Rational& r) {
  if constexpr (std::is_same_v<T, Integer>) {
    return r.get_num();
  } else {
    return r;
  }
}

template <class T>
void apply_units(std::vector<T>& g, const std::vector<UnitBinomial>& mul_by, const std::vector<UnitBinomial>& div_by,
                 const std::vector<std::vector<Rational>>& polys,
                 const std::vector<std::vector<Rational>>& den_polys = {}) {
  const auto p = static_cast<std::int64_t>(g.size());
  for (const auto& b : div_by) {
    if (b.s >= p) continue;
    const T w = convert<T>(b.w);
    if (b.w == 1) {
      for (std::int64_t i = b.s; i < p; ++i) g[static_cast<std::size_t>(i)] += g[static_cast<std::size_t>(i - b.s)];
    } else if (b.w == -1) {
      for (std::int64_t i = b.s; i < p; ++i) g[static_cast<std::size_t>(i)] -= g[static_cast<std::size_t>(i - b.s)];
    } else {
      for (std::int64_t i = b.s; i < p; ++i) addmul(g[static_cast<std::size_t>(i)], w, g[static_cast<std::size_t>(i - b.s)]);
    }
  }
  for (const auto& b : mul_by) {
    if (b.s >= p) continue;
    const T w = convert<T>(b.w);
    if (b.w == 1) {
      for (std::int64_t i = p - 1; i >= b.s; --i) g[static_cast<std::size_t>(i)] -= g[static_cast<std::size_t>(i - b.s)];
    } else if (b.w == -1) {
      for (std::int64_t i = p - 1; i >= b.s; --i) g[static_cast<std::size_t>(i)] += g[static_cast<std::size_t>(i - b.s)];
    } else {
      for (std::int64_t i = p - 1; i >= b.s; --i) submul(g[static_cast<std::size_t>(i)], w, g[static_cast<std::size_t>(i - b.s)]);
    }
  }
  for (const auto& poly : polys) {
    // poly[0] == 1; multiply in place from the top.
    const auto deg = static_cast<std::int64_t>(poly.size()) - 1;
    std::vector<T> pc(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) pc[i] = convert<T>(poly[i]);
    for (std::int64_t i = p - 1; i >= 1; --i) {
      auto& gi = g[static_cast<std::size_t>(i)];
      for (std::int64_t j = 1; j <= std::min(deg, i); ++j) {
        if (poly[static_cast<std::size_t>(j)] == 0) continue;
        addmul(gi, pc[static_cast<std::size_t>(j)], g[static_cast<std::size_t>(i - j)]);
      }
    }
  }
  for (const auto& poly : den_polys) {
    // divide in place from the bottom
    const auto deg = static_cast<std::int64_t>(poly.size()) - 1;
    std::vector<T> pc(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) pc[i] = convert<T>(poly[i]);
    for (std::int64_t i = 1; i < p; ++i) {
      auto& gi = g[static_cast<std::size_t>(i)];
      for (std::int64_t j = 1; j <= std::min(deg, i); ++j) {
        if (poly[static_cast<std::size_t>(j)] == 0) continue;
        submul(gi, pc[static_cast<std::size_t>(j)], g[static_cast<std::size_t>(i - j)]);
      }
    }
  }
}

}  // namespace detail

/// Evaluates one term to absolute order order_num (a lattice numerator).
inline QSeries evaluate_plan(const TermPlan& plan, std::int64_t order_num, Lattice lat) {
  if (plan.is_zero()) return QSeries::zero_num(lat, order_num);
  const auto v = plan.valuation();
  if (v >= order_num) return QSeries::zero_num(lat, order_num);
  const auto p = order_num - v;

  Rational lead = plan.coeff;
  std::vector<detail::UnitBinomial> mul_by, div_by;
  bool integral = true;
  auto split = [&](const Binomial& b, bool numerator) {
    if (b.u == 0) return;
    Rational l = b.leading();
    if (numerator) lead *= l; else lead /= l;
    if (b.k == 0) return;
    detail::UnitBinomial ub = b.k > 0 ? detail::UnitBinomial{b.u, b.k} : detail::UnitBinomial{1 / b.u, -b.k};
    if (ub.w.get_den() != 1) integral = false;
    (numerator ? mul_by : div_by).push_back(std::move(ub));
  };
  for (const auto& b : plan.num) split(b, true);
  for (const auto& b : plan.den) split(b, false);

  std::vector<std::vector<Rational>> polys, den_polys;
  auto normalize = [&](const QSeries& poly, bool numerator) {
    const auto& d = poly.dense();
    Rational l = d.front();
    if (numerator) lead *= l; else lead /= l;
    if (d.size() == 1) return;
    std::vector<Rational> normalized(std::min<std::size_t>(d.size(), static_cast<std::size_t>(p)));
    for (std::size_t i = 0; i < normalized.size(); ++i) {
      normalized[i] = d[i] / l;
      if (normalized[i].get_den() != 1) integral = false;
    }
    (numerator ? polys : den_polys).push_back(std::move(normalized));
  };
  for (const auto& poly : plan.poly) normalize(poly, true);
  for (const auto& poly : plan.den_poly) normalize(poly, false);

  std::vector<Rational> out(static_cast<std::size_t>(p));
  if (integral) {
    std::vector<Integer> g(static_cast<std::size_t>(p));
    g[0] = 1;
    detail::apply_units(g, mul_by, div_by, polys, den_polys);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i] != 0) out[i] = lead * Rational(g[i]);
  } else {
    out[0] = 1;
    detail::apply_units(out, mul_by, div_by, polys, den_polys);
    for (auto& x : out)
      if (x != 0) x *= lead;
  }
  return QSeries::from_dense(lat, v, std::move(out), order_num);
}

enum class SumDirection { Up, Down, Both };

struct SumOptions {
  int patience = 8;                  // consecutive negligible terms before stopping
  std::int64_t max_terms = 200000;   // hard cap; hitting it raises NonConvergent
};

/// Accumulates sum_n plan(n) to order_num. plan returns nullopt for a zero term.
/// Up runs n = start, start+1, ...; Down runs n = start, start-1, ...; Both covers Z
/// by running up from start and down from start-1.
inline QSeries sum_terms(const std::function<std::optional<TermPlan>(std::int64_t)>& plan_of, SumDirection dir,
                         std::int64_t start, std::int64_t order_num, Lattice lat, const SumOptions& opts = {}) {
  std::vector<Rational> acc;
  std::int64_t lo = 0;
  bool any = false;
  auto accumulate = [&](const QSeries& t) {
    if (t.is_zero()) return;
    if (!any) {
      lo = t.low_num();
      acc.assign(static_cast<std::size_t>(order_num - lo), Rational(0));
      any = true;
    } else if (t.low_num() < lo) {
      std::vector<Rational> grown(static_cast<std::size_t>(order_num - t.low_num()));
      std::move(acc.begin(), acc.end(), grown.begin() + (lo - t.low_num()));
      acc = std::move(grown);
      lo = t.low_num();
    }
    const auto off = static_cast<std::size_t>(t.low_num() - lo);
    const auto& d = t.dense();
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] != 0) acc[off + i] += d[i];
  };
  auto run = [&](std::int64_t from, std::int64_t stepdir) {
    int quiet = 0;
    int zeros = 0;
    std::optional<std::int64_t> prev;
    for (std::int64_t count = 0;; ++count) {
      if (count >= opts.max_terms)
        throw NonConvergent("summation did not settle below q^" + lat.exponent(order_num).str() + " after " +
                            std::to_string(opts.max_terms) + " terms");
      const std::int64_t n = from + stepdir * count;
      auto plan = plan_of(n);
      if (!plan || plan->is_zero()) {
        // Identically vanishing tails (e.g. a factor (1;q)_n) end the sum too.
        if (++zeros >= 4 * opts.patience) return;
        if (++quiet >= opts.patience && prev && *prev >= order_num) return;
        continue;
      }
      zeros = 0;
      const auto v = plan->valuation();
      if (v >= order_num) {
        bool rising = !prev || v >= *prev;
        prev = v;
        if (rising) {
          if (++quiet >= opts.patience) return;
        } else {
          quiet = 0;
        }
        continue;
      }
      quiet = 0;
      prev = v;
      accumulate(evaluate_plan(*plan, order_num, lat));
    }
  };
  if (dir == SumDirection::Up || dir == SumDirection::Both) run(start, 1);
  if (dir == SumDirection::Down) run(start, -1);
  if (dir == SumDirection::Both) run(start - 1, -1);
  if (!any) return QSeries::zero_num(lat, order_num);
  return QSeries::from_dense(lat, lo, std::move(acc), order_num);
}

}  // namespace qseries
