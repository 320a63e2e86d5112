#pragma once

// Recognition of theta quotients c q^s prod J_{a,m}^{e}, optionally times a partial or false
// theta residual with coefficients in {-1, 0, 1} on a quadratic progression.
//
// Everything works on the exponent vector b of g = prod_{n>=1} (1 - q^n)^{b_n}, read off from
// the logarithmic derivative: with c_N = sum_{d | N} d b_d we have N g_N = -sum_{k=1}^N c_k g_{N-k}.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qseries/descriptor.hpp"
#include "qseries/qfunctions.hpp"
#include "qseries/series.hpp"

namespace qseries {

struct RecognizeBounds {
  std::int64_t max_modulus = 30;
  int max_power = 2;
  int max_factors = 4;
};

struct ThetaAtom {
  std::int64_t a;
  std::int64_t m;
  friend auto operator<=>(const ThetaAtom&, const ThetaAtom&) = default;
};

/// Residual sum_{n in range} sign(n) q^{A n^2 + B n + C}, sign(n) = s0 * (alt ? (-1)^n : 1) * (false ? sg(n) : 1).
struct PartialThetaResidual {
  bool two_sided = false;
  bool alternating = false;
  bool false_sign = false;
  int sign = 1;
  Exponent A = 0, B = 0, C = 0;

  friend bool operator==(const PartialThetaResidual&, const PartialThetaResidual&) = default;
};

struct ThetaQuotient {
  Rational coeff = 1;
  Exponent shift = 0;
  std::vector<std::pair<ThetaAtom, int>> factors;  // sorted by atom
  std::optional<PartialThetaResidual> residual;

  friend bool operator==(const ThetaQuotient&, const ThetaQuotient&) = default;
};

inline std::string to_string(const ThetaAtom& t) {
  if (3 * t.a == t.m) return "J" + std::to_string(t.a);
  return "J(" + std::to_string(t.a) + "," + std::to_string(t.m) + ")";
}

inline std::string to_string(const PartialThetaResidual& r) {
  std::string out = "sum(n" + std::string(r.two_sided ? " in Z" : ">=0") + ") ";
  if (r.sign < 0) out += "(-1) * ";
  if (r.false_sign) out += "sg(n) * ";
  if (r.alternating) out += "(-1)^n * ";
  IndexPoly p{r.A.to_rational(), r.B.to_rational(), r.C.to_rational()};
  return out + "q^(" + p.str() + ")";
}

inline std::string to_string(const ThetaQuotient& t) {
  std::string out = detail::monomial_text(t.coeff, t.shift, {});
  for (const auto& [atom, e] : t.factors) {
    out += e > 0 ? " * " : " / ";
    out += to_string(atom);
    if (std::abs(e) != 1) out += "^" + std::to_string(std::abs(e));
  }
  if (t.residual) out += " * [" + to_string(*t.residual) + "]";
  return out;
}

/// Evaluates sign(n) q^{An^2+Bn+C} summed over the residual's range.
inline QSeries evaluate_residual(const PartialThetaResidual& r, Exponent order, Lattice lat = {}) {
  IndexPoly p{r.A.to_rational(), r.B.to_rational(), r.C.to_rational()};
  auto plan = [&](std::int64_t n) -> std::optional<TermPlan> {
    TermPlan t;
    t.coeff = r.sign;
    if (r.alternating && n % 2 != 0) t.coeff = -t.coeff;
    if (r.false_sign && n < 0) t.coeff = -t.coeff;
    t.shift = lat.numerator(Exponent::from_rational(p.at(n)));
    return t;
  };
  return sum_terms(plan, r.two_sided ? SumDirection::Both : SumDirection::Up, 0, lat.numerator(order), lat);
}

namespace detail {

/// Exponent vector b_1..b_{N-1} of a series g with g_0 = 1; nullopt when some b_n is not an integer.
inline std::optional<std::vector<Integer>> exponent_vector(const std::vector<Rational>& g, std::vector<Rational>* cvec = nullptr) {
  const auto N = static_cast<std::int64_t>(g.size());
  std::vector<Rational> c(static_cast<std::size_t>(N));
  std::vector<Integer> b(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n < N; ++n) {
    Rational s = n * g[static_cast<std::size_t>(n)];
    for (std::int64_t k = 1; k < n; ++k) s += c[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(n - k)];
    c[static_cast<std::size_t>(n)] = -s;
  }
  for (std::int64_t n = 1; n < N; ++n) {
    Rational s = c[static_cast<std::size_t>(n)];
    for (std::int64_t d = 1; d < n; ++d)
      if (n % d == 0) s -= d * Rational(b[static_cast<std::size_t>(d)]);
    s /= n;
    if (s.get_den() != 1) return std::nullopt;
    b[static_cast<std::size_t>(n)] = s.get_num();
  }
  if (cvec) *cvec = std::move(c);
  return b;
}

/// Exponent vector of J_{a,m}: n = a, m - a, 0 mod m each contribute one factor (1 - q^n).
inline std::vector<std::int64_t> atom_vector(const ThetaAtom& t, std::int64_t N) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n < N; ++n) {
    const auto r = n % t.m;
    if (r == t.a % t.m) ++v[static_cast<std::size_t>(n)];
    if (r == (t.m - t.a) % t.m) ++v[static_cast<std::size_t>(n)];
    if (r == 0) ++v[static_cast<std::size_t>(n)];
  }
  return v;
}

inline std::vector<ThetaAtom> atoms(std::int64_t max_modulus) {
  std::vector<ThetaAtom> out;
  for (std::int64_t m = 2; m <= max_modulus; ++m)
    for (std::int64_t a = 1; 2 * a <= m; ++a) out.push_back({a, m});
  return out;
}

struct Combo {
  std::uint64_t hash;
  std::int32_t i, j;  // atom indices, -1 when absent
  std::int8_t ei, ej;
};

inline void add_combo(std::vector<std::pair<ThetaAtom, int>>& out, const std::vector<ThetaAtom>& at, int i, int e) {
  if (i < 0 || e == 0) return;
  for (auto& [a, k] : out) {
    if (a == at[static_cast<std::size_t>(i)]) {
      k += e;
      return;
    }
  }
  out.push_back({at[static_cast<std::size_t>(i)], e});
}

inline std::vector<std::pair<ThetaAtom, int>> normalize_factors(std::vector<std::pair<ThetaAtom, int>> f) {
  std::erase_if(f, [](const auto& p) { return p.second == 0; });
  std::sort(f.begin(), f.end());
  return f;
}

/// Enumerates every product of at most two atoms with powers in [-P, P] \ {0}.
inline std::vector<Combo> small_combos(const std::vector<std::uint64_t>& atom_hash, int P) {
  std::vector<Combo> out;
  out.push_back({0, -1, -1, 0, 0});
  const auto n = static_cast<std::int32_t>(atom_hash.size());
  std::vector<int> powers;
  for (int e = -P; e <= P; ++e)
    if (e != 0) powers.push_back(e);
  for (std::int32_t i = 0; i < n; ++i)
    for (int e : powers) out.push_back({atom_hash[static_cast<std::size_t>(i)] * static_cast<std::uint64_t>(static_cast<std::int64_t>(e)), i, -1, static_cast<std::int8_t>(e), 0});
  for (std::int32_t i = 0; i < n; ++i)
    for (std::int32_t j = i + 1; j < n; ++j)
      for (int ei : powers)
        for (int ej : powers)
          out.push_back({atom_hash[static_cast<std::size_t>(i)] * static_cast<std::uint64_t>(static_cast<std::int64_t>(ei)) +
                             atom_hash[static_cast<std::size_t>(j)] * static_cast<std::uint64_t>(static_cast<std::int64_t>(ej)),
                         i, j, static_cast<std::int8_t>(ei), static_cast<std::int8_t>(ej)});
  return out;
}

/// Fits a quadratic support with signs to a {-1,0,1} sequence h (h_0 != 0); exponents relative to base.
inline std::optional<PartialThetaResidual> fit_residual(const std::vector<int>& h, std::int64_t base, int lead_sign) {
  std::vector<std::int64_t> support;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] != 0) support.push_back(static_cast<std::int64_t>(i));
  if (support.size() < 3) return std::nullopt;
  const auto N = static_cast<std::int64_t>(h.size());
  auto matches = [&](const PartialThetaResidual& r) {
    std::vector<int> pred(h.size());
    IndexPoly p{r.A.to_rational(), r.B.to_rational(), r.C.to_rational()};
    const std::int64_t K = 4 * N + 4;
    for (std::int64_t n = r.two_sided ? -K : 0; n <= K; ++n) {
      const Rational e = p.at(n) - base;
      if (e >= N) continue;
      if (e.get_den() != 1 || e < 0) return false;
      int sgn = r.sign;
      if (r.alternating && n % 2 != 0) sgn = -sgn;
      if (r.false_sign && n < 0) sgn = -sgn;
      pred[static_cast<std::size_t>(e.get_num().get_si())] += sgn;
    }
    for (std::size_t i = 0; i < h.size(); ++i)
      if (pred[i] * lead_sign != h[i]) return false;
    return true;
  };
  auto solve = [&](std::int64_t n0, std::int64_t n1, std::int64_t n2, std::int64_t e0, std::int64_t e1,
                   std::int64_t e2) -> std::optional<std::array<Rational, 3>> {
    // Lagrange solve for A n^2 + B n + C through three points.
    Rational x0 = n0, x1 = n1, x2 = n2;
    Rational y0 = e0 + base, y1 = e1 + base, y2 = e2 + base;
    Rational d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
    Rational A = (d12 - d01) / (x2 - x0);
    Rational B = d01 - A * (x0 + x1);
    Rational C = y0 - A * x0 * x0 - B * x0;
    if (A <= 0) return std::nullopt;
    return std::array<Rational, 3>{A, B, C};
  };
  const auto s0 = support[0], s1 = support[1], s2 = support[2];
  std::vector<PartialThetaResidual> tries;
  for (int sided = 0; sided < 2; ++sided) {
    auto abc = sided == 0 ? solve(0, 1, 2, s0, s1, s2) : solve(0, -1, 1, s0, s1, s2);
    if (!abc) continue;
    for (int alt = 0; alt < 2; ++alt)
      for (int fs = 0; fs < (sided ? 2 : 1); ++fs) {
        PartialThetaResidual r;
        r.two_sided = sided == 1;
        r.alternating = alt == 1;
        r.false_sign = fs == 1;
        r.sign = h[static_cast<std::size_t>(s0)];
        r.A = Exponent::from_rational((*abc)[0]);
        r.B = Exponent::from_rational((*abc)[1]);
        r.C = Exponent::from_rational((*abc)[2]);
        if (matches(r)) return r;
      }
  }
  return std::nullopt;
}

}  // namespace detail

/// Exhaustive search for f = c q^s prod J^{e} within the bounds, and for f = c q^s (quotient) * residual.
/// Results are ordered deterministically: pure matches first, then residual matches, each lexicographic.
inline std::vector<ThetaQuotient> theta_recognize(const QSeries& f, const RecognizeBounds& bounds = {},
                                                  bool with_residual = true) {
  std::vector<ThetaQuotient> out;
  if (f.is_zero()) return out;
  if (f.lattice().den != 1) throw ShapeError("theta_recognize works on integral exponents");
  const Rational lead = f.dense().front();
  const auto sigma = f.low_num();
  const std::int64_t N = f.is_exact() ? static_cast<std::int64_t>(f.dense().size()) : f.order_num() - sigma;
  if (N < 2) return out;
  std::vector<Rational> g(static_cast<std::size_t>(N));
  for (std::int64_t i = 0; i < N && i < static_cast<std::int64_t>(f.dense().size()); ++i)
    g[static_cast<std::size_t>(i)] = f.dense()[static_cast<std::size_t>(i)] / lead;

  const auto at = detail::atoms(bounds.max_modulus);
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::vector<std::uint64_t> weight(static_cast<std::size_t>(N));
  for (auto& w : weight) w = rng();
  std::vector<std::vector<std::int64_t>> avec;
  std::vector<std::uint64_t> ahash;
  for (const auto& a : at) {
    avec.push_back(detail::atom_vector(a, N));
    std::uint64_t h = 0;
    for (std::int64_t n = 1; n < N; ++n)
      h += static_cast<std::uint64_t>(avec.back()[static_cast<std::size_t>(n)]) * weight[static_cast<std::size_t>(n)];
    ahash.push_back(h);
  }
  auto combos = detail::small_combos(ahash, bounds.max_power);
  std::sort(combos.begin(), combos.end(), [](const auto& x, const auto& y) { return x.hash < y.hash; });

  auto factors_of = [&](const detail::Combo& c, const detail::Combo* d) {
    std::vector<std::pair<ThetaAtom, int>> fs;
    detail::add_combo(fs, at, c.i, c.ei);
    detail::add_combo(fs, at, c.j, c.ej);
    if (d) {
      detail::add_combo(fs, at, d->i, d->ei);
      detail::add_combo(fs, at, d->j, d->ej);
    }
    return detail::normalize_factors(std::move(fs));
  };
  auto vector_of = [&](const std::vector<std::pair<ThetaAtom, int>>& fs) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(N));
    for (const auto& [atom, e] : fs) {
      const auto idx = static_cast<std::size_t>(std::find(at.begin(), at.end(), atom) - at.begin());
      for (std::int64_t n = 1; n < N; ++n) v[static_cast<std::size_t>(n)] += e * avec[idx][static_cast<std::size_t>(n)];
    }
    return v;
  };
  auto within = [&](const std::vector<std::pair<ThetaAtom, int>>& fs) {
    if (static_cast<int>(fs.size()) > bounds.max_factors) return false;
    for (const auto& [a, e] : fs)
      if (std::abs(e) > bounds.max_power) return false;
    return true;
  };

  std::vector<Rational> cvec;
  auto bvec = detail::exponent_vector(g, &cvec);
  std::vector<ThetaQuotient> pure;
  if (bvec) {
    std::uint64_t target = 0;
    bool fits = true;
    std::vector<std::int64_t> b64(static_cast<std::size_t>(N));
    for (std::int64_t n = 1; n < N; ++n) {
      const auto& bn = (*bvec)[static_cast<std::size_t>(n)];
      if (!bn.fits_slong_p()) {
        fits = false;
        break;
      }
      b64[static_cast<std::size_t>(n)] = bn.get_si();
      target += static_cast<std::uint64_t>(b64[static_cast<std::size_t>(n)]) * weight[static_cast<std::size_t>(n)];
    }
    if (fits) {
      std::vector<std::vector<std::pair<ThetaAtom, int>>> found;
      for (const auto& c : combos) {
        const std::uint64_t want = target - c.hash;
        auto it = std::lower_bound(combos.begin(), combos.end(), want,
                                   [](const detail::Combo& x, std::uint64_t h) { return x.hash < h; });
        for (; it != combos.end() && it->hash == want; ++it) {
          auto fs = factors_of(c, &*it);
          if (!within(fs) || vector_of(fs) != b64) continue;
          if (std::find(found.begin(), found.end(), fs) == found.end()) found.push_back(std::move(fs));
        }
      }
      std::sort(found.begin(), found.end());
      for (auto& fs : found) pure.push_back({lead, f.lattice().exponent(sigma), std::move(fs), std::nullopt});
    }
  }
  out.insert(out.end(), pure.begin(), pure.end());
  if (!with_residual || !pure.empty() || (lead != 1 && lead != -1)) return out;

  // Residual search: h = g / Q has c^h = c^g - c^Q; h is rebuilt term by term and abandoned as
  // soon as a coefficient leaves {-1, 0, 1}.
  std::vector<std::int64_t> cg(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n < N; ++n) {
    const auto& c = cvec[static_cast<std::size_t>(n)];
    if (c.get_den() != 1 || !c.get_num().fits_slong_p()) return out;
    cg[static_cast<std::size_t>(n)] = c.get_num().get_si();
  }
  std::vector<std::vector<std::int64_t>> acvec;  // c-vectors of atoms
  for (const auto& v : avec) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(N));
    for (std::int64_t d = 1; d < N; ++d)
      if (v[static_cast<std::size_t>(d)])
        for (std::int64_t k = d; k < N; k += d) c[static_cast<std::size_t>(k)] += d * v[static_cast<std::size_t>(d)];
    acvec.push_back(std::move(c));
  }
  std::vector<ThetaQuotient> mixed;
  std::vector<std::int64_t> ch(static_cast<std::size_t>(N));
  std::vector<int> h(static_cast<std::size_t>(N));
  for (const auto& c : combos) {
    for (std::int64_t n = 1; n < N; ++n) {
      std::int64_t v = cg[static_cast<std::size_t>(n)];
      if (c.i >= 0) v -= c.ei * acvec[static_cast<std::size_t>(c.i)][static_cast<std::size_t>(n)];
      if (c.j >= 0) v -= c.ej * acvec[static_cast<std::size_t>(c.j)][static_cast<std::size_t>(n)];
      ch[static_cast<std::size_t>(n)] = v;
    }
    h[0] = 1;
    bool ok = true;
    for (std::int64_t n = 1; n < N && ok; ++n) {
      __int128 s = 0;
      for (std::int64_t k = 1; k <= n; ++k)
        if (h[static_cast<std::size_t>(n - k)]) s += static_cast<__int128>(ch[static_cast<std::size_t>(k)]) * h[static_cast<std::size_t>(n - k)];
      if (s % n != 0) {
        ok = false;
        break;
      }
      const __int128 hn = -s / n;
      if (hn < -1 || hn > 1) ok = false;
      else h[static_cast<std::size_t>(n)] = static_cast<int>(hn);
    }
    if (!ok) continue;
    auto r = detail::fit_residual(h, 0, 1);
    if (!r) continue;
    // Put the monomial c q^sigma into the residual so that f = Q * residual.
    r->sign *= lead > 0 ? 1 : -1;
    r->C = r->C + f.lattice().exponent(sigma);
    auto fs = factors_of(c, nullptr);
    mixed.push_back({1, 0, std::move(fs), r});
  }
  std::sort(mixed.begin(), mixed.end(), [](const ThetaQuotient& x, const ThetaQuotient& y) { return x.factors < y.factors; });
  out.insert(out.end(), mixed.begin(), mixed.end());
  return out;
}

/// The series c q^s prod J^{e} (times the residual if present), to the given order.
inline QSeries evaluate_quotient(const ThetaQuotient& t, Exponent order, Lattice lat = {}) {
  const std::int64_t work = lat.numerator(order);
  QSeries acc = make_monomial(t.coeff, t.shift, lat);
  const Exponent w = lat.exponent(work + std::max<std::int64_t>(0, -lat.numerator(t.shift)) + 4);
  for (const auto& [atom, e] : t.factors) {
    QSeries base = J(atom.a, atom.m, w, lat);
    acc = mul(acc, e > 0 ? pow(base, e) : pow(invert(base), -e));
  }
  if (t.residual) acc = mul(acc, evaluate_residual(*t.residual, w, lat));
  return truncate_num(acc, work);
}

}  // namespace qseries
