#pragma once

// Naive reference arithmetic for tests. Deliberately shares nothing with the library:
// integer exponents only, schoolbook products, geometric expansion of every 1/(1 - u q^k).

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oracle {

using Q = mpq_class;

/// Laurent series c[i] q^(lo + i), known below exponent N.
struct Ser {
  int lo = 0;
  int N = 0;
  std::vector<Q> c;

  static Ser constant(const Q& v, int N) {
    Ser s;
    s.N = N;
    s.c.assign(static_cast<std::size_t>(std::max(N, 0)), 0);
    if (N > 0) s.c[0] = v;
    return s;
  }
  static Ser mono(const Q& v, int e, int N) {
    Ser s;
    s.lo = e;
    s.N = N;
    s.c.assign(static_cast<std::size_t>(std::max(N - e, 0)), 0);
    if (e < N) s.c[0] = v;
    return s;
  }
  Q at(int e) const {
    const int i = e - lo;
    if (i < 0 || i >= static_cast<int>(c.size())) return 0;
    return c[static_cast<std::size_t>(i)];
  }
};

inline Ser add(const Ser& a, const Ser& b, const Q& kb = 1) {
  Ser s;
  s.lo = std::min(a.lo, b.lo);
  s.N = std::min(a.N, b.N);
  s.c.assign(static_cast<std::size_t>(std::max(s.N - s.lo, 0)), 0);
  for (int e = s.lo; e < s.N; ++e) s.c[static_cast<std::size_t>(e - s.lo)] = a.at(e) + kb * b.at(e);
  return s;
}

inline Ser mul(const Ser& a, const Ser& b) {
  Ser s;
  s.lo = a.lo + b.lo;
  s.N = std::min(a.N + b.lo, b.N + a.lo);
  s.c.assign(static_cast<std::size_t>(std::max(s.N - s.lo, 0)), 0);
  for (int i = a.lo; i < a.N; ++i)
    for (int j = b.lo; j < b.N; ++j)
      if (i + j < s.N) s.c[static_cast<std::size_t>(i + j - s.lo)] += a.at(i) * b.at(j);
  return s;
}

/// 1/(1 - u q^k) for k > 0 as a geometric series; for k < 0 as -u^{-1} q^{-k} / (1 - u^{-1} q^{-k}).
inline Ser inv_binomial(const Q& u, int k, int N) {
  if (k > 0) {
    Ser s = Ser::constant(0, N);
    Q p = 1;
    for (int e = 0; e < N; e += k, p *= u) s.c[static_cast<std::size_t>(e)] = p;
    return s;
  }
  if (k == 0) return Ser::constant(1 / (1 - u), N);
  const Q w = 1 / u;
  Ser tail = inv_binomial(w, -k, N + k);
  return mul(Ser::mono(-w, -k, N - k), tail);
}

inline Ser binomial(const Q& u, int k, int N) { return add(Ser::constant(1, N), Ser::mono(u, k, N), -1); }

/// prod_{i >= 0, e + i m < N} (1 - c q^{e + i m}); requires the constant factors to be nonzero.
inline Ser poch_inf(const Q& c, int e, int m, int N) {
  Ser s = Ser::constant(1, N);
  for (int k = e; k < N; k += m) s = mul(s, binomial(c, k, N));
  return s;
}

/// Triple product j(c q^e; q) with e in [0, 1] handled by the product form.
inline Ser theta_product(const Q& c, int e, int N) {
  Ser s = poch_inf(c, e, 1, N);
  s = mul(s, poch_inf(1 / c, 1 - e, 1, N));
  return mul(s, poch_inf(1, 1, 1, N));
}

/// m(x, q, z) with x = cx q^ex and a constant z = cz, directly from the defining bilateral sum.
inline Ser appell_m(const Q& cx, int ex, const Q& cz, int N) {
  const int pad = 20;
  Ser sum = Ser::constant(0, N + pad);
  for (int r = -60; r <= 60; ++r) {
    const int e = r * (r - 1) / 2;
    if (e >= N + pad) continue;
    Q coef = (r % 2 == 0 ? 1 : -1);
    for (int i = 0; i < std::abs(r); ++i) coef = r > 0 ? Q(coef * cz) : Q(coef / cz);
    Ser t = mul(Ser::mono(coef, e, N + pad), inv_binomial(cx * cz, r - 1 + ex, N + pad));
    sum = add(sum, t);
  }
  // divide by j(z; q); its constant term 1 - cz is nonzero for cz != 1
  Ser th = theta_product(cz, 0, N + pad);
  Ser inv = Ser::constant(0, N + pad);
  const Q t0 = th.at(0);
  inv.c[0] = 1 / t0;
  for (int n = 1; n < N + pad; ++n) {
    Q acc = 0;
    for (int k = 1; k <= n; ++k) acc += th.at(k) * inv.c[static_cast<std::size_t>(n - k)];
    inv.c[static_cast<std::size_t>(n)] = -acc / t0;
  }
  Ser out = mul(sum, inv);
  out.N = std::min(out.N, N);
  return out;
}

/// Gaussian binomial by the q-Pascal rule [n,k] = [n-1,k-1] + q^k [n-1,k].
inline std::vector<long long> gauss(int n, int k) {
  if (k < 0 || k > n) return {};
  static std::map<std::pair<int, int>, std::vector<long long>> memo;
  if (k == 0 || k == n) return {1};
  auto key = std::make_pair(n, k);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  auto a = gauss(n - 1, k - 1), b = gauss(n - 1, k);
  std::vector<long long> out(std::max(a.size(), b.size() + static_cast<std::size_t>(k)), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i + static_cast<std::size_t>(k)] += b[i];
  memo[key] = out;
  return out;
}

}  // namespace oracle
