"""Reference coefficients for the frozen-value tests, computed with plain Python fractions.

Each series is built from its defining sum or product by schoolbook power-series arithmetic,
independently of the C++ library. Run: python3 tests/oracles/derive.py
"""
from fractions import Fraction as F

N = 16


def mul(a, b):
    out = [F(0)] * N
    for i, x in enumerate(a):
        if x:
            for j in range(N - i):
                out[i + j] += x * b[j]
    return out


def inv(a):
    out = [F(0)] * N
    out[0] = 1 / a[0]
    for n in range(1, N):
        out[n] = -sum(a[k] * out[n - k] for k in range(1, n + 1)) / a[0]
    return out


def one_minus(c, k):
    s = [F(0)] * N
    s[0] = F(1)
    if k < N:
        s[k] -= c
    return s


def geom(u, k):
    # 1/(1 - u q^k), k > 0
    s = [F(0)] * N
    p = F(1)
    for e in range(0, N, k):
        s[e] = p
        p *= u
    return s


def poch(c, e, m, n):
    s = [F(0)] * N
    s[0] = F(1)
    for i in range(n):
        s = mul(s, one_minus(c, e + i * m))
    return s


def chi0():
    # sum q^n / (q^{n+1})_n
    acc = [F(0)] * N
    for n in range(N):
        t = [F(0)] * N
        t[n] = F(1)
        acc = [x + y for x, y in zip(acc, mul(t, inv(poch(1, n + 1, 1, n))))]
    return acc


def theta(c):
    # j(c; q) from the triple product with the factor (1 - c) included
    s = one_minus(c, 0)
    for k in range(1, N):
        s = mul(s, one_minus(c, k))
        s = mul(s, one_minus(1 / c, k))
        s = mul(s, one_minus(1, k))
    return s


def appell_m(x, z):
    # m(x, q, z) for constants x, z: (1/j(z)) sum_r (-1)^r q^{C(r,2)} z^r / (1 - q^{r-1} x z)
    acc = [F(0)] * N
    for r in range(-12, 13):
        e = r * (r - 1) // 2
        if e >= N:
            continue
        coef = F((-1) ** (r % 2)) * F(z) ** r
        k = r - 1
        if k > 0:
            d = geom(F(x * z), k)
        elif k == 0:
            d = [F(0)] * N
            d[0] = 1 / (1 - F(x * z))
        else:
            w = 1 / F(x * z)
            d = [F(0)] * N
            g = geom(w, -k)
            for i in range(N + k):
                d[i - k] = -w * g[i]
        t = [F(0)] * N
        t[e] = coef
        acc = [a + b for a, b in zip(acc, mul(t, d))]
    return mul(acc, inv(theta(F(z))))


def show(name, s):
    print(name, "{" + ", ".join(f'"{x}"' for x in s) + "}")


show("chi0", chi0())
show("m(2,q,3)", appell_m(F(2), F(3)))
show("m(1/2,q,-5)", appell_m(F(1, 2), F(-5)))
show("j(3;q)", theta(F(3)))
