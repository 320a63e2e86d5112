#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "oracle.hpp"
#include "qseries/bailey.hpp"

using namespace qseries;
using testing_qs::ev;
using testing_qs::same;

namespace {

const BaileyRegistry& reg() { return BaileyRegistry::instance(); }

// Slater A6 alpha written out by residue class, integer exponents only.
oracle::Ser a6_alpha(int k, int N) {
  auto q = [&](int e, const oracle::Q& c) { return oracle::Ser::mono(c, e, N); };
  const int r = ((k % 3) + 3) % 3;
  if (k == 0) return q(0, 1);
  if (r == 2) {
    const int n = (k + 1) / 3;
    return q(3 * n * n + n, 1);
  }
  if (r == 0) {
    const int n = k / 3;
    return q(3 * n * n - n, 1);
  }
  const int n = (k - 1) / 3;
  return oracle::add(q(3 * n * n + n, -1), q(3 * n * n + 5 * n + 2, -1));
}

}  // namespace

TEST(Registry, ExactlyTheCitedPairs) {
  std::set<std::string> names;
  for (const auto& p : reg().pairs()) names.insert(p.name);
  EXPECT_EQ(names, (std::set<std::string>{"WarnaarP12", "Warnaar4.6", "Warnaar4.4", "SlaterA2", "SlaterA4",
                                          "SlaterA6", "SlaterA8", "SlaterC3", "SlaterC4", "SlaterG2"}));
  for (std::size_t i = 0; i < reg().pairs().size(); ++i) {
    const auto& p = reg().pairs()[i];
    ASSERT_TRUE(p.relative.has_value()) << p.name;
    EXPECT_EQ(reg().matches(i).size(), 1u) << p.name;
    EXPECT_EQ(*p.relative, (Relative{qpow(1), 1})) << p.name;
  }
  EXPECT_EQ(reg().find("SlaterG2")->lattice_den, 2);
  EXPECT_EQ(reg().find("nope"), nullptr);
}

TEST(BaileyProperty, DefiningRelationUpToFifteen) {
  const Lattice lat{2};
  for (const auto& p : reg().pairs()) {
    std::int64_t bad = -1;
    auto c = check_pair(p, *p.relative, 15, 60, lat, &bad);
    EXPECT_TRUE(c.pass) << p.name << " fails at n = " << bad;
  }
}

TEST(BaileyProperty, WrongRelativeIsRejected) {
  const Lattice lat{2};
  const auto* p = reg().find("SlaterA6");
  EXPECT_FALSE(check_pair(*p, Relative{pv(1), 1}, 6, 24, lat).pass);
  EXPECT_FALSE(check_pair(*p, Relative{qpow(2), 2}, 6, 24, lat).pass);
}

TEST(Bailey, BetaZeroIsAlphaZero) {
  const Lattice lat{2};
  for (const auto& p : reg().pairs())
    EXPECT_TRUE(same(beta_from_alpha(p, *p.relative, 0, 20, lat), refine(p.alpha(0, lat), lat), 20)) << p.name;
}

TEST(Bailey, SlaterA6AgainstOracle) {
  // beta_n = sum_r alpha_r / ((q^2;q)_{n+r} (q;q)_{n-r}), against q^{n^2}/(q^2;q)_{2n}
  const int N = 30;
  const auto* p = reg().find("SlaterA6");
  for (int n = 0; n <= 6; ++n) {
    oracle::Ser acc = oracle::Ser::constant(0, N);
    for (int r = 0; r <= n; ++r) {
      oracle::Ser t = a6_alpha(r, N);
      for (int i = 0; i < n + r; ++i) t = oracle::mul(t, oracle::inv_binomial(1, 2 + i, N));
      for (int i = 0; i < n - r; ++i) t = oracle::mul(t, oracle::inv_binomial(1, 1 + i, N));
      acc = oracle::add(acc, t);
    }
    auto closed = beta_closed(*p, n, N, {});
    for (int e = 0; e < N; ++e) EXPECT_EQ(closed.coeff_num(e), acc.at(e)) << "n = " << n << ", q^" << e;
    auto text = ev("q^(" + std::to_string(n * n) + ")/poch(q^2;q;" + std::to_string(2 * n) + ")", N);
    EXPECT_TRUE(same(closed, text, N));
  }
}

TEST(BaileyProperty, LemmaSidesAgree) {
  for (const auto& p : reg().pairs()) {
    auto [l, r] = lemma_sides(p, 40);
    EXPECT_TRUE(same(l, r, 40)) << p.name;
  }
}

TEST(BaileyProperty, ConjugatePairing) {
  for (const auto& p : reg().pairs()) {
    auto [l, r] = pairing_sides(p, 40);
    EXPECT_TRUE(same(l, r, 40)) << p.name;
  }
}

TEST(Conjugate, TailSumMatchesClosedForm) {
  for (int n = 0; n <= 5; ++n) EXPECT_TRUE(same(gamma_from_delta({qpow(1), 1}, n, 30), gamma_closed({qpow(1), 1}, n, 30), 30));
  EXPECT_TRUE(same(gamma_from_delta({qpow(2), 1}, 0, 30), gamma_closed({qpow(2), 1}, 0, 30), 30));
  EXPECT_TRUE(same(gamma_from_delta({pv(3), 1}, 2, 30), gamma_closed({pv(3), 1}, 2, 30), 30));
  EXPECT_THROW(gamma_from_delta({pv(1), 1}, 0, 10), Degenerate);
}

TEST(Phi11, Summation) {
  EXPECT_TRUE(phi11_check(qpow(1), qpow(3), 30).pass);
  EXPECT_TRUE(phi11_check(qpow(2), qpow(5), 30).pass);
  EXPECT_TRUE(phi11_check(pv(2), pv(Rational(1, 3), 1), 30).pass);
  EXPECT_TRUE(phi11_check(pv(-3, 1), pv(5, 2), 30).pass);
  EXPECT_TRUE(phi11_check(pv(Rational(1, 2), Exponent(1, 2)), pv(-1, Exponent(3, 2)), 30, Lattice{2}).pass);
  // c = a: the product side is (1)_inf = 0
  EXPECT_TRUE(phi11_check(pv(3, 1), pv(3, 1), 30).pass);
}
