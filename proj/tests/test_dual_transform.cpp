#include <gtest/gtest.h>

#include "helpers.hpp"
#include "qseries/corpus.hpp"
#include "qseries/descriptor.hpp"
#include "qseries/recognize.hpp"

using namespace qseries;
using testing_qs::ev;
using testing_qs::same;

namespace {

using Factors = std::vector<std::pair<ThetaAtom, int>>;

Factors sorted(Factors f) {
  std::sort(f.begin(), f.end());
  return f;
}

bool contains(const std::vector<ThetaQuotient>& found, const Rational& c, Exponent shift, const Factors& f) {
  for (const auto& t : found)
    if (t.coeff == c && t.shift == shift && t.factors == sorted(f) && !t.residual) return true;
  return false;
}

Bindings first_sample(const IdentityRecord& r) { return r.samples.empty() ? Bindings{} : r.samples.front(); }

}  // namespace

TEST(InvertQ, DualRecordsReproduceTheirLeftSides) {
  int count = 0;
  for (const auto& r : corpus()) {
    if (r.dual_source.empty()) continue;
    ++count;
    const Lattice lat{r.lattice};
    const auto b = first_sample(r);
    auto d = invert_q(to_descriptor(r.dual_source));
    EXPECT_TRUE(same(evaluate_descriptor(d, 40, lat, b), ev(r.dual_target, 40, lat, b), 40)) << r.id;
  }
  EXPECT_GE(count, 10);
}

TEST(InvertQProperty, InvolutionOnCorpusDescriptors) {
  int checked = 0;
  for (const auto& r : corpus()) {
    std::vector<std::string> texts;
    for (const auto& s : r.sides)
      if (!s.text.empty() && !s.build) texts.push_back(s.text);
    if (!r.dual_source.empty()) texts.push_back(r.dual_source);
    const Lattice lat{r.lattice};
    const auto b = first_sample(r);
    for (const auto& t : texts) {
      DescriptorSum d;
      try {
        d = to_descriptor(t);
      } catch (const Error&) {
        continue;  // not a pure sum of Eulerian terms
      }
      ++checked;
      auto back = invert_q(invert_q(d));
      EXPECT_TRUE(same(evaluate_descriptor(back, 30, lat, b), evaluate_descriptor(d, 30, lat, b), 30))
          << r.id << ": " << t;
    }
  }
  EXPECT_GE(checked, 30);
}

TEST(InvertQ, SimpleExample) {
  // q -> 1/q on sum q^n/(-q;q)_{2n}: each factor 1 + q^{-k} releases q^{-k}
  auto d = invert_q(to_descriptor("sum(n>=0) q^n/poch(-q;q;2*n)"));
  EXPECT_TRUE(same(evaluate_descriptor(d, 30), ev("sum(n>=0) q^(2*n^2)/poch(-q;q;2*n)", 30), 30));
}

TEST(Reciprocal, Examples) {
  EXPECT_EQ(to_string(reciprocal_polynomial(ev("1 + 2*q", 10))), "2 + q");
  EXPECT_EQ(to_string(reciprocal_polynomial(ev("q^-1 + 1", 10))), "1 + q");
  auto g = gaussian_binomial(7, 3);
  EXPECT_TRUE(same(reciprocal_polynomial(g), g, 50));
  EXPECT_THROW(reciprocal_polynomial(ev("1/(1-q)", 10)), Error);
}

TEST(Heuristic, PartialThetaCandidates) {
  auto c = heuristic_candidates(to_descriptor("sum(n>=0) q^(-11*n)*q^(24*n*(n+1)/2)"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(to_string(c[0]), "m(-q^11; q^24; *)");
  c = heuristic_candidates(to_descriptor("sum(n>=0) (-1)^n*q^(2*n*(n+1))"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].base, Exponent(4));
  EXPECT_THROW(heuristic_candidates(to_descriptor("sum(n>=0) q^n/poch(q;q;n)")), ShapeError);
  EXPECT_THROW(heuristic_candidates(to_descriptor("5")), ShapeError);
}

TEST(Heuristic, EntryRightSideGivesTheFourAppellTerms) {
  auto c = heuristic_candidates(
      to_descriptor("sum(n>=0) q^(12*n^2+n)*(1-q^(22*n+11)) + q*sum(n>=0) q^(12*n^2+7*n)*(1-q^(10*n+5))"));
  ASSERT_EQ(c.size(), 4u);
  std::vector<std::string> got;
  for (const auto& x : c) got.push_back(to_string(x));
  EXPECT_EQ(got, (std::vector<std::string>{"m(-q^11; q^24; *)", "m(-q^11; q^24; *)", "q^(-1)*m(-q^5; q^24; *)",
                                           "q^(-1)*m(-q^5; q^24; *)"}));
  // with the z values filled in, the candidates are the second line of the psi-bar-0 display
  const std::vector<ParamValue> zs = {qpow(4), qpow(22), qpow(4), qpow(10)};
  for (std::size_t i = 0; i < 4; ++i) c[i].z = zs[i];
  EXPECT_TRUE(same(evaluate_candidates(c, 40), ev("sum(n>=0) q^(2*n^2)/poch(-q;q;2*n)", 40), 40));
}

TEST(Remainder, IdenticalInputsGiveZero) {
  auto f = ev("J(1,2)/Jm(4)", 30);
  EXPECT_TRUE(remainder(f, f).is_zero());
  EXPECT_EQ(remainder(f, make_monomial(1, 0, 20)).order(), Exponent(20));
}

TEST(Recognizer, MixedTermOfTheSecondDual) {
  auto d2 = evaluate_descriptor(invert_q(to_descriptor(corpus_detail::forms::B2)), 40);
  auto rem = remainder(d2, ev("-q*sum(n>=0) (-1)^n*q^(2*n*(n+1))", 40));
  auto found = theta_recognize(rem);
  ASSERT_FALSE(found.empty());
  const auto& t = found.front();
  ASSERT_TRUE(t.residual.has_value());
  EXPECT_EQ(t.factors, sorted({{ThetaAtom{1, 2}, -1}, {ThetaAtom{4, 12}, 1}}));
  EXPECT_TRUE(same(evaluate_quotient(t, 40), ev(corpus_detail::forms::B_mixed, 40), 40));
}

TEST(Recognizer, ConstructedQuotients) {
  struct Case {
    std::string text;
    Rational c;
    Exponent shift;
    Factors f;
  };
  const std::vector<Case> cases = {
      {"J(1,2)^2/Jm(1)", 1, 0, {{{1, 2}, 2}, {{1, 3}, -1}}},
      {"Jm(2)^2/Jm(1)", 1, 0, {{{1, 3}, -1}, {{2, 6}, 2}}},
      {"Jm(5)*J(1,5)/J(2,5)", 1, 0, {{{1, 5}, 1}, {{2, 5}, -1}, {{5, 15}, 1}}},
      {"q^2*J(3,7)/Jm(7)", 1, 2, {{{3, 7}, 1}, {{7, 21}, -1}}},
      {"-3*Jm(4)/J(1,4)", -3, 0, {{{1, 4}, -1}, {{4, 12}, 1}}},
      {"J(1,3)*J(2,8)^2", 1, 0, {{{1, 3}, 1}, {{2, 8}, 2}}},
      {"Jm(1)^2/(J(1,6)*Jm(6))", 1, 0, {{{1, 3}, 2}, {{1, 6}, -1}, {{6, 18}, -1}}},
      {"q*J(5,24)/J(1,12)^2", 1, 1, {{{1, 12}, -2}, {{5, 24}, 1}}},
      {"J(2,9)*J(4,9)/J(1,9)^2", 1, 0, {{{1, 9}, -2}, {{2, 9}, 1}, {{4, 9}, 1}}},
      {"1/2*J(3,10)*J(1,5)/(Jm(10)*Jm(2))", Rational(1, 2), 0,
       {{{1, 5}, 1}, {{2, 6}, -1}, {{3, 10}, 1}, {{10, 30}, -1}}},
  };
  for (const auto& k : cases) {
    auto f = ev(k.text, 60);
    auto found = theta_recognize(f, {}, false);
    EXPECT_TRUE(contains(found, k.c, k.shift, k.f)) << k.text;
    for (const auto& t : found) EXPECT_TRUE(same(evaluate_quotient(t, 60), f, 60)) << k.text << " vs " << to_string(t);
  }
}

TEST(Recognizer, SquaresAreNotAQuotient) {
  EXPECT_TRUE(theta_recognize(ev("sum(n>=0) q^(n^2)", 40), {}, false).empty());
  EXPECT_TRUE(theta_recognize(QSeries::zero_num({}, 10)).empty());
}
