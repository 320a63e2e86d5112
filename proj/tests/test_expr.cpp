#include <gtest/gtest.h>

#include "helpers.hpp"
#include "qseries/corpus.hpp"
#include "qseries/expr.hpp"

using namespace qseries;
using testing_qs::ev;
using testing_qs::same;

namespace {

std::size_t error_offset(const std::string& text) {
  try {
    (void)parse_expression(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no parse error for " << text;
  return 0;
}

}  // namespace

TEST(Parse, CallNodeWithMonomialArguments) {
  auto n = parse_expression("m(q^7; q^15; q^9)");
  ASSERT_EQ(n->kind, NodeKind::Call);
  EXPECT_EQ(n->name, "m");
  ASSERT_EQ(n->args.size(), 3u);
  EXPECT_EQ(to_string(n), "m(q^7; q^15; q^9)");
}

TEST(Parse, CommaAndSemicolonSeparators) {
  EXPECT_TRUE(same(ev("m(q^7, q^15, q^9)", 20), ev("m(q^7; q^15; q^9)", 20), 20));
  EXPECT_TRUE(same(ev("sum(n>=0) q^n / poch(-q; q; 2n)", 20), ev("sum(n>=0) q^n/poch(-q;q;2*n)", 20), 20));
  // a free index outside a sum has no value
  EXPECT_THROW(ev("poch(-q; q; n)", 20), Error);
}

TEST(Parse, Precedence) {
  EXPECT_EQ(to_string(ev("-2^2", 5)), "-4");
  EXPECT_EQ(to_string(ev("2*3^2", 5)), "18");
  EXPECT_EQ(to_string(ev("1-2-3", 5)), "-4");
  EXPECT_EQ(to_string(ev("2/3/4", 5)), "1/6");
  EXPECT_EQ(to_string(ev("-q^2 + 1", 5)), "1 - q^2");
  EXPECT_EQ(to_string(ev("(1+q)^2", 5)), "1 + 2*q + q^2");
  EXPECT_EQ(to_string(ev("q^-1*q^2", 5)), "q");
  EXPECT_EQ(to_string(ev("q^(1/2)*q^(1/2)", 5, Lattice{2})), "q");
}

TEST(Parse, WhitespaceIsInsignificant) {
  EXPECT_TRUE(same(ev("  j( -1 ;q )  ", 20), ev("j(-1;q)", 20), 20));
}

TEST(Parse, ErrorsCarryByteOffsets) {
  EXPECT_EQ(error_offset("j(q;; q^2)"), 4u);
  EXPECT_EQ(error_offset("1 + "), 4u);
  EXPECT_EQ(error_offset("(1 + q"), 6u);
  EXPECT_EQ(error_offset("q ^ ^ 2"), 4u);
  EXPECT_THROW((void)parse_expression("m(q; q)"), ParseError);
  EXPECT_THROW((void)parse_expression("nosuch(q)"), ParseError);
}

TEST(Parse, NonMonomialParameterIsRejected) {
  EXPECT_THROW(ev("j(1+q; q)", 10), Error);
  EXPECT_THROW(ev("m(q; 2*q; q)", 10), Error);
}

TEST(Expand, Examples) {
  EXPECT_EQ(to_string(ev("gauss(4,2)", 20)), "1 + q + 2*q^2 + q^3 + q^4");
  EXPECT_EQ(to_string(ev("j(-1; q)", 10)), "2 + 2*q + 2*q^3 + 2*q^6 + O(q^10)");
  EXPECT_THROW(ev("m(q;q;q)", 10), Pole);
  EXPECT_EQ(to_string(ev("q^(1/3) + 1/2", 2, Lattice{3})), "1/2 + q^(1/3)");
}

TEST(Expand, ChiZeroFifthOrderMForm) {
  auto m = ev("2 - 2*m(q^7;q^15;q^12) - m(q^7;q^15;q^9) - 2*q^-1*m(q^2;q^15;q^12) - q^-1*m(q^2;q^15;q^9)", 16);
  // frozen from the Eulerian form sum q^n/(q^{n+1})_n by tests/oracles/derive.py
  const auto want = testing_qs::rationals({"1", "1", "1", "2", "1", "3", "2", "3", "3", "5", "3", "6", "5", "7", "7", "9"});
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(m.coeff_num(static_cast<std::int64_t>(i)), want[i]) << i;
}

TEST(RoundTripProperty, CorpusExpressions) {
  int n = 0;
  for (const auto& r : corpus()) {
    const Bindings b = r.samples.empty() ? Bindings{} : r.samples.front();
    for (const auto& s : r.sides) {
      if (s.build || s.text.empty()) continue;
      NodePtr p;
      try {
        p = parse_expression(s.text);
      } catch (const ParseError& e) {
        ADD_FAILURE() << r.id << ": " << e.what();
        continue;
      }
      const std::string printed = to_string(p);
      EXPECT_EQ(to_string(parse_expression(printed)), printed) << r.id;
      const Lattice lat{r.lattice};
      EXPECT_TRUE(same(evaluate(p, 12, lat, b), evaluate(printed, 12, lat, b), 12)) << r.id << ": " << printed;
      ++n;
    }
  }
  EXPECT_GT(n, 150);
}
