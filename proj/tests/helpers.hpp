#pragma once

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "qseries/eval.hpp"
#include "qseries/series.hpp"

namespace testing_qs {

using namespace qseries;

inline QSeries ev(const std::string& text, Exponent order, Lattice lat = {}, const Bindings& b = {}) {
  return evaluate(text, order, lat, b);
}

inline ::testing::AssertionResult same(const QSeries& a, const QSeries& b, Exponent order) {
  auto c = equal_to_order(a, b, order);
  if (c.pass) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "first mismatch at q^" << c.mismatch->exponent.str() << ": "
                                       << c.mismatch->lhs.get_str() << " vs " << c.mismatch->rhs.get_str();
}

inline std::vector<Rational> rationals(const std::vector<std::string>& v) {
  std::vector<Rational> out;
  for (const auto& s : v) {
    Rational r(s);
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

}  // namespace testing_qs
