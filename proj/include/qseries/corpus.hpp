#pragma once

// Identity corpus: every record is a chain of sides that must agree to the record's order
// at each sample binding, plus the driver that verifies records and reports the first mismatch.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qseries/bailey.hpp"
#include "qseries/descriptor.hpp"
#include "qseries/eval.hpp"
#include "qseries/qfunctions.hpp"
#include "qseries/series.hpp"

namespace qseries {

using SideBuilder = std::function<QSeries(const Bindings&, Exponent, Lattice)>;

struct Side {
  std::string text;
  SideBuilder build;    // empty: evaluate text
  bool grammar = true;  // text is an evaluable expression
};

struct IdentityRecord {
  std::string id;
  std::string label;  // anchor in the source manifest
  std::string group;  // G0..G9
  std::int64_t lattice = 1;
  std::int64_t order = 50;
  std::vector<std::string> params;  // names the sample plan binds as parameters
  std::vector<Bindings> samples;
  std::function<bool(const Bindings&)> excluded;  // true: sample would hit a pole or degenerate factor
  std::vector<Side> sides;
  std::vector<std::string> tags;
  std::string status;  // manifest status tag
  // For dual records: the Eulerian form before q -> 1/q, and the dual left side it must reproduce.
  std::string dual_source;
  std::string dual_target;

  bool has_tag(const std::string& t) const { return std::find(tags.begin(), tags.end(), t) != tags.end(); }
};

struct OutOfScope {
  std::string label;
  std::string reason;
};

struct SampleOutcome {
  std::string binding;
  std::string status;  // pass | fail | error
  std::optional<Mismatch> mismatch;
  std::size_t side = 0;  // failing side index (compared against side 0)
  std::string error;
};

struct VerificationReport {
  std::string id;
  std::string group;
  std::string status;  // pass | fail | error
  Exponent order;
  std::int64_t lattice = 1;
  std::vector<SampleOutcome> samples;
  std::optional<SampleOutcome> first_failure;
  double millis = 0;

  bool pass() const { return status == "pass"; }
};

struct VerifyOptions {
  std::optional<Exponent> order;
  std::optional<Exponent> perturb;  // adds q^k to the last side: negative control
  std::optional<std::vector<Bindings>> samples;
};

namespace corpus_detail {

// Index bindings (pair, n, N) ride in the exponent so that 0 is representable.
inline bool is_index_name(const std::string& k) { return k == "pair" || k == "n" || k == "N"; }
inline ParamValue index_value(std::int64_t n) { return {1, Exponent(n)}; }

inline std::string binding_text(const Bindings& b) {
  if (b.empty()) return "-";
  std::string s;
  for (const auto& [k, v] : b) {
    if (!s.empty()) s += ", ";
    s += k + "=" + (is_index_name(k) ? v.e.str() : v.str());
  }
  return s;
}

inline ParamValue value(const std::string& text) {
  QSeries v = evaluate(text, 1, Lattice{1});
  if (!v.is_exact() || v.term_count() != 1) throw Error("sample value is not a monomial: " + text);
  return {v.dense().front(), v.valuation()};
}

inline std::vector<Bindings> plan(const std::string& name, const std::vector<std::string>& values) {
  std::vector<Bindings> out;
  for (const auto& v : values) out.push_back({{name, value(v)}});
  return out;
}

/// Samples for several parameters given as rows of values.
inline std::vector<Bindings> plan(const std::vector<std::string>& names, const std::vector<std::vector<std::string>>& rows) {
  std::vector<Bindings> out;
  for (const auto& row : rows) {
    Bindings b;
    for (std::size_t i = 0; i < names.size(); ++i) b[names[i]] = value(row.at(i));
    out.push_back(std::move(b));
  }
  return out;
}

inline const std::vector<std::string>& default_values() {
  static const std::vector<std::string> v = {"2", "3", "5", "-2", "1/2", "2*q", "q^-1/3"};
  return v;
}

/// Parameters on the unit circle are where the displayed identities divide by 1 + a, 1 - a^4 or j(1; q).
inline bool unit_coefficient(const std::vector<std::string>& params, const Bindings& b) {
  for (const auto& p : params) {
    auto it = b.find(p);
    if (it == b.end()) return true;
    const Rational& c = it->second.c;
    if (it->second.e == 0 && (c == 1 || c == -1)) return true;
  }
  return false;
}

/// Replaces every F[arg] with the template body, whose parameter slot is written {A}.
inline std::string expand(const std::string& text, const std::string& body) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == 'F' && i + 1 < text.size() && text[i + 1] == '[') {
      const auto close = text.find(']', i);
      if (close == std::string::npos) throw Error("unterminated template call in " + text);
      const std::string arg = "(" + text.substr(i + 2, close - i - 2) + ")";
      std::string inst = body;
      for (std::size_t p = inst.find("{A}"); p != std::string::npos; p = inst.find("{A}", p + arg.size()))
        inst.replace(p, 3, arg);
      out += "(" + inst + ")";
      i = close + 1;
    } else {
      out += text[i++];
    }
  }
  return out;
}

class Builder {
 public:
  Builder(std::string id, std::string label, std::string group) {
    r_.id = std::move(id);
    r_.label = std::move(label);
    r_.group = std::move(group);
    r_.samples = {Bindings{}};
  }
  Builder& sides(std::vector<std::string> texts) {
    for (auto& t : texts) r_.sides.push_back({std::move(t), {}, true});
    return *this;
  }
  Builder& side(std::string text, SideBuilder b, bool grammar = false) {
    r_.sides.push_back({std::move(text), std::move(b), grammar});
    return *this;
  }
  Builder& param(const std::string& name, std::vector<std::string> values = default_values()) {
    r_.params = {name};
    r_.samples = plan(name, values);
    return *this;
  }
  Builder& params(std::vector<std::string> names, const std::vector<std::vector<std::string>>& rows) {
    r_.samples = plan(names, rows);
    r_.params = std::move(names);
    return *this;
  }
  Builder& samples(std::vector<Bindings> s) {
    r_.samples = std::move(s);
    return *this;
  }
  Builder& lattice(std::int64_t d) {
    r_.lattice = d;
    return *this;
  }
  Builder& order(std::int64_t o) {
    r_.order = o;
    return *this;
  }
  Builder& tag(std::string t) {
    r_.tags.push_back(std::move(t));
    return *this;
  }
  Builder& dual(std::string source, std::string target) {
    r_.dual_source = std::move(source);
    r_.dual_target = std::move(target);
    return *this;
  }
  Builder& status(std::string s) {
    r_.status = std::move(s);
    return *this;
  }
  IdentityRecord done() {
    if (!r_.excluded) {
      auto names = r_.params;
      r_.excluded = [names](const Bindings& b) { return unit_coefficient(names, b); };
    }
    if (r_.status.empty()) r_.status = r_.params.empty() ? "verified to order" : "verified at samples";
    return r_;
  }

 private:
  IdentityRecord r_;
};

inline std::int64_t index_of(const Bindings& b, const std::string& name) {
  auto it = b.find(name);
  if (it == b.end() || it->second.c != 1 || !it->second.e.is_integer()) throw Error("missing index binding " + name);
  return it->second.e.num();
}

inline std::vector<Bindings> index_plan(const std::string& name, std::int64_t lo, std::int64_t hi) {
  std::vector<Bindings> out;
  for (std::int64_t n = lo; n <= hi; ++n) out.push_back({{name, index_value(n)}});
  return out;
}

// ---- finite identities of Schur type --------------------------------------

inline QSeries finite_lhs(std::int64_t N, std::int64_t linear) {
  QSeries acc = QSeries::exact_zero();
  for (std::int64_t j = 0; 2 * j <= N; ++j)
    acc = add(acc, mul(make_monomial(1, j * j + linear * j), gaussian_binomial(N - j, j)));
  return acc;
}

/// sum_l (-1)^l q^{l(5l + s)/2} [top, floor((top - 5l)/2) + lift]
inline QSeries finite_rhs(std::int64_t top, std::int64_t s, std::int64_t lift) {
  QSeries acc = QSeries::exact_zero();
  const std::int64_t span = top / 5 + 2;
  for (std::int64_t l = -span; l <= span; ++l) {
    const auto k = detail::floor_div(top - 5 * l, 2) + lift;
    QSeries g = gaussian_binomial(top, k);
    if (g.is_zero()) continue;
    acc = add(acc, mul(make_monomial(l % 2 == 0 ? 1 : -1, l * (5 * l + s) / 2), g));
  }
  return acc;
}

// ---- Hecke-type double sum by direct enumeration over a box -----------------

inline QSeries hecke_box(std::int64_t A, std::int64_t B, std::int64_t C, const ParamValue& x, const ParamValue& y,
                         Exponent order, Lattice lat) {
  const auto ex = lat.numerator(x.e), ey = lat.numerator(y.e), d = lat.numerator(1);
  const auto o = lat.numerator(order);
  const std::int64_t R = 2 * (o / d + std::abs(ex) / d + std::abs(ey) / d) + 12;
  std::map<std::int64_t, Rational> acc;
  for (std::int64_t r = -R; r <= R; ++r) {
    for (std::int64_t s = -R; s <= R; ++s) {
      if ((r >= 0) != (s >= 0)) continue;
      const auto e = d * (A * r * (r - 1) / 2 + B * r * s + C * s * (s - 1) / 2) + r * ex + s * ey;
      if (e >= o) continue;
      Rational c = qseries::pow(x.c, r) * qseries::pow(y.c, s);
      if ((r + s) % 2 != 0) c = -c;
      if (r < 0) c = -c;
      acc[e] += c;
    }
  }
  std::vector<Rational> dense;
  if (acc.empty()) return QSeries::zero_num(lat, o);
  const auto lo = acc.begin()->first;
  dense.resize(static_cast<std::size_t>(o - lo));
  for (const auto& [e, c] : acc) dense[static_cast<std::size_t>(e - lo)] = c;
  return QSeries::from_dense(lat, lo, std::move(dense), o);
}

inline const BaileyPairSpec& pair_at(const Bindings& b) {
  return BaileyRegistry::instance().pairs().at(static_cast<std::size_t>(index_of(b, "pair")));
}

inline std::vector<Bindings> pair_plan(std::int64_t max_n) {
  std::vector<Bindings> out;
  const auto count = static_cast<std::int64_t>(BaileyRegistry::instance().pairs().size());
  for (std::int64_t p = 0; p < count; ++p)
    for (std::int64_t n = 0; n <= max_n; ++n) out.push_back({{"pair", index_value(p)}, {"n", index_value(n)}});
  return out;
}

// ---- text fragments shared by several records -------------------------------

namespace forms {
// tenth order
inline const std::string phi = "sum(n>=0) q^(n*(n+1)/2)/poch(q;q^2;n+1)";
inline const std::string psi = "sum(n>=0) q^((n+1)*(n+2)/2)/poch(q;q^2;n+1)";
inline const std::string X = "sum(n>=0) (-1)^n*q^(n^2)/poch(-q;q;2*n)";
inline const std::string chi = "sum(n>=0) (-1)^n*q^((n+1)^2)/poch(-q;q;2*n+1)";
inline const std::string phi_d = "sum(n>=0) (-1)^(n+1)*q^((n+1)*(n+2)/2)/poch(q;q^2;n+1)";
inline const std::string psi_d = "sum(n>=0) (-1)^(n+1)*q^(n*(n+1)/2)/poch(q;q^2;n+1)";
inline const std::string X_d = "sum(n>=0) (-1)^n*q^(n*(n+1))/poch(-q;q;2*n)";
inline const std::string chi_d = "sum(n>=0) (-1)^n*q^(n*(n+1))/poch(-q;q;2*n+1)";
// Example 1
inline const std::string B1 = "sum(n>=0) q^n*poch(-q;q^2;n)/poch(q;q^2;n+1)";
inline const std::string B2 = "sum(n>=0) q^(n^2+n)*poch(-q^2;q^2;n)/poch(q;q^2;n+1)^2";
inline const std::string B_mixed =
    "q*Jm(4)/J(1,2)*(sum(n>=0) q^(-n)*q^(3*n*(n+1)) - q*sum(n>=0) q^n*q^(3*n*(n+1)))";
// Eulerian sides in x shared by several propositions
inline const std::string rln1 = "(1+1/x)*sum(n>=0) q^(n+1)*poch(-q;q;2*n)/(poch(q*x;q^2;n+1)*poch(q/x;q^2;n+1))";
inline const std::string rln2 = "sum(n>=0) (-1)^n*q^(n^2)*poch(q;q^2;n)/(poch(-x;q^2;n+1)*poch(-q^2/x;q^2;n))";
inline const std::string rln4 =
    "(1+1/x)*sum(n>=0) (-1)^n*poch(q;q^2;n)*q^((n+1)^2)/(poch(-x*q;q^2;n+1)*poch(-q/x;q^2;n+1))";
inline const std::string rln5 =
    "sum(n>=0) (-1)^n*q^(2*n^2)*poch(q^2;q^4;n)/(poch(-x;q^4;n+1)*poch(-q^4/x;q^4;n))";
inline const std::string star_bilateral = "1/Jbar(0,1)*sum(n in Z) (1+1/x)*q^(n*(n+1)/2)/((1+x*q^n)*(1+q^n/x))";
}  // namespace forms

inline std::string with(std::string text, const std::string& from, const std::string& to) {
  for (std::size_t p = text.find(from); p != std::string::npos; p = text.find(from, p + to.size()))
    text.replace(p, from.size(), to);
  return text;
}

// ---- the records ------------------------------------------------------------

inline void add_g0(std::vector<IdentityRecord>& out) {
  out.push_back(Builder("theta-def", "theta-def", "G0")
                    .param("x")
                    .sides({"j(x;q)", "pochinf(x;q)*pochinf(q/x;q)*pochinf(q;q)",
                            "sum(n in Z) (-1)^n*q^(n*(n-1)/2)*x^n"})
                    .done());
  const std::vector<std::vector<std::string>> xz = {{"2", "3"},   {"3", "-2"},   {"1/2", "5"},     {"-2", "1/3"},
                                                    {"5", "1/2"}, {"2*q", "3"}, {"1/3", "-2*q^-1"}};
  out.push_back(Builder("mdef-eq", "mdef-eq", "G0")
                    .params({"x", "z"}, xz)
                    .sides({"m(x;q;z)", "1/j(z;q)*sum(r in Z) (-1)^r*q^(r*(r-1)/2)*z^r/(1-q^(r-1)*x*z)"})
                    .done());
  out.push_back(Builder("alt-mdef-eq", "alt-mdef-eq", "G0")
                    .params({"x", "z"}, xz)
                    .sides({"m(x;q;z)", "-z/j(z;q)*sum(r in Z) (-1)^r*q^(r*(r+1)/2)*z^r/(1-q^r*x*z)"})
                    .done());
  out.push_back(
      Builder("m-fnq-z", "m-fnq-z", "G0").params({"x", "z"}, xz).sides({"m(x;q;z)", "m(x;q;q*z)"}).done());
  out.push_back(Builder("m-fnq-flip", "m-fnq-flip", "G0")
                    .params({"x", "z"}, xz)
                    .sides({"m(x;q;z)", "1/x*m(1/x;q;1/z)"})
                    .done());
  out.push_back(Builder("m-fnq-x", "m-fnq-x", "G0")
                    .params({"x", "z"}, xz)
                    .sides({"m(q*x;q;z)", "1 - x*m(x;q;z)"})
                    .done());
  out.push_back(Builder("m-change-z", "m-change-z", "G0")
                    .params({"x", "z0", "z1"}, {{"2", "3", "5"},
                                                {"3", "-2", "1/2"},
                                                {"1/2", "5", "-3"},
                                                {"-2", "1/3", "3"},
                                                {"5", "2", "-1/3"},
                                                {"2*q", "3", "1/5"},
                                                {"1/3", "2*q^-1", "-5"}})
                    .sides({"m(x;q;z1) - m(x;q;z0)",
                            "z0*Jm(1)^3*j(z1/z0;q)*j(x*z0*z1;q)/(j(z0;q)*j(z1;q)*j(x*z0;q)*j(x*z1;q))"})
                    .done());
  out.push_back(Builder("m-fnq-zflip", "m-fnq-zflip", "G0")
                    .params({"x", "z"}, xz)
                    .sides({"m(x;q;z)", "m(x;q;1/(x*z))"})
                    .done());
  out.push_back(Builder("g-def", "g-def", "G0")
                    .param("x")
                    .sides({"g(x;q)", "1/x*(-1 + sum(n>=0) q^(n^2)/(poch(x;q;n+1)*poch(q/x;q;n)))"})
                    .done());
  out.push_back(Builder("newgid", "newgid", "G0")
                    .param("x")
                    .sides({"g(x;q)", "sum(n>=0) q^(n*(n+1))/(poch(x;q;n+1)*poch(q/x;q;n+1))"})
                    .done());
  out.push_back(Builder("g-to-m", "g-to-m", "G0")
                    .param("x")
                    .sides({"g(x;q)", "-1/x*m(q^2/x^3;q^3;x^2) - 1/x^2*m(q/x^3;q^3;x^2)"})
                    .done());
  const std::vector<std::vector<std::string>> xy = {{"2", "3"},  {"3", "5"},   {"1/2", "3"},    {"-2", "5"},
                                                    {"5", "-3"}, {"2*q", "3"}, {"3", "2*q^-1"}};
  for (const auto& [A, B, C] : std::vector<std::array<int, 3>>{{2, 2, 1}, {3, 2, 1}, {3, 3, 2}}) {
    const std::string abc = std::to_string(A) + "," + std::to_string(B) + "," + std::to_string(C);
    out.push_back(Builder("fabc-def." + std::to_string(A) + std::to_string(B) + std::to_string(C), "fabc-def", "G0")
                      .params({"x", "y"}, xy)
                      .sides({"f(" + abc + ";x;y;q)"})
                      .side("sum over sg(r) = sg(s) of sg(r) (-1)^(r+s) x^r y^s q^(" + std::to_string(A) +
                                "*C(r,2) + " + std::to_string(B) + "*r*s + " + std::to_string(C) + "*C(s,2))",
                            [A = A, B = B, C = C](const Bindings& b, Exponent o, Lattice lat) {
                              return hecke_box(A, B, C, b.at("x"), b.at("y"), o, lat);
                            })
                      .done());
  }
  out.push_back(
      Builder("f221", "f221", "G0")
          .params({"x", "y"}, xy)
          .sides({"f(2,2,1;x;y;q)",
                  "j(x;q^2)*m(-q*y/x;q;-1) + j(y;q)*m(q*x/y^2;q^2;-1)"
                  " - 1/(Jbar(0,1)*Jbar(0,2))*(j(q*y;q^2)*j(-q*x/y;q^2)*Jm(2)^3*j(-q^2/y;q^2)/(j(-q*x/y^2;q^2)*j(q*y/x;q^2))"
                  " + q*j(q^2*y;q^2)*j(-x/y;q^2)*Jm(2)^3*j(-q^3/y;q^2)/(j(-q*x/y^2;q^2)*j(q^2*y/x;q^2)))"})
          .done());

  // Bailey machinery. Samples bind a registry index and n.
  IdentityRecord bp = Builder("bp-def", "bp-def", "G0")
                          .lattice(2)
                          .order(60)
                          .samples(pair_plan(15))
                          .side("sum(r=0..n) alpha_r/((aq)_(n+r) (q)_(n-r))",
                                [](const Bindings& b, Exponent o, Lattice lat) {
                                  const auto& p = pair_at(b);
                                  return beta_from_alpha(p, *p.relative, index_of(b, "n"), o, lat);
                                })
                          .side("beta_n",
                                [](const Bindings& b, Exponent o, Lattice lat) {
                                  return beta_closed(pair_at(b), index_of(b, "n"), o, lat);
                                })
                          .done();
  bp.excluded = nullptr;
  out.push_back(bp);

  std::vector<Bindings> conj;
  for (const char* a : {"q", "q^2", "2*q", "q^(1/2)", "-3"})
    for (std::int64_t n = 0; n <= 5; ++n) {
      QSeries v = evaluate(a, 1, Lattice{2});
      conj.push_back({{"a", ParamValue(v.dense().front(), v.valuation())}, {"n", index_value(n)}});
    }
  IdentityRecord cd =
      Builder("bp-conj-def", "bp-conj-def", "G0")
          .lattice(2)
          .samples(conj)
          .side("sum(r>=n) delta_r/((aq)_(r+n) (q)_(r-n))",
                [](const Bindings& b, Exponent o, Lattice lat) {
                  return gamma_from_delta({b.at("a"), 1}, index_of(b, "n"), o, lat);
                })
          .side("(-1)^n q^C(n+1,2) (q)_inf/(q)_n (a)_n/(aq)_inf/(1-a)",
                [](const Bindings& b, Exponent o, Lattice lat) {
                  return gamma_closed({b.at("a"), 1}, index_of(b, "n"), o, lat);
                })
          .done();
  cd.excluded = [](const Bindings& b) { return b.at("a") == pv(1); };
  out.push_back(cd);

  auto per_pair = [](const std::string& id, const std::string& label, const std::string& l, const std::string& r,
                     std::function<std::pair<QSeries, QSeries>(const BaileyPairSpec&, Exponent)> sides) {
    IdentityRecord rec =
        Builder(id, label, "G0")
            .lattice(2)
            .order(40)
            .samples(index_plan("pair", 0, static_cast<std::int64_t>(BaileyRegistry::instance().pairs().size()) - 1))
            .side(l, [sides](const Bindings& b, Exponent o, Lattice lat) { return refine(sides(pair_at(b), o).first, lat); })
            .side(r, [sides](const Bindings& b, Exponent o, Lattice lat) { return refine(sides(pair_at(b), o).second, lat); })
            .done();
    rec.excluded = nullptr;
    return rec;
  };
  out.push_back(per_pair("bp-conj-id", "bp-conj-id", "sum beta_n delta_n", "sum alpha_n gamma_n", pairing_sides));
  out.push_back(per_pair("important-id", "important-id", "sum (-1)^n q^C(n+1,2) (a)_n beta_n",
                         "(q)_inf/(aq)_inf sum (-1)^n q^C(n+1,2) (a)_n/(q)_n alpha_n", lemma_sides));

  IdentityRecord phi11 =
      Builder("important-id.1phi1", "important-id", "G0")
          .params({"a", "c"}, {{"2", "3"}, {"3", "1/2"}, {"1/2", "5*q"}, {"-2", "q"}, {"5", "2*q^2"}})
          .side("sum (-1)^r q^C(r,2) (a)_r (c/a)^r/((c)_r (q)_r)",
                [](const Bindings& b, Exponent o, Lattice lat) {
                  const ParamValue a = b.at("a"), c = b.at("c"), ratio = c / a;
                  auto plan = [&](std::int64_t r) -> std::optional<TermPlan> {
                    TermPlan t;
                    t.coeff = qseries::pow(-ratio.c, r);
                    t.shift = lat.numerator(1) * detail::binom2(r) + r * lat.numerator(ratio.e);
                    t.pochhammer(a.c, lat.numerator(a.e), lat.numerator(1), r, true);
                    t.pochhammer(c.c, lat.numerator(c.e), lat.numerator(1), r, false);
                    t.pochhammer(1, lat.numerator(1), lat.numerator(1), r, false);
                    return t;
                  };
                  return sum_terms(plan, SumDirection::Up, 0, lat.numerator(o), lat);
                })
          .side("(c/a)_inf/(c)_inf",
                [](const Bindings& b, Exponent o, Lattice lat) {
                  const ParamValue a = b.at("a"), c = b.at("c");
                  return truncate(mul(pochhammer_inf(c / a, 1, o, lat), invert(pochhammer_inf(c, 1, o, lat))), o);
                })
          .done();
  out.push_back(phi11);
}

inline void add_g1(std::vector<IdentityRecord>& out) {
  using namespace forms;
  out.push_back(Builder("RLNid1", "RLNid1", "G1")
                    .param("x", {"2", "3", "1/2", "-q^2", "5", "-2", "2*q"}).sides({rln1, "-m(x;q^2;q)"}).done());
  out.push_back(Builder("eq6.3", "eq6.3", "G1")
                    .param("a")
                    .sides({with(rln1, "x", "a"),
                            "1/J(1,2)*(sum(n>=1) (-1)^(n-1)*q^(n^2)/(1-a*q^(2*n-1)) + "
                            "sum(n>=1) (-1)^(n-1)*q^(n^2)/(a-q^(2*n-1)))",
                            "-1/J(1,2)*sum(n in Z) (-1)^n*q^(n^2)/(1-q^(2*n-1)*a)", "-m(a;q^2;q)"})
                    .done());
  out.push_back(Builder("RLNid2", "RLNid2", "G1")
                    .param("x")
                    .sides({rln2, "m(x;q;-1) + J(1,2)^2/(2*j(-x;q))",
                            "m(-q*x^2;q^4;-q^-1) - q^-1*x*m(-q^-1*x^2;q^4;-q)",
                            "1/Jbar(1,4)*sum(n in Z) q^(n*(2*n+1))/(1+q^(2*n)*x)"})
                    .done());
  {
    // The square root of -q/x is bound explicitly: x = -q/w^2.
    std::vector<Bindings> s;
    for (const char* w : {"2", "3", "5", "-3", "1/2", "2*q", "3*q^-1"}) {
      const ParamValue wv = value(w);
      s.push_back({{"w", wv}, {"x", ParamValue(-1, 1) / wv.pow(2)}});
    }
    IdentityRecord r = Builder("RLNid2.sqrt", "RLNid2", "G1")
                           .samples(s)
                           .sides({rln2, "2*m(x;q;-1) - m(x;q;w)"})
                           .done();
    r.params = {"x", "w"};
    r.excluded = [](const Bindings& b) {
      return unit_coefficient({"w"}, b) || !(b.at("x") * b.at("w").pow(2) == ParamValue(-1, 1));
    };
    out.push_back(r);
  }
  out.push_back(Builder("eq6.6", "eq6.6", "G1")
                    .param("a")
                    .sides({"j(-a;q)*" + with(rln2, "x", "a"),
                            "1 + sum(n>=1) (a^n + a^(-n) + 2*(-1)^n)*q^(n*(n+1)/2)/(1+q^n)",
                            "sum(n in Z) a^n*q^(n*(n+1)/2)/(1+q^n) + 1/2*pochinf(q;q)^2/pochinf(-q;q)^2",
                            "sum(n in Z) a^n*q^(n*(n+1)/2)/(1+q^n) + 1/2*J(1,2)^2"})
                    .done());
  out.push_back(Builder("eq6.9", "eq6.9", "G1")
                    .param("a")
                    .sides({with(rln2, "x", "a"),
                            "1/j(-a;q)*sum(n in Z) q^(n*(n+1)/2)*a^n/(1+q^n) + J(1,2)^2/(2*j(-a;q))",
                            "1/a*m(1/a;q;-a) + J(1,2)^2/(2*j(-a;q))", "m(a;q;-1) + J(1,2)^2/(2*j(-a;q))"})
                    .done());
  out.push_back(Builder("sumstar-def", "sumstar-def", "G1").param("x").sides({"star(x)", star_bilateral}).done());
  out.push_back(Builder("RLNid3", "RLNid3", "G1").param("x").sides({star_bilateral, "m(x;q;-1)"}).done());
  out.push_back(Builder("RLNid3.split", "RLNid3", "G1")
                    .param("x")
                    .sides({rln2, "star(x) + 1/2*J(1,2)^2/j(-x;q)"})
                    .done());
  out.push_back(
      Builder("RLNid4", "RLNid4", "G1").param("x").sides({rln4, "m(x;q;-1) - J(1,2)^2/(2*j(-x;q))"}).done());
  out.push_back(Builder("RLNid4.difference", "RLNid4", "G1")
                    .param("x")
                    .sides({rln2 + " - " + rln4, "J(1,2)^2/j(-x;q)"})
                    .done());
  out.push_back(Builder("RLNid5", "RLNid5", "G1")
                    .param("x")
                    .sides({rln5, "m(x;q^2;q) + Jbar(1,4)^2*j(-x*q^2;q^4)/(j(-x;q^4)*j(x*q;q^2))"})
                    .done());
  out.push_back(Builder("RLNid5.sum", "RLNid5", "G1")
                    .param("x")
                    .sides({rln5 + " + " + rln1, "Jbar(1,4)^2*j(-x*q^2;q^4)/(j(-x;q^4)*j(x*q;q^2))"})
                    .done());
  const std::vector<std::vector<std::string>> ab = {{"2", "3"},  {"3", "1/2"}, {"1/2", "5"},    {"-2", "3"},
                                                    {"5", "-2"}, {"2*q", "3"}, {"3", "2*q^-1"}};
  out.push_back(Builder("bilateral-mxqz-prop", "bilateral-mxqz-prop", "G1")
                    .params({"a", "b"}, ab)
                    .sides({"sum(n in Z) a^(-n-1)*b^(-n)*q^(n^2)/(poch(-1/a;q;n+1)*poch(-q/b;q;n))",
                            "sum(n in Z) poch(-a*q;q;n)*poch(-b;q;n+1)*q^(n+1)",
                            "pochinf(-a*q;q)/(b*pochinf(q;q)*pochinf(-q/b;q))*j(-b;q)*m(a/b;q;-b)"})
                    .done());
  out.push_back(Builder("3.4.7-ABII", "3.4.7-ABII", "G1")
                    .params({"a", "b"}, ab)
                    .sides({"sum(n>=0) a^(-n-1)*b^(-n)*q^(n^2)/(poch(-1/a;q;n+1)*poch(-q/b;q;n)) + "
                            "sum(n>=1) poch(-a*q;q;n-1)*poch(-b;q;n)*q^n",
                            "pochinf(-a*q;q)/(pochinf(q;q)*pochinf(-q/b;q))*(sum(n>=0) b^n*q^(n*(n+1)/2)/(1+a*q^n)"
                            " + 1/a*sum(n>=1) b^(-n)*q^(n*(n+1)/2)/(1+q^n/a))"})
                    .done());
  {
    IdentityRecord r = Builder("minus-n", "minus-n", "G1")
                           .params({"a", "k"}, {{"2", "3"},
                                                {"3", "5"},
                                                {"5", "1"},
                                                {"-2", "4"},
                                                {"1/2", "7"},
                                                {"2*q", "3"},
                                                {"q^-1/3", "6"}})
                           .sides({"poch(a;q;-k)", "(-1)^k*a^(-k)*q^(k*(k+1)/2)/poch(q/a;q;k)"})
                           .done();
    r.params = {"a"};
    r.excluded = [](const Bindings& b) { return unit_coefficient({"a"}, b); };
    out.push_back(r);
  }
}

inline void add_g2(std::vector<IdentityRecord>& out) {
  using namespace forms;
  out.push_back(Builder("B-forms", "ex-1", "G2").order(60).sides({B1, B2, "-q^-1*m(1;q^4;q^3)"}).done());
  out.push_back(Builder("B-first", "B-first", "G2")
                    .sides({"sum(n>=0) (-1)^(n+1)*q^(n+1)*poch(-q;q^2;n)/poch(q;q^2;n+1)",
                            "-q*sum(n>=0) (-1)^n*q^(2*n*(n+1))"})
                    .tag("dual")
                    .dual(B1, "sum(n>=0) (-1)^(n+1)*q^(n+1)*poch(-q;q^2;n)/poch(q;q^2;n+1)")
                    .done());
  out.push_back(Builder("B-second", "B-second", "G2")
                    .sides({"sum(n>=0) q^(2*(n+1))*poch(-q^2;q^2;n)/poch(q;q^2;n+1)^2",
                            "-q*sum(n>=0) (-1)^n*q^(2*n*(n+1)) + " + B_mixed})
                    .tag("dual")
                    .dual(B2, "sum(n>=0) q^(2*(n+1))*poch(-q^2;q^2;n)/poch(q;q^2;n+1)^2")
                    .done());
  out.push_back(Builder("B-second.mixed-term", "B-second", "G2")
                    .side("invert_q(" + B2 + ") - invert_q(" + B1 + ")",
                          [](const Bindings&, Exponent o, Lattice lat) {
                            const auto d1 = invert_q(to_descriptor(forms::B1));
                            const auto d2 = invert_q(to_descriptor(forms::B2));
                            return sub(evaluate_descriptor(d2, o, lat), evaluate_descriptor(d1, o, lat));
                          })
                    .sides({B_mixed})
                    .done());
}

inline void add_g3(std::vector<IdentityRecord>& out) {
  out.push_back(Builder("ABII-6.5.1A", "ABII-6.5.1A", "G3")
                    .sides({"sum(n>=0) q^n/poch(-q;q;2*n)",
                            "sum(n>=0) q^(12*n^2+n)*(1-q^(22*n+11)) + q*sum(n>=0) q^(12*n^2+7*n)*(1-q^(10*n+5))"})
                    .done());
  out.push_back(Builder("ABII-6.5.1B", "ABII-6.5.1B", "G3")
                    .sides({"sum(n>=0) q^n/poch(-q;q;2*n+1)",
                            "sum(n>=0) q^(12*n^2+5*n)*(1-q^(14*n+7)) + q^2*sum(n>=0) q^(12*n^2+11*n)*(1-q^(2*n+1))"})
                    .done());
  out.push_back(Builder("Andrews-psi0", "Andrews-psi0", "G3")
                    .sides({"sum(n>=0) q^(2*n^2)/poch(-q;q;2*n)", "2 - 2*q*g(-q;q^8) - J(1,2)*Jbar(3,8)/Jm(2)",
                            "m(-q^11;q^24;q^4) + m(-q^11;q^24;q^22) + q^-1*m(-q^5;q^24;q^4) + q^-1*m(-q^5;q^24;q^10)"})
                    .tag("dual")
                    .dual("sum(n>=0) q^n/poch(-q;q;2*n)", "sum(n>=0) q^(2*n^2)/poch(-q;q;2*n)")
                    .done());
  out.push_back(
      Builder("Andrews-psi1", "Andrews-psi1", "G3")
          .sides({"sum(n>=0) q^(2*n^2+2*n+1)/poch(-q;q;2*n+1)", "2*q^3*g(-q^3;q^8) + q*J(1,2)*Jbar(1,8)/Jm(2)",
                  "m(-q^7;q^24;q^8) + m(-q^7;q^24;q^16) - q^-3*m(-q^-1;q^24;q^8) - q^-3*m(-q^-1;q^24;q^16)"})
          .tag("dual")
          .dual("sum(n>=0) q^n/poch(-q;q;2*n+1)", "sum(n>=0) q^(2*n^2+2*n+1)/poch(-q;q;2*n+1)")
          .done());
}

inline void add_g4(std::vector<IdentityRecord>& out) {
  const std::string chi0a = "sum(n>=0) q^n/poch(q^(n+1);q;n)";
  const std::string chi0b = "sum(n>=0) q^(2*n+1)/poch(q^(n+1);q;n+1)";
  const std::string chi1a = "sum(n>=0) q^n/poch(q^(n+1);q;n+1)";
  const std::string chi1b = "sum(n>=0) q^(2*n+1)*(1+q^n)/poch(q^(n+1);q;n+1)";
  out.push_back(Builder("mock-chi0-5th.g-form", "mock-chi0-5th", "G4")
                    .sides({chi0a, "1 + " + chi0b, "2 + 3*q*g(q;q^5) - Jm(5)^2*J(2,5)/J(1,5)^2"})
                    .done());
  out.push_back(Builder("mock-chi0-5th.m-form", "mock-chi0-5th", "G4")
                    .sides({chi0a, "2 - 2*m(q^7;q^15;q^12) - m(q^7;q^15;q^9) - 2*q^-1*m(q^2;q^15;q^12) - "
                                   "q^-1*m(q^2;q^15;q^9)"})
                    .done());
  out.push_back(Builder("mock-chi1-5th.g-form", "mock-chi1-5th", "G4")
                    .sides({chi1a, "1 + " + chi1b, "3*q*g(q^2;q^5) + Jm(5)^2*J(1,5)/J(2,5)^2"})
                    .done());
  out.push_back(Builder("mock-chi1-5th.m-form", "mock-chi1-5th", "G4")
                    .sides({chi1a, "-2*q^-1*m(q^4;q^15;q^-6) - q^-1*m(q^4;q^15;q^3) - 2*q^-2*m(q;q^15;q^6) - "
                                   "q^-2*m(q;q^15;q^-3)"})
                    .done());
  const std::string pt0 =
      "sum(n>=0) (-1)^n*q^(-7*n)*q^(15*n*(n+1)/2) + q^7*sum(n>=0) (-1)^n*q^(7*n)*q^(15*n*(n+1)/2)"
      " + q*sum(n>=0) (-1)^n*q^(-2*n)*q^(15*n*(n+1)/2) + q^3*sum(n>=0) (-1)^n*q^(2*n)*q^(15*n*(n+1)/2)";
  const std::string pt1 =
      "q*sum(n>=0) (-1)^n*q^(-4*n)*q^(15*n*(n+1)/2) + q^5*sum(n>=0) (-1)^n*q^(4*n)*q^(15*n*(n+1)/2)"
      " + q^2*sum(n>=0) (-1)^n*q^(-n)*q^(15*n*(n+1)/2) + q^3*sum(n>=0) (-1)^n*q^n*q^(15*n*(n+1)/2)";
  const std::string d0a = "sum(n>=0) (-1)^n*q^((3*n^2-n)/2)/poch(q^(n+1);q;n)";
  const std::string d0b = "sum(n>=0) (-1)^(n+1)*q^((3*n^2+n)/2)/poch(q^(n+1);q;n+1)";
  const std::string d1a = "sum(n>=0) (-1)^(n+1)*q^(3*n*(n+1)/2+1)/poch(q^(n+1);q;n+1)";
  const std::string d1b = "sum(n>=0) (-1)^(n+1)*q^((3*n^2-n)/2)*(1+q^n)/poch(q^(n+1);q;n+1)";
  out.push_back(Builder("mock-chi0-5th-dualA", "mock-chi0-5th-dualA", "G4")
                    .sides({d0a, "2 - (" + pt0 + ")"})
                    .tag("dual")
                    .dual(chi0a, d0a)
                    .done());
  out.push_back(Builder("mock-chi0-5th-dualB", "mock-chi0-5th-dualB", "G4")
                    .sides({"1 + " + d0b, "1 - (" + pt0 + ")"})
                    .tag("dual")
                    .dual(chi0b, d0b)
                    .done());
  out.push_back(Builder("mock-chi1-5th-dualA", "mock-chi1-5th-dualA", "G4")
                    .sides({d1a, "-(" + pt1 + ")"})
                    .tag("dual")
                    .dual(chi1a, d1a)
                    .done());
  out.push_back(Builder("mock-chi1-5th-dualB", "mock-chi1-5th-dualB", "G4")
                    .sides({"1 + " + d1b, "-1 - (" + pt1 + ")"})
                    .tag("dual")
                    .tag("numerically verified only in paper")
                    .status("numerically verified only in paper")
                    .dual(chi1b, d1b)
                    .done());
}

inline void add_g5(std::vector<IdentityRecord>& out) {
  struct Seventh {
    std::string id, euler, g, m, source, dual, partial;
  };
  const std::vector<Seventh> rows = {
      {"mock-F0-7th", "sum(n>=0) q^(n^2)/poch(q^(n+1);q;n)", "2 + 2*q*g(q;q^7) - J(3,7)^2/Jm(1)",
       "m(q^10;q^21;q^9) + m(q^10;q^21;q^-9) - q^-1*m(q^4;q^21;q^9) - q^-1*m(q^4;q^21;q^-9)",
       "sum(n>=0) q^(n^2)/poch(q^(n+1);q;n)", "sum(n>=0) (-1)^n*q^(n*(n+1)/2)/poch(q^(n+1);q;n)",
       "sum(n>=0) (-1)^n*q^(-10*n)*q^(21*n*(n+1)/2) + q^10*sum(n>=0) (-1)^n*q^(10*n)*q^(21*n*(n+1)/2)"
       " - q*sum(n>=0) (-1)^n*q^(-4*n)*q^(21*n*(n+1)/2) - q^5*sum(n>=0) (-1)^n*q^(4*n)*q^(21*n*(n+1)/2)"},
      {"mock-F1-7th", "sum(n>=1) q^(n^2)/poch(q^n;q;n)", "2*q^2*g(q^2;q^7) + q*J(1,7)^2/Jm(1)",
       "-m(q^8;q^21;q^3) - m(q^8;q^21;q^-3) - q^-2*m(q;q^21;q^3) - q^-2*m(q;q^21;q^-3)",
       "sum(n>=0) q^((n+1)^2)/poch(q^(n+1);q;n+1)", "sum(n>=0) (-1)^(n+1)*q^(n*(n+1)/2)/poch(q^(n+1);q;n+1)",
       "-sum(n>=0) (-1)^n*q^(-8*n)*q^(21*n*(n+1)/2) - q^8*sum(n>=0) (-1)^n*q^(8*n)*q^(21*n*(n+1)/2)"
       " - q^2*sum(n>=0) (-1)^n*q^(-n)*q^(21*n*(n+1)/2) - q^3*sum(n>=0) (-1)^n*q^n*q^(21*n*(n+1)/2)"},
      {"mock-F2-7th", "sum(n>=0) q^(n*(n+1))/poch(q^(n+1);q;n+1)", "2*q^2*g(q^3;q^7) + J(2,7)^2/Jm(1)",
       "-q^-1*m(q^5;q^21;q^6) - q^-1*m(q^5;q^21;q^-6) - q^-2*m(q^2;q^21;q^6) - q^-2*m(q^2;q^21;q^-6)",
       "sum(n>=0) q^(n*(n+1))/poch(q^(n+1);q;n+1)", "sum(n>=0) (-1)^(n+1)*q^((n+1)*(n+2)/2)/poch(q^(n+1);q;n+1)",
       "-q*sum(n>=0) (-1)^n*q^(-5*n)*q^(21*n*(n+1)/2) - q^6*sum(n>=0) (-1)^n*q^(5*n)*q^(21*n*(n+1)/2)"
       " - q^2*sum(n>=0) (-1)^n*q^(-2*n)*q^(21*n*(n+1)/2) - q^4*sum(n>=0) (-1)^n*q^(2*n)*q^(21*n*(n+1)/2)"},
  };
  for (const auto& r : rows) out.push_back(Builder(r.id, r.id, "G5").sides({r.euler, r.g, r.m}).done());
  for (const auto& r : rows)
    out.push_back(Builder(r.id + "-dual", r.id + "-dual", "G5")
                      .sides({r.dual, r.partial})
                      .tag("dual")
                      .dual(r.source, r.dual)
                      .done());
}

inline void add_g6(std::vector<IdentityRecord>& out) {
  using namespace forms;
  out.push_back(Builder("mock-phi-10th", "mock-phi-10th", "G6")
                    .sides({phi, "-q^-1*m(q;q^10;q) - q^-1*m(q;q^10;q^2)"})
                    .done());
  out.push_back(
      Builder("mock-psi-10th", "mock-psi-10th", "G6").sides({psi, "-m(q^3;q^10;q) - m(q^3;q^10;q^3)"}).done());
  out.push_back(Builder("mock-X-10th", "mock-X-10th", "G6").sides({X, "m(-q^2;q^5;q) + m(-q^2;q^5;q^4)"}).done());
  out.push_back(
      Builder("mock-chi-10th", "mock-chi-10th", "G6").sides({chi, "m(-q;q^5;q^2) + m(-q;q^5;q^3)"}).done());
  out.push_back(Builder("mock-phi-10th-dual", "mock-phi-10th-dual", "G6")
                    .sides({phi_d, "-q*sum(n>=0) (-1)^n*q^(-n)*q^(5*n*(n+1)) - q^2*sum(n>=0) (-1)^n*q^n*q^(5*n*(n+1))"})
                    .tag("dual")
                    .dual(phi, phi_d)
                    .done());
  out.push_back(
      Builder("mock-psi-10th-dual", "mock-psi-10th-dual", "G6")
          .sides({psi_d, "-sum(n>=0) (-1)^n*q^(-3*n)*q^(5*n*(n+1)) - q^3*sum(n>=0) (-1)^n*q^(3*n)*q^(5*n*(n+1))"})
          .tag("dual")
          .dual(psi, psi_d)
          .done());
  out.push_back(Builder("mock-X-10th-dual", "mock-X-10th-dual", "G6")
                    .sides({X_d, "sum(n>=0) q^(-2*n)*q^(5*n*(n+1)/2) - q^2*sum(n>=0) q^(2*n)*q^(5*n*(n+1)/2)"})
                    .tag("dual")
                    .dual(X, X_d)
                    .done());
  out.push_back(Builder("mock-chi-10th-dual", "mock-chi-10th-dual", "G6")
                    .sides({chi_d, "sum(n>=0) q^(-n)*q^(5*n*(n+1)/2) - q*sum(n>=0) q^n*q^(5*n*(n+1)/2)"})
                    .tag("dual")
                    .dual(chi, chi_d)
                    .done());

  // Root-of-unity combinations of F(w^k q^(1/3)) as weighted dissections of F(q^(1/3)):
  //   (F(w^2 t) - F(w t))/(w - w^2)          -> weights (0, -1, 1) by exponent mod 3
  //   (w F(w^2 t) - w^2 F(w t))/(w - w^2)    -> (1, 0, -1)
  //   (F(w t) - F(w^2 t))/(w - w^2)          -> (0, 1, -1)
  //   (w F(w t) - w^2 F(w^2 t))/(w - w^2)    -> (1, -1, 0)
  auto up = [](const std::string& f) { return "rescale(" + f + "; 3)"; };
  auto w = [](const std::string& f, const std::string& weights) { return "wdissect(rescale(" + f + "; 1/3); 3; " + weights + ")"; };
  auto cor = [&](const std::string& id, const std::string& lhs, const std::string& rhs) {
    out.push_back(Builder(id, id, "G6").lattice(3).order(30).sides({lhs, rhs}).tag("corollary").done());
  };
  cor("tenth-dual-I", "q^(-2/3)*" + up(phi_d), w(psi_d, "0, -1, 1"));
  cor("tenth-dual-II", "q^(2/3)*" + up(psi_d), "-" + w(phi_d, "1, 0, -1"));
  cor("tenth-dual-III", up(X_d), w(chi_d, "1, 0, -1"));
  cor("tenth-dual-IV", up(chi_d), "-q^(-2/3)*" + w(X_d, "0, -1, 1"));

  const std::string r13 = "(sum(n in Z) (-1)^n*q^(n^2/3))/(sum(n in Z) (-1)^n*q^(n^2))";
  const std::string t16 = "(sum(n in Z) q^(n*(n+1)/6))/(sum(n in Z) q^(n*(n+1)/2))";
  auto cmp = [&](const std::string& id, const std::string& lhs, const std::string& rhs) {
    out.push_back(Builder(id, "tenth-comparison", "G6").lattice(3).order(30).sides({lhs, rhs}).tag("comparison").done());
  };
  cmp("tenth-comparison-I", "q^(2/3)*" + up(phi) + " - " + w(psi, "0, 1, -1"),
      "-q^(1/3)*" + r13 + "*(sum(n in Z) (-1)^n*q^(5*n^2/2+3*n/2))/pochinf(q;q^2)");
  cmp("tenth-comparison-II", "q^(-2/3)*" + up(psi) + " + " + w(phi, "1, -1, 0"),
      r13 + "*(sum(n in Z) (-1)^n*q^(5*n^2/2+n/2))/pochinf(q;q^2)");
  cmp("tenth-comparison-III", up(X) + " - " + w(chi, "1, -1, 0"),
      t16 + "*(sum(n in Z) (-1)^n*q^(5*n^2+n))/pochinf(-q;q)");
  cmp("tenth-comparison-IV", up(chi) + " + q^(2/3)*" + w(X, "0, 1, -1"),
      "-q*" + t16 + "*(sum(n in Z) (-1)^n*q^(5*n^2+3*n))/pochinf(-q;q)");
}

inline void add_g7(std::vector<IdentityRecord>& out) {
  const std::string a = "a";
  // 6.3.2
  const std::string e632 = "sum(n>=0) q^n/(poch(-a*q;q;n)*poch(-q/a;q;n))";
  const std::string e632d = "sum(n>=0) q^(n^2)/(poch(-a*q;q;n)*poch(-q/a;q;n))";
  const std::string f632 = "(1+1/a)*sum(n>=0) q^(n+1)*poch(-q/a;q;n)*poch(-a*q;q;n)";
  out.push_back(Builder("ABII-6.3.2", "ABII-6.3.2", "G7")
                    .param(a)
                    .sides({e632, "(1+a)*sum(n>=0) a^(3*n)*q^(n*(3*n+1)/2)*(1-a^2*q^(2*n+1))"
                                  " - (1+a)*Jm(1)/j(-a;q)*sum(n>=0) (-1)^n*a^(2*n+1)*q^(n*(n+1)/2)"})
                    .done());
  out.push_back(Builder("6.3.2-dual", "6.3.2-dual", "G7")
                    .param(a)
                    .sides({e632d, "(1+a)*(1-a*g(-a;q))", "(1+a)*(1 - m(-q^2/a^3;q^3;a^2) + 1/a*m(-q/a^3;q^3;a^2))"})
                    .tag("dual")
                    .done());
  out.push_back(Builder("6.3.2-ABII-tail", "6.3.2-ABII-tail", "G7")
                    .param(a)
                    .sides({"sum(n<=-1) q^(n^2)/(poch(-a*q;q;n)*poch(-q/a;q;n))",
                            "sum(n>=1) q^n*poch(-1/a;q;n)*poch(-a;q;n)"})
                    .done());
  out.push_back(Builder("6.3.2-ABII-tail-2", "6.3.2-ABII-tail-2", "G7")
                    .param(a)
                    .sides({"sum(n>=1) q^n*poch(-1/a;q;n)*poch(-a;q;n)", "(1+a)*" + f632})
                    .done());
  out.push_back(Builder("6.3.2-ABII-2ndDualB", "6.3.2-ABII-2ndDualB", "G7")
                    .param(a)
                    .sides({f632, "-1 + a*g(-a;q) + j(-a;q)/Jm(1)*m(a^2;q;-1/a)"})
                    .tag("dual-second-type")
                    .done());
  out.push_back(Builder("6.3.2-ABII-2ndDualA", "6.3.2-ABII-2ndDualA", "G7")
                    .param(a)
                    .sides({f632, "-1 + a*g(-a;q) + j(-a;q)/Jm(1)*m(a^2;q;-1) + 1/2*j(a;q)^3*j(q*a^2;q^2)/(Jm(2)^2*j(a^4;q^2))"})
                    .tag("dual-second-type")
                    .done());
  out.push_back(Builder("6.3.2-ABII-2ndDualB.bilateral", "6.3.2-ABII-2ndDualB", "G7")
                    .param(a)
                    .sides({"1/(1+a)*" + e632d + " + " + f632, "j(-a;q)/Jm(1)*m(a^2;q;-1/a)"})
                    .done());
  out.push_back(Builder("6.3.2-ABII-lovejoy", "6.3.2-ABII-2ndDualB", "G7")
                    .param(a)
                    .sides({"1 + " + f632, "a*q^3*f(3,2,1;q^6;-a*q^3;q)/Jm(1)"})
                    .done());

  // 6.3.4
  const std::string f634 = "sum(n>=0) q^(2*n+1)*poch(-a*q;q^2;n)*poch(-q/a;q^2;n)";
  const std::string e634d = "sum(n>=0) q^(2*n^2+2*n+1)/(poch(-a*q;q^2;n+1)*poch(-q/a;q^2;n+1))";
  out.push_back(Builder("ABII-6.3.4", "ABII-6.3.4", "G7")
                    .param(a)
                    .sides({"sum(n>=0) q^(2*n+1)/(poch(-a*q;q^2;n+1)*poch(-q/a;q^2;n+1))",
                            "sum(n>=0) a^(3*n+1)*q^(3*n^2+2*n)*(1-a*q^(2*n+1))"
                            " - Jm(2)/j(-a*q;q^2)*sum(n>=0) (-1)^n*a^(2*n+1)*q^(n*(n+1))"})
                    .done());
  out.push_back(Builder("ABII-6.3.4-dual", "ABII-6.3.4-dual", "G7")
                    .param(a)
                    .sides({e634d, "q*g(-a*q;q^2)"})
                    .tag("dual")
                    .done());
  out.push_back(Builder("ABII-6.3.4-tail", "ABII-6.3.4-tail", "G7")
                    .param(a)
                    .sides({"sum(n<=-1) q^(2*n^2+2*n+1)/(poch(-a*q;q^2;n+1)*poch(-q/a;q^2;n+1))",
                            "sum(n>=1) q^(2*n-1)*poch(-a*q;q^2;n-1)*poch(-q/a;q^2;n-1)"})
                    .done());
  out.push_back(Builder("ABII-6.3.4-tail-2", "ABII-6.3.4-tail-2", "G7")
                    .param(a)
                    .sides({"sum(n>=1) q^(2*n-1)*poch(-a*q;q^2;n-1)*poch(-q/a;q^2;n-1)", f634})
                    .done());
  out.push_back(Builder("6.3.4-ABII-2ndDualA", "6.3.4-ABII-2ndDualA", "G7")
                    .param(a)
                    .sides({f634, "-q*g(-a*q;q^2) + a*j(-a*q;q^2)/Jm(2)*m(a^2;q^2;-1)"
                                  " - 1/2*a*j(a*q;q^2)^3*j(a^2;q^4)/(Jm(4)^2*j(a^4;q^4))"})
                    .tag("dual-second-type")
                    .done());
  out.push_back(Builder("6.3.4-ABII-2ndDualB", "6.3.4-ABII-2ndDualB", "G7")
                    .param(a)
                    .sides({f634, "-q*g(-a*q;q^2) + a*j(-a*q;q^2)/Jm(2)*m(a^2;q^2;-q/a)"})
                    .tag("dual-second-type")
                    .done());
  out.push_back(Builder("6.3.4-ABII-2ndDualB.bilateral", "6.3.4-ABII-2ndDualB", "G7")
                    .param(a)
                    .sides({"(1+a*q)/a*" + e634d + " + q*(1+1/(a*q))*" + f634,
                            "(1+a*q)*j(-a*q;q^2)/Jm(2)*m(a^2;q^2;-q/a)"})
                    .done());
  out.push_back(Builder("ABII-6.3.4-lovejoy", "6.3.4-ABII-2ndDualB", "G7")
                    .param(a)
                    .sides({f634, "q*f(3,2,1;q^6;-a*q^3;q^2)/Jm(2)"})
                    .done());

  // 6.3.6
  const std::string f636 = "(1+1/a)*sum(n>=0) q^(2*n+1)*poch(-a*q;q^2;n)*poch(-q/a;q^2;n)/poch(q;q^2;n+1)";
  out.push_back(Builder("ABII-6.3.6", "ABII-6.3.6", "G7")
                    .param(a)
                    .sides({"(1+1/a)*sum(n>=0) poch(q;q^2;n)*q^(2*n+1)/(poch(-a*q;q^2;n+1)*poch(-q/a;q^2;n+1))",
                            "sum(n>=0) (-1)^n*a^n*q^(n*(n+1)/2)"
                            " - Jm(1)/j(-a*q;q^2)*sum(n>=0) a^(3*n)*q^(n*(3*n+1))*(1-a^2*q^(4*n+2))"})
                    .done());
  out.push_back(Builder("ABII-6.3.6-dual", "ABII-6.3.6-dual", "G7")
                    .param(a)
                    .sides({with(forms::rln4, "x", "a"), "m(a;q;-1) - J(1,2)^2/(2*j(-a;q))"})
                    .tag("dual")
                    .done());
  out.push_back(Builder("ABII-6.3.6-dualtypeII", "ABII-6.3.6-dualtypeII", "G7")
                    .param(a)
                    .sides({f636, "-m(a;q;-1) + j(-a*q;q^2)/Jm(1)*(1 - a*g(-a;q^2)) - 1/2*J(1,2)^2/j(-a;q)"})
                    .tag("dual-second-type")
                    .tag("numerically verified only in paper")
                    .status("numerically verified only in paper")
                    .done());
  out.push_back(Builder("ABII-6.3.6-dualtypeII.hecke", "ABII-6.3.6-dualtypeII", "G7")
                    .param(a)
                    .order(40)
                    .sides({f636, "1/Jm(1)*(-q^7*f(3,3,2;-q^19;-a^2*q^16;q^4) + q*f(3,3,2;-q^11;-a^2*q^8;q^4)"
                                  " + a*q^4*f(3,3,2;-q^17;-a^2*q^12;q^4) - a*q^14*f(3,3,2;-q^25;-a^2*q^20;q^4))"})
                    .tag("heavy")
                    .done());

  // 6.3.7
  const std::string f637 = "(1+1/a)*sum(n>=0) poch(a*q;q^2;n)*poch(q/a;q^2;n)*q^(2*n+1)/poch(-q;q;2*n+1)";
  out.push_back(Builder("ABII-6.3.7", "ABII-6.3.7", "G7")
                    .param(a)
                    .sides({"(1+1/a)*sum(n>=0) poch(-q;q;2*n)*q^(2*n+1)/(poch(a*q;q^2;n+1)*poch(q/a;q^2;n+1))",
                            "-sum(n>=0) (-a)^n*q^(n*(n+1)) + Jbar(1,4)/j(a*q;q^2)*sum(n>=0) (-a)^n*q^(n*(n+1)/2)"})
                    .done());
  out.push_back(Builder("ABII-6.3.7.dual", "RLNid1", "G7")
                    .param(a)
                    .sides({with(forms::rln1, "x", "a"), "-m(a;q^2;q)"})
                    .tag("dual")
                    .done());
  out.push_back(Builder("ABII-6.3.7-dualtypeII", "ABII-6.3.7-dualtypeII", "G7")
                    .param(a)
                    .sides({f637, "2*m(a;q^2;-1) - j(a*q;q^2)/Jbar(1,4)*m(a;q;-1) - 1/2*Jm(1)^5/Jm(2)^4*j(a*q;q^2)/j(-a;q)",
                            "q*f(2,2,1;a*q^3;-q^2;q)/Jbar(1,4)"})
                    .tag("dual-second-type")
                    .done());
  out.push_back(Builder("ABII-5.4.4", "ABII-5.4.4", "G7")
                    .param(a)
                    .sides({"(1+1/a)*sum(n>=0) poch(a*q;q^2;n)*poch(q/a;q^2;n)*q^n/poch(-q;q;2*n+1)",
                            "sum(n>=0) (-1)^n*(a^n + a^(-n-1))*q^(n*(n+1))"})
                    .done());

  // 6.3.9
  const std::string f639 = "(1+1/a)*sum(n>=0) q^(2*n+2)*poch(-a*q^2;q^2;n)*poch(-q^2/a;q^2;n)/poch(q;q^2;n+1)";
  out.push_back(Builder("ABII-6.3.9", "ABII-6.3.9", "G7")
                    .param(a)
                    .sides({"sum(n>=0) poch(q;q^2;n)*q^(2*n)/(poch(-a*q^2;q^2;n)*poch(-q^2/a;q^2;n))",
                            "(1+a)*sum(n>=0) (-1)^n*a^n*q^(n*(n+1)/2)"
                            " - a*(1+a)*Jm(1)/j(-a;q^2)*sum(n>=0) a^(3*n)*q^(3*n^2+2*n)*(1-a*q^(2*n+1))"})
                    .done());
  out.push_back(Builder("6.3.9-dual-final", "6.3.9-dual-final", "G7")
                    .param(a)
                    .sides({with(forms::rln2, "x", "a"), "m(a;q;-1) + J(1,2)^2/(2*j(-a;q))"})
                    .tag("dual")
                    .done());
  out.push_back(Builder("ABII-6.3.9-dualtypeII", "ABII-6.3.9-dualtypeII", "G7")
                    .param(a)
                    .sides({f639, "-m(a;q;-1) + j(-a;q^2)/Jm(1)*q/a*g(-a*q;q^2) + 1/2*j(a;q)*J(1,2)/j(a^2;q^2)"})
                    .tag("dual-second-type")
                    .tag("numerically verified only in paper")
                    .status("numerically verified only in paper")
                    .done());
  out.push_back(Builder("ABII-6.3.9-dualtypeII.hecke", "ABII-6.3.9-dualtypeII", "G7")
                    .param(a)
                    .order(40)
                    .sides({f639, "1/Jm(1)*(a*q^6*f(3,3,2;-q^19;-a^2*q^14;q^4) - q^5*f(3,3,2;-q^17;-a^2*q^14;q^4)"
                                  " - a*q^11*f(3,3,2;-q^23;-a^2*q^18;q^4) + q^2*f(3,3,2;-q^13;-a^2*q^10;q^4))"})
                    .tag("heavy")
                    .done());

  // 6.3.11
  const std::string f6311 = "(1+1/a)*sum(n>=0) poch(-a*q;q;n)*poch(-q/a;q;n)*q^(n+1)/poch(q;q^2;n+1)";
  out.push_back(Builder("ABII-6.3.11", "ABII-6.3.11", "G7")
                    .param(a)
                    .sides({"sum(n>=0) poch(q;q^2;n)*q^n/(poch(-a*q;q;n)*poch(-q/a;q;n))",
                            "(1+a)*sum(n>=0) (-1)^n*a^n*q^(n*(n+1)/2)"
                            " - a*(1+a)*J(1,2)/j(-a;q)*sum(n>=0) (-1)^n*a^(2*n)*q^(n*(n+1))"})
                    .done());
  out.push_back(Builder("ABII-6.3.11.dual", "RLNid3", "G7")
                    .param(a)
                    .sides({with(forms::star_bilateral, "x", "a"), "m(a;q;-1)"})
                    .tag("dual")
                    .done());
  out.push_back(Builder("ABII-6.3.1-dualtypeII", "ABII-6.3.1-dualtypeII", "G7")
                    .param(a)
                    .sides({f6311,
                            "-m(a;q;-1) + j(-a;q)/J(1,2)*m(a^2;q^2;-1) - a*Jm(4)^3/Jm(2)^3*j(a;q)*j(q*a^2;q^2)/j(a^4;q^4)",
                            "q*f(2,2,1;q^3;-q^2*a;q)/J(1,2)"})
                    .tag("dual-second-type")
                    .done());
}

inline void add_g8(std::vector<IdentityRecord>& out) {
  auto rec = [&](const std::string& id, const std::string& label, bool reciprocal, std::int64_t linear, std::int64_t s,
                 std::int64_t lift, std::int64_t top_shift, const std::string& lt, const std::string& rt) {
    auto wrap = [reciprocal](std::function<QSeries(std::int64_t)> f) -> SideBuilder {
      return [f, reciprocal](const Bindings& b, Exponent, Lattice) {
        QSeries p = f(index_of(b, "N"));
        return reciprocal ? reciprocal_polynomial(p) : p;
      };
    };
    IdentityRecord r = Builder(id, label, "G8")
                           .samples(index_plan("N", 0, 40))
                           .side(reciprocal ? "reciprocal(" + lt + ")" : lt,
                                 wrap([linear](std::int64_t N) { return finite_lhs(N, linear); }))
                           .side(reciprocal ? "reciprocal(" + rt + ")" : rt,
                                 wrap([s, lift, top_shift](std::int64_t N) { return finite_rhs(N + top_shift, s, lift); }))
                           .status("exact polynomial identity")
                           .done();
    r.excluded = nullptr;
    out.push_back(r);
  };
  const std::string l1 = "sum(j>=0) q^(j^2)*gauss(N-j, j)";
  const std::string r1 = "sum(l in Z) (-1)^l*q^(l*(5*l+1)/2)*gauss(N, floor((N-5*l)/2))";
  const std::string l2 = "sum(j>=0) q^(j^2+j)*gauss(N-j, j)";
  const std::string r2 = "sum(l in Z) (-1)^l*q^(l*(5*l-3)/2)*gauss(N+1, floor((N+1-5*l)/2)+1)";
  rec("Andrews-4.1", "Andrews-4.1", false, 0, 1, 0, 0, l1, r1);
  rec("Andrews-4.2", "Andrews-4.2", false, 1, -3, 1, 1, l2, r2);
  rec("Andrews-4.1.reciprocal", "Andrews-4.1", true, 0, 1, 0, 0, l1, r1);
  rec("Andrews-4.2.reciprocal", "Andrews-4.2", true, 1, -3, 1, 1, l2, r2);
}

inline void add_g9(std::vector<IdentityRecord>& out) {
  struct Fe {
    std::string id, label, f, lhs, rhs;
  };
  const std::string f632 = "(1+1/{A})*sum(n>=0) q^(n+1)*poch(-q/{A};q;n)*poch(-{A}*q;q;n)";
  const std::vector<Fe> rows = {
      {"dog", "dog", f632, "F[q*a] + 1 - q*a^2 - q*a^3*F[a]", "(1-a^2*q)*j(-a;q)/(a*Jm(1))"},
      {"cat", "cat", f632, "F[a]", "q^-1*a^-3 - 1/a - q^-1*a^-4*(1-a^2*q)*j(-a;q)/Jm(1) + q^-1*a^-3*F[q*a]"},
      {"ABII-6.3.4-func", "ABII-6.3.4-tail-2", "sum(n>=0) q^(2*n+1)*poch(-{A}*q;q^2;n)*poch(-q/{A};q^2;n)",
       "F[q^2*a] + a*q^2 - a^2*q^3 - a^3*q^3*F[a]", "q*(1-a^2*q^2)*j(-a*q;q^2)/Jm(2)"},
      {"ABII-6.3.6-func", "ABII-6.3.6-dualtypeII",
       "(1+1/{A})*sum(n>=0) q^(2*n+1)*poch(-{A}*q;q^2;n)*poch(-q/{A};q^2;n)/poch(q;q^2;n+1)",
       "F[q^2*a] + 1 - q*a - q*a^2*F[a]", "j(-a*q;q^2)/Jm(1)*(1-a^2*q^2)/(a*q)"},
      {"ABII-6.3.7-func", "ABII-6.3.7-dualtypeII",
       "(1+1/{A})*sum(n>=0) poch({A}*q;q^2;n)*poch(q/{A};q^2;n)*q^(2*n+1)/poch(-q;q;2*n+1)",
       "F[q^2*a] - 2 + a*F[a]", "(1-a*q)/(a*q)*j(a*q;q^2)/Jbar(1,4)"},
      {"ABII-6.3.9-func", "ABII-6.3.9-func",
       "(1+1/{A})*sum(n>=0) q^(2*n+2)*poch(-{A}*q^2;q^2;n)*poch(-q^2/{A};q^2;n)/poch(q;q^2;n+1)",
       "F[q^2*a] + 1 - q*a - q*a^2*F[a]", "(1-a*q)/a*j(-a;q^2)/Jm(1)"},
      {"ABII-6.3.11-func", "ABII-6.3.1-dualtypeII",
       "(1+1/{A})*sum(n>=0) poch(-{A}*q;q;n)*poch(-q/{A};q;n)*q^(n+1)/poch(q;q^2;n+1)", "F[q*a] + 1 + a*F[a]",
       "1/a*j(-a;q)/J(1,2)"},
  };
  for (const auto& r : rows)
    out.push_back(Builder(r.id, r.label, "G9")
                      .param("a")
                      .sides({expand(r.lhs, r.f), expand(r.rhs, r.f)})
                      .tag("functional-equation")
                      .done());
}

}  // namespace corpus_detail

/// The full corpus in manifest order.
inline const std::vector<IdentityRecord>& corpus() {
  static const std::vector<IdentityRecord> records = [] {
    std::vector<IdentityRecord> out;
    corpus_detail::add_g0(out);
    corpus_detail::add_g1(out);
    corpus_detail::add_g2(out);
    corpus_detail::add_g3(out);
    corpus_detail::add_g4(out);
    corpus_detail::add_g5(out);
    corpus_detail::add_g6(out);
    corpus_detail::add_g7(out);
    corpus_detail::add_g8(out);
    corpus_detail::add_g9(out);
    return out;
  }();
  return records;
}

/// Source labels deliberately left without a record.
inline const std::vector<OutOfScope>& out_of_scope() {
  static const std::vector<OutOfScope> notes = {
      {"ABII-5.4.3", "starred sum with no defining bilateral form; its terms do not tend to zero q-adically"},
  };
  return notes;
}

inline const IdentityRecord* find_record(const std::string& id) {
  for (const auto& r : corpus())
    if (r.id == id) return &r;
  return nullptr;
}

/// Records whose group or tag equals the filter, or whose id contains it. Empty filter: everything.
inline std::vector<const IdentityRecord*> list_identities(const std::string& filter = "") {
  std::vector<const IdentityRecord*> out;
  for (const auto& r : corpus()) {
    if (filter.empty() || r.group == filter || r.has_tag(filter) || r.id.find(filter) != std::string::npos)
      out.push_back(&r);
  }
  return out;
}

inline bool is_group(const std::string& g) {
  for (const auto& r : corpus())
    if (r.group == g) return true;
  return false;
}

namespace corpus_detail {

inline QSeries build_side(const Side& s, const Bindings& b, Exponent order, Lattice lat) {
  if (s.build) return s.build(b, order, lat);
  return evaluate(s.text, order, lat, b);
}

/// Exact series compare in full; anything else below the order.
inline Comparison compare(const QSeries& f, const QSeries& g, Exponent order) {
  if (f.is_exact() && g.is_exact()) {
    const Lattice lat = f.lattice();
    std::int64_t top = lat.numerator(order);
    if (!f.is_zero()) top = std::max(top, f.low_num() + static_cast<std::int64_t>(f.dense().size()));
    if (!g.is_zero()) top = std::max(top, g.low_num() + static_cast<std::int64_t>(g.dense().size()));
    return equal_to_order(f, g, lat.exponent(top));
  }
  return equal_to_order(f, g, order);
}

}  // namespace corpus_detail

inline VerificationReport verify_record(const IdentityRecord& r, const VerifyOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.id = r.id;
  rep.group = r.group;
  rep.lattice = r.lattice;
  rep.order = opt.order ? *opt.order : Exponent(r.order);
  const Lattice lat{r.lattice};
  const auto& samples = opt.samples ? *opt.samples : r.samples;
  bool any_fail = false, any_error = false;
  for (const auto& b : samples) {
    SampleOutcome so;
    so.binding = corpus_detail::binding_text(b);
    try {
      if (r.excluded && r.excluded(b)) throw Degenerate("sample excluded by the record's genericity conditions");
      std::vector<QSeries> vals;
      for (const auto& s : r.sides) vals.push_back(corpus_detail::build_side(s, b, rep.order, lat));
      if (opt.perturb) vals.back() = add(vals.back(), make_monomial(1, *opt.perturb, lat));
      so.status = "pass";
      std::optional<Exponent> first;
      for (std::size_t i = 1; i < vals.size(); ++i) {
        auto c = corpus_detail::compare(vals[0], vals[i], rep.order);
        if (!c.pass && (!first || c.mismatch->exponent < *first)) {
          first = c.mismatch->exponent;
          so.status = "fail";
          so.mismatch = c.mismatch;
          so.side = i;
        }
      }
    } catch (const Error& e) {
      so.status = "error";
      so.error = e.what();
    }
    if (so.status == "fail") any_fail = true;
    if (so.status == "error") any_error = true;
    if (so.status != "pass" && !rep.first_failure) rep.first_failure = so;
    rep.samples.push_back(std::move(so));
  }
  rep.status = any_error ? "error" : any_fail ? "fail" : "pass";
  rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline VerificationReport verify_identity(const std::string& id, const VerifyOptions& opt = {}) {
  const IdentityRecord* r = find_record(id);
  if (!r) throw Error("unknown identity id: " + id);
  return verify_record(*r, opt);
}

/// Verifies records concurrently; reports come back in the input order.
inline std::vector<VerificationReport> verify_records(const std::vector<const IdentityRecord*>& records,
                                                      const VerifyOptions& opt = {}, unsigned jobs = 0) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<VerificationReport> out(records.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) out[i] = verify_record(*records[i], opt);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::min<std::size_t>(jobs, records.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

inline std::vector<VerificationReport> verify_group(const std::string& group, const VerifyOptions& opt = {},
                                                    unsigned jobs = 0) {
  std::vector<const IdentityRecord*> sel;
  for (const auto& r : corpus())
    if (r.group == group) sel.push_back(&r);
  if (sel.empty()) throw Error("unknown group: " + group);
  return verify_records(sel, opt, jobs);
}

/// One line per record, then one per out-of-scope label: id | label | group | status.
inline std::string manifest_text() {
  std::string s = "# id | label | group | status\n";
  for (const auto& r : corpus()) s += r.id + " | " + r.label + " | " + r.group + " | " + r.status + "\n";
  for (const auto& n : out_of_scope()) s += "- | " + n.label + " | - | out of scope: " + n.reason + "\n";
  return s;
}

}  // namespace qseries
