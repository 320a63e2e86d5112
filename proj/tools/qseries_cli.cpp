// qseries: expand expressions, run the identity corpus, inspect Bailey pairs and q -> 1/q duals.

#include <CLI11.hpp>
#include <json.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qseries/bailey.hpp"
#include "qseries/corpus.hpp"
#include "qseries/descriptor.hpp"
#include "qseries/eval.hpp"

namespace {

using namespace qseries;
using nlohmann::ordered_json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

Exponent parse_exponent(const std::string& text) { return Exponent::from_rational(parse_rational(text)); }

int run_expand(const std::string& text, const std::string& order, std::int64_t lattice) {
  try {
    QSeries s = evaluate(text, parse_exponent(order), Lattice{lattice});
    std::cout << to_string(s) << "\n";
    return kPass;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
}

ordered_json mismatch_json(const SampleOutcome& s) {
  if (!s.mismatch) return nullptr;
  return {{"binding", s.binding},
          {"side", s.side},
          {"exponent", s.mismatch->exponent.str()},
          {"lhs", s.mismatch->lhs.get_str()},
          {"rhs", s.mismatch->rhs.get_str()}};
}

ordered_json report_json(const VerificationReport& r) {
  ordered_json samples = ordered_json::array();
  for (const auto& s : r.samples) {
    ordered_json j = {{"binding", s.binding}, {"status", s.status}};
    if (s.mismatch) j["first_mismatch"] = mismatch_json(s);
    if (!s.error.empty()) j["error"] = s.error;
    samples.push_back(std::move(j));
  }
  ordered_json out = {{"id", r.id},           {"group", r.group},     {"status", r.status},
                      {"order", r.order.str()}, {"lattice", r.lattice}, {"samples", samples}};
  out["first_mismatch"] = r.first_failure ? mismatch_json(*r.first_failure) : ordered_json(nullptr);
  if (r.first_failure && !r.first_failure->error.empty()) out["error"] = r.first_failure->error;
  out["millis"] = static_cast<std::int64_t>(r.millis);
  return out;
}

void print_text(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) {
    std::cout << std::left << std::setw(6) << (r.pass() ? "PASS" : r.status == "fail" ? "FAIL" : "ERROR")
              << std::setw(34) << r.id << std::setw(4) << r.group << " order " << std::setw(4) << r.order.str()
              << " D=" << r.lattice << "  samples " << r.samples.size() << "  " << static_cast<std::int64_t>(r.millis)
              << " ms\n";
    if (const auto& f = r.first_failure) {
      std::cout << "      at [" << f->binding << "]";
      if (f->mismatch)
        std::cout << " side " << f->side << ": first mismatch at q^" << f->mismatch->exponent.str() << ": "
                  << f->mismatch->lhs.get_str() << " vs " << f->mismatch->rhs.get_str();
      if (!f->error.empty()) std::cout << " " << f->error;
      std::cout << "\n";
    }
  }
}

int run_verify(const std::string& id, const std::string& group, bool all, const std::string& order,
               const std::string& format, const std::string& perturb, unsigned jobs) {
  std::vector<const IdentityRecord*> sel;
  if (!id.empty()) {
    const IdentityRecord* r = find_record(id);
    if (!r) {
      std::cerr << "error: unknown identity id: " << id << "\n";
      return kUsage;
    }
    sel.push_back(r);
  } else if (!group.empty()) {
    if (!is_group(group)) {
      std::cerr << "error: unknown group: " << group << "\n";
      return kUsage;
    }
    for (const auto& r : corpus())
      if (r.group == group) sel.push_back(&r);
  } else if (all) {
    for (const auto& r : corpus()) sel.push_back(&r);
  } else {
    std::cerr << "error: verify needs --id, --group or --all\n";
    return kUsage;
  }

  VerifyOptions opt;
  try {
    if (!order.empty()) opt.order = parse_exponent(order);
    if (!perturb.empty()) opt.perturb = parse_exponent(perturb);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  const auto reports = verify_records(sel, opt, jobs);

  std::size_t pass = 0, fail = 0, error = 0;
  for (const auto& r : reports) (r.pass() ? pass : r.status == "fail" ? fail : error)++;
  if (format == "json") {
    ordered_json doc;
    doc["reports"] = ordered_json::array();
    for (const auto& r : reports) doc["reports"].push_back(report_json(r));
    doc["summary"] = {{"total", reports.size()}, {"pass", pass}, {"fail", fail}, {"error", error}};
    std::cout << doc.dump(2) << "\n";
  } else {
    print_text(reports);
    std::cout << pass << "/" << reports.size() << " passed";
    if (fail) std::cout << ", " << fail << " failed";
    if (error) std::cout << ", " << error << " errors";
    std::cout << "\n";
  }
  return pass == reports.size() ? kPass : kFail;
}

int run_dual(const std::string& text) {
  DescriptorSum d;
  try {
    d = to_descriptor(text);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::cout << "dual: " << to_string(invert_q(d)) << "\n";
  bool theta = !d.terms.empty();
  for (const auto& t : d.terms)
    for (const auto& piece : split_unit_factors(t))
      theta = theta && piece.is_partial_theta() && piece.range == IndexRange::From;
  if (theta) {
    try {
      const auto cands = heuristic_candidates(d);
      std::cout << "candidates:";
      for (std::size_t i = 0; i < cands.size(); ++i) {
        const std::string c = to_string(cands[i]);
        std::cout << (i == 0 ? " " : (c.front() == '-' ? " " : " + ")) << c;
      }
      std::cout << "\n";
    } catch (const ShapeError& e) {
      std::cout << "candidates: none (" << e.what() << ")\n";
    }
  }
  return kPass;
}

int bailey_one(const BaileyPairSpec& p, bool verbose) {
  const Lattice lat{2};
  bool ok = p.relative.has_value();
  std::string detail;
  if (ok) {
    std::int64_t bad = -1;
    auto c = check_pair(p, *p.relative, 15, 60, lat, &bad);
    if (!c.pass) {
      ok = false;
      detail = "defining relation fails at n = " + std::to_string(bad) + ", q^" + c.mismatch->exponent.str();
    } else {
      auto [l, r] = lemma_sides(p, 40);
      auto s = equal_to_order(refine(l, lat), refine(r, lat), 40);
      if (!s.pass) {
        ok = false;
        detail = "transformation sides differ at q^" + s.mismatch->exponent.str();
      }
    }
  } else {
    detail = "relative parameters not uniquely determined";
  }
  std::cout << std::left << std::setw(6) << (ok ? "PASS" : "FAIL") << std::setw(12) << p.name
            << (p.relative ? p.relative->str() : std::string("(a, base) = ?")) << "\n";
  if (verbose) {
    std::cout << "      source: " << p.source << "\n      alpha_n: " << p.alpha_text << "\n      beta_n: " << p.beta_text
              << "\n";
  }
  if (!detail.empty()) std::cout << "      " << detail << "\n";
  return ok ? kPass : kFail;
}

int run_bailey(bool check_all, const std::string& name) {
  const auto& reg = BaileyRegistry::instance();
  if (!name.empty()) {
    const BaileyPairSpec* p = reg.find(name);
    if (!p) {
      std::cerr << "error: unknown Bailey pair: " << name << "\n";
      return kUsage;
    }
    return bailey_one(*p, true);
  }
  int rc = kPass;
  std::size_t pass = 0;
  for (const auto& p : reg.pairs()) {
    if (bailey_one(p, !check_all) == kPass) ++pass;
    else rc = kFail;
  }
  std::cout << pass << "/" << reg.pairs().size() << " pairs pass\n";
  return rc;
}

int run_list(const std::string& filter, bool manifest) {
  if (manifest) {
    std::cout << manifest_text();
    return kPass;
  }
  for (const auto* r : list_identities(filter)) {
    std::cout << std::left << std::setw(34) << r->id << std::setw(4) << r->group << " " << r->label;
    for (const auto& t : r->tags) std::cout << " [" << t << "]";
    std::cout << "\n";
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact truncated q-series: expansion, identity verification, Bailey pairs, q -> 1/q duals"};
  app.require_subcommand(1);

  std::string expr, order = "20";
  std::int64_t lattice = 1;
  auto* expand = app.add_subcommand("expand", "print the series of an expression");
  expand->add_option("expr", expr, "expression")->required();
  expand->add_option("--order,-o", order, "truncation order (a rational exponent)");
  expand->add_option("--lattice,-D", lattice, "exponent lattice denominator")->check(CLI::PositiveNumber);

  std::string id, group, vorder, format = "text", perturb;
  bool all = false;
  unsigned jobs = 0;
  auto* verify = app.add_subcommand("verify", "verify corpus identities");
  verify->add_option("--id", id, "record id");
  verify->add_option("--group", group, "group tag G0..G9");
  verify->add_flag("--all", all, "every record");
  verify->add_option("--order", vorder, "override each record's order");
  verify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--perturb", perturb, "add q^K to the last side of every record");
  verify->add_option("--jobs,-j", jobs, "worker threads (0: hardware)");

  std::string dual_text;
  auto* dual = app.add_subcommand("dual", "apply q -> 1/q to a sum and print heuristic candidates");
  dual->add_option("descriptor", dual_text, "sum in the expression grammar")->required();

  bool check_all = false;
  std::string pair;
  auto* bailey = app.add_subcommand("bailey", "validate registered Bailey pairs");
  bailey->add_flag("--check-all", check_all, "check every pair");
  bailey->add_option("--pair", pair, "a single pair by name");

  std::string filter;
  bool manifest = false;
  auto* list = app.add_subcommand("list", "list corpus records");
  list->add_option("filter", filter, "group, tag or id substring");
  list->add_flag("--manifest", manifest, "print the manifest file contents");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*expand) return run_expand(expr, order, lattice);
    if (*verify) return run_verify(id, group, all, vorder, format, perturb, jobs);
    if (*dual) return run_dual(dual_text);
    if (*bailey) return run_bailey(check_all, pair);
    if (*list) return run_list(filter, manifest);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
