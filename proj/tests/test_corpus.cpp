#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "qseries/corpus.hpp"

using namespace qseries;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

// the report minus its timing
std::string fingerprint(const VerificationReport& r) {
  std::ostringstream os;
  os << r.id << '|' << r.status << '|' << r.order.str() << '|' << r.lattice;
  for (const auto& s : r.samples) {
    os << '|' << s.binding << ':' << s.status << ':' << s.side << ':' << s.error;
    if (s.mismatch) os << ':' << s.mismatch->exponent.str() << ':' << s.mismatch->lhs << ':' << s.mismatch->rhs;
  }
  return os.str();
}

}  // namespace

TEST(Corpus, IdsAreUniqueAndGroupsKnown) {
  std::set<std::string> ids;
  for (const auto& r : corpus()) {
    EXPECT_TRUE(ids.insert(r.id).second) << r.id;
    EXPECT_TRUE(r.group.size() == 2 && r.group[0] == 'G' && r.group[1] >= '0' && r.group[1] <= '9') << r.id;
    EXPECT_GE(r.sides.size(), 2u) << r.id;
  }
  for (int g = 0; g <= 9; ++g) EXPECT_TRUE(is_group("G" + std::to_string(g)));
  EXPECT_FALSE(is_group("G10"));
}

TEST(Corpus, EverySamplePassesItsExclusionPredicate) {
  for (const auto& r : corpus()) {
    ASSERT_FALSE(r.samples.empty()) << r.id;
    for (const auto& b : r.samples) {
      if (r.excluded) EXPECT_FALSE(r.excluded(b)) << r.id << " at " << corpus_detail::binding_text(b);
      for (const auto& p : r.params) EXPECT_TRUE(b.count(p)) << r.id << " lacks " << p;
    }
  }
}

TEST(Corpus, ParametricPlansAreRichEnough) {
  for (const auto& r : corpus()) {
    std::vector<std::string> ps;
    for (const auto& p : r.params)
      if (!corpus_detail::is_index_name(p)) ps.push_back(p);
    if (ps.empty()) continue;
    std::set<std::string> coeffs;
    int on_lattice = 0;
    for (const auto& b : r.samples) {
      bool shifted = false;
      for (const auto& p : ps) {
        coeffs.insert(b.at(p).c.get_str());
        shifted = shifted || b.at(p).e != 0;
      }
      on_lattice += shifted;
    }
    EXPECT_GE(coeffs.size(), 5u) << r.id;
    EXPECT_GE(on_lattice, 2) << r.id;
  }
}

TEST(Corpus, ManifestFileIsCurrent) {
  EXPECT_EQ(slurp(QSERIES_DATA "/corpus_manifest.txt"), manifest_text());
}

TEST(Corpus, EverySourceLabelIsCovered) {
  std::set<std::string> have;
  for (const auto& r : corpus()) have.insert(r.label);
  for (const auto& o : out_of_scope()) have.insert(o.label);
  const auto labels = lines(QSERIES_DATA "/paper_labels.txt");
  EXPECT_GE(labels.size(), 80u);
  for (const auto& l : labels) EXPECT_TRUE(have.count(l)) << "no record for " << l;
}

TEST(Corpus, ListFilters) {
  EXPECT_EQ(list_identities("G5").size(), 6u);
  EXPECT_EQ(list_identities("").size(), corpus().size());
  const auto second = list_identities("dual-second-type");
  EXPECT_GE(second.size(), 4u);
  for (const auto* r : second) EXPECT_TRUE(r->has_tag("dual-second-type")) << r->id;
  EXPECT_EQ(list_identities("RLNid2").front()->id.rfind("RLNid2", 0), 0u);
  EXPECT_TRUE(list_identities("no-such-thing").empty());
}

TEST(Corpus, DualRecordsCoverTheTenMockThetaDuals) {
  for (const std::string id : {"mock-chi0-5th-dualA", "mock-chi0-5th-dualB", "mock-chi1-5th-dualA",
                               "mock-chi1-5th-dualB", "mock-F0-7th-dual", "mock-F1-7th-dual", "mock-F2-7th-dual",
                               "mock-phi-10th-dual", "mock-psi-10th-dual", "mock-X-10th-dual", "mock-chi-10th-dual"}) {
    const auto* r = find_record(id);
    ASSERT_NE(r, nullptr) << id;
    EXPECT_FALSE(r->dual_source.empty()) << id;
  }
}

TEST(Verify, NamedExamples) {
  auto r = verify_identity("RLNid1", {.order = Exponent(40)});
  EXPECT_TRUE(r.pass());
  EXPECT_GE(r.samples.size(), 5u);
  EXPECT_TRUE(verify_identity("mock-chi0-5th.m-form", {.order = Exponent(40)}).pass());
  EXPECT_THROW(verify_identity("nonsense"), Error);
}

TEST(Verify, PerturbationFailsAtTheRightExponent) {
  for (int k : {0, 5, 17}) {
    auto r = verify_identity("RLNid1", {.order = Exponent(30), .perturb = Exponent(k)});
    ASSERT_FALSE(r.pass());
    ASSERT_TRUE(r.first_failure && r.first_failure->mismatch);
    EXPECT_EQ(r.first_failure->mismatch->exponent, Exponent(k));
    EXPECT_EQ(r.status, "fail");
  }
}

TEST(Verify, ChiZeroEulerianFrozen) {
  const auto want = testing_qs::rationals({"1", "1", "1", "2", "1", "3", "2", "3", "3", "5", "3", "6", "5", "7", "7", "9"});
  auto s = evaluate("sum(n>=0) q^n/poch(q^(n+1);q;n)", 16);
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(s.coeff_num(static_cast<std::int64_t>(i)), want[i]);
}

class GroupVerification : public ::testing::TestWithParam<int> {};

TEST_P(GroupVerification, EveryRecordPasses) {
  const std::string g = "G" + std::to_string(GetParam());
  for (const auto& rep : verify_group(g)) {
    std::string why;
    if (const auto& f = rep.first_failure) {
      why = f->binding + " " + f->error;
      if (f->mismatch) why += " at q^" + f->mismatch->exponent.str();
    }
    EXPECT_TRUE(rep.pass()) << rep.id << ": " << why;
  }
}

INSTANTIATE_TEST_SUITE_P(Groups, GroupVerification, ::testing::Range(0, 10),
                         [](const auto& info) { return "G" + std::to_string(info.param); });

TEST(VerifyProperty, DeterministicAcrossRunsAndThreads) {
  std::vector<const IdentityRecord*> sel;
  for (const auto* r : list_identities("G4")) sel.push_back(r);
  for (const auto* r : list_identities("G6")) sel.push_back(r);
  VerifyOptions opt;
  opt.order = Exponent(25);
  auto a = verify_records(sel, opt, 1);
  auto b = verify_records(sel, opt, 4);
  opt.perturb = Exponent(3);
  auto c = verify_records(sel, opt, 3);
  auto d = verify_records(sel, opt, 1);
  ASSERT_EQ(a.size(), sel.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, sel[i]->id);
    EXPECT_EQ(fingerprint(a[i]), fingerprint(b[i]));
    EXPECT_EQ(fingerprint(c[i]), fingerprint(d[i]));
  }
}
