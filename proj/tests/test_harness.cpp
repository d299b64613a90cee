#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zdef/harness.hpp"

using namespace zdef;

namespace {

/// -a x2^2 - b x3^2 + ab x4^2 reduced into Z/8 when 2-integral.
std::optional<long> witness_residue(const fixtures::WitnessRow& r) {
  Rat v = -Rat(r.a) * r.x2 * r.x2 - Rat(r.b) * r.x3 * r.x3 + Rat(r.a * r.b) * r.x4 * r.x4;
  if (v != 0 && oracle::valuation(v, 2) < 0) return std::nullopt;
  // v = n/d with d odd: v = n * d^{-1} mod 8, and d^{-1} = d mod 8 for odd d.
  return oracle::mod(Int(v.get_num() * v.get_den()), 8);
}

}  // namespace

TEST(Corpus, ParsesRowsAndComments) {
  std::istringstream in("# header\n1/2\n  3 -5/7  # pair\n\n-4\n");
  Corpus c = parse_corpus(in, "mem");
  ASSERT_EQ(c.rows.size(), 3u);
  EXPECT_EQ(c.rows[0], (std::vector<Rat>{Rat(1, 2)}));
  EXPECT_EQ(c.rows[1], (std::vector<Rat>{Rat(3), Rat(-5, 7)}));
  EXPECT_EQ(c.rows[2], (std::vector<Rat>{Rat(-4)}));
  EXPECT_EQ(c.source, "mem");
}

TEST(Corpus, ErrorsCarryLineNumbers) {
  std::istringstream bad("1\n2\nx/3\n");
  try {
    parse_corpus(bad, "f.txt");
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("f.txt:3:", 0), 0u) << e.what();
  }
  std::istringstream wide("1 2 3\n");
  EXPECT_THROW(parse_corpus(wide), DomainError);
  std::istringstream zero("1/0\n");
  EXPECT_THROW(parse_corpus(zero), DomainError);
  EXPECT_THROW(load_corpus("/nonexistent/corpus.txt"), DomainError);
}

TEST(Report, CountsAndJson) {
  VerifyReport r{"demo"};
  r.check(true, "a");
  r.check(false, "b", "1", "2");
  r.check(true, "c");
  EXPECT_EQ(r.total, 3u);
  EXPECT_EQ(r.passed + r.failures.size(), r.total);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.summary(), "demo: 2/3 pass");
  EXPECT_EQ(r.to_json().dump(),
            R"({"fixture":"demo","total":3,"passed":2,"failures":[{"input":"b","expected":"1","got":"2"}]})");
  VerifyReport all{"all"};
  all.absorb(r);
  EXPECT_EQ(all.failures.front().input, "demo: b");
}

TEST(Report, BatteriesAreDeterministic) {
  for (const char* name : {"upsets", "obs2", "appendix-norms", "lemma6", "prop8"}) {
    auto a = run_battery(name, 9), b = run_battery(name, 9);
    EXPECT_EQ(a.to_json().dump(), b.to_json().dump()) << name;
    EXPECT_EQ(a.passed + a.failures.size(), a.total) << name;
  }
  EXPECT_THROW(run_battery("nope"), DomainError);
}

TEST(Fixtures, UpTableMatchesRootSearch) {
  for (const auto& [p, elems] : fixtures::up_table()) {
    std::vector<long> e(elems.begin(), elems.end());
    EXPECT_EQ(e, oracle::up_set(p)) << p;
  }
}

TEST(Fixtures, DyadicWitnessSpotRows) {
  // Independent residue arithmetic on three rows: each is -3 = 5 mod 8.
  const auto& rows = fixtures::appendix_witness_rows();
  ASSERT_EQ(rows.size(), 16u);
  for (auto [a, b] : std::vector<std::pair<long, long>>{{2, 3}, {5, 10}, {15, 15}}) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.a == a && r.b == b; });
    ASSERT_NE(it, rows.end()) << a << "," << b;
    EXPECT_EQ(witness_residue(*it), 5) << a << "," << b;
  }
}

TEST(Fixtures, WitnessRowSixFifteenMissesTheClass) {
  // The fixture row (6,15) with x = (1,1,0) gives -21 = 3 mod 8, not 5.
  // A corrected witness (1,1,1/3) gives -11 = 5 mod 8.
  const auto& rows = fixtures::appendix_witness_rows();
  auto it = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.a == 6 && r.b == 15; });
  ASSERT_NE(it, rows.end());
  EXPECT_EQ(witness_residue(*it), 3);
  fixtures::WitnessRow fixed = *it;
  fixed.x4 = Rat(1, 3);
  EXPECT_EQ(witness_residue(fixed), 5);
}

TEST(Fixtures, EveryListedPairIsDyadicallyRamified) {
  for (const auto& r : fixtures::appendix_witness_rows())
    EXPECT_EQ(oracle::hilbert(r.a, r.b, 2), -1) << r.a << "," << r.b;
}

TEST(Batteries, FastOnesPass) {
  EXPECT_TRUE(verify_upsets().ok());
  EXPECT_TRUE(verify_up_sums(11, 200).ok());
  EXPECT_TRUE(verify_obs2(500, 1).ok());
  EXPECT_TRUE(verify_appendix_norms().ok());
  EXPECT_TRUE(verify_lemma6(200, 2).ok());
  EXPECT_TRUE(verify_prop8(50, 3).ok());
  EXPECT_TRUE(verify_prop12(50, 100, 4).ok());
  EXPECT_TRUE(verify_z2_identity(1000, 5).ok());
  EXPECT_TRUE(verify_integer_test(1000, 6).ok());
  EXPECT_TRUE(verify_just1(20, 50, 7).ok());
}

TEST(Batteries, WitnessTableReportsTheOneBadRow) {
  VerifyReport r = verify_appendix_witness();
  EXPECT_EQ(r.total, 16u);
  EXPECT_EQ(r.passed, 15u);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_NE(r.failures[0].input.find("(6, 15)"), std::string::npos) << r.failures[0].input;
}
