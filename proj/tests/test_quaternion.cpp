#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zdef/quaternion.hpp"

using namespace zdef;

namespace {

Rat R(const char* s) { return parse_rat(s); }

Rat random_rat(std::mt19937_64& rng, long h) {
  std::uniform_int_distribution<long> n(-h, h), d(1, h);
  long a = 0;
  while (a == 0) a = n(rng);
  return make_rat(a, d(rng));
}

PlaceSet places(std::vector<long> ps, bool inf = false) {
  PlaceSet s;
  for (long p : ps) s.primes.emplace_back(p);
  s.has_infinity = inf;
  return s;
}

}  // namespace

TEST(Delta, Examples) {
  EXPECT_EQ(delta(3, 3), places({2, 3}));
  EXPECT_EQ(delta(2, 5), places({2, 5}));
  EXPECT_EQ(delta(1, 7), places({}));
  EXPECT_EQ(delta(-1, -1), places({2}, true));
  EXPECT_EQ(delta(3, 3).str(), "{2, 3}");
  EXPECT_THROW(delta(0, 3), DomainError);
}

TEST(Delta, TwoPathsAgree) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    Rat a = random_rat(rng, 300), b = random_rat(rng, 300);
    EXPECT_EQ(delta_by_criterion(a, b), delta_by_hilbert(a, b)) << a << "," << b;
  }
}

TEST(Delta, EvenSizeAndSymmetries) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 1000; ++i) {
    Rat a = random_rat(rng, 300), b = random_rat(rng, 300), w = random_rat(rng, 50);
    PlaceSet d = delta(a, b);
    EXPECT_EQ(d.size() % 2, 0u);
    EXPECT_EQ(delta(b, a), d);
    EXPECT_EQ(delta(a, Rat(-a * b)), d);
    EXPECT_EQ(delta(Rat(a * w * w), b), d);
  }
}

TEST(Delta, DyadicTableIsExactlyTheNonSplitPairs) {
  std::set<std::pair<int, int>> table(kRamified2Table.begin(), kRamified2Table.end());
  EXPECT_EQ(table.size(), 16u);
  for (int a : kSquareClassReps2)
    for (int b : kSquareClassReps2) {
      bool listed = table.count({std::min(a, b), std::max(a, b)}) > 0;
      EXPECT_EQ(listed, oracle::hilbert(a, b, 2) == -1) << a << "," << b;
    }
}

TEST(SMember, Examples) {
  EXPECT_TRUE(s_member(2, 3, 7));
  EXPECT_TRUE(s_member(2, -1, -1));
  EXPECT_FALSE(s_member(4, -1, -1));
  EXPECT_TRUE(s_member(1, -1, -1));
}

TEST(TMember, Examples) {
  EXPECT_FALSE(t_member(R("9/2"), 3, 3));
  EXPECT_TRUE(t_member(R("7/5"), 3, 3));
  EXPECT_FALSE(t_member(5, -1, -1));
  EXPECT_TRUE(t_member(4, -1, -1));
}

TEST(TMember, MatchesLocalizationDescription) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 300; ++i) {
    Rat a = random_rat(rng, 40), b = random_rat(rng, 40);
    PlaceSet d = delta(a, b);
    std::vector<long> ps;
    for (const auto& p : d.primes) ps.push_back(p.get_si());
    for (int j = 0; j < 20; ++j) {
      Rat t = random_rat(rng, 30);
      bool expected = oracle::in_localization(t, ps) && (!d.has_infinity || (t >= -4 && t <= 4));
      EXPECT_EQ(t_member(t, a, b), expected) << t << " in T(" << a << "," << b << ")";
    }
  }
}

TEST(TDecompose, Examples) {
  EXPECT_EQ(t_decompose(4, -1, -1), (std::pair<Rat, Rat>{2, 2}));
  EXPECT_EQ(t_decompose(0, -1, -1), (std::pair<Rat, Rat>{0, 0}));
  EXPECT_THROW(t_decompose(R("1/3"), 3, 3), DomainError);
}

TEST(TDecompose, SummandsAreTraces) {
  const std::vector<std::pair<long, long>> pairs{{3, 3}, {2, 5}, {-1, -1}, {-3, -3}, {6, -3}, {-17, -17},
                                                 {34, -17}, {7, 7}, {-2, -5}, {11, -11}};
  std::mt19937_64 rng(34);
  for (const auto& [a, b] : pairs) {
    QuaternionPair qp{Rat(a), Rat(b)};
    int tried = 0;
    for (int i = 0; i < 2000 && tried < 150; ++i) {
      Rat t = random_rat(rng, 40);
      if (!qp.t_member(t)) continue;
      ++tried;
      auto [s1, s2] = qp.t_decompose(t);
      EXPECT_EQ(s1 + s2, t);
      EXPECT_TRUE(qp.s_member(s1)) << s1 << " for t=" << t << " (" << a << "," << b << ")";
      EXPECT_TRUE(qp.s_member(s2)) << s2 << " for t=" << t << " (" << a << "," << b << ")";
    }
    EXPECT_GT(tried, 0);
  }
}

TEST(TDecompose, EdgeOfArchimedeanInterval) {
  QuaternionPair qp{Rat(-1), Rat(-1)};
  for (const char* t : {"4", "-4", "19/5", "-399/101", "11/3"}) {
    auto [s1, s2] = qp.t_decompose(R(t));
    EXPECT_TRUE(qp.s_member(s1) && qp.s_member(s2)) << t;
  }
}
