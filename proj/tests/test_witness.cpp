#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zdef/harness.hpp"
#include "zdef/witness.hpp"

using namespace zdef;

namespace {

Rat R(const char* s) { return parse_rat(s); }

Rat value_of(const Formula& f, const ZeroWitness& w, const std::string& n) {
  return w.values[static_cast<std::size_t>(*f.pool.find(n))];
}

void expect_verified_zero(const Formula& f, const std::optional<ZeroWitness>& w, const std::string& label) {
  ASSERT_TRUE(w) << label;
  ZeroCheck c = check_zero(f, *w);
  EXPECT_TRUE(c.ok) << label << ": " << c.nonzero.size() << " nonzero squares";
  EXPECT_GT(c.squares_checked, 0u);
  EXPECT_EQ(f.expr.eval(w->values), 0) << label;
}

}  // namespace

TEST(Ternary, PointsSolveTheEquation) {
  const std::vector<std::array<long, 4>> cases{{1, 1, 1, 3}, {-3, -3, 9, -2}, {2, 5, -10, 7}, {1, 1, 1, 6}, {3, 3, 3, 1}};
  for (const auto& [A, B, C, E] : cases) {
    auto r = ternary_point(A, B, C, E, 20);
    ASSERT_TRUE(r) << A << " " << B << " " << C << " " << E;
    EXPECT_EQ(A * (*r)[0] * (*r)[0] + B * (*r)[1] * (*r)[1] + C * (*r)[2] * (*r)[2], Rat(E));
  }
  // x^2 + y^2 + z^2 = 7 has no rational solution (7 = -1 mod 8).
  EXPECT_FALSE(ternary_point(1, 1, 1, 7, 15));
}

TEST(SPoint, UnitQuaternionWithGivenTrace) {
  for (const auto& [a, b] : std::vector<std::pair<long, long>>{{3, 3}, {-1, -1}, {2, 5}, {-3, -3}}) {
    QuaternionPair qp{Rat(a), Rat(b)};
    for (const char* s : {"0", "1", "2", "-2", "1/2", "7/5"}) {
      if (!qp.s_member(R(s))) continue;
      auto pt = s_point(a, b, R(s), 30);
      ASSERT_TRUE(pt) << s << " (" << a << "," << b << ")";
      const auto& x = *pt;
      EXPECT_EQ(2 * x[0], R(s));
      EXPECT_EQ(x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + a * b * x[3] * x[3], 1);
    }
  }
}

TEST(Search, FStep1) {
  Formula f = build_formula("f_step1");
  expect_verified_zero(f, zero_witness_search(f, {{"t", 1}, {"a", 3}, {"b", 3}}), "t=1 (3,3)");
  expect_verified_zero(f, zero_witness_search(f, {{"t", R("7/5")}, {"a", 3}, {"b", 3}}), "t=7/5 (3,3)");
  auto neg = zero_witness_search(f, {{"t", R("1/3")}, {"a", -7}, {"b", 3}});
  expect_verified_zero(f, neg, "a = -7");
  EXPECT_EQ(neg->factor, 0u);
  EXPECT_FALSE(zero_witness_search(f, {{"t", R("1/3")}, {"a", 3}, {"b", 3}}));
}

TEST(Search, F3AtSeven) {
  Formula f = build_formula("f3");
  expect_verified_zero(f, zero_witness_search(f, {{"t", 7}, {"p", 3}}, 30), "f3(7; 3)");
  EXPECT_FALSE(zero_witness_search(f, {{"t", R("1/3")}, {"p", 3}}, 30));
}

TEST(Search, FkSoundOnRandomT) {
  // Any witness found must certify t in R_p^[k].
  std::mt19937_64 rng(81);
  for (int k : {3, 5, 7}) {
    Formula f = build_formula("f" + std::to_string(k));
    Rat p(k == 3 ? 3 : k == 5 ? 5 : 7);
    SemilocalRing r = ring_R(k, p);
    int found = 0;
    for (int i = 0; i < 15; ++i) {
      Rat t = random_rat(rng, 12);
      auto w = zero_witness_search(f, {{"t", t}, {"p", p}}, 20);
      if (!w) continue;
      ++found;
      EXPECT_TRUE(r.member(t)) << t;
      EXPECT_TRUE(check_zero(f, *w).ok);
    }
    EXPECT_GT(found, 0) << k;
  }
}

TEST(Search, HControls) {
  Formula f = build_formula("h3");
  expect_verified_zero(f, zero_witness_search(f, {{"p", 5}}), "h3(5)");
  EXPECT_FALSE(zero_witness_search(f, {{"p", 3}}));
}

TEST(Search, PhiJAndPsi) {
  Formula phi3 = build_formula("phi3");
  expect_verified_zero(phi3, zero_witness_search(phi3, {{"p", 3}}), "phi3(3)");
  Formula phi1 = build_formula("phi1");
  expect_verified_zero(phi1, zero_witness_search(phi1, {{"p", 17}}), "phi1(17)");
  Formula j3 = build_formula("j3");
  expect_verified_zero(j3, zero_witness_search(j3, {{"t", 3}, {"p", 3}}), "j3(3; 3)");
  Formula j2 = build_formula("j2");
  expect_verified_zero(j2, zero_witness_search(j2, {{"t", 2}}), "j2(2)");
  Formula psi = build_formula("psi");
  expect_verified_zero(psi, zero_witness_search(psi, {{"p", 17}, {"q", 3}}), "psi(17, 3)");
}

TEST(Search, GAtOneHalf) {
  Formula g = build_formula("g");
  auto w = zero_witness_search(g, {{"t", R("1/2")}});
  expect_verified_zero(g, w, "g(1/2)");
  EXPECT_EQ(w->factor, 0u);
  EXPECT_EQ(value_of(g, *w, "x1"), 2);
  ASSERT_TRUE(w->certificate);
  EXPECT_EQ(w->certificate->variant, "z2");
}

TEST(Search, GFollowsTheCertificate) {
  Formula g = build_formula("g");
  for (const auto& t : theorem1_non_integers()) {
    auto w = zero_witness_search(g, {{"t", t}});
    expect_verified_zero(g, w, "g(" + t.get_str() + ")");
    const Certificate& c = *w->certificate;
    EXPECT_TRUE(verify(c));
    std::size_t expected = c.variant == "z2" ? 0 : c.variant == "psi" ? 4 : (*c.k == 3 ? 1 : *c.k == 5 ? 2 : 3);
    EXPECT_EQ(*w->factor, expected) << t;
    EXPECT_EQ(value_of(g, *w, "x1"), 1 / t);
  }
  EXPECT_FALSE(zero_witness_search(g, {{"t", 3}}));
}

TEST(Sampling, NoZerosAtIntegers) {
  Formula g = build_formula("g");
  for (long t = -3; t <= 3; ++t) {
    auto r = sample_zeros(g, {{"t", Rat(t)}}, 100, 82 + static_cast<std::uint64_t>(t + 3));
    EXPECT_EQ(r.samples, 100u);
    EXPECT_EQ(r.zeros, 0u) << t;
  }
}

TEST(Sampling, Deterministic) {
  Formula f = build_formula("f3");
  auto a = sample_zeros(f, {{"t", 1}, {"p", 3}}, 50, 7), b = sample_zeros(f, {{"t", 1}, {"p", 3}}, 50, 7);
  EXPECT_EQ(a.zeros, b.zeros);
  EXPECT_EQ(a.first_zero, b.first_zero);
}
