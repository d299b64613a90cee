#include <random>

#include <gtest/gtest.h>

#include "zdef/formulas.hpp"

using namespace zdef;

namespace {

/// Assignment vector from named values; everything else is zero.
std::vector<Rat> assign(const Formula& f, const std::map<std::string, Rat>& named) {
  std::vector<Rat> v(f.pool.size());
  for (const auto& [n, x] : named) {
    auto id = f.pool.find(n);
    if (!id) throw std::runtime_error("no variable " + n);
    v[static_cast<std::size_t>(*id)] = x;
  }
  return v;
}

SparsePoly var(const Formula& f, const std::string& n) { return SparsePoly::variable(*f.pool.find(n)); }

}  // namespace

TEST(Audit, StatedCounts) {
  struct Row {
    const char* name;
    int vars, degree;
  };
  for (const Row& r : {Row{"f_step1", 7, 8}, Row{"f3", 15, 4}, Row{"f5", 15, 4}, Row{"f7", 15, 4}, Row{"f1", 15, 4},
                       Row{"j2", 15, 4}, Row{"h3", 33, 6}, Row{"h5", 33, 6}, Row{"h7", 33, 6}, Row{"phi3", 81, 6},
                       Row{"phi5", 81, 6}, Row{"phi7", 81, 6}, Row{"phi1", 114, 6}, Row{"j3", 97, 6},
                       Row{"j5", 97, 6}, Row{"j7", 97, 6}, Row{"psi", 294, 6}}) {
    FormulaAudit a = audit(build_formula(r.name));
    EXPECT_EQ(a.variable_count, r.vars) << r.name;
    EXPECT_EQ(a.degree_excluding_params, r.degree) << r.name;
    EXPECT_TRUE(a.variables_match()) << r.name;
    EXPECT_TRUE(a.degree_matches()) << r.name;
  }
}

TEST(Audit, KnownDeviationsAreFlagged) {
  FormulaAudit j1 = audit(build_formula("j1"));
  EXPECT_EQ(j1.stated_variables, 121);
  EXPECT_EQ(j1.variable_count, 66);
  EXPECT_FALSE(j1.variables_match());
  EXPECT_NE(j1.table().find("DEVIATION"), std::string::npos);

  FormulaAudit g = audit(build_formula("g"));
  EXPECT_EQ(g.stated_variables, 418);
  EXPECT_EQ(g.variable_count, 416);
  EXPECT_FALSE(g.variables_match());
  bool unused_noted = false;
  for (const auto& n : g.notes) unused_noted = unused_noted || n == "unused x-slots: x99, x100";
  EXPECT_TRUE(unused_noted);
}

TEST(Audit, GDegrees) {
  FormulaAudit a = audit(build_formula("g"));
  EXPECT_EQ(a.degree_excluding_pq, 28);
  EXPECT_EQ(a.degree_excluding_params, 28);
  EXPECT_EQ(a.factor_degrees, (std::vector<int>{4, 6, 6, 6, 6}));
  EXPECT_TRUE(a.sum_of_squares);
  EXPECT_TRUE(a.degree_matches());
}

TEST(Audit, ByteStable) {
  for (const auto& name : formula_names()) {
    std::string first = audit(build_formula(name)).to_json().dump(), table = audit(build_formula(name)).table();
    EXPECT_EQ(audit(build_formula(name)).to_json().dump(), first) << name;
    EXPECT_EQ(audit(build_formula(name)).table(), table) << name;
    if (name != "g") {
      EXPECT_EQ(formula_text(build_formula(name)), formula_text(build_formula(name))) << name;
    }
  }
}

TEST(Audit, BlocksLieInsideTheUsedVariables) {
  for (const auto& name : formula_names()) {
    Formula f = build_formula(name);
    auto used = f.expr.variables();
    for (const auto& b : f.blocks)
      for (int id = b.first; id <= b.last; ++id) {
        if (name == "g" && (f.pool.name(id) == "x99" || f.pool.name(id) == "x100")) continue;
        EXPECT_TRUE(used.count(id)) << name << " block " << b.name << " " << f.pool.name(id);
      }
  }
}

TEST(Audit, DegreeAdditiveOverGFactors) {
  Formula g = build_formula("g");
  ASSERT_EQ(g.expr.kind, Expr::Kind::Product);
  std::set<int> pq{*g.pool.find("p"), *g.pool.find("q")};
  int sum_all = 0, sum_pq = 0;
  for (const auto& fac : g.expr.factors) {
    sum_all += fac.degree();
    sum_pq += fac.degree(pq);
  }
  EXPECT_EQ(g.expr.degree(), sum_all);
  EXPECT_EQ(g.expr.degree(pq), sum_pq);
}

TEST(FStep1, Evaluation) {
  Formula f = build_formula("f_step1");
  EXPECT_EQ(f.expr.eval(assign(f, {{"t", 0}, {"a", 1}, {"b", 1}})), 17);
  // a = -1 with x1 = 1 kills the first factor
  EXPECT_EQ(f.expr.eval(assign(f, {{"t", 2}, {"a", -1}, {"b", 1}, {"x1", 1}})), 0);
  EXPECT_EQ(audit(f).degree_all, 12);
}

TEST(FStep1, ZeroAtTraceWitness) {
  // x = (1,0,0,0) is a unit quaternion; with t = 4 the trace square is (4-2)^2 - 4 = 0.
  Formula f = build_formula("f_step1");
  for (long a : {3L, -1L, 5L})
    for (long b : {3L, -1L, 7L}) {
      EXPECT_EQ(f.expr.eval(assign(f, {{"t", 4}, {"a", a}, {"b", b}, {"x1", 1}})), 0);
      if (a != -1 && b != -1) {  // a = -1 or b = -1 zeroes a linear factor for any t
        EXPECT_NE(f.expr.eval(assign(f, {{"t", 3}, {"a", a}, {"b", b}, {"x1", 1}})), 0);
      }
    }
}

TEST(F3, DisplayedBlock) {
  Formula f = build_formula("f3");
  ASSERT_EQ(f.expr.kind, Expr::Kind::Sos);
  ASSERT_EQ(f.expr.squares.size(), 4u);
  SparsePoly p = var(f, "p"), one(1L), two(2L);
  auto sqv = [&](const char* n) { return var(f, n) * var(f, n); };
  SparsePoly expected = sqv("x9") - two * p * sqv("x10") + p * sqv("x11") - two * p * p * sqv("x12") - one;
  EXPECT_EQ(f.expr.squares[2], expected);
}

TEST(Expr, SumOfSquaresStructure) {
  for (const auto& name : formula_names()) {
    Formula f = build_formula(name);
    if (name == "f_step1") {
      EXPECT_FALSE(f.expr.is_sos());
      continue;
    }
    EXPECT_TRUE(f.expr.is_sos()) << name;
  }
}

TEST(Expr, SosIsNonnegativeAndZeroOnlyWhenAllSquaresVanish) {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<long> n(-9, 9), d(1, 5);
  for (const char* name : {"f3", "h5", "j2", "phi3"}) {
    Formula f = build_formula(name);
    for (int i = 0; i < 50; ++i) {
      std::vector<Rat> v(f.pool.size());
      for (auto& x : v) x = make_rat(n(rng), d(rng));
      Rat total = f.expr.eval(v);
      EXPECT_GE(total, 0) << name;
      bool all_zero = true;
      for (const auto& s : f.expr.squares) all_zero = all_zero && s.eval(v) == 0;
      EXPECT_EQ(total == 0, all_zero);
      EXPECT_EQ(f.expr.eval_is_zero(v), total == 0);
    }
  }
}

TEST(G, NonzeroAtIntegerPoint) {
  Formula g = build_formula("g");
  EXPECT_NE(g.expr.eval(assign(g, {{"t", 2}, {"p", 1}, {"q", 1}})), 0);
}

TEST(G, FactorsAreSumsOfSquares) {
  Formula g = build_formula("g");
  ASSERT_EQ(g.expr.factors.size(), 5u);
  for (const auto& fac : g.expr.factors) EXPECT_EQ(fac.kind, Expr::Kind::Sos);
  EXPECT_EQ(g.expr.square_count(), 272u);
}

TEST(Text, RendersEveryFormula) {
  for (const auto& name : formula_names()) {
    Formula f = build_formula(name);
    std::string text = formula_text(f);
    EXPECT_EQ(text.rfind(name + "(", 0), 0u) << name;
    auto j = expr_json(f.expr, f.pool);
    EXPECT_FALSE(j.empty());
  }
  EXPECT_THROW(build_formula("phi2"), DomainError);
  EXPECT_THROW(build_formula("h1"), DomainError);
}
