#pragma once

// Explicit polynomial formulas: the Step-1 matrix polynomial, the ring
// formulas f^[k], and the composite h^[k], phi_k, j^[k], j^[1], psi, j_2 and
// the final product g, with degree and variable-count audits.

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "zdef/poly.hpp"

namespace zdef {

using VarIds = std::vector<int>;

inline VarIds slice(const VarIds& v, std::size_t from, std::size_t n) {
  if (from + n > v.size()) throw DomainError("slice: block overflow");
  return VarIds(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(from + n));
}

inline SparsePoly V(int id) { return SparsePoly::variable(id); }

/// Coefficients of the two T-pairs defining a ring. Class k in {1,3,5,7};
/// k = 2 stands for Z_(2) = T_{3,3} + T_{2,5}.
template <class S>
struct QuadPairs {
  S a, b, c, d;
};

template <class S>
QuadPairs<S> quad_pairs(int k, const S& p, const S& q) {
  switch (k) {
    case 1: return {S(2) * p * q, q, S(-2) * p * q, q};
    case 2: return {S(3), S(3), S(2), S(5)};
    case 3: return {-p, -p, S(2) * p, -p};
    case 5: return {S(-2) * p, -p, S(2) * p, -p};
    case 7: return {-p, -p, S(2) * p, p};
  }
  throw DomainError("quad_pairs: class must be 1, 2, 3, 5 or 7");
}

/// Sizes of the existential tuples.
namespace formula_size {
inline constexpr std::size_t kF = 15;
inline constexpr std::size_t kH = 33;
inline constexpr std::size_t kJk = 97;
inline constexpr std::size_t kJ1 = 66;
inline constexpr std::size_t kPsi = 294;
inline std::size_t phi(int k) { return k == 1 ? 15 + 3 * kH : 15 + 2 * kH; }
}  // namespace formula_size

/// Named range of variables inside an assembled formula.
struct Block {
  std::string name;
  int first;  // variable ids
  int last;
};

struct SquaresSink {
  std::vector<SparsePoly>& out;
  std::vector<Block>* blocks = nullptr;
  std::string prefix;

  void block(const std::string& name, const VarIds& ids) const {
    if (blocks && !ids.empty()) blocks->push_back({prefix + name, ids.front(), ids.back()});
  }
  SquaresSink sub(const std::string& name) const { return {out, nullptr, prefix + name + "."}; }
};

// x1^2 - a x2^2 - b x3^2 + ab x4^2 - 1
inline SparsePoly norm_block(const SparsePoly& a, const SparsePoly& b, const VarIds& x) {
  return sq(V(x[0])) - a * sq(V(x[1])) - b * sq(V(x[2])) + a * b * sq(V(x[3])) - SparsePoly(1L);
}

/// f(A/D; X) for the ring T_{a,b} + T_{c,d}: A/D = s1 + s2 + s3 + s4 with
/// s1, s2 in S_{a,b} and s3, s4 in S_{c,d}.
inline void f_squares(const SquaresSink& sink, const QuadPairs<SparsePoly>& qp, const SparsePoly& A,
                      const Int& D, const VarIds& x) {
  if (x.size() != formula_size::kF) throw DomainError("f_squares: needs 15 variables");
  const auto& [a, b, c, d] = qp;
  sink.out.push_back(norm_block(a, b, slice(x, 0, 4)));
  sink.out.push_back(norm_block(a, b, slice(x, 4, 4)));
  sink.out.push_back(norm_block(c, d, slice(x, 8, 4)));
  SparsePoly Dp(D);
  SparsePoly ahat = A - SparsePoly(2L) * Dp * (V(x[0]) + V(x[4]) + V(x[8]));
  SparsePoly inner = SparsePoly(4L) * c * sq(V(x[12])) + SparsePoly(4L) * d * sq(V(x[13])) -
                     SparsePoly(4L) * c * d * sq(V(x[14]));
  sink.out.push_back(sq(ahat) - sq(Dp) * inner - SparsePoly(4L) * sq(Dp));
}

/// h^[k](p; u,v,w,X,Y): p in Q^2 * (R_p^[k])^x.
inline void h_squares(const SquaresSink& sink, int k, const SparsePoly& P, const VarIds& ids) {
  if (ids.size() != formula_size::kH) throw DomainError("h_squares: needs 33 variables");
  auto qp = quad_pairs<SparsePoly>(k, P, SparsePoly());
  int u = ids[0], v = ids[1], w = ids[2];
  f_squares(sink, qp, V(u), 1, slice(ids, 3, 15));
  f_squares(sink, qp, V(v), 1, slice(ids, 18, 15));
  sink.out.push_back(V(u) * V(v) - SparsePoly(1L));
  sink.out.push_back(sq(V(w)) * V(u) - P);
}

/// phi_k(p; z): p = k mod 8 2-adically (via Z_(2)) and P^[c](p) empty for the other classes c.
inline void phi_squares(const SquaresSink& sink, int k, const SparsePoly& P, const VarIds& ids) {
  if (ids.size() != formula_size::phi(k)) throw DomainError("phi_squares: wrong tuple size");
  VarIds f2 = slice(ids, 0, 15);
  sink.block("f2", f2);
  f_squares(sink, quad_pairs<SparsePoly>(2, SparsePoly(), SparsePoly()), P - SparsePoly(long(k)), 8, f2);
  std::size_t at = 15;
  for (int c : {3, 5, 7}) {
    if (c == k) continue;
    VarIds h = slice(ids, at, formula_size::kH);
    sink.block("h" + std::to_string(c), h);
    h_squares(sink, c, P, h);
    at += formula_size::kH;
  }
}

/// j^[k](t, p; x): t = y + (t - y) with both parts in R cap p Q^2 R^x, R = R_p^[k].
inline void jk_squares(const SquaresSink& sink, int k, const SparsePoly& T, const SparsePoly& P, const VarIds& ids) {
  if (ids.size() != formula_size::kJk) throw DomainError("jk_squares: needs 97 variables");
  auto qp = quad_pairs<SparsePoly>(k, P, SparsePoly());
  SparsePoly y = V(ids[0]);
  auto part = [&](const SparsePoly& val, std::size_t base_f, std::size_t base_u, const std::string& tag) {
    VarIds xf = slice(ids, base_f, 15);
    int u = ids[base_u], v = ids[base_u + 1], w = ids[base_u + 2];
    VarIds xu = slice(ids, base_u + 3, 15), xv = slice(ids, base_u + 18, 15);
    sink.block(tag + ".f", xf);
    sink.block(tag + ".uvw", {u, w});
    sink.block(tag + ".fu", xu);
    sink.block(tag + ".fv", xv);
    f_squares(sink, qp, val, 1, xf);
    f_squares(sink, qp, V(u), 1, xu);
    f_squares(sink, qp, V(v), 1, xv);
    sink.out.push_back(V(u) * V(v) - SparsePoly(1L));
    sink.out.push_back(val - P * sq(V(w)) * V(u));
  };
  sink.block("y", {ids[0]});
  part(y, 1, 16, "first");
  part(T - y, 49, 64, "second");
}

/// j^[1](t, p, q; x): t in y1 R cap y2 R with y1 in p Q^2 cap R, y2 in q Q^2 cap R, R = R_{p,q}^[1].
inline void j1_squares(const SquaresSink& sink, const SparsePoly& T, const SparsePoly& P, const SparsePoly& Q,
                       const VarIds& ids) {
  if (ids.size() != formula_size::kJ1) throw DomainError("j1_squares: needs 66 variables");
  auto qp = quad_pairs<SparsePoly>(1, P, Q);
  auto half = [&](const SparsePoly& scale, std::size_t base, const std::string& tag) {
    int y = ids[base], w = ids[base + 1], r = ids[base + 2];
    VarIds fy = slice(ids, base + 3, 15), fr = slice(ids, base + 18, 15);
    sink.block(tag + ".ywr", {y, r});
    sink.block(tag + ".fy", fy);
    sink.block(tag + ".fr", fr);
    f_squares(sink, qp, V(y), 1, fy);
    f_squares(sink, qp, V(r), 1, fr);
    sink.out.push_back(V(y) - scale * sq(V(w)));
    sink.out.push_back(T - V(y) * V(r));
  };
  half(P, 0, "p");
  half(Q, 33, "q");
}

/// psi(p, q; x): p in Phi_1, q in Phi_3, p = 2 w^2 (1 + j) with j in J(R_q^[3]).
inline void psi_squares(const SquaresSink& sink, const SparsePoly& P, const SparsePoly& Q, const VarIds& ids) {
  if (ids.size() != formula_size::kPsi) throw DomainError("psi_squares: needs 294 variables");
  VarIds phi1 = slice(ids, 0, 114), phi3 = slice(ids, 114, 81), j3 = slice(ids, 197, 97);
  int j = ids[195], w = ids[196];
  sink.block("phi1", phi1);
  sink.block("phi3", phi3);
  sink.block("jw", {j, w});
  sink.block("j3", j3);
  phi_squares(sink.sub("phi1"), 1, P, phi1);
  phi_squares(sink.sub("phi3"), 3, Q, phi3);
  jk_squares(sink.sub("j3"), 3, V(j), Q, j3);
  sink.out.push_back(P - SparsePoly(2L) * sq(V(w)) * (SparsePoly(1L) + V(j)));
}

/// j_2(t; x): t in 2 Z_(2), i.e. t/2 in T_{3,3} + T_{2,5}.
inline void j2_squares(const SquaresSink& sink, const SparsePoly& T, const VarIds& ids) {
  f_squares(sink, quad_pairs<SparsePoly>(2, SparsePoly(), SparsePoly()), T, 2, ids);
}

// ---------------------------------------------------------------------------
// Named formulas

struct Formula {
  std::string name;
  VarPool pool;
  Expr expr;
  std::vector<std::string> params;  // treated as constants for the stated degree
  std::vector<std::string> free;    // the defined variable(s), e.g. t
  bool params_are_quantified = false;  // g quantifies p and q among its variables
  std::vector<Block> blocks;
  std::optional<int> stated_variables;
  std::optional<int> stated_degree;
};

namespace detail {

inline VarIds fresh(VarPool& pool, const std::string& stem, std::size_t n, std::size_t start = 1) {
  VarIds out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pool.var(stem + std::to_string(start + i)));
  return out;
}

inline Formula sos_formula(std::string name, std::vector<std::string> params, std::vector<std::string> free,
                           std::optional<int> stated_vars, std::optional<int> stated_deg) {
  Formula f;
  f.name = std::move(name);
  for (const auto& n : free) f.pool.var(n);
  for (const auto& n : params) f.pool.var(n);
  f.params = std::move(params);
  f.free = std::move(free);
  f.stated_variables = stated_vars;
  f.stated_degree = stated_deg;
  f.expr.kind = Expr::Kind::Sos;
  return f;
}

}  // namespace detail

inline Formula build_f_step1() {
  Formula f = detail::sos_formula("f_step1", {"a", "b"}, {"t"}, 7, 8);
  SparsePoly t = V(f.pool.var("t")), a = V(f.pool.var("a")), b = V(f.pool.var("b"));
  VarIds x = detail::fresh(f.pool, "x", 4);
  VarIds y = detail::fresh(f.pool, "y", 3, 2);
  SparsePoly sum = sq(V(x[0])) + sq(V(x[1])) + sq(V(x[2])) + sq(V(x[3]));
  SparsePoly last = sq(t - SparsePoly(2L) * V(x[0])) - SparsePoly(4L) * a * sq(V(y[0])) -
                    SparsePoly(4L) * b * sq(V(y[1])) + SparsePoly(4L) * a * b * sq(V(y[2])) - SparsePoly(4L);
  f.expr = Expr::product({Expr::of_poly(a + sum), Expr::of_poly(b + sum), Expr::sos({norm_block(a, b, x), last})});
  f.blocks = {{"x", x.front(), x.back()}, {"y", y.front(), y.back()}};
  return f;
}

/// f^[k] for k in {1,3,5,7}, or k = 2 for f_2 (Z_(2)).
inline Formula build_f_k(int k) {
  std::vector<std::string> params = k == 1 ? std::vector<std::string>{"p", "q"}
                                    : k == 2 ? std::vector<std::string>{}
                                             : std::vector<std::string>{"p"};
  Formula f = detail::sos_formula("f" + std::to_string(k), params, {"t"}, 15, 4);
  SparsePoly t = V(f.pool.var("t"));
  SparsePoly p = k == 2 ? SparsePoly() : V(f.pool.var("p"));
  SparsePoly q = k == 1 ? V(f.pool.var("q")) : SparsePoly();
  VarIds x = detail::fresh(f.pool, "x", 15);
  f_squares({f.expr.squares, &f.blocks, ""}, quad_pairs<SparsePoly>(k, p, q), t, 1, x);
  f.blocks.push_back({"x", x.front(), x.back()});
  return f;
}

inline Formula build_f1() { return build_f_k(1); }

inline Formula build_j2() {
  Formula f = detail::sos_formula("j2", {}, {"t"}, 15, 4);
  VarIds x = detail::fresh(f.pool, "x", 15);
  j2_squares({f.expr.squares, &f.blocks, ""}, V(f.pool.var("t")), x);
  f.blocks.push_back({"x", x.front(), x.back()});
  return f;
}

inline Formula build_h_k(int k) {
  Formula f = detail::sos_formula("h" + std::to_string(k), {"p"}, {}, 33, 6);
  SparsePoly p = V(f.pool.var("p"));
  VarIds ids{f.pool.var("u"), f.pool.var("v"), f.pool.var("w")};
  VarIds x = detail::fresh(f.pool, "x", 15), y = detail::fresh(f.pool, "y", 15);
  ids.insert(ids.end(), x.begin(), x.end());
  ids.insert(ids.end(), y.begin(), y.end());
  h_squares({f.expr.squares, nullptr, ""}, k, p, ids);
  f.blocks = {{"uvw", ids[0], ids[2]}, {"x", x.front(), x.back()}, {"y", y.front(), y.back()}};
  return f;
}

inline Formula build_phi_k(int k) {
  Formula f = detail::sos_formula("phi" + std::to_string(k), {"p"}, {}, k == 1 ? 114 : 81, 6);
  SparsePoly p = V(f.pool.var("p"));
  VarIds z = detail::fresh(f.pool, "z", formula_size::phi(k));
  phi_squares({f.expr.squares, &f.blocks, ""}, k, p, z);
  return f;
}

inline Formula build_j_k(int k) {
  Formula f = detail::sos_formula("j" + std::to_string(k), {"p"}, {"t"}, 97, 6);
  SparsePoly t = V(f.pool.var("t")), p = V(f.pool.var("p"));
  VarIds x = detail::fresh(f.pool, "x", formula_size::kJk);
  jk_squares({f.expr.squares, &f.blocks, ""}, k, t, p, x);
  return f;
}

inline Formula build_j1() {
  Formula f = detail::sos_formula("j1", {"p", "q"}, {"t"}, 121, 6);
  SparsePoly t = V(f.pool.var("t")), p = V(f.pool.var("p")), q = V(f.pool.var("q"));
  VarIds x = detail::fresh(f.pool, "x", formula_size::kJ1);
  j1_squares({f.expr.squares, &f.blocks, ""}, t, p, q, x);
  return f;
}

inline Formula build_psi() {
  Formula f = detail::sos_formula("psi", {"p", "q"}, {}, 294, 6);
  SparsePoly p = V(f.pool.var("p")), q = V(f.pool.var("q"));
  VarIds x = detail::fresh(f.pool, "x", formula_size::kPsi);
  psi_squares({f.expr.squares, &f.blocks, ""}, p, q, x);
  return f;
}

/// Declared and realized placement of one component of g.
struct GBlock {
  std::string name;
  int declared_first, declared_last;  // x-indices as printed
  int realized_first, realized_last;
};

/// Layout of g over x1..x416 (index i is x_i).
inline const std::vector<GBlock>& g_layout() {
  static const std::vector<GBlock> layout{
      {"F1.j2", 2, 15, 2, 16},
      {"Fk.jk", 2, 98, 2, 98},
      {"Fk.phi_k", 101, 181, 101, 181},
      {"F5.j1", 2, 122, 2, 1 + static_cast<int>(formula_size::kJ1)},
      {"F5.psi", 123, 416, 123, 416},
  };
  return layout;
}

inline constexpr int kGVariables = 416;

/// g(t; p, q, x1..x416) as a product of five sums of squares.
inline Formula build_g() {
  Formula f;
  f.name = "g";
  f.free = {"t"};
  f.params = {"p", "q"};
  f.params_are_quantified = true;
  f.stated_variables = 418;
  f.stated_degree = 28;
  SparsePoly t = V(f.pool.var("t")), p = V(f.pool.var("p")), q = V(f.pool.var("q"));
  VarIds x = detail::fresh(f.pool, "x", kGVariables);
  auto X = [&](int i) { return x[static_cast<std::size_t>(i - 1)]; };
  auto range = [&](int a, int b) { return slice(x, static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - a + 1)); };
  SparsePoly x1 = V(X(1));
  SparsePoly unit = t * x1 - SparsePoly(1L);
  const auto& L = g_layout();

  std::vector<Expr> factors;
  {
    Expr e = Expr::sos({});
    j2_squares({e.squares, nullptr, ""}, x1, range(L[0].realized_first, L[0].realized_last));
    e.squares.push_back(unit);
    factors.push_back(std::move(e));
  }
  for (int k : {3, 5, 7}) {
    Expr e = Expr::sos({});
    jk_squares({e.squares, nullptr, ""}, k, x1, p, range(L[1].realized_first, L[1].realized_last));
    e.squares.push_back(unit);
    phi_squares({e.squares, nullptr, ""}, k, p, range(L[2].realized_first, L[2].realized_last));
    factors.push_back(std::move(e));
  }
  {
    Expr e = Expr::sos({});
    j1_squares({e.squares, nullptr, ""}, x1, p, q, range(L[3].realized_first, L[3].realized_last));
    e.squares.push_back(unit);
    psi_squares({e.squares, nullptr, ""}, p, q, range(L[4].realized_first, L[4].realized_last));
    factors.push_back(std::move(e));
  }
  f.expr = Expr::product(std::move(factors));
  for (const auto& b : L) f.blocks.push_back({b.name, X(b.realized_first), X(b.realized_last)});
  return f;
}

inline const std::vector<std::string>& formula_names() {
  static const std::vector<std::string> names{"f_step1", "f1", "f2", "f3", "f5", "f7", "j2", "h3", "h5",
                                              "h7", "phi1", "phi3", "phi5", "phi7", "j3", "j5", "j7",
                                              "j1", "psi", "g"};
  return names;
}

inline Formula build_formula(const std::string& name) {
  if (name == "f_step1") return build_f_step1();
  if (name == "g") return build_g();
  if (name == "psi") return build_psi();
  if (name == "j1") return build_j1();
  if (name == "j2") return build_j2();
  auto digit = [&](std::size_t pos) -> int {
    if (name.size() != pos + 1) return -1;
    char c = name[pos];
    return (c == '1' || c == '2' || c == '3' || c == '5' || c == '7') ? c - '0' : -1;
  };
  if (name.rfind("phi", 0) == 0 && digit(3) > 0 && digit(3) != 2) return build_phi_k(digit(3));
  if (name[0] == 'f' && digit(1) > 0) return build_f_k(digit(1));
  if (name[0] == 'h' && digit(1) >= 3) return build_h_k(digit(1));
  if (name[0] == 'j' && digit(1) >= 3) return build_j_k(digit(1));
  throw DomainError("unknown formula '" + name + "'");
}

// ---------------------------------------------------------------------------
// Audits

struct FormulaAudit {
  std::string name;
  int degree_all = 0;
  int degree_excluding_pq = 0;
  int degree_excluding_params = 0;
  std::vector<std::string> params;
  int variable_count = 0;
  std::optional<int> stated_variables;
  std::optional<int> stated_degree;
  std::vector<int> factor_degrees;  // excluding params, for products
  std::size_t squares = 0;
  bool sum_of_squares = false;
  std::vector<std::pair<std::string, std::string>> blocks;  // name -> "first..last (n)"
  std::vector<std::string> notes;

  bool degree_matches() const { return !stated_degree || *stated_degree == degree_excluding_params; }
  bool variables_match() const { return !stated_variables || *stated_variables == variable_count; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["degree_all_vars"] = degree_all;
    j["degree_excluding_pq"] = degree_excluding_pq;
    j["degree_excluding_params"] = degree_excluding_params;
    j["params"] = params;
    j["variable_count"] = variable_count;
    j["stated_variable_count"] = stated_variables ? nlohmann::ordered_json(*stated_variables) : nullptr;
    j["stated_degree"] = stated_degree ? nlohmann::ordered_json(*stated_degree) : nullptr;
    j["variables_match"] = variables_match();
    j["degree_matches"] = degree_matches();
    if (!factor_degrees.empty()) j["factor_degrees"] = factor_degrees;
    j["squares"] = squares;
    j["sum_of_squares"] = sum_of_squares;
    auto bl = nlohmann::ordered_json::array();
    for (const auto& [n, r] : blocks) bl.push_back({{"name", n}, {"range", r}});
    j["blocks"] = bl;
    j["notes"] = notes;
    return j;
  }

  std::string table() const {
    std::ostringstream os;
    auto row = [&](const std::string& k, const std::string& v) {
      os << "  " << k << std::string(k.size() < 26 ? 26 - k.size() : 1, ' ') << v << "\n";
    };
    auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("-"); };
    os << "formula " << name << "\n";
    row("degree (all vars)", std::to_string(degree_all));
    row("degree (excl. p,q)", std::to_string(degree_excluding_pq));
    std::string ps;
    for (const auto& p : params) ps += (ps.empty() ? "" : ",") + p;
    row("degree (excl. params)", std::to_string(degree_excluding_params) + "  params={" + ps + "}");
    row("stated degree", opt(stated_degree) + (degree_matches() ? "" : "  MISMATCH"));
    row("variables", std::to_string(variable_count));
    row("stated variables", opt(stated_variables) + (variables_match() ? "" : "  DEVIATION"));
    if (!factor_degrees.empty()) {
      std::string fd;
      for (int d : factor_degrees) fd += (fd.empty() ? "" : "+") + std::to_string(d);
      row("factor degrees", fd);
    }
    row("squares", std::to_string(squares));
    row("sum of squares", sum_of_squares ? "yes" : "no");
    for (const auto& [n, r] : blocks) row("block " + n, r);
    for (const auto& n : notes) os << "  note: " << n << "\n";
    return os.str();
  }
};

inline FormulaAudit audit(const Formula& f) {
  FormulaAudit a;
  a.name = f.name;
  a.params = f.params;
  std::set<int> pq, params, fixed;
  for (const char* n : {"p", "q"})
    if (auto id = f.pool.find(n)) pq.insert(*id);
  for (const auto& n : f.params)
    if (auto id = f.pool.find(n)) params.insert(*id);
  for (const auto& n : f.free)
    if (auto id = f.pool.find(n)) fixed.insert(*id);
  a.degree_all = f.expr.degree();
  a.degree_excluding_pq = f.expr.degree(pq);
  a.degree_excluding_params = f.expr.degree(params);
  if (f.expr.kind == Expr::Kind::Product)
    for (const auto& fac : f.expr.factors) a.factor_degrees.push_back(fac.degree(params));
  auto used = f.expr.variables();
  for (int v : used)
    if (!fixed.count(v) && (f.params_are_quantified || !params.count(v))) ++a.variable_count;
  a.stated_variables = f.stated_variables;
  a.stated_degree = f.stated_degree;
  a.squares = f.expr.square_count();
  a.sum_of_squares = f.expr.is_sos();
  for (const auto& b : f.blocks)
    a.blocks.emplace_back(b.name, f.pool.name(b.first) + ".." + f.pool.name(b.last) + " (" +
                                      std::to_string(b.last - b.first + 1) + ")");

  if (f.name == "g") {
    for (const auto& b : g_layout()) {
      int declared = b.declared_last - b.declared_first + 1, realized = b.realized_last - b.realized_first + 1;
      if (declared != realized)
        a.notes.push_back(b.name + ": printed block x" + std::to_string(b.declared_first) + "..x" +
                          std::to_string(b.declared_last) + " (" + std::to_string(declared) + "), realized x" +
                          std::to_string(b.realized_first) + "..x" + std::to_string(b.realized_last) + " (" +
                          std::to_string(realized) + ")");
    }
    std::string unused;
    for (int i = 1; i <= kGVariables; ++i)
      if (!used.count(*f.pool.find("x" + std::to_string(i)))) unused += (unused.empty() ? "x" : ", x") + std::to_string(i);
    a.notes.push_back("unused x-slots: " + (unused.empty() ? std::string("none") : unused));
    a.notes.push_back("reconciliation: stated 418 = x1..x416 + p,q; realized " + std::to_string(a.variable_count) +
                      " = " + std::to_string(a.variable_count - 2) + " used x-slots + p,q");
  } else if (f.name == "j1") {
    a.notes.push_back("realized as t in y1 R cap y2 R with y1 in p Q^2 cap R, y2 in q Q^2 cap R");
  } else if (f.name == "psi") {
    a.notes.push_back("114 (phi1) + 81 (phi3) + 99 where 99 = j, w and the 97 variables of j3");
  } else if (f.name == "f_step1") {
    a.notes.push_back("a, b are the universally quantified pair; x1..x4, y2..y4 are the 7 existential variables");
  }
  return a;
}

// ---------------------------------------------------------------------------
// Serialization

/// Canonical text: one square or factor per line, polynomials in term order.
inline std::string expr_text(const Expr& e, const VarPool& pool, const std::string& indent = "") {
  switch (e.kind) {
    case Expr::Kind::Poly: return indent + e.poly.str(pool) + "\n";
    case Expr::Kind::Sos: {
      std::string out = indent + "sos[" + std::to_string(e.squares.size()) + "]\n";
      for (const auto& s : e.squares) out += indent + "  (" + s.str(pool) + ")^2\n";
      return out;
    }
    case Expr::Kind::Product: {
      std::string out = indent + "product[" + std::to_string(e.factors.size()) + "]\n";
      for (const auto& f : e.factors) out += expr_text(f, pool, indent + "  ");
      return out;
    }
  }
  return {};
}

inline nlohmann::ordered_json expr_json(const Expr& e, const VarPool& pool) {
  nlohmann::ordered_json j;
  switch (e.kind) {
    case Expr::Kind::Poly:
      j["kind"] = "poly";
      j["terms"] = e.poly.to_json(pool);
      break;
    case Expr::Kind::Sos: {
      j["kind"] = "sos";
      auto arr = nlohmann::ordered_json::array();
      for (const auto& s : e.squares) arr.push_back(s.to_json(pool));
      j["squares"] = arr;
      break;
    }
    case Expr::Kind::Product: {
      j["kind"] = "product";
      auto arr = nlohmann::ordered_json::array();
      for (const auto& f : e.factors) arr.push_back(expr_json(f, pool));
      j["factors"] = arr;
      break;
    }
  }
  return j;
}

inline std::string formula_text(const Formula& f) {
  std::string head = f.name + "(";
  std::string sep;
  for (const auto& n : f.free) head += std::exchange(sep, ", ") + n;
  for (const auto& n : f.params) head += std::exchange(sep, ", ") + n;
  return head + ")\n" + expr_text(f.expr, f.pool);
}

}  // namespace zdef
