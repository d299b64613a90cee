#pragma once

// Sparse multivariate polynomials with exact integer coefficients, and
// unexpanded sum-of-squares / product expressions over them.

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "zdef/exactnum.hpp"

namespace zdef {

/// Named variables, indexed in order of first use.
class VarPool {
 public:
  int var(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    return id;
  }
  std::optional<int> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

/// Exponent vector as sorted (variable, exponent) pairs with positive exponents.
using Monomial = std::vector<std::pair<int, int>>;

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) out.push_back(a[i++]);
    else if (i == a.size() || b[j].first < a[i].first) out.push_back(b[j++]);
    else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

class SparsePoly {
 public:
  SparsePoly() = default;
  SparsePoly(long c) : SparsePoly(Int(c)) {}  // NOLINT: integer constants read naturally
  SparsePoly(const Int& c) {                   // NOLINT
    if (c != 0) terms_.emplace(Monomial{}, c);
  }

  static SparsePoly variable(int id) {
    SparsePoly p;
    p.terms_.emplace(Monomial{{id, 1}}, Int(1));
    return p;
  }

  const std::map<Monomial, Int>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  SparsePoly& operator+=(const SparsePoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  SparsePoly& operator-=(const SparsePoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, Int(-c));
    return *this;
  }
  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator-(const SparsePoly& a) { return SparsePoly() - a; }
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    SparsePoly out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(monomial_mul(ma, mb), Int(ca * cb));
    return out;
  }

  SparsePoly pow(unsigned e) const {
    SparsePoly out(1L);
    for (unsigned i = 0; i < e; ++i) out = out * *this;
    return out;
  }

  /// Total degree over variables outside `excluded`; -1 for the zero polynomial.
  int degree(const std::set<int>& excluded = {}) const {
    int best = -1;
    for (const auto& [m, c] : terms_) {
      int d = 0;
      for (const auto& [v, e] : m)
        if (!excluded.count(v)) d += e;
      best = std::max(best, d);
    }
    return best;
  }

  std::set<int> variables() const {
    std::set<int> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m) out.insert(v);
    return out;
  }

  /// Exact value; variables missing from `values` read as 0.
  Rat eval(const std::vector<Rat>& values) const {
    Rat sum = 0;
    for (const auto& [m, c] : terms_) {
      Rat term(c);
      for (const auto& [v, e] : m) {
        const Rat& x = static_cast<std::size_t>(v) < values.size() ? values[static_cast<std::size_t>(v)] : kZero();
        if (x == 0) {
          term = 0;
          break;
        }
        term *= pow_rat(x, e);
      }
      sum += term;
    }
    return sum;
  }

  std::string str(const VarPool& pool) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) out += " + ";
      first = false;
      out += c.get_str();
      for (const auto& [v, e] : m) {
        out += " * " + pool.name(v);
        if (e != 1) out += "^" + std::to_string(e);
      }
    }
    return out;
  }

  nlohmann::ordered_json to_json(const VarPool& pool) const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [m, c] : terms_) {
      nlohmann::ordered_json t;
      t["coeff"] = c.get_str();
      auto mono = nlohmann::ordered_json::array();
      for (const auto& [v, e] : m) mono.push_back({pool.name(v), e});
      t["monomial"] = mono;
      arr.push_back(t);
    }
    return arr;
  }

  bool operator==(const SparsePoly& o) const { return terms_ == o.terms_; }

 private:
  static const Rat& kZero() {
    static const Rat z = 0;
    return z;
  }
  void add_term(const Monomial& m, const Int& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  std::map<Monomial, Int> terms_;
};

inline SparsePoly sq(const SparsePoly& p) { return p * p; }

/// An unexpanded polynomial expression: a plain polynomial, a sum of squares
/// of polynomials, or a product of such expressions.
struct Expr {
  enum class Kind { Poly, Sos, Product };
  Kind kind = Kind::Poly;
  SparsePoly poly;
  std::vector<SparsePoly> squares;
  std::vector<Expr> factors;

  static Expr of_poly(SparsePoly p) { return {Kind::Poly, std::move(p), {}, {}}; }
  static Expr sos(std::vector<SparsePoly> s) { return {Kind::Sos, {}, std::move(s), {}}; }
  static Expr product(std::vector<Expr> f) { return {Kind::Product, {}, {}, std::move(f)}; }

  /// Degree over variables outside `excluded`. Squares of nonzero
  /// polynomials have leading forms that cannot cancel in a sum, and degrees
  /// add over products in an integral domain.
  int degree(const std::set<int>& excluded = {}) const {
    switch (kind) {
      case Kind::Poly: return poly.degree(excluded);
      case Kind::Sos: {
        int best = -1;
        for (const auto& s : squares)
          if (!s.is_zero()) best = std::max(best, 2 * s.degree(excluded));
        return best;
      }
      case Kind::Product: {
        int total = 0;
        for (const auto& f : factors) {
          int d = f.degree(excluded);
          if (d < 0) return -1;
          total += d;
        }
        return total;
      }
    }
    return -1;
  }

  std::set<int> variables() const {
    std::set<int> out;
    if (kind == Kind::Poly) out = poly.variables();
    for (const auto& s : squares) {
      auto v = s.variables();
      out.insert(v.begin(), v.end());
    }
    for (const auto& f : factors) {
      auto v = f.variables();
      out.insert(v.begin(), v.end());
    }
    return out;
  }

  /// Structural sum-of-squares check: a Sos node, or a product of them.
  bool is_sos() const {
    if (kind == Kind::Sos) return true;
    if (kind == Kind::Product) {
      for (const auto& f : factors)
        if (!f.is_sos()) return false;
      return !factors.empty();
    }
    return false;
  }

  Rat eval(const std::vector<Rat>& values) const {
    switch (kind) {
      case Kind::Poly: return poly.eval(values);
      case Kind::Sos: {
        Rat sum = 0;
        for (const auto& s : squares) {
          Rat v = s.eval(values);
          sum += v * v;
        }
        return sum;
      }
      case Kind::Product: {
        Rat prod = 1;
        for (const auto& f : factors) {
          prod *= f.eval(values);
          if (prod == 0) return prod;
        }
        return prod;
      }
    }
    return 0;
  }

  /// Zero test with early exit; exact.
  bool eval_is_zero(const std::vector<Rat>& values) const {
    switch (kind) {
      case Kind::Poly: return poly.eval(values) == 0;
      case Kind::Sos:
        for (const auto& s : squares)
          if (s.eval(values) != 0) return false;
        return true;
      case Kind::Product:
        for (const auto& f : factors)
          if (f.eval_is_zero(values)) return true;
        return false;
    }
    return false;
  }

  /// Fully expanded polynomial; only sensible for small expressions.
  SparsePoly expand() const {
    switch (kind) {
      case Kind::Poly: return poly;
      case Kind::Sos: {
        SparsePoly out;
        for (const auto& s : squares) out += sq(s);
        return out;
      }
      case Kind::Product: {
        SparsePoly out(1L);
        for (const auto& f : factors) out = out * f.expand();
        return out;
      }
    }
    return {};
  }

  std::size_t square_count() const {
    std::size_t n = squares.size();
    for (const auto& f : factors) n += f.square_count();
    return n;
  }
};

}  // namespace zdef
