#pragma once

// Certificate-guided zero search for the assembled formulas. Each square of
// a sum-of-squares formula is made to vanish from semantic data: trace
// decompositions, rational points on the norm conics, unit inverses, square
// roots and the blocking primes of the integer test.

#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "zdef/formulas.hpp"
#include "zdef/predicates.hpp"
#include "zdef/quaternion.hpp"

namespace zdef {

inline constexpr int kDefaultHeight = 40;

/// Rational (y1,y2,y3) with A y1^2 + B y2^2 + C y3^2 = E, searched by
/// height of the two enumerated coordinates; the third is solved exactly.
inline std::optional<std::array<Rat, 3>> ternary_point(const Rat& A, const Rat& B, const Rat& C, const Rat& E,
                                                       int height) {
  if (E == 0) return std::array<Rat, 3>{0, 0, 0};
  const std::array<Rat, 3> coef{A, B, C};
  for (long H = 1; H <= height; ++H)
    for (long d = 1; d <= H; ++d)
      for (long m = 0; m <= H; ++m)
        for (long n = 0; n <= H; ++n) {
          if (d != H && m != H && n != H) continue;
          for (std::size_t solve = 3; solve-- > 0;) {
            std::size_t i = (solve + 1) % 3, j = (solve + 2) % 3;
            if (i > j) std::swap(i, j);
            Rat val = (E * (d * d) - coef[i] * (m * m) - coef[j] * (n * n)) / coef[solve];
            if (val < 0 || !is_rational_square(val)) continue;
            std::array<Rat, 3> out;
            out[i] = Rat(m, d);
            out[j] = Rat(n, d);
            out[solve] = make_rat(isqrt(val.get_num()), isqrt(val.get_den()) * d);
            out[i].canonicalize();
            out[j].canonicalize();
            return out;
          }
        }
  return std::nullopt;
}

/// (x1..x4) with x1 = s/2 and x1^2 - a x2^2 - b x3^2 + ab x4^2 = 1.
inline std::optional<std::array<Rat, 4>> s_point(const Rat& a, const Rat& b, const Rat& s, int height) {
  Rat x1 = s / 2;
  auto r = ternary_point(Rat(-a), Rat(-b), Rat(a * b), Rat(1 - x1 * x1), height);
  if (!r) return std::nullopt;
  return std::array<Rat, 4>{x1, (*r)[0], (*r)[1], (*r)[2]};
}

namespace detail {

/// Sign times the product of primes with odd exponent.
inline Rat squarefree_part(const Rat& x) {
  auto f = factor_rat(x);
  Rat out = f.sign;
  for (const auto& [l, e] : f.factors)
    if (e % 2 != 0) out *= l;
  return out;
}

/// Rational square root of a rational square.
inline Rat rat_sqrt(const Rat& x) { return make_rat(isqrt(x.get_num()), isqrt(x.get_den())); }

/// Candidate first summands s for tau = s + (tau - s) in S + S, small height first.
inline std::vector<Rat> trace_candidates(const QuaternionPair& qp, const Rat& tau) {
  std::vector<Rat> out;
  auto push = [&](const Rat& s) {
    if (std::find(out.begin(), out.end(), s) == out.end() && qp.s_member(s) && qp.s_member(Rat(tau - s)))
      out.push_back(s);
  };
  push(Rat(tau / 2));
  push(Rat(2));
  push(Rat(-2));
  try {
    push(qp.t_decompose(tau).first);
  } catch (const DomainError&) {
    return out;
  }
  for (long d = 1; d <= 8 && out.size() < 24; ++d)
    for (long n = 0; n <= 6 * d && out.size() < 24; ++n)
      for (long sgn : {1, -1}) push(Rat(tau / 2) + make_rat(sgn * n, d));
  return out;
}

}  // namespace detail

/// Points for tau = s1 + s2 with s1, s2 in S_{a,b}.
inline std::optional<std::pair<std::array<Rat, 4>, std::array<Rat, 4>>> t_pair_points(const Rat& a, const Rat& b,
                                                                                       const Rat& tau, int height) {
  QuaternionPair qp(a, b);
  if (!qp.t_member(tau)) return std::nullopt;
  for (const auto& s : detail::trace_candidates(qp, tau)) {
    auto p1 = s_point(a, b, s, height);
    if (!p1) continue;
    auto p2 = s_point(a, b, Rat(tau - s), height);
    if (p2) return std::make_pair(*p1, *p2);
  }
  return std::nullopt;
}

/// Candidate tau1 for t = tau1 + tau2 with tau1 in T_{a,b}, tau2 in T_{c,d}.
inline std::vector<Rat> ring_split_candidates(const Rat& t, const QuaternionPair& t1, const QuaternionPair& t2) {
  std::vector<Rat> out;
  auto push = [&](const Rat& tau1) {
    if (std::find(out.begin(), out.end(), tau1) == out.end() && t1.t_member(tau1) && t2.t_member(Rat(t - tau1)))
      out.push_back(tau1);
  };
  push(Rat(0));
  push(t);
  // Partial fractions: denominators at primes ramified for the first pair go to tau2.
  Int dA = 1, dB = 1;
  for (const auto& [l, e] : factor_int(t.get_den())) {
    Int pe = pow_int(l, static_cast<unsigned long>(e));
    (t1.delta().contains(l) ? dA : dB) *= pe;
  }
  Int g, s, u;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), u.get_mpz_t(), dB.get_mpz_t(), dA.get_mpz_t());
  // n = alpha * dB + beta * dA, tau2 = alpha / dA, tau1 = beta / dB
  Int beta = t.get_num() * u;
  Rat base = make_rat(mod_floor(beta, dB), dB);
  for (long m : {0L, -1L, 1L, -2L, 2L, -3L, 3L, -4L, 4L}) push(base + m);
  return out;
}

// ---------------------------------------------------------------------------
// Fillers: each writes values for one component and reports success.

class WitnessFiller {
 public:
  WitnessFiller(std::vector<Rat>& values, int height) : v_(values), height_(height) {}

  /// f for class k at the value `val` (= A/D in the formula).
  bool f(int k, const Rat& p, const Rat& q, const Rat& val, const VarIds& x) {
    auto qp = quad_pairs<Rat>(k, p, q);
    if (qp.a == 0 || qp.b == 0 || qp.c == 0 || qp.d == 0) return false;
    QuaternionPair t1(qp.a, qp.b), t2(qp.c, qp.d);
    for (const auto& tau1 : ring_split_candidates(val, t1, t2)) {
      auto first = t_pair_points(qp.a, qp.b, tau1, height_);
      if (!first) continue;
      auto second = t_pair_points(qp.c, qp.d, Rat(val - tau1), height_);
      if (!second) continue;
      for (std::size_t i = 0; i < 4; ++i) {
        set(x[i], first->first[i]);
        set(x[4 + i], first->second[i]);
        set(x[8 + i], second->first[i]);
      }
      for (std::size_t i = 0; i < 3; ++i) set(x[12 + i], second->second[1 + i]);
      return true;
    }
    return false;
  }

  bool h(int k, const Rat& p, const VarIds& ids) {
    SemilocalRing r = ring_R(k, p);
    for (const auto& l : r.primes)
      if (vp(p, l) % 2 != 0) return false;
    Rat u = detail::squarefree_part(p);
    set(ids[0], u);
    set(ids[1], Rat(1 / u));
    set(ids[2], detail::rat_sqrt(Rat(p / u)));
    return f(k, p, 0, u, slice(ids, 3, 15)) && f(k, p, 0, Rat(1 / u), slice(ids, 18, 15));
  }

  bool phi(int k, const Rat& p, const VarIds& ids) {
    if (p == 0 || !phi_member(p, k)) return false;
    if (!f(2, 0, 0, Rat((p - k) / 8), slice(ids, 0, 15))) return false;
    std::size_t at = 15;
    for (int c : {3, 5, 7}) {
      if (c == k) continue;
      if (!h(c, p, slice(ids, at, formula_size::kH))) return false;
      at += formula_size::kH;
    }
    return true;
  }

  bool jk(int k, const Rat& t, const Rat& p, const VarIds& ids) {
    SemilocalRing r = ring_R(k, p);
    for (const auto& l : r.primes)
      if (vp(p, l) % 2 == 0) return false;
    if (!radical_of(r).member(t)) return false;
    bool all_odd = t != 0;
    for (const auto& l : r.primes)
      if (all_odd && vp(t, l) % 2 == 0) all_odd = false;
    Rat y = (t == 0 || all_odd) ? Rat(0) : i_set_split(t, r.primes);
    set(ids[0], y);
    auto part = [&](const Rat& val, std::size_t base_f, std::size_t base_u) {
      Rat u = 1, w = 0;
      if (val != 0) {
        u = detail::squarefree_part(Rat(val / p));
        w = detail::rat_sqrt(Rat(val / (p * u)));
      }
      set(ids[base_u], u);
      set(ids[base_u + 1], Rat(1 / u));
      set(ids[base_u + 2], w);
      return f(k, p, 0, val, slice(ids, base_f, 15)) && f(k, p, 0, u, slice(ids, base_u + 3, 15)) &&
             f(k, p, 0, Rat(1 / u), slice(ids, base_u + 18, 15));
    };
    return part(y, 1, 16) && part(Rat(t - y), 49, 64);
  }

  bool j1(const Rat& t, const Rat& p, const Rat& q, const VarIds& ids) {
    SemilocalRing r = ring_R1_pair(p, q);
    auto half = [&](const Rat& scale, std::size_t base) {
      Rat y = detail::squarefree_part(scale);
      Rat rr = t / y;
      if (!r.member(y) || !r.member(rr)) return false;
      set(ids[base], y);
      set(ids[base + 1], detail::rat_sqrt(Rat(y / scale)));
      set(ids[base + 2], rr);
      return f(1, p, q, y, slice(ids, base + 3, 15)) && f(1, p, q, rr, slice(ids, base + 18, 15));
    };
    return half(p, 0) && half(q, 33);
  }

  bool psi(const Rat& p, const Rat& q, const VarIds& ids) {
    if (p == 0 || q == 0 || !psi_member(p, q)) return false;
    Certificate c = psi_witness(p, q);
    Rat w = *c.w, j = p / (2 * w * w) - 1;
    set(ids[195], j);
    set(ids[196], w);
    return phi(1, p, slice(ids, 0, 114)) && phi(3, q, slice(ids, 114, 81)) && jk(3, j, q, slice(ids, 197, 97));
  }

  bool j2(const Rat& t, const VarIds& ids) {
    if (t != 0 && vp(t, 2) < 1) return false;
    return f(2, 0, 0, Rat(t / 2), ids);
  }

  /// Four rationals with squares summing to x >= 0.
  static std::optional<std::array<Rat, 4>> four_squares(const Rat& x, long limit = 4000) {
    if (x < 0) return std::nullopt;
    Int n = x.get_num() * x.get_den();  // x = n / den^2
    if (n > Int(limit) * limit) return std::nullopt;
    long N = n.get_si();
    for (long a = 0; a * a <= N; ++a)
      for (long b = a; a * a + b * b <= N; ++b)
        for (long c = b; a * a + b * b + c * c <= N; ++c) {
          long rest = N - a * a - b * b - c * c;
          long d = static_cast<long>(isqrt(Int(rest)).get_si());
          if (d * d == rest) {
            Int den = x.get_den();
            return std::array<Rat, 4>{make_rat(a, den), make_rat(b, den), make_rat(c, den), make_rat(d, den)};
          }
        }
    return std::nullopt;
  }

 private:
  void set(int id, const Rat& val) {
    if (static_cast<std::size_t>(id) >= v_.size()) v_.resize(static_cast<std::size_t>(id) + 1);
    v_[static_cast<std::size_t>(id)] = val;
  }
  std::vector<Rat>& v_;
  int height_;
};

// ---------------------------------------------------------------------------

struct ZeroWitness {
  std::vector<Rat> values;                 // indexed by variable id
  std::optional<std::size_t> factor;       // for products: the vanishing factor
  std::optional<Certificate> certificate;  // for g: the certificate that selected it
};

namespace detail {

inline VarIds ids_from(const Formula& f, const std::string& stem, std::size_t n, std::size_t start = 1) {
  VarIds out;
  for (std::size_t i = 0; i < n; ++i) {
    auto id = f.pool.find(stem + std::to_string(start + i));
    if (!id) throw DomainError("formula " + f.name + " lacks variable " + stem + std::to_string(start + i));
    out.push_back(*id);
  }
  return out;
}

}  // namespace detail

/// Searches for an assignment of the existential variables making the formula
/// vanish, given the free variable and parameters in `fixed`. Returns none
/// when the semantic layer rules the instance out or the height bound runs out.
inline std::optional<ZeroWitness> zero_witness_search(const Formula& f, const std::map<std::string, Rat>& fixed,
                                                      int height = kDefaultHeight,
                                                      const Int& prime_bound = Int(kDefaultPrimeBound)) {
  ZeroWitness w;
  w.values.assign(f.pool.size(), Rat(0));
  auto get = [&](const std::string& n) {
    auto it = fixed.find(n);
    if (it == fixed.end()) throw DomainError("zero_witness_search: missing value for " + n);
    return it->second;
  };
  for (const auto& [n, val] : fixed)
    if (auto id = f.pool.find(n)) w.values[static_cast<std::size_t>(*id)] = val;
  WitnessFiller fill(w.values, height);
  const std::string& name = f.name;
  bool ok = false;
  try {
    if (name == "f_step1") {
      Rat a = get("a"), b = get("b"), t = get("t");
      VarIds x = detail::ids_from(f, "x", 4), y = detail::ids_from(f, "y", 3, 2);
      for (auto [which, val] : {std::pair<std::size_t, Rat>{0, a}, {1, b}}) {
        if (val > 0) continue;
        if (auto r = WitnessFiller::four_squares(Rat(-val))) {
          for (std::size_t i = 0; i < 4; ++i) w.values[static_cast<std::size_t>(x[i])] = (*r)[i];
          w.factor = which;
          return w;
        }
      }
      if (a == 0 || b == 0) return std::nullopt;
      QuaternionPair qp(a, b);
      if (!qp.t_member(t)) return std::nullopt;
      // The bracket asks t = 2 x1 + 2 y1 with both halves traces.
      for (const auto& s : detail::trace_candidates(qp, t)) {
        auto p1 = s_point(a, b, s, height), p2 = s_point(a, b, Rat(t - s), height);
        if (!p1 || !p2) continue;
        for (std::size_t i = 0; i < 4; ++i) w.values[static_cast<std::size_t>(x[i])] = (*p1)[i];
        for (std::size_t i = 0; i < 3; ++i) w.values[static_cast<std::size_t>(y[i])] = (*p2)[i + 1];
        w.factor = 2;
        return w;
      }
      return std::nullopt;
    }
    if (name == "g") {
      Rat t = get("t");
      auto it = is_integer(t, prime_bound);
      if (it.value) return std::nullopt;
      const Certificate& c = *it.certificate;
      w.certificate = c;
      VarIds x = detail::ids_from(f, "x", kGVariables);
      auto range = [&](int a, int b) {
        return slice(x, static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - a + 1));
      };
      const auto& L = g_layout();
      Rat x1 = 1 / t;
      w.values[static_cast<std::size_t>(x[0])] = x1;
      if (c.variant == "z2") {
        w.factor = 0;
        ok = fill.j2(x1, range(L[0].realized_first, L[0].realized_last));
      } else {
        Rat p = *c.p, q = c.q ? *c.q : Rat(0);
        w.values[static_cast<std::size_t>(*f.pool.find("p"))] = p;
        w.values[static_cast<std::size_t>(*f.pool.find("q"))] = q;
        if (c.variant == "phi_k") {
          int k = *c.k;
          w.factor = static_cast<std::size_t>(k == 3 ? 1 : k == 5 ? 2 : 3);
          ok = fill.jk(k, x1, p, range(L[1].realized_first, L[1].realized_last)) &&
               fill.phi(k, p, range(L[2].realized_first, L[2].realized_last));
        } else {
          w.factor = 4;
          ok = fill.j1(x1, p, q, range(L[3].realized_first, L[3].realized_last)) &&
               fill.psi(p, q, range(L[4].realized_first, L[4].realized_last));
        }
      }
    } else if (name == "psi") {
      ok = fill.psi(get("p"), get("q"), detail::ids_from(f, "x", formula_size::kPsi));
    } else if (name == "j1") {
      ok = fill.j1(get("t"), get("p"), get("q"), detail::ids_from(f, "x", formula_size::kJ1));
    } else if (name == "j2") {
      ok = fill.j2(get("t"), detail::ids_from(f, "x", 15));
    } else if (name.rfind("phi", 0) == 0) {
      int k = name[3] - '0';
      ok = fill.phi(k, get("p"), detail::ids_from(f, "z", formula_size::phi(k)));
    } else if (name[0] == 'h') {
      VarIds ids{*f.pool.find("u"), *f.pool.find("v"), *f.pool.find("w")};
      for (const char* stem : {"x", "y"}) {
        auto part = detail::ids_from(f, stem, 15);
        ids.insert(ids.end(), part.begin(), part.end());
      }
      ok = fill.h(name[1] - '0', get("p"), ids);
    } else if (name[0] == 'j') {
      ok = fill.jk(name[1] - '0', get("t"), get("p"), detail::ids_from(f, "x", formula_size::kJk));
    } else if (name[0] == 'f') {
      int k = name[1] - '0';
      Rat p = k == 2 ? Rat(0) : get("p"), q = k == 1 ? get("q") : Rat(0);
      QuadPairs<Rat> qp = quad_pairs<Rat>(k, p, q);
      if (qp.a == 0 || qp.b == 0 || qp.c == 0 || qp.d == 0) return std::nullopt;
      SemilocalRing r = ring_sum(t_ring(qp.a, qp.b), t_ring(qp.c, qp.d));
      if (!r.member(get("t"))) return std::nullopt;
      ok = fill.f(k, p, q, get("t"), detail::ids_from(f, "x", 15));
    }
  } catch (const DomainError&) {
    return std::nullopt;
  }
  if (!ok) return std::nullopt;
  return w;
}

/// Per-square check of a witness: every square of the vanishing component is
/// zero on its own, and the whole expression evaluates to zero.
struct ZeroCheck {
  bool ok = false;
  std::size_t squares_checked = 0;
  std::vector<std::size_t> nonzero;  // indices of offending squares
};

inline ZeroCheck check_zero(const Formula& f, const ZeroWitness& w) {
  ZeroCheck c;
  const Expr* target = &f.expr;
  if (f.expr.kind == Expr::Kind::Product) {
    if (!w.factor || *w.factor >= f.expr.factors.size()) return c;
    target = &f.expr.factors[*w.factor];
  }
  if (target->kind == Expr::Kind::Sos) {
    for (std::size_t i = 0; i < target->squares.size(); ++i) {
      ++c.squares_checked;
      if (target->squares[i].eval(w.values) != 0) c.nonzero.push_back(i);
    }
  } else {
    ++c.squares_checked;
    if (target->eval(w.values) != 0) c.nonzero.push_back(0);
  }
  c.ok = c.nonzero.empty() && f.expr.eval(w.values) == 0;
  return c;
}

/// Uniform rational n/d with |n| <= height, 1 <= d <= height.
inline Rat random_rat(std::mt19937_64& rng, long height) {
  std::uniform_int_distribution<long> num(-height, height), den(1, height);
  long n = num(rng);
  long d = den(rng);
  return make_rat(n, d);
}

struct SampleReport {
  std::size_t samples = 0;
  std::size_t zeros = 0;
  std::optional<std::vector<Rat>> first_zero;
};

/// Evaluates the formula at `samples` pseudo-random assignments of the
/// non-fixed variables and counts zeros.
inline SampleReport sample_zeros(const Formula& f, const std::map<std::string, Rat>& fixed, std::size_t samples,
                                 std::uint64_t seed, long height = 100) {
  std::mt19937_64 rng(seed);
  std::vector<Rat> values(f.pool.size());
  std::vector<bool> is_fixed(f.pool.size(), false);
  for (const auto& [n, v] : fixed)
    if (auto id = f.pool.find(n)) {
      values[static_cast<std::size_t>(*id)] = v;
      is_fixed[static_cast<std::size_t>(*id)] = true;
    }
  SampleReport r;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!is_fixed[i]) values[i] = random_rat(rng, height);
    ++r.samples;
    if (f.expr.eval_is_zero(values)) {
      ++r.zeros;
      if (!r.first_zero) r.first_zero = values;
    }
  }
  return r;
}

}  // namespace zdef
