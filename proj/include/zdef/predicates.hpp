#pragma once

// The definable families P^[k], Phi_k, Psi, the rings R_p^[k], R_{p,q}^[1],
// their union hulls, and certificate-producing tests built on them: the
// integer test, the one-parameter clause, nonsquares, norms, and Phi-class
// decompositions.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "zdef/exactnum.hpp"
#include "zdef/localfields.hpp"
#include "zdef/quaternion.hpp"
#include "zdef/semilocal.hpp"

namespace zdef {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline void check_class(int k, bool allow_one = true) {
  if (!(k == 3 || k == 5 || k == 7 || (allow_one && k == 1)))
    throw DomainError("class k must be one of " + std::string(allow_one ? "1," : "") + "3,5,7");
}

inline bool contains_prime(const std::vector<Int>& v, const Int& l) {
  return std::find(v.begin(), v.end(), l) != v.end();
}

inline Int product(const std::vector<Int>& v) {
  Int out = 1;
  for (const auto& x : v) out *= x;
  return out;
}

}  // namespace detail

/// P^[k](x): primes with odd exponent in x that are = k mod 8.
inline std::vector<Int> pk_set(const Rat& x, int k) {
  if (x == 0) throw DomainError("pk_set: zero");
  detail::check_class(k);
  std::vector<Int> out;
  for (const auto& l : odd_primes(x))
    if (l != 2 && mod_floor(l, 8) == k) out.push_back(l);
  return out;
}

inline bool phi_member(const Rat& p, int k) {
  if (p == 0) throw DomainError("phi_member: zero");
  detail::check_class(k);
  auto c = mod8_class(p);
  if (!c || *c != k) return false;
  for (const auto& l : odd_primes(p)) {
    if (l == 2) return false;
    Int r = mod_floor(l, 8);
    if (r != 1 && r != k) return false;
  }
  return true;
}

inline bool psi_member(const Rat& p, const Rat& q) {
  if (p == 0 || q == 0) throw DomainError("psi_member: zero");
  if (!phi_member(p, 1) || !phi_member(q, 3)) return false;
  Rat half = p / 2;
  for (const auto& l : pk_set(q, 3))
    if (vp(p, l) % 2 != 0 || legendre_gen(half, l) != 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Rings R_p^[k] and R_{p,q}^[1]

struct TPairs {
  std::pair<Rat, Rat> first, second;
};

inline TPairs ring_pairs(int k, const Rat& p) {
  detail::check_class(k, false);
  if (p == 0) throw DomainError("ring_pairs: zero");
  switch (k) {
    case 3: return {{-p, -p}, {2 * p, -p}};
    case 5: return {{-2 * p, -p}, {2 * p, -p}};
    default: return {{-p, -p}, {2 * p, p}};
  }
}

inline SemilocalRing ring_R(int k, const Rat& p) {
  auto pr = ring_pairs(k, p);
  return ring_sum(t_ring(pr.first.first, pr.first.second), t_ring(pr.second.first, pr.second.second));
}

/// J(R_p^[k]) as the sum of the two J_{a,b}.
inline RadicalIdeal radical_R(int k, const Rat& p) {
  auto pr = ring_pairs(k, p);
  return radical_sum(jacobson_ab(pr.first.first, pr.first.second),
                     jacobson_ab(pr.second.first, pr.second.second));
}

/// P(p,q) from the Legendre-symbol clauses.
inline std::vector<Int> p_pq_clauses(const Rat& p, const Rat& q) {
  auto pp = odd_primes(p), pq = odd_primes(q);
  std::set<Int> all(pp.begin(), pp.end());
  all.insert(pq.begin(), pq.end());
  std::vector<Int> out;
  for (const auto& l : all) {
    if (l == 2) continue;
    bool in_p = detail::contains_prime(pp, l), in_q = detail::contains_prime(pq, l);
    bool hit;
    if (in_p && !in_q) hit = legendre_gen(q, l) == -1;
    else if (!in_p) hit = legendre_gen(Rat(2 * p), l) == -1 && legendre_gen(Rat(-2 * p), l) == -1;
    else hit = legendre_gen(Rat(2 * p * q), l) == -1 && legendre_gen(Rat(-2 * p * q), l) == -1;
    if (hit) out.push_back(l);
  }
  return out;
}

inline void check_r1_preconditions(const Rat& p, const Rat& q) {
  if (p == 0 || q == 0) throw DomainError("R_{p,q}^[1]: p and q must be nonzero");
  auto cp = mod8_class(p), cq = mod8_class(q);
  if (!cp || *cp != 1) throw DomainError("R_{p,q}^[1]: p must be = 1 mod 8 2-adically");
  if (!cq || *cq != 3) throw DomainError("R_{p,q}^[1]: q must be = 3 mod 8 2-adically");
}

inline SemilocalRing ring_R1_pair(const Rat& p, const Rat& q) {
  check_r1_preconditions(p, q);
  SemilocalRing r = ring_sum(t_ring(Rat(2 * p * q), q), t_ring(Rat(-2 * p * q), q));
  if (r.primes != p_pq_clauses(p, q))
    throw InconsistencyError("ring_R1_pair(" + p.get_str() + ", " + q.get_str() +
                             "): delta intersection disagrees with the clause description");
  return r;
}

inline RadicalIdeal radical_R1_pair(const Rat& p, const Rat& q) {
  check_r1_preconditions(p, q);
  return radical_sum(jacobson_ab(Rat(2 * p * q), q), jacobson_ab(Rat(-2 * p * q), q));
}

/// R_p^[1] as the union of Z_(l) over P(p).
inline bool ring_R1_union_member(const Rat& x, const Rat& p) {
  if (p == 0 || !phi_member(p, 1) || is_rational_square(p))
    throw DomainError("ring_R1_union_member: p must lie in Phi_1 and not be a square");
  if (x == 0) return true;
  for (const auto& l : odd_primes(p))
    if (vp(x, l) >= 0) return true;
  return false;
}

/// The prime q = 3 mod 8 with P(p,q) = {l}, constructed by residue-symbol search.
inline Int find_q_for(const Rat& p, const Int& l, const Int& bound = Int(kDefaultPrimeBound)) {
  if (p == 0 || !phi_member(p, 1) || is_rational_square(p))
    throw DomainError("find_q_for: p must lie in Phi_1 and not be a square");
  auto pp = odd_primes(p);
  if (!detail::contains_prime(pp, l)) throw DomainError("find_q_for: l must lie in P(p)");
  std::vector<SymbolConstraint> symbols{{l, -1}};
  for (const auto& other : pp)
    if (other != l) symbols.push_back({other, 1});
  Int q = find_prime(3, symbols, {}, bound);
  if (!psi_member(p, Rat(q)) || p_pq_clauses(p, Rat(q)) != std::vector<Int>{l})
    throw InconsistencyError("find_q_for: q = " + q.get_str() + " fails its postcondition");
  return q;
}

/// R-tilde membership by the union description; R must be a nonempty
/// intersection of localizations.
inline bool widetilde_member(const Rat& x, const SemilocalRing& r) {
  if (r.arch_bound) throw UnsupportedCase("widetilde_member: archimedean-bounded set");
  if (r.primes.empty()) throw DomainError("widetilde_member: R = Q");
  if (x == 0) return true;
  for (const auto& l : r.primes)
    if (vp(x, l) >= 0) return true;
  return false;
}

/// R-tilde membership read literally: no y in J(R) with x*y = 1.
inline bool widetilde_member_literal(const Rat& x, const SemilocalRing& r) {
  if (r.arch_bound) throw UnsupportedCase("widetilde_member: archimedean-bounded set");
  if (r.primes.empty()) throw DomainError("widetilde_member: R = Q");
  if (x == 0) return true;
  return !radical_of(r).member(Rat(1 / x));
}

// ---------------------------------------------------------------------------
// Certificates

struct Obstruction {
  std::string place;   // "inf" or a prime
  std::string branch;  // archimedean | dyadic | phi_k | psi
  std::optional<int> k;
  std::optional<Int> q;

  bool operator==(const Obstruction&) const = default;
};

struct Certificate {
  std::string kind;  // non_integer | non_square | non_norm | psi_witness | rnotq_case
  std::string variant;
  std::optional<Rat> t, x, y;
  std::optional<int> k;
  std::optional<Rat> p, q;
  std::optional<Int> l;
  std::optional<int> case_tag;
  std::optional<Rat> w;
  std::vector<Obstruction> places;

  bool operator==(const Certificate&) const = default;

  ordered_json to_json() const {
    ordered_json j;
    j["kind"] = kind;
    if (!variant.empty()) j["variant"] = variant;
    if (t) j["t"] = t->get_str();
    if (x) j["x"] = x->get_str();
    if (y) j["y"] = y->get_str();
    if (k) j["k"] = *k;
    if (p) j["p"] = p->get_str();
    if (q) j["q"] = q->get_str();
    if (l) j["l"] = l->get_str();
    if (case_tag) j["case"] = *case_tag;
    if (w) j["w"] = w->get_str();
    if (!places.empty()) {
      j["places"] = ordered_json::array();
      for (const auto& o : places) {
        ordered_json e;
        e["place"] = o.place;
        e["branch"] = o.branch;
        if (o.k) e["k"] = *o.k;
        if (o.q) e["q"] = o.q->get_str();
        j["places"].push_back(e);
      }
    }
    return j;
  }

  static Certificate from_json(const ordered_json& j) {
    Certificate c;
    c.kind = j.at("kind").get<std::string>();
    if (j.contains("variant")) c.variant = j["variant"].get<std::string>();
    auto rat = [&](const char* key, std::optional<Rat>& out) {
      if (j.contains(key)) out = parse_rat(j[key].get<std::string>());
    };
    rat("t", c.t);
    rat("x", c.x);
    rat("y", c.y);
    rat("p", c.p);
    rat("q", c.q);
    rat("w", c.w);
    if (j.contains("k")) c.k = j["k"].get<int>();
    if (j.contains("l")) c.l = Int(j["l"].get<std::string>());
    if (j.contains("case")) c.case_tag = j["case"].get<int>();
    if (j.contains("places"))
      for (const auto& e : j["places"]) {
        Obstruction o{e.at("place").get<std::string>(), e.at("branch").get<std::string>(), {}, {}};
        if (e.contains("k")) o.k = e["k"].get<int>();
        if (e.contains("q")) o.q = Int(e["q"].get<std::string>());
        c.places.push_back(o);
      }
    return c;
  }
};

// ---------------------------------------------------------------------------
// Integer test

struct IntegerTest {
  bool value;
  std::optional<Certificate> certificate;
};

inline IntegerTest is_integer(const Rat& t, const Int& bound = Int(kDefaultPrimeBound)) {
  if (t.get_den() == 1) return {true, std::nullopt};
  Int l = factor_int(t.get_den()).begin()->first;
  Certificate c;
  c.kind = "non_integer";
  c.t = t;
  c.l = l;
  if (l == 2) {
    c.variant = "z2";
  } else if (Int r = mod_floor(l, 8); r != 1) {
    c.variant = "phi_k";
    c.k = static_cast<int>(r.get_si());
    c.p = Rat(l);
  } else {
    c.variant = "psi";
    c.p = Rat(l);
    c.q = Rat(find_q_for(Rat(l), l, bound));
  }
  return {false, c};
}

// ---------------------------------------------------------------------------
// Prop. 8 trichotomy

inline Certificate rnotq_case(const Rat& p, const Rat& q) {
  if (p == 0 || q == 0 || !psi_member(p, q)) throw DomainError("rnotq_case: (p,q) is not in Psi");
  auto pp = odd_primes(p), pq = odd_primes(q);
  std::vector<Int> shared, p_only, qs, rs;
  for (const auto& l : pp) (detail::contains_prime(pq, l) ? shared : p_only).push_back(l);
  for (const auto& l : pq) {
    if (mod_floor(l, 8) == 3) qs.push_back(l);
    else if (!detail::contains_prime(pp, l)) rs.push_back(l);
  }
  auto count_neg = [](const std::vector<Int>& tops, const Int& bottom) {
    long n = 0;
    for (const auto& top : tops)
      if (legendre_gen(Rat(top), bottom) == -1) ++n;
    return n;
  };
  auto make = [&](int which, const Int& l) {
    Certificate c;
    c.kind = "rnotq_case";
    c.p = p;
    c.q = q;
    c.l = l;
    c.case_tag = which;
    if (!detail::contains_prime(ring_R1_pair(p, q).primes, l))
      throw InconsistencyError("rnotq_case: blocking prime " + l.get_str() + " is not in P(p,q)");
    return c;
  };
  for (const auto& pj : shared) {
    long s = count_neg(qs, pj), t = count_neg(rs, pj);
    long n_prime = 0;
    for (const auto& pi : p_only)
      if (legendre_gen(Rat(pj), pi) == -1) ++n_prime;
    if ((s + t + n_prime) % 2 != 0) return make(1, pj);
  }
  for (const auto& pi : p_only) {
    long s = count_neg(qs, pi), t = count_neg(rs, pi), m = count_neg(shared, pi);
    if ((s + m + t) % 2 != 0) return make(2, pi);
  }
  for (const auto& r : rs) {
    long n_star = 0;
    for (const auto& pi : pp)
      if (legendre_gen(Rat(r), pi) == -1) ++n_star;
    if (n_star % 2 != 0) return make(3, r);
  }
  throw InconsistencyError("rnotq_case: no case of the trichotomy applies to (" + p.get_str() + ", " +
                           q.get_str() + ")");
}

/// w with p/(2 w^2) - 1 in J(R_q^[3]), built prime by prime and combined by CRT.
inline Certificate psi_witness(const Rat& p, const Rat& q) {
  if (p == 0 || q == 0 || !psi_member(p, q)) throw DomainError("psi_witness: (p,q) is not in Psi");
  std::vector<std::pair<Int, Int>> system;
  Rat scale = 1;
  for (const auto& l : pk_set(q, 3)) {
    long e = vp(p, l) / 2;
    scale *= pow_rat(Rat(l), e);
    auto c = sqrt_mod(rat_mod(Rat(unit_part(p, l) / 2), l), l);
    if (!c || *c == 0) throw InconsistencyError("psi_witness: p/2 is not a square unit at " + l.get_str());
    system.emplace_back(*c, l);
  }
  Int c = system.empty() ? Int(1) : crt(system)->first;
  Certificate out;
  out.kind = "psi_witness";
  out.p = p;
  out.q = q;
  out.w = scale * c;
  return out;
}

// ---------------------------------------------------------------------------
// One-parameter clause

enum class Just1Mode { Corrected, Literal };

namespace detail {

/// p in Q^2 * (k + 8 Z_(2)), checked over the scalings p * 4^j.
inline bool in_square_class_literal(const Rat& p, int k) {
  if (p == 0) return true;
  long v = vp(p, 2);
  long target = (k % 2 != 0) ? 0 : (k == 4 ? 2 : 1);
  if (k == 0) return false;
  if ((v - target) % 2 != 0) return false;
  Rat scaled = p * pow_rat(Rat(4), (target - v) / 2);
  auto c = mod8_class(scaled);
  return c && *c == k;
}

inline bool t_in_rk(const Rat& t, const Rat& p, int k) {
  if (k == 1) return ring_R1_union_member(t, p);
  return ring_R(k, p).member(t);
}

}  // namespace detail

inline bool just1_clause(const Rat& t, const Rat& p, Just1Mode mode = Just1Mode::Corrected) {
  if (p == 0) throw DomainError("just1_clause: p must be nonzero");
  if (mode == Just1Mode::Literal) {
    for (int k : {2, 4, 6})
      if (detail::in_square_class_literal(p, k)) return true;
    for (int k : {1, 3, 5, 7}) {
      if (!detail::in_square_class_literal(p, k)) continue;
      if (!phi_member(p, k)) return true;
      if (!is_rational_square(p) && detail::t_in_rk(t, p, k)) return true;
    }
    return false;
  }
  auto sc = sqclass2(p);
  if (sc.val_parity != 0) return true;
  if (is_rational_square(p)) return true;
  int k = sc.unit_class;
  if (!phi_member(p, k)) return true;
  return detail::t_in_rk(t, p, k);
}

struct Just1Result {
  bool value;
  std::optional<Rat> falsifying_p;  // absent when t fails only the Z_(2) conjunct
  bool fails_z2 = false;
};

/// t in Z_(2) and the corrected clause for every p; the universal side is
/// decided by producing a failing p from the integer certificate.
inline Just1Result just1_test(const Rat& t, const Int& bound = Int(kDefaultPrimeBound)) {
  auto it = is_integer(t, bound);
  if (it.value) return {true, std::nullopt, false};
  const Certificate& c = *it.certificate;
  if (c.variant == "z2") {
    if (t != 0 && vp(t, 2) >= 0) throw InconsistencyError("just1_test: dyadic certificate for a 2-integral t");
    return {false, std::nullopt, true};
  }
  Rat p = *c.p;
  if (just1_clause(t, p, Just1Mode::Corrected))
    throw InconsistencyError("just1_test: p = " + p.get_str() + " does not falsify the clause");
  return {false, p, false};
}

// ---------------------------------------------------------------------------
// Nonsquares and norms

inline Certificate nonsquare_witness(const Rat& x, const Int& bound = Int(kDefaultPrimeBound)) {
  if (x == 0 || is_rational_square(x)) throw DomainError("nonsquare_witness: " + x.get_str() + " is a square");
  Certificate c;
  c.kind = "non_square";
  c.x = x;
  if (x < 0) {
    c.variant = "sign";
    return c;
  }
  if (vp(x, 2) % 2 != 0) {
    c.variant = "dyadic";
    return c;
  }
  auto ps = odd_primes(x);
  std::vector<SymbolConstraint> symbols;
  for (std::size_t i = 0; i < ps.size(); ++i) symbols.push_back({ps[i], i == 0 ? -1 : 1});
  Int p = find_prime(3, symbols, {}, bound);
  if (legendre_gen(x, p) != -1)
    throw InconsistencyError("nonsquare_witness: constructed prime " + p.get_str() + " does not separate");
  c.variant = "phi3";
  c.p = Rat(p);
  return c;
}

struct NormResult {
  bool value;
  std::optional<Certificate> certificate;
};

inline NormResult norm_member(const Rat& x, const Rat& y, const Int& bound = Int(kDefaultPrimeBound)) {
  if (x == 0 || y == 0) throw DomainError("norm_member: x and y must be nonzero");
  std::vector<Obstruction> obs;
  if (hilbert(x, y, Place::infinity()) == -1) obs.push_back({"inf", "archimedean", {}, {}});
  for (const auto& l : candidate_primes(x, y)) {
    if (hilbert(x, y, Place::prime(l)) == 1) continue;
    Obstruction o{l.get_str(), "", {}, {}};
    Int r = mod_floor(l, 8);
    if (l == 2) {
      o.branch = "dyadic";
    } else if (r != 1) {
      o.branch = "phi_k";
      o.k = static_cast<int>(r.get_si());
    } else {
      o.branch = "psi";
      o.q = find_q_for(Rat(l), l, bound);
    }
    obs.push_back(o);
  }
  if (obs.empty()) return {true, std::nullopt};
  if (obs.size() < 2)
    throw InconsistencyError("norm_member: a single local obstruction violates the product formula");
  Certificate c;
  c.kind = "non_norm";
  c.x = x;
  c.y = y;
  c.places = std::move(obs);
  return {false, c};
}

// ---------------------------------------------------------------------------
// Disjointness of P^[k] through radicals

struct PkDisjoint {
  bool value;
  std::optional<std::pair<Rat, Rat>> unit_split;  // j1 + j2 = 1
};

inline PkDisjoint pk_disjoint(const Rat& x, const Rat& y, int k) {
  detail::check_class(k, false);
  if (x == 0 || y == 0 || !phi_member(x, k) || !phi_member(y, k))
    throw DomainError("pk_disjoint: x and y must lie in Phi_k");
  bool disjoint = intersect_primes(pk_set(x, k), pk_set(y, k)).empty();
  RadicalIdeal j1 = radical_R(k, x), j2 = radical_R(k, y);
  if (!disjoint) {
    if (radical_sum(j1, j2).full_field)
      throw InconsistencyError("pk_disjoint: shared prime but the radical sum is everything");
    return {false, std::nullopt};
  }
  std::pair<Rat, Rat> split;
  if (j1.full_field) split = {Rat(1), Rat(0)};
  else if (j2.full_field) split = {Rat(0), Rat(1)};
  else {
    Int a = detail::product(j1.primes), b = detail::product(j2.primes), g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1) throw InconsistencyError("pk_disjoint: disjoint P^[k] but radicals share a prime");
    split = {Rat(s * a), Rat(t * b)};
  }
  if (!j1.member(split.first) || !j2.member(split.second) || split.first + split.second != 1)
    throw InconsistencyError("pk_disjoint: unit split fails");
  return {true, split};
}

// ---------------------------------------------------------------------------
// Phi-class decompositions

enum class PhiShape {
  NotInPhi,    // x = k mod 8 and x not in Phi_k
  NoPrimesK,   // P^[k](x) empty
};

struct PhiFactor {
  int cls;
  Rat y;
  bool operator==(const PhiFactor&) const = default;
};

namespace detail {

inline const std::vector<std::vector<int>>& not_in_phi_patterns(int k) {
  static const std::vector<std::vector<int>> k1{{3, 3}, {5, 5}, {7, 7}, {3, 3, 5, 5}, {3, 3, 7, 7},
                                                {5, 5, 7, 7}, {3, 5, 7}, {3, 3, 5, 5, 7, 7}};
  static const std::vector<std::vector<int>> k3{
      {1, 3}, {5, 7}, {3, 5, 5}, {3, 7, 7}, {1, 5, 7}, {1, 3, 5, 5}, {1, 3, 7, 7},
      {3, 3, 5, 7}, {1, 3, 3, 5, 7}, {3, 5, 5, 7, 7}, {1, 3, 5, 5, 7, 7}};
  static const std::vector<std::vector<int>> none;
  return k == 1 ? k1 : k == 3 ? k3 : none;
}

}  // namespace detail

/// Splits x into Phi-class factors by grouping P(x) by class mod 8.
inline std::vector<PhiFactor> phi_decompose(const Rat& x, PhiShape shape, int k) {
  if (x == 0) throw DomainError("phi_decompose: zero");
  detail::check_class(k, shape == PhiShape::NotInPhi);
  if (vp(x, 2) != 0)
    throw UnsupportedCase("phi_decompose: Phi-class products are 2-adic units; v_2(x) != 0");
  if (shape == PhiShape::NoPrimesK) {
    if (!pk_set(x, k).empty()) throw DomainError("phi_decompose: P^[k](x) is not empty");
    if (k == 7 && x < 0) throw UnsupportedCase("phi_decompose: negative x cannot be a product of Phi_1, Phi_3, Phi_5");
  } else {
    auto c = mod8_class(x);
    if (!c || *c != k || phi_member(x, k)) throw DomainError("phi_decompose: need x = k mod 8 and x not in Phi_k");
  }

  std::map<int, std::vector<Rat>> pool;  // class -> prime powers l^{+-1} (and -1)
  auto fx = factor_rat(x);
  for (const auto& [l, e] : fx.factors)
    if (e % 2 != 0) pool[static_cast<int>(mod_floor(l, 8).get_si())].push_back(e > 0 ? Rat(l) : Rat(1, l));
  if (x < 0) pool[7].insert(pool[7].begin(), Rat(-1));

  std::vector<PhiFactor> out;
  auto emit_group = [&](int cls, const std::vector<Rat>& elems) {
    if (elems.empty()) return;
    Rat all = 1;
    for (const auto& e : elems) all *= e;
    if (cls == 1 || elems.size() % 2 != 0) {
      out.push_back({cls, all});
    } else {
      out.push_back({cls, elems.front()});
      out.push_back({cls, all / elems.front()});
    }
  };
  bool ones_absorbed = shape == PhiShape::NotInPhi && k == 1;
  if (!ones_absorbed) emit_group(1, pool[1]);
  for (int cls : {3, 5, 7}) emit_group(cls, pool[cls]);
  if (out.empty()) out.push_back({x > 0 ? 1 : 7, Rat(x > 0 ? 1 : -1)});

  // Remaining square part, and absorbed P^[1] primes, go into the first factor.
  Rat prod = 1;
  for (const auto& f : out) prod *= f.y;
  out.front().y *= x / prod;

  if (shape == PhiShape::NotInPhi && !detail::not_in_phi_patterns(k).empty()) {
    std::vector<int> labels;
    for (const auto& f : out) labels.push_back(f.cls);
    std::sort(labels.begin(), labels.end());
    const auto& pats = detail::not_in_phi_patterns(k);
    if (std::find(pats.begin(), pats.end(), labels) == pats.end())
      throw InconsistencyError("phi_decompose: factor pattern outside the listed disjuncts");
  }
  return out;
}

/// Checks product, class membership and pairwise side conditions.
inline bool verify_phi_decomposition(const Rat& x, PhiShape shape, int k, const std::vector<PhiFactor>& fs) {
  if (fs.empty()) return false;
  Rat prod = 1;
  std::map<int, std::vector<Rat>> by_class;
  for (const auto& f : fs) {
    if (f.y == 0 || !phi_member(f.y, f.cls)) return false;
    prod *= f.y;
    by_class[f.cls].push_back(f.y);
  }
  if (prod != x) return false;
  if (shape == PhiShape::NoPrimesK) {
    if (by_class.count(k)) return false;
    for (const auto& [cls, ys] : by_class)
      if (ys.size() > 2) return false;
    return pk_set(x, k).empty();
  }
  for (const auto& [cls, ys] : by_class) {
    if (ys.size() > 2) return false;
    if (cls == 1) {
      if (ys.size() != 1 || is_rational_square(ys[0])) return false;
    } else if (ys.size() == 2 && !intersect_primes(pk_set(ys[0], cls), pk_set(ys[1], cls)).empty()) {
      return false;
    }
  }
  return !phi_member(x, k);
}

// ---------------------------------------------------------------------------

/// Re-checks a certificate from the numbers it carries, using only valuations,
/// residue symbols, Hilbert symbols and the ring descriptions.
inline bool verify(const Certificate& c) {
  try {
    if (c.kind == "non_integer") {
      if (!c.t || !c.l || c.t->get_den() == 1) return false;
      const Rat& t = *c.t;
      if (!is_prime(*c.l) || vp(t, *c.l) >= 0) return false;
      if (c.variant == "z2") return *c.l == 2 && !ring_sum(t_ring(3, 3), t_ring(2, 5)).member(t);
      if (c.variant == "phi_k")
        return c.k && c.p && phi_member(*c.p, *c.k) && !ring_R(*c.k, *c.p).member(t);
      if (c.variant == "psi") return c.p && c.q && psi_member(*c.p, *c.q) && !ring_R1_pair(*c.p, *c.q).member(t);
      return false;
    }
    if (c.kind == "non_square") {
      if (!c.x || *c.x == 0) return false;
      const Rat& x = *c.x;
      if (c.variant == "sign") return x < 0;
      if (c.variant == "dyadic") return vp(x, 2) % 2 != 0;
      if (c.variant == "phi3") {
        if (!c.p || c.p->get_den() != 1) return false;
        Int p = c.p->get_num();
        if (!is_prime(p) || mod_floor(p, 8) != 3) return false;
        // x in 2 * squares * (1 + pZ_(p)), hence a non-square at p
        return vp(x, p) % 2 == 0 && legendre_gen(Rat(x / 2), p) == 1 && legendre_gen(x, p) == -1;
      }
      return false;
    }
    if (c.kind == "non_norm") {
      if (!c.x || !c.y || *c.x == 0 || *c.y == 0 || c.places.size() < 2) return false;
      for (const auto& o : c.places) {
        if (o.place == "inf") {
          if (o.branch != "archimedean" || hilbert(*c.x, *c.y, Place::infinity()) != -1) return false;
          continue;
        }
        Int l(o.place);
        if (!is_prime(l) || hilbert(*c.x, *c.y, Place::prime(l)) != -1) return false;
        Int r = mod_floor(l, 8);
        if (o.branch == "dyadic") {
          if (l != 2) return false;
        } else if (o.branch == "phi_k") {
          if (!o.k || r != *o.k || r == 1) return false;
        } else if (o.branch == "psi") {
          if (r != 1 || !o.q || !is_prime(*o.q) || mod_floor(*o.q, 8) != 3) return false;
          if (legendre_gen(Rat(l), *o.q) != -1) return false;
        } else {
          return false;
        }
      }
      return true;
    }
    if (c.kind == "psi_witness") {
      if (!c.p || !c.q || !c.w || *c.w == 0) return false;
      if (!phi_member(*c.p, 1) || !phi_member(*c.q, 3)) return false;
      Rat j = *c.p / (2 * *c.w * *c.w) - 1;
      for (const auto& l : pk_set(*c.q, 3))
        if (j != 0 && vp(j, l) < 1) return false;
      return true;
    }
    if (c.kind == "rnotq_case") {
      if (!c.p || !c.q || !c.l || !c.case_tag || !psi_member(*c.p, *c.q) || !is_prime(*c.l)) return false;
      const Rat &p = *c.p, &q = *c.q;
      const Int& l = *c.l;
      bool in_p = vp(p, l) % 2 != 0, in_q = vp(q, l) % 2 != 0;
      bool clause = false;
      switch (*c.case_tag) {
        case 1:
          clause = in_p && in_q && legendre_gen(Rat(2 * p * q), l) == -1 && legendre_gen(Rat(-2 * p * q), l) == -1;
          break;
        case 2: clause = in_p && !in_q && legendre_gen(q, l) == -1; break;
        case 3:
          clause = !in_p && in_q && legendre_gen(Rat(2 * p), l) == -1 && legendre_gen(Rat(-2 * p), l) == -1;
          break;
        default: return false;
      }
      Place v = Place::prime(l);
      return clause && hilbert(Rat(2 * p * q), q, v) == -1 && hilbert(Rat(-2 * p * q), q, v) == -1;
    }
  } catch (const std::exception&) {
    return false;
  }
  return false;
}

}  // namespace zdef
