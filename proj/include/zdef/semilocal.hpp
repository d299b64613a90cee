#pragma once

// Semilocal subrings of Q (finite intersections of localizations), their
// sums and unit groups, and the Jacobson radicals attached to pairs (a,b).

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zdef/exactnum.hpp"
#include "zdef/quaternion.hpp"

namespace zdef {

/// Intersection of Z_(l) over `primes`, optionally with |x| <= arch_bound.
/// No primes and no bound is the full field Q.
struct SemilocalRing {
  std::vector<Int> primes;
  std::optional<Rat> arch_bound;

  bool is_full_field() const { return primes.empty() && !arch_bound; }

  bool member(const Rat& x) const {
    if (arch_bound && (x > *arch_bound || x < -*arch_bound)) return false;
    if (x == 0) return true;
    for (const auto& l : primes)
      if (vp(x, l) < 0) return false;
    return true;
  }

  /// Units in the sense of an inverse inside the same set.
  bool unit_member(const Rat& x) const { return x != 0 && member(x) && member(Rat(1 / x)); }

  std::string str() const {
    if (is_full_field()) return "Q";
    std::string s;
    for (std::size_t i = 0; i < primes.size(); ++i) s += (i ? " & " : "") + ("Z_(" + primes[i].get_str() + ")");
    if (arch_bound) s += (primes.empty() ? "" : " & ") + ("[-" + arch_bound->get_str() + "," + arch_bound->get_str() + "]");
    return s;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["primes"] = nlohmann::ordered_json::array();
    for (const auto& p : primes) j["primes"].push_back(p.get_str());
    j["arch_bound"] = arch_bound ? nlohmann::ordered_json(arch_bound->get_str()) : nlohmann::ordered_json(nullptr);
    return j;
  }

  bool operator==(const SemilocalRing&) const = default;
};

/// Intersection of l Z_(l) over `primes`; the tagged full-field value stands
/// for the degenerate case where no condition applies.
struct RadicalIdeal {
  std::vector<Int> primes;
  bool full_field = false;

  static RadicalIdeal full() { return {{}, true}; }
  static RadicalIdeal of(std::vector<Int> ps) {
    if (ps.empty()) return full();
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return {std::move(ps), false};
  }

  bool member(const Rat& x) const {
    if (full_field || x == 0) return true;
    for (const auto& l : primes)
      if (vp(x, l) < 1) return false;
    return true;
  }

  std::string str() const {
    if (full_field) return "Q";
    std::string s;
    for (std::size_t i = 0; i < primes.size(); ++i) s += (i ? " & " : "") + (primes[i].get_str() + "Z_(" + primes[i].get_str() + ")");
    return s;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    if (full_field) {
      j["full_field"] = true;
      return j;
    }
    j["primes"] = nlohmann::ordered_json::array();
    for (const auto& p : primes) j["primes"].push_back(p.get_str());
    return j;
  }

  bool operator==(const RadicalIdeal&) const = default;
};

/// T_{a,b} as a set: intersection over the ramified places, [-4,4] at inf.
inline SemilocalRing t_ring(const PlaceSet& delta) {
  SemilocalRing r{delta.primes, std::nullopt};
  if (delta.has_infinity) r.arch_bound = Rat(4);
  return r;
}
inline SemilocalRing t_ring(const Rat& a, const Rat& b) { return t_ring(delta(a, b)); }

/// T1 + T2 = intersection of Z_(l) over the common finite places.
inline SemilocalRing ring_sum(const SemilocalRing& t1, const SemilocalRing& t2) {
  if (t1.arch_bound && t2.arch_bound)
    throw UnsupportedCase("ring_sum: both summands carry an archimedean bound");
  return {intersect_primes(t1.primes, t2.primes), std::nullopt};
}

/// Membership in T_{a,b}^x (inverse also in T_{a,b}).
inline bool units_member(const Rat& x, const Rat& a, const Rat& b) {
  if (x == 0) return false;
  PlaceSet d = delta(a, b);
  for (const auto& l : d.primes)
    if (vp(x, l) != 0) return false;
  if (d.has_infinity) {
    Rat ax = abs(x);
    if (ax < Rat(1, 4) || ax > 4) return false;
  }
  return true;
}

/// J_{a,b} by the four-case formula.
inline RadicalIdeal jacobson_ab(const Rat& a, const Rat& b) {
  PlaceSet d = delta(a, b);
  const std::vector<Int>& finite = d.primes;
  if (d.empty()) return RadicalIdeal::full();
  if (!d.contains(Int(2))) return RadicalIdeal::of(finite);
  bool odd2 = vp(a, 2) % 2 != 0 || vp(b, 2) % 2 != 0;
  if (odd2) return RadicalIdeal::of(finite);
  std::vector<Int> rest;
  for (const auto& l : finite)
    if (l != 2) rest.push_back(l);
  if (!rest.empty()) return RadicalIdeal::of(rest);
  return RadicalIdeal::full();
}

/// y in I^c_{a,b}: v_l(y) odd and positive at every l in Delta_{a,b} and P(c).
/// y = 0 has no finite valuation and is not a member.
inline bool i_set_member(const Rat& y, const Rat& a, const Rat& b, const Rat& c) {
  PlaceSet d = delta(a, b);
  auto pc = odd_primes(c);
  auto ls = intersect_primes(d.primes, pc);
  if (ls.empty()) return true;
  if (y == 0) return false;
  for (const auto& l : ls) {
    long v = vp(y, l);
    if (v <= 0 || v % 2 == 0) return false;
  }
  return true;
}

/// I^c + I^c = intersection of l Z_(l) over Delta_{a,b} and P(c).
inline RadicalIdeal i_sum_ideal(const Rat& a, const Rat& b, const Rat& c) {
  return RadicalIdeal::of(intersect_primes(delta(a, b).primes, odd_primes(c)));
}

/// J1 + J2 inside the sum ring: conditions only at the common primes.
inline RadicalIdeal radical_sum(const RadicalIdeal& j1, const RadicalIdeal& j2) {
  if (j1.full_field) return j2;
  if (j2.full_field) return j1;
  return RadicalIdeal::of(intersect_primes(j1.primes, j2.primes));
}

/// Intersection of two radicals: conditions at the union of primes.
inline RadicalIdeal radical_intersection(const RadicalIdeal& j1, const RadicalIdeal& j2) {
  if (j1.full_field) return j2;
  if (j2.full_field) return j1;
  std::vector<Int> all = j1.primes;
  all.insert(all.end(), j2.primes.begin(), j2.primes.end());
  return RadicalIdeal::of(all);
}

/// J_{a,b} = (I^a + I^a) and (I^b + I^b), the independent route to the four cases.
inline RadicalIdeal jacobson_via_isets(const Rat& a, const Rat& b) {
  if (delta(a, b).empty()) return RadicalIdeal::full();
  return radical_intersection(i_sum_ideal(a, b, a), i_sum_ideal(a, b, b));
}

/// Radical of a semilocal ring without archimedean bound.
inline RadicalIdeal radical_of(const SemilocalRing& r) {
  if (r.arch_bound) throw UnsupportedCase("radical_of: archimedean-bounded set");
  return RadicalIdeal::of(r.primes);
}

/// Splits x in the ideal prod l Z_(l) as y + (x - y) with both parts having
/// odd positive valuation at each l; returns y.
inline Rat i_set_split(const Rat& x, const std::vector<Int>& primes) {
  std::vector<std::pair<Int, Int>> system;
  for (const auto& l : primes) {
    long m = x == 0 ? 0 : vp(x, l);
    if (x != 0 && m < 1) throw DomainError("i_set_split: element outside the ideal");
    Int mod, target;
    if (x == 0) {
      mod = l * l;
      target = l;  // v(y) = 1, v(-y) = 1
    } else if (m % 2 != 0) {
      unsigned long e = static_cast<unsigned long>(m) + 3;
      mod = pow_int(l, e);
      target = mod_floor(rat_mod(x, mod) - pow_int(l, e - 1), mod);  // v(x-y) = m+2
    } else {
      unsigned long e = static_cast<unsigned long>(m);
      mod = pow_int(l, e);
      target = pow_int(l, e - 1);  // v(y) = m-1, v(x-y) = m-1
    }
    system.emplace_back(target, mod);
  }
  return Rat(crt(system)->first);
}

}  // namespace zdef
