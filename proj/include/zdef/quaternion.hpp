#pragma once

// Global objects attached to a pair (a,b): the ramification set, trace
// membership in S_{a,b} and T_{a,b}, and the explicit two-summand
// decomposition of elements of T_{a,b}.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "zdef/exactnum.hpp"
#include "zdef/localfields.hpp"

namespace zdef {

/// Finite set of places; primes sorted and duplicate-free.
struct PlaceSet {
  std::vector<Int> primes;
  bool has_infinity = false;

  bool empty() const { return primes.empty() && !has_infinity; }
  std::size_t size() const { return primes.size() + (has_infinity ? 1 : 0); }
  bool contains(const Int& p) const { return std::binary_search(primes.begin(), primes.end(), p); }
  bool contains(const Place& v) const { return v.is_infinite() ? has_infinity : contains(v.p()); }

  void insert(const Int& p) {
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    if (it == primes.end() || *it != p) primes.insert(it, p);
  }

  std::vector<Place> places() const {
    std::vector<Place> out;
    for (const auto& p : primes) out.push_back(Place::prime(p));
    if (has_infinity) out.push_back(Place::infinity());
    return out;
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < primes.size(); ++i) s += (i ? ", " : "") + primes[i].get_str();
    if (has_infinity) s += primes.empty() ? "inf" : ", inf";
    return s + "}";
  }

  bool operator==(const PlaceSet&) const = default;
};

inline std::vector<Int> intersect_primes(const std::vector<Int>& a, const std::vector<Int>& b) {
  std::vector<Int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Finite places that can ramify for (a,b): 2 and every odd prime of a or b.
inline std::vector<Int> candidate_primes(const Rat& a, const Rat& b) {
  std::vector<Int> out{Int(2)};
  for (const Rat* x : {&a, &b})
    for (auto& p : support(*x)) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// The 16 non-split pairs over Q_2, as square-class representatives.

inline constexpr std::array<std::pair<int, int>, 16> kRamified2Table{{
    {2, 3}, {2, 5}, {2, 6}, {2, 10},
    {3, 3}, {3, 10}, {3, 15},
    {5, 6}, {5, 10}, {5, 30},
    {6, 6}, {6, 15},
    {10, 30},
    {15, 15}, {15, 30},
    {30, 30},
}};

/// Reduces (a,b) modulo rational squares and integers = 1 mod 8 to
/// representatives in {1,2,3,5,6,10,15,30}, ordered so that first <= second.
inline std::pair<int, int> normalize_2adic_pair(const Rat& a, const Rat& b) {
  int ra = class_rep2(a), rb = class_rep2(b);
  if (ra > rb) std::swap(ra, rb);
  return {ra, rb};
}

inline bool ramified_at_2_by_table(const Rat& a, const Rat& b) {
  auto key = normalize_2adic_pair(a, b);
  return std::find(kRamified2Table.begin(), kRamified2Table.end(), key) != kRamified2Table.end();
}

/// Explicit valuation/Legendre criterion at an odd prime.
inline bool ramified_at_odd_by_criterion(const Rat& a, const Rat& b, const Int& p) {
  bool oa = vp(a, p) % 2 != 0, ob = vp(b, p) % 2 != 0;
  if (oa && !ob) return legendre_gen(b, p) == -1;
  if (!oa && ob) return legendre_gen(a, p) == -1;
  if (oa && ob) return legendre_gen(Rat(-a * b), p) == -1;
  return false;
}

inline PlaceSet delta_by_criterion(const Rat& a, const Rat& b) {
  PlaceSet out;
  for (const auto& p : candidate_primes(a, b)) {
    bool ram = (p == 2) ? ramified_at_2_by_table(a, b) : ramified_at_odd_by_criterion(a, b, p);
    if (ram) out.primes.push_back(p);
  }
  out.has_infinity = a < 0 && b < 0;
  return out;
}

inline PlaceSet delta_by_hilbert(const Rat& a, const Rat& b) {
  PlaceSet out;
  for (const auto& p : candidate_primes(a, b))
    if (hilbert(a, b, Place::prime(p)) == -1) out.primes.push_back(p);
  out.has_infinity = hilbert(a, b, Place::infinity()) == -1;
  return out;
}

/// Ramification set, computed by both routes; disagreement aborts.
inline PlaceSet delta(const Rat& a, const Rat& b) {
  if (a == 0 || b == 0) throw DomainError("delta: a and b must be nonzero");
  PlaceSet by_table = delta_by_criterion(a, b);
  PlaceSet by_symbol = delta_by_hilbert(a, b);
  if (!(by_table == by_symbol))
    throw InconsistencyError("delta(" + a.get_str() + ", " + b.get_str() + "): criterion gives " +
                             by_table.str() + " but Hilbert symbols give " + by_symbol.str());
  return by_table;
}

// ---------------------------------------------------------------------------

/// A pair (a,b) with its ramification set cached at construction.
class QuaternionPair {
 public:
  QuaternionPair(Rat a, Rat b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_ == 0 || b_ == 0) throw DomainError("QuaternionPair: a and b must be nonzero");
    delta_ = zdef::delta(a_, b_);
  }

  const Rat& a() const { return a_; }
  const Rat& b() const { return b_; }
  const PlaceSet& delta() const { return delta_; }

  /// t in S_{a,b}(Q), via local conditions at the ramified places.
  bool s_member(const Rat& t) const {
    for (const auto& v : delta_.places())
      if (!s_local_member(t, a_, b_, v)) return false;
    return true;
  }

  /// t in T_{a,b}: integral at every ramified prime, |t| <= 4 if inf ramifies.
  bool t_member(const Rat& t) const {
    if (delta_.has_infinity && (t < -4 || t > 4)) return false;
    if (t == 0) return true;
    for (const auto& p : delta_.primes)
      if (vp(t, p) < 0) return false;
    return true;
  }

  /// Writes t = s + (t - s) with both summands in S_{a,b}.
  std::pair<Rat, Rat> t_decompose(const Rat& t) const;

 private:
  Rat a_, b_;
  PlaceSet delta_;
};

inline bool s_member(const Rat& t, const Rat& a, const Rat& b) { return QuaternionPair(a, b).s_member(t); }
inline bool t_member(const Rat& t, const Rat& a, const Rat& b) { return QuaternionPair(a, b).t_member(t); }

namespace detail {

/// Residue-level membership in the open sets V_p (residue r modulo M_p).
inline bool in_v_set(const Int& r, const TraceSetUp& up) {
  const Int& p = up.p;
  if (p == 2) return mod_floor(r, 2) == 1 || mod_floor(r, 8) == 4;
  if (up.contains(r)) return true;
  if (p > 11) return false;
  Int p2 = p * p;
  for (int sgn : {2, -2})
    if (mod_floor(r - sgn, p) == 0 && mod_floor(r - sgn, p2) != 0) return true;
  return false;
}

inline Int v_set_modulus(const Int& p) {
  if (p == 2) return 8;
  if (p <= 11) return p * p;
  return p;
}

}  // namespace detail

inline std::pair<Rat, Rat> QuaternionPair::t_decompose(const Rat& t) const {
  if (!t_member(t))
    throw DomainError("t_decompose: " + t.get_str() + " is not in T_{" + a_.get_str() + "," +
                      b_.get_str() + "}");
  auto accept = [&](const Rat& s) { return s_member(s) && s_member(Rat(t - s)); };

  // Even split first; covers t = +-4 (as +-2 +-2), t = 0 and unramified pairs.
  Rat half = t / 2;
  if (accept(half)) return {half, Rat(t - half)};

  // Pick residues s_p with s_p, t - s_p in V_p at each ramified prime.
  std::vector<std::pair<Int, Int>> system;
  Int modulus = 1;
  for (const auto& p : delta_.primes) {
    Int m = detail::v_set_modulus(p);
    Int tm = rat_mod(t, m);
    TraceSetUp up = up_set(p);
    std::optional<Int> chosen;
    for (Int r = 0; r < m && !chosen; ++r)
      if (detail::in_v_set(r, up) && detail::in_v_set(mod_floor(tm - r, m), up)) chosen = r;
    if (!chosen)
      throw InconsistencyError("t_decompose: V_p + V_p misses " + tm.get_str() + " mod " + m.get_str());
    system.emplace_back(*chosen, m);
    modulus *= m;
  }

  Rat s;
  if (!delta_.has_infinity) {
    s = crt(system)->first;
  } else {
    // s = S/D with D coprime to the ramified primes and spacing modulus/D
    // small enough to land within (4 - |t|)/4 of t/2.
    Rat width = 4 - abs(t);
    Int D = 1;
    auto coprime = [&](const Int& d) {
      for (const auto& p : delta_.primes)
        if (d % p == 0) return false;
      return true;
    };
    while (Rat(modulus, D) >= width / 4 || !coprime(D)) ++D;
    std::vector<std::pair<Int, Int>> scaled;
    for (const auto& [r, m] : system) scaled.emplace_back(mod_floor(r * D, m), m);
    Int base = crt(scaled)->first;
    // nearest S = base + k*modulus to D*t/2
    Rat target = Rat(D) * t / 2;
    Rat k_real = (target - base) / modulus;
    Int k;
    mpz_fdiv_q(k.get_mpz_t(), Int(k_real.get_num() * 2 + k_real.get_den()).get_mpz_t(),
               Int(2 * k_real.get_den()).get_mpz_t());
    s = make_rat(base + k * modulus, D);
  }
  if (!accept(s))
    throw InconsistencyError("t_decompose: constructed summand " + s.get_str() +
                             " failed the trace check for (" + a_.get_str() + "," + b_.get_str() + ")");
  return {s, Rat(t - s)};
}

inline std::pair<Rat, Rat> t_decompose(const Rat& t, const Rat& a, const Rat& b) {
  return QuaternionPair(a, b).t_decompose(t);
}

}  // namespace zdef
