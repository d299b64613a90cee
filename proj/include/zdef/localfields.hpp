#pragma once

// Local computations at a single place of Q: Hilbert symbols, local
// squares, isotropy and representation by diagonal forms, trace sets U_p,
// local trace membership and 2-adic norm groups.

#include <array>
#include <set>
#include <string>
#include <vector>

#include "zdef/exactnum.hpp"

namespace zdef {

/// A place of Q: a rational prime, or the archimedean place.
class Place {
 public:
  static Place infinity() { return Place(); }
  static Place prime(Int p) {
    if (!is_prime(p)) throw DomainError("Place: " + p.get_str() + " is not prime");
    return Place(std::move(p));
  }

  bool is_infinite() const { return infinite_; }
  const Int& p() const {
    if (infinite_) throw DomainError("Place: archimedean place has no prime");
    return p_;
  }
  std::string str() const { return infinite_ ? "inf" : p_.get_str(); }

  bool operator==(const Place& o) const {
    return infinite_ == o.infinite_ && (infinite_ || p_ == o.p_);
  }

 private:
  Place() : infinite_(true) {}
  explicit Place(Int p) : infinite_(false), p_(std::move(p)) {}
  bool infinite_;
  Int p_;
};

/// Hilbert symbol (a,b)_v.
inline int hilbert(const Rat& a, const Rat& b, const Place& v) {
  if (a == 0 || b == 0) throw DomainError("hilbert: arguments must be nonzero");
  if (v.is_infinite()) return (a < 0 && b < 0) ? -1 : 1;
  const Int& p = v.p();
  long alpha = vp(a, p), beta = vp(b, p);
  Rat u = unit_part(a, p), w = unit_part(b, p);
  if (p == 2) {
    long um = rat_mod(u, 8).get_si(), wm = rat_mod(w, 8).get_si();
    auto eps = [](long x) { return (x % 4 == 3) ? 1 : 0; };
    auto omega = [](long x) { return (x == 3 || x == 5) ? 1 : 0; };
    long e = eps(um) * eps(wm) + (alpha & 1) * omega(wm) + (beta & 1) * omega(um);
    return (e % 2 == 0) ? 1 : -1;
  }
  int s = 1;
  if ((alpha & 1) && (beta & 1) && mod_floor(p, 4) == 3) s = -s;
  if (beta & 1) s *= legendre_gen(u, p);
  if (alpha & 1) s *= legendre_gen(w, p);
  return s;
}

inline bool is_local_square(const Rat& x, const Place& v) {
  if (x == 0) return true;
  if (v.is_infinite()) return x > 0;
  const Int& p = v.p();
  if (vp(x, p) % 2 != 0) return false;
  if (p == 2) return sqclass2(x).unit_class == 1;
  return legendre_gen(x, p) == 1;
}

/// Whether the diagonal form sum a_i X_i^2 has a nontrivial zero over Q_v.
inline bool form_isotropic(const std::vector<Rat>& coeffs, const Place& v) {
  for (const auto& c : coeffs)
    if (c == 0) throw DomainError("form_isotropic: degenerate form");
  const std::size_t n = coeffs.size();
  if (v.is_infinite()) {
    bool pos = false, neg = false;
    for (const auto& c : coeffs) (c > 0 ? pos : neg) = true;
    return pos && neg;
  }
  if (n <= 1) return false;
  Rat d = 1;
  for (const auto& c : coeffs) d *= c;
  if (n == 2) return is_local_square(-d, v);
  if (n >= 5) return true;
  int eps = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) eps *= hilbert(coeffs[i], coeffs[j], v);
  if (n == 3) return hilbert(Rat(-1), Rat(-d), v) == eps;
  return !is_local_square(d, v) || eps == hilbert(Rat(-1), Rat(-1), v);
}

/// Whether A x^2 + B y^2 + C z^2 = c is solvable over Q_v (c = 0: nontrivially).
inline bool ternary_represents(const Rat& c, const Rat& A, const Rat& B, const Rat& C,
                               const Place& v) {
  if (A == 0 || B == 0 || C == 0) throw DomainError("ternary_represents: degenerate form");
  if (c == 0) return form_isotropic({A, B, C}, v);
  return form_isotropic({A, B, C, Rat(-c)}, v);
}

// ---------------------------------------------------------------------------
// Trace sets

struct TraceSetUp {
  Int p;
  std::vector<Int> elements;  // ascending residues
  bool contains(const Int& s) const {
    return std::binary_search(elements.begin(), elements.end(), mod_floor(s, p));
  }
};

/// U_p = { s in F_p : x^2 - s x + 1 irreducible over F_p }, by root search.
inline TraceSetUp up_set(const Int& p) {
  if (!is_prime(p)) throw DomainError("up_set: modulus must be prime");
  if (!p.fits_ulong_p() || p > 10'000'000UL) throw DomainError("up_set: prime too large to enumerate");
  const unsigned long P = p.get_ui();
  std::vector<bool> has_root(P, false);
  // x^2 - s x + 1 has the root x != 0 iff s = x + 1/x.
  for (unsigned long x = 1; x < P; ++x) {
    unsigned long inv = inverse_mod(Int(x), p)->get_ui();
    has_root[(x + inv) % P] = true;
  }
  TraceSetUp out{p, {}};
  for (unsigned long s = 0; s < P; ++s)
    if (!has_root[s]) out.elements.emplace_back(s);
  return out;
}

/// t in S_{a,b}(Q_v): t/2 is the reduced trace of a norm-one element of the
/// quaternion algebra (a,b) over the completion at v.
inline bool s_local_member(const Rat& t, const Rat& a, const Rat& b, const Place& v) {
  if (a == 0 || b == 0) throw DomainError("s_local_member: a and b must be nonzero");
  if (hilbert(a, b, v) == 1) return true;
  if (v.is_infinite()) return t >= -2 && t <= 2;
  if (t != 0 && vp(t, v.p()) < 0) return false;
  Rat x1 = t / 2;
  Rat c = x1 * x1 - 1;
  if (c == 0) return true;
  return ternary_represents(c, a, b, Rat(-a * b), v);
}

// ---------------------------------------------------------------------------
// 2-adic square classes and norm groups

/// Representative of the 2-adic square class of x from {1,2,3,5,6,10,15,30}.
inline int class_rep2(const Rat& x) {
  auto c = sqclass2(x);
  static constexpr std::array<int, 8> kUnitRep{0, 1, 0, 3, 0, 5, 0, 15};
  int r = kUnitRep[static_cast<std::size_t>(c.unit_class)];
  return c.val_parity ? 2 * r : r;
}

inline constexpr std::array<int, 8> kSquareClassReps2{1, 2, 3, 5, 6, 10, 15, 30};

/// Subgroup of Q_2^x / squares, listed by class representatives (ascending).
struct NormGroup2 {
  std::vector<int> classes;
  bool contains(const Rat& y) const {
    return std::binary_search(classes.begin(), classes.end(), class_rep2(y));
  }
  bool operator==(const NormGroup2&) const = default;
};

/// Subgroup generated by squares and the given elements.
inline NormGroup2 generated_subgroup2(const std::vector<Rat>& gens) {
  std::set<int> group{1};
  bool grew = true;
  while (grew) {
    grew = false;
    for (int c : std::vector<int>(group.begin(), group.end()))
      for (const auto& g : gens)
        if (group.insert(class_rep2(Rat(c) * g)).second) grew = true;
  }
  return {{group.begin(), group.end()}};
}

/// Image of the norm from Q_2(sqrt x), found by enumerating u^2 - x w^2.
inline NormGroup2 norm_group_2adic(const Rat& x) {
  if (x == 0) throw DomainError("norm_group_2adic: zero");
  if (is_2adic_square(x)) return {{kSquareClassReps2.begin(), kSquareClassReps2.end()}};
  const Rat r(class_rep2(x));
  std::vector<Rat> norms;
  std::set<int> seen;
  for (int u = 0; u < 32; ++u)
    for (int w = 0; w < 32; ++w) {
      Rat n = Rat(u * u) - r * (w * w);
      if (n != 0 && seen.insert(class_rep2(n)).second) norms.push_back(n);
    }
  return generated_subgroup2(norms);
}

}  // namespace zdef
