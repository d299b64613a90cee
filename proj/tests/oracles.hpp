#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's number theory; everything is brute force over small moduli.

#include <cstdint>
#include <set>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Int = mpz_class;
using Rat = mpq_class;

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline long mod(long a, long m) { return ((a % m) + m) % m; }

inline long mod(const Int& a, long m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r.get_si();
}

/// v_p by repeated division.
inline long valuation(const Rat& x, long p) {
  long v = 0;
  Int n = x.get_num(), d = x.get_den();
  while (n % p == 0) n /= p, ++v;
  while (d % p == 0) d /= p, --v;
  return v;
}

/// Squares modulo m.
inline std::set<long> squares_mod(long m) {
  std::set<long> s;
  for (long x = 0; x < m; ++x) s.insert(x * x % m);
  return s;
}

/// Legendre symbol of the p-unit part of x by enumerating squares mod p.
inline int legendre(const Rat& x, long p) {
  Int n = x.get_num(), d = x.get_den();
  while (n % p == 0) n /= p;
  while (d % p == 0) d /= p;
  long u = mod(n, p) * mod(d, p) % p;  // d is a square iff d^-1 is; u has the class of n/d
  auto sq = squares_mod(p);
  return sq.count(u) ? 1 : -1;
}

/// U_p: traces s with x^2 - s x + 1 irreducible, by testing every x for a root.
inline std::vector<long> up_set(long p) {
  std::vector<long> out;
  for (long s = 0; s < p; ++s) {
    bool root = false;
    for (long x = 0; x < p && !root; ++x) root = mod(x * x - s * x + 1, p) == 0;
    if (!root) out.push_back(s);
  }
  return out;
}

/// Primitive zero of a x^2 + b y^2 - z^2 modulo p^k, by exhaustion.
inline bool primitive_zero_mod(long a, long b, long p, int k) {
  long m = 1;
  for (int i = 0; i < k; ++i) m *= p;
  std::vector<long> sq(static_cast<std::size_t>(m));
  for (long x = 0; x < m; ++x) sq[static_cast<std::size_t>(x)] = x * x % m;
  long am = mod(a, m), bm = mod(b, m);
  std::set<long> zsq;
  for (long z = 0; z < m; ++z) zsq.insert(sq[static_cast<std::size_t>(z)]);
  for (long x = 0; x < m; ++x)
    for (long y = 0; y < m; ++y) {
      long lhs = (am * sq[static_cast<std::size_t>(x)] + bm * sq[static_cast<std::size_t>(y)]) % m;
      bool xy_unit = x % p != 0 || y % p != 0;
      for (long z = 0; z < m; ++z) {
        if (sq[static_cast<std::size_t>(z)] != lhs) continue;
        if (xy_unit || z % p != 0) return true;
      }
    }
  return false;
}

/// Hilbert symbol at a prime for integers with valuation at most 1, by
/// primitive solutions mod p^2 (odd p) or mod 2^6.
inline int hilbert(long a, long b, long p) {
  return primitive_zero_mod(a, b, p, p == 2 ? 6 : 2) ? 1 : -1;
}

/// Primitive (x, y, z, w) with A x^2 + B y^2 + C z^2 = c w^2 modulo p^k.
inline bool ternary_mod(long c, long A, long B, long C, long p, int k) {
  long m = 1;
  for (int i = 0; i < k; ++i) m *= p;
  for (long x = 0; x < m; ++x)
    for (long y = 0; y < m; ++y)
      for (long z = 0; z < m; ++z)
        for (long w = 0; w < m; ++w) {
          if (x % p == 0 && y % p == 0 && z % p == 0 && w % p == 0) continue;
          if (mod(A * x * x + B * y * y + C * z * z - c * w * w, m) == 0) return true;
        }
  return false;
}

/// x is a square in Q_2: even valuation and odd part = 1 mod 8.
inline bool two_adic_square(const Rat& x) {
  if (x == 0) return true;
  long v = valuation(x, 2);
  if (v % 2 != 0) return false;
  Int n = x.get_num(), d = x.get_den();
  while (n % 2 == 0) n /= 2;
  while (d % 2 == 0) d /= 2;
  return mod(Int(n * d), 8) == 1;
}

/// x in the intersection of Z_(l): no l divides the denominator.
inline bool in_localization(const Rat& x, const std::vector<long>& primes) {
  for (long l : primes)
    if (x.get_den() % l == 0) return false;
  return true;
}

/// x in the intersection of l Z_(l): numerator divisible, denominator not.
inline bool in_radical(const Rat& x, const std::vector<long>& primes) {
  if (x == 0) return true;
  for (long l : primes)
    if (x.get_den() % l == 0 || x.get_num() % l != 0) return false;
  return true;
}

inline bool is_square(const Rat& x) {
  if (x < 0) return false;
  Int n = x.get_num(), d = x.get_den();
  return mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t());
}

}  // namespace oracle
