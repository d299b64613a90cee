#pragma once

// Exact rational arithmetic substrate: valuations, factorization,
// residue symbols, 2-adic square classes and constrained prime search.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zdef {

using Int = mpz_class;
using Rat = mpq_class;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when two independent computations of the same quantity disagree.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnsupportedCase : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoundExhausted : public std::runtime_error {
 public:
  BoundExhausted(const std::string& what, Int ceiling)
      : std::runtime_error(what + " (ceiling " + ceiling.get_str() + ")"),
        ceiling_(std::move(ceiling)) {}
  const Int& ceiling() const { return ceiling_; }

 private:
  Int ceiling_;
};

inline constexpr unsigned long kDefaultPrimeBound = 10'000'000UL;

// ---------------------------------------------------------------------------
// Text format

inline Rat make_rat(const Int& num, const Int& den = 1) {
  if (den == 0) throw DomainError("zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rat& x) { return x.get_str(); }
inline std::string to_string(const Int& x) { return x.get_str(); }

/// Parses "num/den" or "num" with an optional leading '-' (ASCII or U+2212).
inline Rat parse_rat(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  };
  std::string_view s = trim(text);
  bool negative = false;
  static constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";
  if (s.substr(0, kUnicodeMinus.size()) == kUnicodeMinus) {
    negative = true;
    s.remove_prefix(kUnicodeMinus.size());
  } else if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto digits = [](std::string_view d) {
    return !d.empty() && std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  std::string_view num = s, den = "1";
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
  }
  if (!digits(num) || !digits(den))
    throw DomainError("malformed rational: '" + std::string(text) + "'");
  Int n(std::string(num), 10), d(std::string(den), 10);
  if (d == 0) throw DomainError("zero denominator: '" + std::string(text) + "'");
  return make_rat(negative ? Int(-n) : n, d);
}

// ---------------------------------------------------------------------------
// Integer helpers

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

/// Least nonnegative residue of x modulo m > 0.
inline Int mod_floor(const Int& x, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int powm(const Int& base, const Int& exp, const Int& m) {
  Int r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline std::optional<Int> inverse_mod(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) return std::nullopt;
  return mod_floor(r, m);
}

inline Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rat pow_rat(const Rat& base, long e) {
  Rat b = e < 0 ? Rat(1 / base) : base;
  unsigned long ue = static_cast<unsigned long>(e < 0 ? -e : e);
  return make_rat(pow_int(b.get_num(), ue), pow_int(b.get_den(), ue));
}

/// Residue of a p-integral rational x modulo m (all primes of m must not divide den).
inline Int rat_mod(const Rat& x, const Int& m) {
  auto inv = inverse_mod(x.get_den(), m);
  if (!inv) throw DomainError("rat_mod: denominator not invertible modulo " + m.get_str());
  return mod_floor(x.get_num() * *inv, m);
}

inline bool is_perfect_square(const Int& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline bool is_rational_square(const Rat& x) {
  return x >= 0 && is_perfect_square(x.get_num()) && is_perfect_square(x.get_den());
}

inline Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

/// A square root of a modulo an odd prime p (Tonelli-Shanks), or nullopt.
inline std::optional<Int> sqrt_mod(const Int& a, const Int& p) {
  Int n = mod_floor(a, p);
  if (n == 0) return Int(0);
  if (powm(n, (p - 1) / 2, p) != 1) return std::nullopt;
  Int q = p - 1;
  unsigned long s = 0;
  while (mpz_even_p(q.get_mpz_t())) {
    q /= 2;
    ++s;
  }
  Int z = 2;
  while (powm(z, (p - 1) / 2, p) == 1) ++z;
  Int c = powm(z, q, p), r = powm(n, (q + 1) / 2, p), t = powm(n, q, p);
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    Int tt = t;
    while (tt != 1) {
      tt = mod_floor(tt * tt, p);
      ++i;
    }
    Int b = powm(c, pow_int(2, m - i - 1), p);
    r = mod_floor(r * b, p);
    c = mod_floor(b * b, p);
    t = mod_floor(t * c, p);
    m = i;
  }
  return r;
}

/// Chinese remaindering over arbitrary (not necessarily coprime) moduli.
/// Returns (r, M) with solutions exactly r + M*Z, or nullopt when inconsistent.
inline std::optional<std::pair<Int, Int>> crt(const std::vector<std::pair<Int, Int>>& system) {
  Int r = 0, m = 1;
  for (const auto& [res, mod] : system) {
    if (mod <= 0) throw DomainError("crt: modulus must be positive");
    Int g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t(), mod.get_mpz_t());
    Int diff = res - r;
    if (mod_floor(diff, g) != 0) return std::nullopt;
    Int lcm = m / g * mod;
    // r + m * s * (diff / g)
    r = mod_floor(r + m * mod_floor(s * (diff / g), mod / g), lcm);
    m = lcm;
  }
  return std::make_pair(r, m);
}

// ---------------------------------------------------------------------------
// Primality and factorization

namespace detail {

inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> table = [] {
    constexpr std::uint32_t kLimit = 1'000'000;
    std::vector<bool> composite(kLimit + 1, false);
    std::vector<std::uint32_t> primes;
    for (std::uint32_t i = 2; i <= kLimit; ++i) {
      if (composite[i]) continue;
      primes.push_back(i);
      for (std::uint64_t j = std::uint64_t(i) * i; j <= kLimit; j += i) composite[j] = true;
    }
    return primes;
  }();
  return table;
}

inline bool miller_rabin_round(const Int& n, const Int& d, unsigned long s, const Int& base) {
  Int a = mod_floor(base, n);
  if (a == 0) return true;
  Int x = powm(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

/// Miller-Rabin: deterministic below 3.3e24 (first 13 prime bases),
/// probabilistic beyond with `extra_rounds` pseudo-random bases.
inline bool is_prime(const Int& n, int extra_rounds = 25) {
  if (n < 2) return false;
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  Int d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  d >>= s;
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u})
    if (!detail::miller_rabin_round(n, d, s, p)) return false;
  static const Int kDeterministicLimit("3317044064679887385961981", 10);
  if (n < kDeterministicLimit) return true;
  // Fixed pseudo-random bases keep the verdict deterministic across runs.
  Int base = 43;
  for (int i = 0; i < extra_rounds; ++i) {
    base = mod_floor(base * base + 12345, n - 3) + 2;
    if (!detail::miller_rabin_round(n, d, s, base)) return false;
  }
  return true;
}

namespace detail {

inline Int pollard_brent(const Int& n) {
  if (n % 2 == 0) return 2;
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1, m = 128;
    auto f = [&](const Int& v) { return mod_floor(v * v + c, n); };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mod_floor(q * abs_int(x - y), n);
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(abs_int(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(Int n, std::map<Int, long>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n] += 1;
    return;
  }
  Int d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/// Factorization of |n| > 0: trial division to 10^6, then Pollard-Brent.
inline std::map<Int, long> factor_int(Int n) {
  if (n == 0) throw DomainError("factor_int: zero");
  n = abs_int(n);
  std::map<Int, long> out;
  for (std::uint32_t p : detail::small_primes()) {
    if (Int(p) * p > n) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      long e = static_cast<long>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), Int(p).get_mpz_t()));
      out[Int(p)] = e;
    }
  }
  if (n > 1) detail::factor_into(n, out);
  return out;
}

// ---------------------------------------------------------------------------
// Valuations and factored rationals

/// v_p(x) for nonzero x.
inline long vp(const Rat& x, const Int& p) {
  if (x == 0) throw DomainError("vp: zero has no finite valuation");
  Int tmp;
  long up = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.get_num_mpz_t(), p.get_mpz_t()));
  long down = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.get_den_mpz_t(), p.get_mpz_t()));
  return up - down;
}

/// The p-adic unit part x * p^(-v_p(x)).
inline Rat unit_part(const Rat& x, const Int& p) {
  Int n = x.get_num(), d = x.get_den();
  mpz_remove(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
  mpz_remove(d.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t());
  return make_rat(n, d);
}

struct FactoredRat {
  int sign = 1;
  std::map<Int, long> factors;  // no zero exponents

  Rat value() const {
    Int num = 1, den = 1;
    for (const auto& [p, e] : factors) {
      if (e > 0) num *= pow_int(p, static_cast<unsigned long>(e));
      else den *= pow_int(p, static_cast<unsigned long>(-e));
    }
    return make_rat(sign * num, den);
  }

  /// P(x): primes with odd exponent, ascending.
  std::vector<Int> odd_primes() const {
    std::vector<Int> out;
    for (const auto& [p, e] : factors)
      if (e % 2 != 0) out.push_back(p);
    return out;
  }

  bool operator==(const FactoredRat&) const = default;
};

inline FactoredRat factor_rat(const Rat& x) {
  if (x == 0) throw DomainError("factor_rat: zero");
  FactoredRat f;
  f.sign = x < 0 ? -1 : 1;
  for (auto& [p, e] : factor_int(x.get_num())) f.factors[p] += e;
  for (auto& [p, e] : factor_int(x.get_den())) f.factors[p] -= e;
  std::erase_if(f.factors, [](const auto& kv) { return kv.second == 0; });
  return f;
}

/// P(x) = {l : v_l(x) odd}.
inline std::vector<Int> odd_primes(const Rat& x) { return factor_rat(x).odd_primes(); }

/// Primes dividing numerator or denominator.
inline std::vector<Int> support(const Rat& x) {
  std::vector<Int> out;
  if (x == 0) return out;
  for (const auto& [p, e] : factor_rat(x).factors) out.push_back(p);
  return out;
}

// ---------------------------------------------------------------------------
// Residue symbols

/// Generalized Legendre symbol: +1 iff the p-adic unit part of a is a square mod p.
inline int legendre_gen(const Rat& a, const Int& p) {
  if (a == 0) throw DomainError("legendre_gen: zero argument");
  if (p == 2) throw DomainError("legendre_gen: p = 2 has no Legendre symbol; use sqclass2");
  if (p < 3) throw DomainError("legendre_gen: modulus must be an odd prime");
  Rat u = unit_part(a, p);
  // u = n/d is a square mod p iff n*d is.
  Int r = mod_floor(u.get_num() * u.get_den(), p);
  Int e = powm(r, (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// 2-adic square classes

struct SquareClass2 {
  int val_parity = 0;  // v_2(x) mod 2
  int unit_class = 1;  // odd part mod 8, in {1,3,5,7}
  bool operator==(const SquareClass2&) const = default;
};

inline SquareClass2 sqclass2(const Rat& x) {
  if (x == 0) throw DomainError("sqclass2: zero");
  long v = vp(x, 2);
  Rat u = unit_part(x, 2);
  return {static_cast<int>(((v % 2) + 2) % 2), static_cast<int>(rat_mod(u, 8).get_si())};
}

/// k such that x is in k + 8 Z_(2), or nullopt when v_2(x) < 0.
inline std::optional<int> mod8_class(const Rat& x) {
  if (x != 0 && vp(x, 2) < 0) return std::nullopt;
  return static_cast<int>(rat_mod(x, 8).get_si());
}

/// Whether x is a square in the 2-adic field.
inline bool is_2adic_square(const Rat& x) {
  if (x == 0) return true;
  auto c = sqclass2(x);
  return c.val_parity == 0 && c.unit_class == 1;
}

// ---------------------------------------------------------------------------
// Constrained prime search

struct SymbolConstraint {
  Int prime;  // odd prime l
  int sign;   // required value of legendre_gen(l, q)
};

struct ResidueConstraint {
  Int modulus;
  Int residue;
};

/// Smallest prime q <= bound with q = k mod 8, legendre_gen(l_i, q) = sign_i and
/// q = r_j mod m_j. Constraint primes themselves are never returned.
inline Int find_prime(int mod8, const std::vector<SymbolConstraint>& symbols,
                      const std::vector<ResidueConstraint>& residues,
                      const Int& bound = Int(static_cast<unsigned long>(kDefaultPrimeBound))) {
  if (mod8 < 0 || mod8 > 7 || mod8 % 2 == 0) throw DomainError("find_prime: class mod 8 must be odd");
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i].prime == 2 || !is_prime(symbols[i].prime))
      throw DomainError("find_prime: symbol constraints need odd primes");
    if (symbols[i].sign != 1 && symbols[i].sign != -1)
      throw DomainError("find_prime: symbol sign must be +1 or -1");
    for (std::size_t j = 0; j < i; ++j)
      if (symbols[j].prime == symbols[i].prime)
        throw DomainError("find_prime: duplicate constraint prime");
  }
  std::vector<std::pair<Int, Int>> system{{Int(mod8), Int(8)}};
  for (const auto& rc : residues) system.emplace_back(mod_floor(rc.residue, rc.modulus), rc.modulus);
  auto solved = crt(system);
  if (!solved) throw DomainError("find_prime: inconsistent residue system");
  const auto& [start, step] = *solved;
  for (Int q = start; q <= bound; q += step) {
    if (!is_prime(q)) continue;
    bool ok = true;
    for (const auto& c : symbols) {
      if (c.prime == q || legendre_gen(Rat(c.prime), q) != c.sign) {
        ok = false;
        break;
      }
    }
    if (ok) return q;
  }
  throw BoundExhausted("find_prime: no qualifying prime below bound", bound);
}

}  // namespace zdef
