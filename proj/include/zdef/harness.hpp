#pragma once

// Fixture checks against the published tables and the seeded cross-check
// batteries. Every battery is deterministic given its seed.

#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zdef/formulas.hpp"
#include "zdef/localfields.hpp"
#include "zdef/predicates.hpp"
#include "zdef/quaternion.hpp"
#include "zdef/semilocal.hpp"
#include "zdef/witness.hpp"

namespace zdef {

struct VerifyFailure {
  std::string input, expected, got;
};

struct VerifyReport {
  VerifyReport() = default;
  explicit VerifyReport(std::string name) : fixture(std::move(name)) {}

  std::string fixture;
  std::size_t total = 0;
  std::size_t passed = 0;
  std::vector<VerifyFailure> failures;

  bool ok() const { return failures.empty() && passed == total; }

  void check(bool good, const std::string& input, const std::string& expected, const std::string& got) {
    ++total;
    if (good) ++passed;
    else failures.push_back({input, expected, got});
  }
  void check(bool good, const std::string& input) { check(good, input, "true", "false"); }

  void absorb(const VerifyReport& o) {
    total += o.total;
    passed += o.passed;
    for (const auto& f : o.failures) failures.push_back({o.fixture + ": " + f.input, f.expected, f.got});
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["fixture"] = fixture;
    j["total"] = total;
    j["passed"] = passed;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& f : failures) arr.push_back({{"input", f.input}, {"expected", f.expected}, {"got", f.got}});
    j["failures"] = arr;
    return j;
  }

  std::string summary() const {
    return fixture + ": " + std::to_string(passed) + "/" + std::to_string(total) + " pass";
  }
};

// ---------------------------------------------------------------------------
// Corpus files: one rational, or a whitespace-separated pair, per line.

struct Corpus {
  std::vector<std::vector<Rat>> rows;
  std::string source;
  std::uint64_t seed = 0;
};

inline Corpus parse_corpus(std::istream& in, const std::string& source = "<stream>") {
  Corpus c;
  c.source = source;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<Rat> row;
    std::string tok;
    while (ls >> tok) {
      try {
        row.push_back(parse_rat(tok));
      } catch (const std::exception& e) {
        throw DomainError(source + ":" + std::to_string(no) + ": " + e.what());
      }
    }
    if (row.empty()) continue;
    if (row.size() > 2) throw DomainError(source + ":" + std::to_string(no) + ": expected one or two values");
    c.rows.push_back(std::move(row));
  }
  return c;
}

inline Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open corpus " + path);
  return parse_corpus(in, path);
}

// ---------------------------------------------------------------------------
// Fixtures

namespace fixtures {

/// U_p for the primes p <= 11.
inline const std::map<int, std::vector<int>>& up_table() {
  static const std::map<int, std::vector<int>> t{
      {2, {1}}, {3, {0}}, {5, {1, 4}}, {7, {0, 3, 4}}, {11, {0, 1, 5, 6, 10}},
  };
  return t;
}

struct WitnessRow {
  int a, b;
  Rat x2, x3, x4;
};

/// Dyadic witness rows (a, b, x2, x3, x4), meant to give
/// -a x2^2 - b x3^2 + ab x4^2 = -3 mod 8 in Z_(2). Stored exactly as published.
inline const std::vector<WitnessRow>& appendix_witness_rows() {
  static const std::vector<WitnessRow> rows{
      {2, 3, 0, 1, 0},          {2, 5, 2, 1, 1},           {2, 6, 0, 1, Rat(1, 2)},
      {2, 10, 2, 0, Rat(1, 2)}, {3, 3, 1, 0, 0},           {3, 10, 1, 0, 0},
      {3, 15, 1, 0, 0},         {5, 6, 1, 1, 0},           {5, 10, 1, 0, 1},
      {5, 30, 1, 1, 0},         {6, 6, Rat(1, 2), Rat(1, 2), 0}, {6, 15, 1, 1, 0},
      {10, 30, 0, 1, Rat(1, 10)}, {15, 15, 1, 0, Rat(2, 15)}, {15, 30, 1, 1, Rat(1, 15)},
      {30, 30, 1, 1, Rat(1, 30)},
  };
  return rows;
}

struct NormRow {
  int x;
  std::vector<int> gens;
};

/// Dyadic norm groups N(x) = <g1, g2> modulo squares.
inline const std::vector<NormRow>& appendix_norm_groups() {
  static const std::vector<NormRow> rows{
      {2, {2, 15}}, {3, {5, 6}}, {5, {3, 5}}, {6, {3, 10}}, {10, {6, 10}}, {15, {2, 5}}, {30, {2, 3}},
  };
  return rows;
}

}  // namespace fixtures

namespace detail {

inline std::string join_ints(const std::vector<Int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + "}";
}

inline Rat random_nonzero_rat(std::mt19937_64& rng, long height) {
  for (;;) {
    Rat r = random_rat(rng, height);
    if (r != 0) return r;
  }
}

inline std::vector<Int> primes_in_class(int k, long upto) {
  std::vector<Int> out;
  for (long n = 3; n <= upto; n += 2)
    if (n % 8 == k && is_prime(Int(n))) out.emplace_back(n);
  return out;
}

inline std::string pair_str(const Rat& a, const Rat& b) { return "(" + a.get_str() + ", " + b.get_str() + ")"; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Batteries

inline VerifyReport verify_upsets() {
  VerifyReport r{"upsets"};
  for (const auto& [p, expected] : fixtures::up_table()) {
    auto got = up_set(Int(p)).elements;
    std::vector<Int> want(expected.begin(), expected.end());
    r.check(got == want, "U_" + std::to_string(p), detail::join_ints(want), detail::join_ints(got));
  }
  return r;
}

/// F_p = U_p + U_p for primes lo < p <= hi, by exhaustive sumset.
inline VerifyReport verify_up_sums(long lo = 11, long hi = 200) {
  VerifyReport r{"up-sums"};
  for (long p = lo + 1; p <= hi; ++p) {
    if (!is_prime(Int(p))) continue;
    auto up = up_set(Int(p)).elements;
    std::vector<bool> hit(static_cast<std::size_t>(p), false);
    for (const auto& s : up)
      for (const auto& u : up) hit[static_cast<std::size_t>((s.get_si() + u.get_si()) % p)] = true;
    std::size_t n = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), true));
    r.check(n == static_cast<std::size_t>(p), "p=" + std::to_string(p), std::to_string(p), std::to_string(n));
  }
  return r;
}

/// Table/criterion Delta against Hilbert-symbol Delta, on the dyadic table
/// and on seeded random pairs, plus the symbol symmetries.
inline VerifyReport verify_obs2(std::size_t n = 500, std::uint64_t seed = 1) {
  VerifyReport r{"obs2"};
  for (const auto& [a, b] : kRamified2Table) {
    PlaceSet c = delta_by_criterion(a, b), h = delta_by_hilbert(a, b);
    r.check(c == h && c.contains(Int(2)), detail::pair_str(a, b), h.str(), c.str());
  }
  for (int a : kSquareClassReps2)
    for (int b : kSquareClassReps2) {
      bool table = ramified_at_2_by_table(a, b), sym = hilbert(a, b, Place::prime(Int(2))) == -1;
      r.check(table == sym, "2-adic " + detail::pair_str(a, b), sym ? "ramified" : "split",
              table ? "ramified" : "split");
    }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    Rat a = detail::random_nonzero_rat(rng, 200), b = detail::random_nonzero_rat(rng, 200);
    PlaceSet c = delta_by_criterion(a, b), h = delta_by_hilbert(a, b);
    r.check(c == h, detail::pair_str(a, b), h.str(), c.str());
    r.check(delta(b, a) == c && delta(a, Rat(-a * b)) == c && c.size() % 2 == 0, "symmetry " + detail::pair_str(a, b));
  }
  return r;
}

inline VerifyReport verify_appendix_witness() {
  VerifyReport r{"appendix-witness"};
  for (const auto& row : fixtures::appendix_witness_rows()) {
    Rat a(row.a), b(row.b);
    Rat v = -a * row.x2 * row.x2 - b * row.x3 * row.x3 + a * b * row.x4 * row.x4;
    Rat diff = v + 3;
    bool in_class = diff == 0 || vp(diff, 2) >= 3;
    r.check(in_class && ramified_at_2_by_table(a, b), detail::pair_str(a, b), "-3 + 8Z_(2)", v.get_str());
  }
  return r;
}

inline VerifyReport verify_appendix_norms() {
  VerifyReport r{"appendix-norms"};
  auto show = [](const NormGroup2& g) {
    std::string s = "<";
    for (std::size_t i = 0; i < g.classes.size(); ++i) s += (i ? "," : "") + std::to_string(g.classes[i]);
    return s + ">";
  };
  for (const auto& row : fixtures::appendix_norm_groups()) {
    NormGroup2 listed = generated_subgroup2({Rat(row.gens[0]), Rat(row.gens[1])});
    NormGroup2 computed = norm_group_2adic(Rat(row.x));
    NormGroup2 by_symbol;
    for (int y : kSquareClassReps2)
      if (hilbert(y, row.x, Place::prime(Int(2))) == 1) by_symbol.classes.push_back(y);
    r.check(listed == computed && computed == by_symbol, "N(" + std::to_string(row.x) + ")", show(listed),
            show(computed) + " / " + show(by_symbol));
  }
  return r;
}

/// t in T_{a,b} iff t_decompose yields two verified S-summands, on a grid.
inline VerifyReport verify_prop3(long ab = 30, long num = 20, long den = 12) {
  VerifyReport r{"prop3"};
  std::vector<Rat> ts;
  for (long d = 1; d <= den; ++d)
    for (long n = -num; n <= num; ++n) {
      Rat t(n, d);
      t.canonicalize();
      if (t.get_den() == d) ts.push_back(t);
    }
  for (long a = -ab; a <= ab; ++a)
    for (long b = -ab; b <= ab; ++b) {
      if (a == 0 || b == 0) continue;
      QuaternionPair qp{Rat(a), Rat(b)};
      std::size_t bad = 0;
      std::string first_bad;
      for (const auto& t : ts) {
        bool member = qp.t_member(t);
        bool split = false;
        try {
          auto [s1, s2] = qp.t_decompose(t);
          split = s1 + s2 == t && qp.s_member(s1) && qp.s_member(s2);
        } catch (const DomainError&) {
          split = false;
        }
        if (member != split && bad++ == 0) first_bad = t.get_str();
      }
      r.check(bad == 0, detail::pair_str(a, b), "0 disagreements",
              std::to_string(bad) + " disagreements, first t=" + first_bad);
    }
  return r;
}

/// Four-case radical against the I-set route, and the I + I splitting of
/// sampled radical elements.
inline VerifyReport verify_lemma6(std::size_t n = 200, std::uint64_t seed = 2) {
  VerifyReport r{"lemma6"};
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    Rat a = detail::random_nonzero_rat(rng, 60), b = detail::random_nonzero_rat(rng, 60);
    RadicalIdeal j = jacobson_ab(a, b), via = jacobson_via_isets(a, b);
    r.check(j == via, detail::pair_str(a, b), via.str(), j.str());
    for (int s = 0; s < 5; ++s) {
      Rat y = random_rat(rng, 200);
      if (!j.full_field)
        for (const auto& l : j.primes) y *= l;
      if (!j.member(y)) continue;
      bool ok = true;
      for (const Rat& c : {a, b}) {
        auto ls = intersect_primes(delta(a, b).primes, odd_primes(c));
        if (ls.empty()) continue;
        Rat y1 = i_set_split(y, ls);
        ok = ok && i_set_member(y1, a, b, c) && i_set_member(Rat(y - y1), a, b, c);
      }
      r.check(ok, "split " + y.get_str() + " in J" + detail::pair_str(a, b));
    }
  }
  return r;
}

/// Random elements of Psi: p a product of primes = 1 mod 8 (times a square),
/// q from find_q_for.
inline std::vector<std::pair<Rat, Rat>> sample_psi_pairs(std::size_t n, std::uint64_t seed,
                                                         const Int& bound = Int(kDefaultPrimeBound)) {
  static const std::vector<Int> ones = detail::primes_in_class(1, 2000);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, ones.size() - 1), count(1, 3), sq(0, 4);
  const std::array<long, 5> squares{1, 9, 25, 49, 121};
  std::vector<std::pair<Rat, Rat>> out;
  while (out.size() < n) {
    std::set<Int> chosen;
    std::size_t c = count(rng);
    while (chosen.size() < c) chosen.insert(ones[pick(rng)]);
    Int p = squares[sq(rng)];
    for (const auto& l : chosen) p *= l;
    std::vector<Int> ps(chosen.begin(), chosen.end());
    Int l = ps[pick(rng) % ps.size()];
    Int q = find_q_for(Rat(p), l, bound);
    out.emplace_back(Rat(p), Rat(q));
  }
  return out;
}

inline VerifyReport verify_prop8(std::size_t n = 200, std::uint64_t seed = 3) {
  VerifyReport r{"prop8"};
  for (const auto& [p, q] : sample_psi_pairs(n, seed)) {
    std::string in = detail::pair_str(p, q);
    try {
      Certificate c = rnotq_case(p, q);
      SemilocalRing ring = ring_R1_pair(p, q);
      bool ok = verify(c) && c.case_tag && *c.case_tag >= 1 && *c.case_tag <= 3 && c.l &&
                std::binary_search(ring.primes.begin(), ring.primes.end(), *c.l) && !ring.is_full_field();
      r.check(ok, in, "case 1/2/3 with verified blocking prime", c.to_json().dump());
    } catch (const std::exception& e) {
      r.check(false, in, "certificate", e.what());
    }
  }
  return r;
}

/// Norm criterion by the product of Hilbert symbols over all relevant places.
inline bool norm_by_hilbert(const Rat& x, const Rat& y) {
  if (is_rational_square(y)) return true;
  std::vector<Place> places{Place::infinity(), Place::prime(Int(2))};
  for (const auto& l : support(x)) places.push_back(Place::prime(l));
  for (const auto& l : support(y)) places.push_back(Place::prime(l));
  for (const auto& v : places)
    if (hilbert(x, y, v) != 1) return false;
  return true;
}

inline VerifyReport verify_prop12(std::size_t n = 200, std::size_t pairs = 500, std::uint64_t seed = 4) {
  VerifyReport r{"prop12"};
  std::mt19937_64 rng(seed);
  std::size_t done = 0;
  while (done < n) {
    Rat x = detail::random_nonzero_rat(rng, 1000);
    if (is_rational_square(x)) continue;
    ++done;
    try {
      Certificate c = nonsquare_witness(x);
      r.check(verify(c), "nonsquare " + x.get_str(), "verified witness", c.to_json().dump());
    } catch (const std::exception& e) {
      r.check(false, "nonsquare " + x.get_str(), "witness", e.what());
    }
  }
  for (std::size_t i = 0; i < pairs; ++i) {
    Rat x = detail::random_nonzero_rat(rng, 100), y = detail::random_nonzero_rat(rng, 100);
    std::string in = "norm " + detail::pair_str(x, y);
    try {
      NormResult m = norm_member(x, y);
      bool oracle = norm_by_hilbert(x, y);
      bool ok = m.value == oracle;
      if (ok && !m.value) ok = m.certificate && m.certificate->places.size() >= 2 && verify(*m.certificate);
      r.check(ok, in, oracle ? "true" : "false with >= 2 obstructions",
              m.value ? "true" : (m.certificate ? m.certificate->to_json().dump() : "false"));
    } catch (const std::exception& e) {
      r.check(false, in, "decision", e.what());
    }
  }
  return r;
}

/// T_{3,3} + T_{2,5} coincides with Z_(2).
inline VerifyReport verify_z2_identity(std::size_t n = 10000, std::uint64_t seed = 5) {
  VerifyReport r{"z2-identity"};
  SemilocalRing ring = ring_sum(t_ring(3, 3), t_ring(2, 5));
  std::mt19937_64 rng(seed);
  std::size_t bad = 0;
  std::string first;
  for (std::size_t i = 0; i < n; ++i) {
    Rat t = random_rat(rng, 1000);
    bool want = t == 0 || vp(t, 2) >= 0;
    if (ring.member(t) != want && bad++ == 0) first = t.get_str();
  }
  r.check(ring.str() == "Z_(2)", "ring", "Z_(2)", ring.str());
  r.check(bad == 0, std::to_string(n) + " samples", "0 disagreements",
          std::to_string(bad) + " disagreements, first " + first);
  return r;
}

inline VerifyReport verify_integer_test(std::size_t n = 10000, std::uint64_t seed = 6,
                                        const Int& bound = Int(kDefaultPrimeBound)) {
  VerifyReport r{"integer-test"};
  std::mt19937_64 rng(seed);
  std::size_t disagree = 0, unverified = 0;
  std::string first;
  auto run = [&](const Rat& t) {
    auto it = is_integer(t, bound);
    bool good_value = it.value == (t.get_den() == 1);
    bool good_cert = it.value || (it.certificate && verify(*it.certificate));
    if (!good_value) ++disagree;
    if (!good_cert) ++unverified;
    if ((!good_value || !good_cert) && first.empty()) first = t.get_str();
  };
  for (std::size_t i = 0; i < n; ++i) run(random_rat(rng, 1'000'000));
  r.check(disagree == 0, std::to_string(n) + " samples", "agrees with denominator test",
          std::to_string(disagree) + " disagreements, first " + first);
  r.check(unverified == 0, "certificates", "all verify", std::to_string(unverified) + " unverified");
  // Denominators whose smallest prime is 1 mod 8 take the Psi branch.
  for (const auto& l : detail::primes_in_class(1, 1200)) {
    Rat t = make_rat(Int(3), l);
    auto it = is_integer(t, bound);
    bool ok = !it.value && it.certificate && it.certificate->variant == "psi" && verify(*it.certificate);
    r.check(ok, t.get_str(), "psi certificate", it.certificate ? it.certificate->to_json().dump() : "none");
  }
  return r;
}

/// Corrected clause test against the integer test.
inline VerifyReport verify_just1(long range = 50, std::size_t n = 200, std::uint64_t seed = 7) {
  VerifyReport r{"just1"};
  for (long t = -range; t <= range; ++t) {
    auto res = just1_test(Rat(t));
    r.check(res.value, "t=" + std::to_string(t));
  }
  std::mt19937_64 rng(seed);
  std::size_t done = 0;
  while (done < n) {
    Rat t = random_rat(rng, 10000);
    if (t.get_den() == 1) continue;
    ++done;
    try {
      auto res = just1_test(t);
      bool ok = !res.value && (res.fails_z2 ? vp(t, 2) < 0
                                            : res.falsifying_p && !just1_clause(t, *res.falsifying_p));
      r.check(ok, "t=" + t.get_str(), "false with falsifying p",
              res.falsifying_p ? "p=" + res.falsifying_p->get_str() : (res.fails_z2 ? "z2 conjunct" : "none"));
    } catch (const std::exception& e) {
      r.check(false, "t=" + t.get_str(), "false with falsifying p", e.what());
    }
  }
  return r;
}

inline const std::vector<Rat>& theorem1_non_integers() {
  static const std::vector<Rat> ts{Rat(1, 2), Rat(-1, 2), Rat(1, 3), Rat(-1, 3), Rat(2, 3),
                                   Rat(-2, 3), Rat(1, 5), Rat(-1, 5), Rat(1, 17), Rat(-1, 17)};
  return ts;
}

/// g has no zero at sampled points over integer t, and a certified zero at
/// the listed non-integers.
inline VerifyReport verify_theorem1(long range = 20, std::size_t samples = 10000, std::uint64_t seed = 8,
                                    int height = kDefaultHeight) {
  VerifyReport r{"theorem1"};
  Formula g = build_g();
  for (long t = -range; t <= range; ++t) {
    auto s = sample_zeros(g, {{"t", Rat(t)}}, samples, seed + static_cast<std::uint64_t>(t + range), 100);
    r.check(s.zeros == 0, "t=" + std::to_string(t), "g != 0 on all samples", std::to_string(s.zeros) + " zeros");
  }
  for (const auto& t : theorem1_non_integers()) {
    auto w = zero_witness_search(g, {{"t", t}}, height);
    if (!w) {
      r.check(false, "t=" + t.get_str(), "witness", "none");
      continue;
    }
    auto c = check_zero(g, *w);
    r.check(c.ok, "t=" + t.get_str(), "every square zero",
            std::to_string(c.nonzero.size()) + " of " + std::to_string(c.squares_checked) + " nonzero");
  }
  return r;
}

inline const std::vector<std::string>& battery_names() {
  static const std::vector<std::string> names{"upsets", "up-sums", "obs2",        "appendix-witness",
                                              "appendix-norms", "prop3",   "lemma6",      "prop8",
                                              "prop12", "z2-identity", "integer-test", "just1",
                                              "theorem1"};
  return names;
}

inline VerifyReport run_battery(const std::string& name, std::uint64_t seed = 1) {
  if (name == "upsets") return verify_upsets();
  if (name == "obs2") return verify_obs2(500, seed);
  if (name == "appendix-witness") return verify_appendix_witness();
  if (name == "appendix-norms") return verify_appendix_norms();
  if (name == "prop3") return verify_prop3();
  if (name == "lemma6") return verify_lemma6(200, seed);
  if (name == "prop8") return verify_prop8(200, seed);
  if (name == "prop12") return verify_prop12(200, 500, seed);
  if (name == "up-sums") return verify_up_sums();
  if (name == "z2-identity") return verify_z2_identity(10000, seed);
  if (name == "integer-test") return verify_integer_test(10000, seed);
  if (name == "just1") return verify_just1(50, 200, seed);
  if (name == "theorem1") return verify_theorem1(20, 10000, seed);
  if (name == "all") {
    VerifyReport all{"all"};
    for (const auto& n : battery_names()) all.absorb(run_battery(n, seed));
    return all;
  }
  throw DomainError("unknown battery " + name);
}

}  // namespace zdef
