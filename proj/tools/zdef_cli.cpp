// zdef: command-line front end for the rings, predicates, formulas and
// verification batteries.
//
// Exit codes: 0 success / true, 1 semantic false, 2 verification failure,
// 3 usage error.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zdef/formulas.hpp"
#include "zdef/harness.hpp"
#include "zdef/predicates.hpp"
#include "zdef/quaternion.hpp"
#include "zdef/semilocal.hpp"
#include "zdef/witness.hpp"

using namespace zdef;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFalse = 1, kVerifyFail = 2, kUsage = 3 };

struct Globals {
  bool json = false;
  std::uint64_t seed = 1;
  int height = kDefaultHeight;
  std::string prime_bound = std::to_string(kDefaultPrimeBound);
  Int bound() const { return Int(prime_bound); }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rat arg_rat(const std::string& s) {
  try {
    return parse_rat(s);
  } catch (const std::exception&) {
    throw UsageError("not a rational number: '" + s + "'");
  }
}

int arg_class(const std::string& s) {
  if (s == "1") return 1;
  if (s == "3") return 3;
  if (s == "5") return 5;
  if (s == "7") return 7;
  throw UsageError("class must be one of 1, 3, 5, 7: '" + s + "'");
}

json places_json(const PlaceSet& d) {
  json arr = json::array();
  for (const auto& p : d.primes) arr.push_back(p.get_str());
  if (d.has_infinity) arr.push_back("inf");
  return arr;
}

/// Assignment file: a JSON object of name -> rational string, or
/// "name value" lines with # comments.
std::map<std::string, Rat> read_assignment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::map<std::string, Rat> out;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const std::exception& e) {
      throw UsageError(path + ": " + e.what());
    }
    for (const auto& [k, v] : j.items()) out[k] = arg_rat(v.is_string() ? v.get<std::string>() : v.dump());
    return out;
  }
  std::istringstream ls(text);
  std::string line;
  for (std::size_t no = 1; std::getline(ls, line); ++no) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream words(line);
    std::string name, value, extra;
    if (!(words >> name)) continue;
    if (!(words >> value) || (words >> extra))
      throw UsageError(path + ":" + std::to_string(no) + ": expected 'name value'");
    out[name] = arg_rat(value);
  }
  return out;
}

class Printer {
 public:
  explicit Printer(const Globals& g) : g_(g) {}
  /// Emits `j` under --json, otherwise `text`.
  void emit(const json& j, const std::string& text) const {
    if (g_.json) std::cout << j.dump(2) << "\n";
    else std::cout << text << (text.empty() || text.back() == '\n' ? "" : "\n");
  }

 private:
  const Globals& g_;
};

std::string bool_str(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------
// Subcommand bodies

int cmd_delta(const Globals& g, const std::string& a_s, const std::string& b_s) {
  Rat a = arg_rat(a_s), b = arg_rat(b_s);
  if (a == 0 || b == 0) throw UsageError("delta: a and b must be nonzero");
  PlaceSet d = delta(a, b);
  Printer(g).emit({{"a", a.get_str()}, {"b", b.get_str()}, {"delta", places_json(d)}}, d.str());
  return kOk;
}

int cmd_member(const Globals& g, const std::string& set, const std::vector<std::string>& args) {
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw UsageError("member " + set + " expects " + std::to_string(n) + " arguments, got " +
                       std::to_string(args.size()));
  };
  std::vector<Rat> v;
  bool value = false;
  std::string where;
  if (set == "T" || set == "Tunits" || set == "J") {
    need(3);
    for (const auto& s : args) v.push_back(arg_rat(s));
    if (v[0] == 0 || v[1] == 0) throw UsageError("member: a and b must be nonzero");
    if (set == "T") {
      value = t_member(v[2], v[0], v[1]);
      where = t_ring(v[0], v[1]).str();
    } else if (set == "Tunits") {
      value = units_member(v[2], v[0], v[1]);
      where = "units of " + t_ring(v[0], v[1]).str();
    } else {
      RadicalIdeal j = jacobson_ab(v[0], v[1]);
      value = j.member(v[2]);
      where = j.str();
    }
  } else if (set == "R3" || set == "R5" || set == "R7") {
    need(2);
    for (const auto& s : args) v.push_back(arg_rat(s));
    SemilocalRing r = ring_R(set[1] - '0', v[0]);
    value = r.member(v[1]);
    where = r.str();
  } else if (set == "R1pair") {
    need(3);
    for (const auto& s : args) v.push_back(arg_rat(s));
    SemilocalRing r = ring_R1_pair(v[0], v[1]);
    value = r.member(v[2]);
    where = r.str();
  } else if (set == "R1union") {
    need(2);
    for (const auto& s : args) v.push_back(arg_rat(s));
    value = ring_R1_union_member(v[1], v[0]);
    where = "union over q of R1pair(" + v[0].get_str() + ", q)";
  } else if (set == "widetilde") {
    if (args.empty()) throw UsageError("member widetilde expects K P [Q] T");
    int k = arg_class(args[0]);
    need(k == 1 ? 4 : 3);
    for (std::size_t i = 1; i < args.size(); ++i) v.push_back(arg_rat(args[i]));
    SemilocalRing r = k == 1 ? ring_R1_pair(v[0], v[1]) : ring_R(k, v[0]);
    value = widetilde_member(v.back(), r);
    where = "widetilde of " + r.str();
  } else {
    throw UsageError("unknown set '" + set + "' (T, Tunits, J, R3, R5, R7, R1pair, R1union, widetilde)");
  }
  json ja = json::array();
  for (const auto& s : args) ja.push_back(s);
  Printer(g).emit({{"set", set}, {"args", ja}, {"member", value}, {"in", where}},
                  bool_str(value) + "  (" + where + ")");
  return value ? kOk : kFalse;
}

int cmd_phi(const Globals& g, const std::string& k_s, const std::string& p_s) {
  int k = arg_class(k_s);
  Rat p = arg_rat(p_s);
  if (p == 0) throw UsageError("phi: p must be nonzero");
  bool value = phi_member(p, k);
  json pk = json::array();
  for (const auto& l : pk_set(p, k)) pk.push_back(l.get_str());
  Printer(g).emit({{"k", k}, {"p", p.get_str()}, {"member", value}, {"pk", pk}}, bool_str(value));
  return value ? kOk : kFalse;
}

int cmd_psi(const Globals& g, const std::string& p_s, const std::string& q_s) {
  Rat p = arg_rat(p_s), q = arg_rat(q_s);
  if (p == 0 || q == 0) throw UsageError("psi: p and q must be nonzero");
  bool value = psi_member(p, q);
  json j{{"p", p.get_str()}, {"q", q.get_str()}, {"member", value}};
  std::string text = bool_str(value);
  if (value) {
    Certificate c = psi_witness(p, q);
    j["certificate"] = c.to_json();
    text += "\nw = " + c.w->get_str();
  }
  Printer(g).emit(j, text);
  return value ? kOk : kFalse;
}

int cmd_int_test(const Globals& g, const std::string& t_s, bool with_cert) {
  Rat t = arg_rat(t_s);
  IntegerTest it = is_integer(t, g.bound());
  json j{{"t", t.get_str()}, {"integer", it.value}};
  std::string text = bool_str(it.value);
  if (it.certificate) {
    if (!verify(*it.certificate)) throw InconsistencyError("int-test: certificate failed verification");
    if (with_cert) {
      j["certificate"] = it.certificate->to_json();
      text += "\n" + it.certificate->to_json().dump();
    }
  }
  Printer(g).emit(j, text);
  return it.value ? kOk : kFalse;
}

int cmd_just1(const Globals& g, const std::string& t_s, const std::string& mode) {
  Rat t = arg_rat(t_s);
  json j{{"t", t.get_str()}, {"mode", mode}};
  std::string text;
  bool value;
  if (mode == "corrected") {
    Just1Result r = just1_test(t, g.bound());
    value = r.value;
    j["value"] = value;
    if (r.falsifying_p) j["falsifying_p"] = r.falsifying_p->get_str();
    if (r.fails_z2) j["fails"] = "z2";
    text = bool_str(value);
    if (r.falsifying_p) text += "  (clause fails at p = " + r.falsifying_p->get_str() + ")";
    if (r.fails_z2) text += "  (t not in Z_(2))";
  } else if (mode == "literal") {
    // The literal clause cannot fail (see README); report it at the
    // certificate's p for comparison.
    bool z2 = t == 0 || vp(t, 2) >= 0;
    value = z2;
    j["z2"] = z2;
    auto it = is_integer(t, g.bound());
    if (it.certificate && it.certificate->p) {
      Rat p = *it.certificate->p;
      bool holds = just1_clause(t, p, Just1Mode::Literal);
      j["probe_p"] = p.get_str();
      j["literal_clause_at_probe"] = holds;
      value = value && holds;
      text = "  (literal clause at p = " + p.get_str() + ": " + bool_str(holds) + ")";
    }
    j["value"] = value;
    text = bool_str(value) + text;
  } else {
    throw UsageError("--mode must be literal or corrected");
  }
  Printer(g).emit(j, text);
  return value ? kOk : kFalse;
}

int cmd_nonsquare(const Globals& g, const std::string& x_s) {
  Rat x = arg_rat(x_s);
  if (x == 0 || is_rational_square(x)) {
    Printer(g).emit({{"x", x.get_str()}, {"nonsquare", false}}, "false  (" + x.get_str() + " is a square)");
    return kFalse;
  }
  Certificate c = nonsquare_witness(x, g.bound());
  if (!verify(c)) throw InconsistencyError("nonsquare: witness failed verification");
  Printer(g).emit({{"x", x.get_str()}, {"nonsquare", true}, {"certificate", c.to_json()}},
                  "true\n" + c.to_json().dump());
  return kOk;
}

int cmd_norm(const Globals& g, const std::string& x_s, const std::string& y_s) {
  Rat x = arg_rat(x_s), y = arg_rat(y_s);
  if (x == 0 || y == 0) throw UsageError("norm: x and y must be nonzero");
  NormResult r = norm_member(x, y, g.bound());
  json j{{"x", x.get_str()}, {"y", y.get_str()}, {"norm", r.value}};
  std::string text = bool_str(r.value);
  if (r.certificate) {
    if (!verify(*r.certificate)) throw InconsistencyError("norm: certificate failed verification");
    j["certificate"] = r.certificate->to_json();
    text += "\n" + r.certificate->to_json().dump();
  }
  Printer(g).emit(j, text);
  return r.value ? kOk : kFalse;
}

Formula formula_by_name(const std::string& name) {
  const auto& names = formula_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string all;
    for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
    throw UsageError("unknown formula '" + name + "' (" + all + ")");
  }
  return build_formula(name);
}

int cmd_formula(const Globals& g, const std::string& action, const std::string& name, const std::string& file) {
  Formula f = formula_by_name(name);
  if (action == "build") {
    json j{{"name", f.name}, {"free", f.free}, {"params", f.params}, {"expr", expr_json(f.expr, f.pool)}};
    Printer(g).emit(j, formula_text(f));
    return kOk;
  }
  if (action == "audit") {
    FormulaAudit a = audit(f);
    Printer(g).emit(a.to_json(), a.table());
    return kOk;
  }
  if (file.empty()) throw UsageError("formula " + action + " needs " + (action == "eval" ? "--at" : "--fix") + " FILE");
  auto given = read_assignment(file);
  for (const auto& [n, v] : given)
    if (!f.pool.find(n)) throw UsageError("formula " + name + " has no variable '" + n + "'");
  if (action == "eval") {
    std::vector<Rat> values(f.pool.size());
    for (const auto& [n, v] : given) values[static_cast<std::size_t>(*f.pool.find(n))] = v;
    Rat val = f.expr.eval(values);
    Printer(g).emit({{"name", f.name}, {"value", val.get_str()}}, val.get_str());
    return kOk;
  }
  if (action == "witness") {
    auto w = zero_witness_search(f, given, g.height, g.bound());
    if (!w) {
      Printer(g).emit({{"name", f.name}, {"found", false}}, "no witness found");
      return kFalse;
    }
    ZeroCheck c = check_zero(f, *w);
    if (!c.ok) throw InconsistencyError("formula witness: assignment does not vanish");
    json assign = json::object();
    std::string text;
    for (std::size_t i = 0; i < w->values.size(); ++i) {
      if (w->values[i] == 0) continue;
      assign[f.pool.name(static_cast<int>(i))] = w->values[i].get_str();
      text += f.pool.name(static_cast<int>(i)) + " = " + w->values[i].get_str() + "\n";
    }
    json j{{"name", f.name}, {"found", true}, {"assignment", assign}, {"squares_checked", c.squares_checked}};
    if (w->factor) j["factor"] = *w->factor;
    if (w->certificate) j["certificate"] = w->certificate->to_json();
    text += "(all other variables 0; " + std::to_string(c.squares_checked) + " squares checked zero";
    if (w->factor) text += ", factor " + std::to_string(*w->factor + 1);
    Printer(g).emit(j, text + ")");
    return kOk;
  }
  throw UsageError("unknown formula action '" + action + "'");
}

int cmd_verify(const Globals& g, const std::string& battery) {
  const auto& names = battery_names();
  if (battery != "all" && std::find(names.begin(), names.end(), battery) == names.end())
    throw UsageError("unknown battery '" + battery + "'");
  VerifyReport r = run_battery(battery, g.seed);
  std::string text = r.summary();
  for (const auto& f : r.failures) text += "\n  FAIL " + f.input + ": expected " + f.expected + ", got " + f.got;
  Printer(g).emit(r.to_json(), text);
  return r.ok() ? kOk : kVerifyFail;
}

void emit_error(const Globals& g, const std::string& type, const std::string& msg) {
  if (g.json) std::cout << json{{"error", {{"type", type}, {"message", msg}}}}.dump(2) << "\n";
  else std::cerr << "error: " << msg << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  CLI::App app{"Diophantine definition of Z in Q: rings, predicates, formulas and batteries"};
  app.require_subcommand(1);
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--seed", g.seed, "seed for randomized batteries");
  app.add_option("--height-bound", g.height, "height bound for witness search");
  app.add_option("--prime-bound", g.prime_bound, "ceiling for constrained prime search");

  std::string a1, a2, set, mode = "corrected", action, name, file;
  std::vector<std::string> rest;
  bool cert = false;

  auto* delta_cmd = app.add_subcommand("delta", "ramified places of (a, b)");
  delta_cmd->add_option("A", a1)->required();
  delta_cmd->add_option("B", a2)->required();

  auto* member_cmd = app.add_subcommand("member", "membership in T, Tunits, J, R3, R5, R7, R1pair, R1union, widetilde");
  member_cmd->add_option("SET", set)->required();
  member_cmd->add_option("ARGS", rest, "parameters followed by the element")->required();

  auto* phi_cmd = app.add_subcommand("phi", "p in Phi_k");
  phi_cmd->add_option("K", a1)->required();
  phi_cmd->add_option("P", a2)->required();

  auto* psi_cmd = app.add_subcommand("psi", "(p, q) in Psi");
  psi_cmd->add_option("P", a1)->required();
  psi_cmd->add_option("Q", a2)->required();

  auto* int_cmd = app.add_subcommand("int-test", "t in Z, with a certificate when not");
  int_cmd->add_option("T", a1)->required();
  int_cmd->add_flag("--certificate", cert);

  auto* just1_cmd = app.add_subcommand("just1", "one-parameter clause test");
  just1_cmd->add_option("T", a1)->required();
  just1_cmd->add_option("--mode", mode)->check(CLI::IsMember({"literal", "corrected"}));

  auto* nonsq_cmd = app.add_subcommand("nonsquare", "witness that x is not a square");
  nonsq_cmd->add_option("X", a1)->required();

  auto* norm_cmd = app.add_subcommand("norm", "x a norm from Q(sqrt y)");
  norm_cmd->add_option("X", a1)->required();
  norm_cmd->add_option("Y", a2)->required();

  auto* formula_cmd = app.add_subcommand("formula", "build, audit, eval or witness a formula");
  formula_cmd->add_option("ACTION", action)->required()->check(CLI::IsMember({"build", "audit", "eval", "witness"}));
  formula_cmd->add_option("NAME", name)->required();
  formula_cmd->add_option("--at", file, "assignment file for eval");
  formula_cmd->add_option("--fix", file, "fixed values for witness");
  formula_cmd->add_option("--height", g.height, "height bound for witness search");

  auto* verify_cmd = app.add_subcommand("verify", "fixture and battery checks");
  verify_cmd->add_option("BATTERY", a1)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error(g, "usage", e.what());
    return kUsage;
  }

  try {
    if (*delta_cmd) return cmd_delta(g, a1, a2);
    if (*member_cmd) return cmd_member(g, set, rest);
    if (*phi_cmd) return cmd_phi(g, a1, a2);
    if (*psi_cmd) return cmd_psi(g, a1, a2);
    if (*int_cmd) return cmd_int_test(g, a1, cert);
    if (*just1_cmd) return cmd_just1(g, a1, mode);
    if (*nonsq_cmd) return cmd_nonsquare(g, a1);
    if (*norm_cmd) return cmd_norm(g, a1, a2);
    if (*formula_cmd) return cmd_formula(g, action, name, file);
    if (*verify_cmd) return cmd_verify(g, a1);
  } catch (const UsageError& e) {
    emit_error(g, "usage", e.what());
    return kUsage;
  } catch (const DomainError& e) {
    emit_error(g, "domain", e.what());
    return kUsage;
  } catch (const UnsupportedCase& e) {
    emit_error(g, "unsupported", e.what());
    return kUsage;
  } catch (const BoundExhausted& e) {
    emit_error(g, "bound_exhausted", e.what());
    return kVerifyFail;
  } catch (const std::exception& e) {
    emit_error(g, "inconsistency", e.what());
    return kVerifyFail;
  }
  return kUsage;
}
