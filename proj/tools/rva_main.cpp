// rva: command-line front end for compiling formulas to real vector automata
// and deciding definability.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rva/automaton_io.hpp"
#include "rva/definability.hpp"
#include "rva/errors.hpp"
#include "rva/geometry.hpp"
#include "rva/limits.hpp"
#include "rva/logic.hpp"
#include "rva/omega.hpp"

namespace {

using namespace rva;
using nlohmann::json;

constexpr int kUsageError = 2;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

Binding parse_bindings(const std::vector<std::string>& specs) {
  Binding b;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--rel expects NAME=<rva-file>, got " + spec);
    b.insert_or_assign(spec.substr(0, eq), load_automaton_file(spec.substr(eq + 1)));
  }
  return b;
}

std::string kind_name(const RelationAutomaton& a) {
  if (a.kind() == AcceptanceKind::Wdba) return "wdba";
  switch (classify(a)) {
    case ParityClass::Weak: return "parity (weak)";
    case ParityClass::CoBuchi: return "parity (co-Buchi)";
    case ParityClass::Buchi: return "parity (Buchi)";
    case ParityClass::General: return "parity";
  }
  return "parity";
}

std::string class_text(const std::vector<Integer>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s + ")";
}

std::string basis_text(const StrataBasis& b) {
  if (b.empty()) return "{0}";
  std::string s = "span{";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? ", " : "") + std::string("(") + to_string(b[i]) + ")";
  return s + "}";
}

int report_check(const DefinabilityReport& r, const RelationAutomaton& a, const std::string& target, bool as_json) {
  const int code = r.verdict == Verdict::Definable ? 0 : 1;
  if (as_json) {
    json j;
    j["target"] = target;
    j["verdict"] = to_string(r.verdict);
    j["failing_tag"] = r.failing_tag.empty() ? json(nullptr) : json(r.failing_tag);
    j["evidence"] = r.evidence;
    if (r.failing_pattern) j["failing_pattern"] = r.failing_pattern->to_string();
    if (r.witness) {
      j["witness"] = {{"point", to_string(*r.witness)}};
      if (r.witness_word) j["witness"]["word"] = format_upword(*r.witness_word, a.alphabet());
    } else {
      j["witness"] = nullptr;
    }
    if (r.failing_class) j["failing_class"] = class_text(*r.failing_class);
    json classes = json::array();
    for (const auto& c : r.classes) {
      json row{{"representative", class_text(c.representative)}, {"ip", c.ip}};
      row["fp"] = c.fp ? json(*c.fp) : json(nullptr);
      row["sigma_states"] = c.sigma_states;
      row["delta_states"] = c.delta_states;
      classes.push_back(std::move(row));
    }
    j["classes"] = classes;
    json stages = json::array();
    for (const auto& [name, size] : r.stage_sizes) stages.push_back({{"stage", name}, {"states", size}});
    j["stage_sizes"] = stages;
    std::cout << j.dump(2) << "\n";
    return code;
  }
  std::cout << "verdict: " << to_string(r.verdict) << "\n";
  if (!r.failing_tag.empty()) std::cout << "failing condition: " << r.failing_tag << "\n";
  if (!r.evidence.empty()) std::cout << "evidence: " << r.evidence << "\n";
  if (r.witness) std::cout << "witness: " << to_string(*r.witness) << "\n";
  if (target == "l" && !r.classes.empty()) {
    std::cout << "classes:\n";
    for (const auto& c : r.classes)
      std::cout << "  " << class_text(c.representative) << "  IP " << (c.ip ? "holds" : "fails") << "  FP "
                << (c.fp ? (*c.fp ? "holds" : "fails") : "-") << "\n";
  }
  for (const auto& [name, size] : r.stage_sizes) std::cout << "stage " << name << ": " << size << " states\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real vector automata: compile, evaluate and check definability"};
  app.require_subcommand(1);
  std::size_t max_states = engine_limits().max_states;
  double timeout_secs = 0;
  app.add_option("--max-states", max_states, "Abort when an intermediate automaton exceeds this size");
  app.add_option("--timeout-secs", timeout_secs, "Abort after this many seconds (0 = no limit)");

  std::string formula_file, out_file, rel_file, point_text, polyset_file, at_text, free_text, target = "s";
  std::vector<std::string> rel_specs;
  int base = 2;
  bool as_json = false;

  auto* compile = app.add_subcommand("compile", "Compile a formula to an automaton file");
  compile->add_option("-f", formula_file, "Formula file")->required();
  compile->add_option("--base", base, "Base k")->required();
  compile->add_option("--free", free_text, "Comma separated free variables, in track order")->required();
  compile->add_option("--rel", rel_specs, "NAME=<rva-file> binding");
  compile->add_option("-o", out_file, "Output automaton file")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a sentence");
  eval->add_option("-f", formula_file, "Sentence file")->required();
  eval->add_option("--base", base, "Base k")->required();
  eval->add_option("--rel", rel_specs, "NAME=<rva-file> binding");

  auto* check = app.add_subcommand("check", "Decide S- or L-definability of a relation");
  check->add_option("--rel", rel_file, "Automaton file")->required();
  check->add_option("--target", target, "s or l")->check(CLI::IsMember({"s", "l"}));
  check->add_flag("--json", as_json, "Machine readable report");

  auto* mem = app.add_subcommand("member", "Test membership of a rational point");
  mem->add_option("--rel", rel_file, "Automaton file")->required();
  mem->add_option("--point", point_text, "p1/q1,p2/q2,...")->required();

  auto* wit = app.add_subcommand("witness", "Print an accepted word and its point");
  wit->add_option("--rel", rel_file, "Automaton file")->required();

  auto* oracle = app.add_subcommand("oracle", "Geometric report for a periodic polyhedral set");
  oracle->add_option("--polyset", polyset_file, "Polyset file")->required();
  oracle->add_option("--at", at_text, "Point whose strata to print");

  auto* stats = app.add_subcommand("stats", "Automaton size, kind and saturation");
  stats->add_option("--rel", rel_file, "Automaton file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }

  engine_limits().max_states = max_states;
  if (timeout_secs > 0)
    engine_limits().deadline = std::chrono::steady_clock::now() +
                               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                   std::chrono::duration<double>(timeout_secs));

  try {
    if (*compile) {
      const auto free = split(free_text, ',');
      const Formula f = parse_formula(read_text(formula_file), free);
      const auto a = compile_formula(f, base, free, parse_bindings(rel_specs));
      write_automaton_file(a, out_file);
      std::cout << "wrote " << out_file << " (" << a.num_states() << " states)\n";
      return 0;
    }
    if (*eval) {
      const Formula f = parse_formula(read_text(formula_file), std::vector<std::string>{});
      std::cout << (eval_sentence(f, base, parse_bindings(rel_specs)) ? "true" : "false") << "\n";
      return 0;
    }
    if (*check) {
      const auto a = load_automaton_file(rel_file);
      const auto r = target == "s" ? decide_s_definable(a) : decide_l_definable(a);
      return report_check(r, a, target, as_json);
    }
    if (*mem) {
      const auto a = load_automaton_file(rel_file);
      const auto p = parse_rational_vector(point_text);
      if (static_cast<int>(p.size()) != a.arity())
        throw ValidationError("point has " + std::to_string(p.size()) + " components, relation has arity " +
                              std::to_string(a.arity()));
      std::cout << (member(a, p) ? "true" : "false") << "\n";
      return 0;
    }
    if (*wit) {
      const auto a = load_automaton_file(rel_file);
      const auto w = emptiness_witness(a);
      if (!w) {
        std::cout << "empty\n";
        return 0;
      }
      std::cout << "word: " << format_upword(*w, a.alphabet()) << "\n";
      std::cout << "point: " << to_string(decode(*w, a.base(), a.arity())) << "\n";
      return 0;
    }
    if (*oracle) {
      const auto p = load_polyset(polyset_file);
      if (!at_text.empty()) {
        const auto x = parse_rational_vector(at_text);
        const auto b = strata_at(p, x);
        std::cout << "point: " << to_string(x) << "\n";
        std::cout << "member: " << (contains(p, x) ? "true" : "false") << "\n";
        std::cout << "strata: " << basis_text(b) << " (dimension " << b.size() << ")\n";
        std::cout << "safe radius: " << to_string(safe_radius(p, x)) << "\n";
        return 0;
      }
      const auto r = check_conditions(p);
      const auto& s = r.singular;
      if (s.infinite) {
        std::cout << "singular: infinite, base point " << to_string(*s.base_point) << " period "
                  << class_text(*s.period) << "\n";
      } else {
        std::cout << "singular: " << s.points.size() << " point(s)";
        for (const auto& x : s.points) std::cout << " (" << to_string(x) << ")";
        std::cout << "\n";
      }
      std::cout << "FSP " << (r.fsp ? "holds" : "fails") << ", RSP " << (r.rsp ? "holds" : "fails") << ", DS "
                << (r.ds ? "holds" : "fails");
      if (!r.ds) std::cout << " (section " << r.ds_failure << ")";
      std::cout << "\n";
      std::cout << "S: " << to_string(r.s_verdict) << "\nL: " << to_string(r.l_verdict) << "\n";
      return 0;
    }
    if (*stats) {
      const auto a = load_automaton_file(rel_file);
      std::cout << "states: " << a.num_states() << "\n";
      std::cout << "arity: " << a.arity() << "\nbase: " << a.base() << "\n";
      std::cout << "kind: " << kind_name(a) << "\n";
      std::cout << "saturated: " << (a.saturated() ? "yes" : "no") << "\n";
      return 0;
    }
  } catch (const EngineLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory (largest intermediate automaton: " << largest_intermediate() << " states)\n";
    return kUsageError;
  }
  return kUsageError;
}
