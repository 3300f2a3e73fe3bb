#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>

#include "rva/errors.hpp"
#include "rva/limits.hpp"
#include "rva/logic.hpp"
#include "rva/omega.hpp"

namespace rva {

namespace {

using K = FormulaNode::Kind;

// Alpha-normalized text: free variables become $0, $1, ... by first occurrence
// and bound variables become #depth, so equal keys denote the same relation
// over the same track layout.
class KeyBuilder {
 public:
  std::string build(const Formula& f) {
    out_.clear();
    walk(f);
    return out_;
  }

 private:
  std::string name_of(const std::string& v) {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (*it == v) return "#" + std::to_string(bound_.rend() - it - 1);
    auto [pos, fresh] = free_.emplace(v, free_.size());
    return "$" + std::to_string(pos->second);
  }
  void term(const Term& t) {
    out_ += "[";
    for (const auto& [c, v] : t.addends) out_ += to_string(c) + "*" + name_of(v) + " ";
    out_ += to_string(t.constant) + "]";
  }
  void walk(const Formula& f) {
    switch (f->kind) {
      case K::True: out_ += "T"; return;
      case K::False: out_ += "F"; return;
      case K::Compare: term(f->lhs); out_ += to_string(f->cmp); term(f->rhs); return;
      case K::Int: out_ += "int"; term(f->lhs); return;
      case K::Rel:
        out_ += "R:" + f->name + "(";
        for (const auto& a : f->args) term(a);
        out_ += ")";
        return;
      case K::Not: out_ += "!"; walk(f->left); return;
      case K::And: case K::Or: case K::Implies: case K::Iff:
        out_ += f->kind == K::And ? "(&" : f->kind == K::Or ? "(|" : f->kind == K::Implies ? "(>" : "(=";
        walk(f->left);
        out_ += ",";
        walk(f->right);
        out_ += ")";
        return;
      case K::Exists: case K::Forall:
        out_ += f->kind == K::Exists ? "E(" : "A(";
        bound_.push_back(f->name);
        walk(f->left);
        bound_.pop_back();
        out_ += ")";
        return;
    }
  }

  std::string out_;
  std::vector<std::string> bound_;
  std::map<std::string, std::size_t> free_;
};

// RVA_TRACE=1 logs every compiled subformula to stderr.
bool trace_enabled() {
  static const bool on = [] {
    const char* v = std::getenv("RVA_TRACE");
    return v != nullptr && *v != '\0' && *v != '0';
  }();
  return on;
}

std::vector<std::string> merge_vars(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& v : b)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

std::vector<int> track_map(const std::vector<std::string>& from, const std::vector<std::string>& to) {
  std::vector<int> map;
  for (const auto& v : from) map.push_back(static_cast<int>(std::find(to.begin(), to.end(), v) - to.begin()));
  return map;
}

}  // namespace

Compiler::Compiler(int base, Binding binding) : base_(base), binding_(std::move(binding)) {
  if (base < 2 || base > 10) throw ValidationError("base must be between 2 and 10");
  for (auto& [name, a] : binding_) {
    if (a.base() != base)
      throw ValidationError("relation " + name + " has base " + std::to_string(a.base()) + " but the formula base is " +
                            std::to_string(base));
    if (!a.saturated()) a = saturate(a);
  }
}

std::string Compiler::fresh(const std::string& hint) { return "%" + hint + std::to_string(++fresh_counter_); }

Compiler::Result Compiler::compile_node(const Formula& f) {
  const std::string key = KeyBuilder().build(f);
  const std::vector<std::string> vars = free_variables(f);
  auto it = cache_.find(key);
  if (it != cache_.end()) {
    ++stats_.cache_hits;
    Result r = it->second;
    r.vars = vars;
    return r;
  }
  const auto started = std::chrono::steady_clock::now();
  Result r = compile_uncached(f);
  // Children may report variables in a different order (rewrites); normalize.
  if (r.automaton && r.vars != vars) {
    if (r.vars.size() != vars.size()) throw std::logic_error("compiler variable bookkeeping mismatch");
    auto map = track_map(r.vars, vars);
    r.automaton = embed(*r.automaton, static_cast<int>(vars.size()), map);
    r.vars = vars;
  }
  ++stats_.compiled_nodes;
  if (trace_enabled()) {
    std::string text = to_string(f);
    if (text.size() > 160) text = text.substr(0, 157) + "...";
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    std::cerr << "[rva] " << ms.count() << " ms, " << (r.automaton ? std::to_string(r.automaton->num_states()) + " states, arity " +
                                                std::to_string(r.automaton->arity())
                                          : std::string(r.truth ? "true" : "false"))
              << ": " << text << "\n";
  }
  if (r.automaton) {
    stats_.largest_automaton = std::max<std::size_t>(stats_.largest_automaton, r.automaton->num_states());
    check_engine_limits("compile", static_cast<std::size_t>(r.automaton->num_states()));
  }
  cache_.emplace(key, r);
  return r;
}

Compiler::Result Compiler::compile_uncached(const Formula& f) {
  switch (f->kind) {
    case K::True: return Result{{}, std::nullopt, true};
    case K::False: return Result{{}, std::nullopt, false};
    case K::Compare: return compile_compare(f);
    case K::Int: {
      if (auto v = f->lhs.as_variable()) return Result{{*v}, int_atom(base_, 1, 0), false};
      const std::string w = fresh("int");
      return compile_node(
          fml::exists(w, fml::conj(fml::compare(Term::var(w), Comparator::Eq, f->lhs), fml::is_int(Term::var(w)))));
    }
    case K::Rel: return compile_rel(f);
    case K::Not: return negate(compile_node(f->left));
    case K::And: return combine(compile_node(f->left), compile_node(f->right), true);
    case K::Or: return combine(compile_node(f->left), compile_node(f->right), false);
    case K::Implies: return combine(negate(compile_node(f->left)), compile_node(f->right), false);
    case K::Iff: {
      Result a = compile_node(f->left), b = compile_node(f->right);
      return combine(combine(a, b, true), combine(negate(a), negate(b), true), false);
    }
    case K::Exists:
    case K::Forall: {
      // A run of like quantifiers is projected in one step.
      std::vector<std::string> names;
      Formula body = f;
      while (body->kind == f->kind) {
        names.push_back(body->name);
        body = body->left;
      }
      if (f->kind == K::Exists) return exists(names, compile_node(body));
      return negate(exists(names, negate(compile_node(body))));
    }
  }
  throw std::logic_error("unknown formula node");
}

Compiler::Result Compiler::compile_compare(const Formula& f) {
  Result r;
  r.vars = free_variables(f);
  std::vector<Rational> coeff(r.vars.size(), 0);
  auto add = [&](const Term& t, int sign) {
    for (const auto& [c, v] : t.addends) {
      auto i = std::find(r.vars.begin(), r.vars.end(), v) - r.vars.begin();
      coeff[i] += sign * c;
    }
  };
  add(f->lhs, 1);
  add(f->rhs, -1);
  const Rational constant = f->rhs.constant - f->lhs.constant;
  if (r.vars.empty()) {
    r.truth = compare(Rational(0), f->cmp, constant);
    return r;
  }
  Integer scale = denominator_of(constant);
  for (const auto& c : coeff) scale = lcm_of(scale, denominator_of(c));
  LinearAtom atom;
  atom.cmp = f->cmp;
  for (const auto& c : coeff) atom.coefficients.push_back(numerator_of(c * scale));
  atom.constant = numerator_of(constant * scale);
  r.automaton = linear_atom(atom, base_, static_cast<int>(r.vars.size()));
  return r;
}

Compiler::Result Compiler::compile_rel(const Formula& f) {
  auto it = binding_.find(f->name);
  if (it == binding_.end()) throw ValidationError("unbound relation symbol '" + f->name + "'");
  const RelationAutomaton& a = it->second;
  if (static_cast<std::size_t>(a.arity()) != f->args.size())
    throw ValidationError("relation " + f->name + " has arity " + std::to_string(a.arity()) + " but is applied to " +
                          std::to_string(f->args.size()) + " argument(s)");
  std::vector<Term> args;
  std::vector<Formula> defs;
  std::vector<std::string> introduced;
  for (const auto& t : f->args) {
    if (t.as_variable()) {
      args.push_back(t);
      continue;
    }
    const std::string w = fresh("arg");
    introduced.push_back(w);
    defs.push_back(fml::compare(Term::var(w), Comparator::Eq, t));
    args.push_back(Term::var(w));
  }
  if (!introduced.empty()) {
    defs.push_back(fml::rel(f->name, args));
    return compile_node(fml::exists(introduced, fml::conj(defs)));
  }
  Result r;
  std::vector<std::string> names;
  for (const auto& t : args) names.push_back(*t.as_variable());
  r.vars = merge_vars({}, names);
  r.automaton = embed(a, static_cast<int>(r.vars.size()), track_map(names, r.vars));
  return r;
}

Compiler::Result Compiler::combine(const Result& a, const Result& b, bool conjunction) {
  Result r;
  r.vars = merge_vars(a.vars, b.vars);
  const BoolOp op = conjunction ? BoolOp::And : BoolOp::Or;
  auto lift = [&](const Result& x) -> std::optional<RelationAutomaton> {
    if (!x.automaton) return std::nullopt;
    if (x.vars == r.vars) return x.automaton;
    return embed(*x.automaton, static_cast<int>(r.vars.size()), track_map(x.vars, r.vars));
  };
  auto la = lift(a), lb = lift(b);
  if (r.vars.empty()) {
    r.truth = conjunction ? (a.truth && b.truth) : (a.truth || b.truth);
    return r;
  }
  const int n = static_cast<int>(r.vars.size());
  if (!la || !lb) {
    const Result& closed = la ? b : a;
    const RelationAutomaton& open = la ? *la : *lb;
    if (conjunction) r.automaton = closed.truth ? open : empty_relation(base_, n);
    else r.automaton = closed.truth ? universal_relation(base_, n) : open;
    return r;
  }
  r.automaton = product(*la, *lb, op);
  return r;
}

Compiler::Result Compiler::negate(const Result& r) {
  Result out;
  out.vars = r.vars;
  if (r.automaton) out.automaton = complement(*r.automaton);
  else out.truth = !r.truth;
  return out;
}

Compiler::Result Compiler::exists(const std::vector<std::string>& names, const Result& body) {
  std::set<std::string> bound;
  for (const auto& v : names)
    if (std::find(body.vars.begin(), body.vars.end(), v) != body.vars.end()) bound.insert(v);
  if (bound.empty()) return body;
  Result r;
  if (bound.size() == body.vars.size()) {
    r.truth = !is_empty(*body.automaton);
    return r;
  }
  // Bound variables move to the last tracks.
  std::vector<std::string> order;
  for (const auto& v : body.vars)
    if (!bound.count(v)) order.push_back(v);
  const int kept = static_cast<int>(order.size());
  for (const auto& v : body.vars)
    if (bound.count(v)) order.push_back(v);
  RelationAutomaton moved = *body.automaton;
  if (order != body.vars) moved = embed(moved, static_cast<int>(order.size()), track_map(body.vars, order));
  // One track at a time: minimizing between steps keeps the subset
  // construction far smaller than a joint projection.
  for (int t = static_cast<int>(order.size()) - 1; t >= kept; --t) moved = project_exists(moved, t);
  order.resize(kept);
  r.vars = order;
  r.automaton = std::move(moved);
  return r;
}

RelationAutomaton Compiler::compile(const Formula& f, const std::vector<std::string>& free_order) {
  std::set<std::string> declared(free_order.begin(), free_order.end());
  if (declared.size() != free_order.size()) throw ValidationError("free variable list has duplicates");
  if (free_order.empty()) throw ValidationError("compile needs at least one free variable; use eval for sentences");
  for (const auto& v : free_variables(f))
    if (!declared.count(v)) throw ValidationError("variable '" + v + "' is free but not listed");
  Result r = compile_node(f);
  const int n = static_cast<int>(free_order.size());
  if (!r.automaton) return r.truth ? universal_relation(base_, n) : empty_relation(base_, n);
  return embed(*r.automaton, n, track_map(r.vars, free_order));
}

bool Compiler::eval(const Formula& f) {
  auto free = free_variables(f);
  if (!free.empty()) throw ValidationError("sentence has free variable '" + free[0] + "'");
  Result r = compile_node(f);
  return r.truth;
}

RelationAutomaton compile_formula(const Formula& f, int base, const std::vector<std::string>& free_order,
                                  const Binding& binding) {
  return Compiler(base, binding).compile(f, free_order);
}

bool eval_sentence(const Formula& f, int base, const Binding& binding) { return Compiler(base, binding).eval(f); }

}  // namespace rva
