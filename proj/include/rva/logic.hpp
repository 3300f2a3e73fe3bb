#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rva/arith.hpp"
#include "rva/automaton.hpp"
#include "rva/rational.hpp"

namespace rva {

/// sum of coefficient * variable, plus a constant. Addends keep their source order.
struct Term {
  std::vector<std::pair<Rational, std::string>> addends;
  Rational constant = 0;

  static Term var(std::string name) { return Term{{{Rational(1), std::move(name)}}, 0}; }
  static Term constant_term(Rational c) { return Term{{}, std::move(c)}; }
  /// The variable name if the term is exactly one variable with coefficient 1.
  std::optional<std::string> as_variable() const;
};

Term operator+(Term a, const Term& b);
Term operator-(Term a, const Term& b);
Term operator*(const Rational& k, Term a);

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  enum class Kind { True, False, Compare, Int, Rel, Not, And, Or, Implies, Iff, Exists, Forall };
  Kind kind;
  Term lhs, rhs;            // Compare; Int uses lhs
  Comparator cmp = Comparator::Eq;
  std::string name;         // Rel: relation symbol; quantifiers: bound variable
  std::vector<Term> args;   // Rel
  Formula left, right;      // connectives; Not and quantifiers use left
};

namespace fml {
Formula truth(bool value);
Formula compare(Term lhs, Comparator c, Term rhs);
Formula is_int(Term t);
Formula rel(std::string name, std::vector<Term> args);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula conj(const std::vector<Formula>& fs);  // empty -> true
Formula disj(const std::vector<Formula>& fs);  // empty -> false
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula exists(std::string var, Formula body);
Formula forall(std::string var, Formula body);
Formula exists(const std::vector<std::string>& vars, Formula body);
Formula forall(const std::vector<std::string>& vars, Formula body);
}  // namespace fml

std::string to_string(const Formula& f);

/// Free first-order variables in order of first occurrence.
std::vector<std::string> free_variables(const Formula& f);
/// Relation symbols with the arities they are applied with.
std::map<std::string, std::size_t> relation_symbols(const Formula& f);

/// Parses the textual grammar; bound variables that shadow or repeat are renamed.
/// When `declared_free` is given, any other free variable is an error.
Formula parse_formula(std::string_view text, const std::optional<std::vector<std::string>>& declared_free = std::nullopt);

using Binding = std::map<std::string, RelationAutomaton>;

/// Formula to automaton compiler with a cache keyed by the alpha-normalized
/// text of each subformula, so repeated subformulas are compiled once.
class Compiler {
 public:
  Compiler(int base, Binding binding);

  int base() const { return base_; }
  const Binding& binding() const { return binding_; }

  RelationAutomaton compile(const Formula& f, const std::vector<std::string>& free_order);
  bool eval(const Formula& f);

  struct Stats {
    std::size_t compiled_nodes = 0;
    std::size_t cache_hits = 0;
    std::size_t largest_automaton = 0;
  };
  const Stats& stats() const { return stats_; }

  /// Result of compiling a subformula: its free variables in first-occurrence
  /// order and either the automaton over those tracks or a truth value.
  struct Result {
    std::vector<std::string> vars;
    std::optional<RelationAutomaton> automaton;
    bool truth = false;
  };
  Result compile_node(const Formula& f);

 private:
  Result compile_uncached(const Formula& f);
  Result compile_compare(const Formula& f);
  Result compile_rel(const Formula& f);
  Result combine(const Result& a, const Result& b, bool conjunction);
  Result negate(const Result& r);
  Result exists(const std::vector<std::string>& names, const Result& body);
  std::string fresh(const std::string& hint);

  int base_;
  Binding binding_;
  std::unordered_map<std::string, Result> cache_;
  Stats stats_;
  int fresh_counter_ = 0;
};

RelationAutomaton compile_formula(const Formula& f, int base, const std::vector<std::string>& free_order,
                                  const Binding& binding);
bool eval_sentence(const Formula& f, int base, const Binding& binding);

}  // namespace rva
