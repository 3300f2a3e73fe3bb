#pragma once

#include <span>
#include <vector>

#include "rva/automaton.hpp"
#include "rva/logic.hpp"

namespace rva {

/// Finite-word DFA over n-track digit letters (no star), read most significant
/// digit first after one sign column. Accepts encodings of a subset of Z^n.
struct IntegerRelationDfa {
  int base = 2;
  int arity = 1;
  int initial = 0;
  std::vector<int> table;       // states x base^arity
  std::vector<char> accepting;

  int num_states() const { return static_cast<int>(accepting.size()); }
  int letters() const;
  int next(int q, int letter) const { return table[static_cast<std::size_t>(q) * letters() + letter]; }
  bool accepts(std::span<const int> word) const;
};

/// Integer-part DFA of a relation contained in Z^n. Throws ValidationError
/// naming a non-integer member otherwise.
IntegerRelationDfa integer_restrict_to_dfa(const RelationAutomaton& sigma);

/// Moore-minimal DFA with states renumbered breadth-first.
IntegerRelationDfa minimize(const IntegerRelationDfa& d);

/// The same subset of Z^n as a saturated relation over R^n.
RelationAutomaton lift(const IntegerRelationDfa& d);

/// Integer-relativized sentence over the relation symbol "Y" of arity n.
/// For n = 1: Y is periodic beyond some bound in both directions. For n >= 2:
/// every coordinate section passes the (n-1) criterion and Y is locally
/// periodic on balls of radius |x| / 2^ratio_exponent around each x.
Formula presburger_criterion(int n, int ratio_exponent);

struct PresburgerOptions {
  int max_ratio_exponent = 6;
};

/// True iff the set is definable in <Z,+,<>. For n >= 2 a negative answer
/// needs a failing section; otherwise exhausting the ratio search raises
/// EngineLimitError.
bool presburger_definable(const IntegerRelationDfa& d, const PresburgerOptions& options = {});

}  // namespace rva
