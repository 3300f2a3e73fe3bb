#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rva/automaton.hpp"
#include "rva/rational.hpp"

namespace rva {

enum class BoolOp { And, Or };

/// Acceptance shape of a minimized automaton, from its normalized priorities.
enum class ParityClass { Weak, CoBuchi, Buchi, General };

/// Every well-formed encoding, i.e. the relation R^n.
RelationAutomaton universal_relation(int base, int arity);
RelationAutomaton empty_relation(int base, int arity);

RelationAutomaton complement(const RelationAutomaton& a);
RelationAutomaton product(const RelationAutomaton& a, const RelationAutomaton& b, BoolOp op);

/// Existential projection of one track; the result has arity - 1 and is saturated.
RelationAutomaton project_exists(const RelationAutomaton& a, int track);

/// Closes the language under re-encoding (dual tails and padding).
RelationAutomaton saturate(const RelationAutomaton& a);

/// Canonical minimal wdba when the language is weak, otherwise a reduced parity automaton.
/// States are renumbered in breadth-first order from the initial state.
RelationAutomaton minimize_and_classify(const RelationAutomaton& a);

ParityClass classify(const RelationAutomaton& a);

/// Cylindrification and track renaming: track i of `a` becomes track `track_map[i]`
/// of the result. Repeated targets identify tracks (diagonal substitution).
RelationAutomaton embed(const RelationAutomaton& a, int arity, std::span<const int> track_map);

std::optional<UPWord> emptiness_witness(const RelationAutomaton& a);
bool is_empty(const RelationAutomaton& a);

/// Runs the automaton on the lasso prefix . period^omega.
bool accepts(const RelationAutomaton& a, const UPWord& word);
bool member(const RelationAutomaton& a, const RationalVector& point);

/// Canonical encoding: shortest sign padding, fractional digits by long division.
UPWord encode(const RationalVector& point, int base);
/// Canonical encoding plus one extra padding column and every per-track dual tail.
std::vector<UPWord> encodings(const RationalVector& point, int base);
/// Throws ValidationError if the word is not a well-formed encoding.
RationalVector decode(const UPWord& word, int base, int arity);

bool equivalent(const RelationAutomaton& a, const RelationAutomaton& b);
/// Table equality after canonical renumbering (no minimization).
bool isomorphic(const RelationAutomaton& a, const RelationAutomaton& b);

}  // namespace rva
