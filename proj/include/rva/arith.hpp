#pragma once

#include <string>
#include <vector>

#include "rva/automaton.hpp"
#include "rva/rational.hpp"

namespace rva {

enum class Comparator { Lt, Le, Eq, Ne, Ge, Gt };

std::string to_string(Comparator c);
bool compare(const Rational& lhs, Comparator c, const Rational& rhs);

/// sum_i coefficients[i] * x_i  (cmp)  constant
struct LinearAtom {
  std::vector<Integer> coefficients;
  Integer constant = 0;
  Comparator cmp = Comparator::Eq;
};

bool evaluate(const LinearAtom& atom, const RationalVector& point);

/// Saturated wdba for the atom over `arity` tracks (coefficients.size() == arity).
RelationAutomaton linear_atom(const LinearAtom& atom, int base, int arity);

/// Saturated wdba for { x : x_track is an integer }; `track` is 0-based.
RelationAutomaton int_atom(int base, int arity, int track);

/// Saturated arity-3 relation: y = k^i for an integer i, z in {0..k-1}, and some
/// encoding of x has digit z at position i (position 0 is the units digit).
RelationAutomaton xk_atom(int base);

}  // namespace rva
