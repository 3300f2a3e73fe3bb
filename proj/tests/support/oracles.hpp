#pragma once

// Reference implementations used by the tests. Nothing here calls the
// compiler or the automata constructions it is compared against.

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "rva/automaton.hpp"
#include "rva/rational.hpp"

namespace rva::oracle {

// ---- random quantifier-free formulas -------------------------------------

struct QfFormula {
  enum class Op { Atom, IntAtom, Not, And, Or };
  Op op = Op::Atom;
  std::vector<int> coefficients;  // Atom / IntAtom: sum c_i x_i (+ constant for IntAtom)
  Rational constant = 0;
  int cmp = 0;  // Atom: index into "<", "<=", "=", "!=", ">=", ">"
  std::shared_ptr<QfFormula> left, right;
};

/// Atoms use coefficients in [-4, 4] and constants with denominators <= 8.
std::shared_ptr<QfFormula> random_qf(std::mt19937& rng, int vars, int depth);
/// Surface syntax over x1..xn.
std::string render(const QfFormula& f);
bool evaluate(const QfFormula& f, const RationalVector& x);
std::vector<std::string> variable_names(int vars);

Rational random_rational(std::mt19937& rng, int max_den, int max_abs);
RationalVector random_point(std::mt19937& rng, int n, int max_den, int max_abs);
/// m / base^e with small e.
Rational random_kadic(std::mt19937& rng, int base, int max_abs);

// ---- encodings ------------------------------------------------------------

/// Encoding of x with `int_len` integer digits per track. Tracks flagged in
/// `dual` use the other tail ((k-1)^omega); they must hold k-adic values.
UPWord encode_point(const RationalVector& x, int base, const std::vector<bool>& dual);

// ---- hand-built relations -------------------------------------------------

/// Base-4 Cantor set (base-4 digits in {0,3}, inside [0,1]) read in base 2.
RelationAutomaton cantor4_automaton();
bool cantor4_member(const Rational& q);

/// { 2^i : i >= 0 } in base 2.
RelationAutomaton powers_of_two_automaton();
bool power_of_two(const Rational& q);

// ---- the closed unit square -----------------------------------------------

/// Local class of a point for X = [0,1]^2: 0 interior, 1 exterior, 2..5 open
/// edges (x=0, x=1, y=0, y=1), 6..9 vertices.
int square_class(const RationalVector& p);
/// Dimension of the strata space in each class.
int square_dimension(int cls);

}  // namespace rva::oracle
