#pragma once

#include <optional>
#include <vector>

#include "rva/rational.hpp"

namespace rva::geo {

/// a . x < b (strict) or a . x <= b.
struct Ineq {
  RationalVector a;
  Rational b;
  bool strict = false;
};

bool feasible(std::vector<Ineq> system, int dims);

struct Interval {
  std::optional<Rational> lo, hi;
  bool lo_strict = false, hi_strict = false;
  bool empty = false;
};

/// Range of coordinate `var` over the solutions of the system.
Interval project_onto(std::vector<Ineq> system, int dims, int var);

/// Basis of { v : rows[i] . v = 0 for all i } with primitive integer-scaled vectors.
std::vector<RationalVector> nullspace(const std::vector<RationalVector>& rows, int dims);

/// Reduced row echelon form over the first `cols` columns, in place; zero rows
/// are dropped. Returns the pivot columns.
std::vector<int> row_reduce(std::vector<RationalVector>& rows, int cols);

int rank_of(std::vector<RationalVector> rows);

/// Unique solution of the square system, or nullopt when singular.
std::optional<RationalVector> solve_square(std::vector<RationalVector> a, RationalVector b);

Rational dot(const RationalVector& a, const RationalVector& b);

/// Scales to a primitive integer vector whose first nonzero entry is positive.
/// Returns the (possibly negative) factor that was applied.
Rational normalize_direction(RationalVector& v);

}  // namespace rva::geo
