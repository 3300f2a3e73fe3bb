#pragma once

#include <functional>
#include <vector>

#include "linear.hpp"
#include "rva/geometry.hpp"

namespace rva::geo {

RationalVector as_rational(const std::vector<Integer>& g);
RationalVector minus(const RationalVector& a, const RationalVector& b);
Integer ceil_of(const Rational& q);

/// Appends (row . vars cmp rhs) as one or two Ineq rows. With `closure`,
/// strict comparisons are relaxed.
void append_row(const RationalVector& row, Comparator cmp, const Rational& rhs, bool closure, std::vector<Ineq>& out);
/// a . (z - shift) cmp c over the n coordinates of z.
void append_halfspace(const HalfSpace& h, const RationalVector& shift, bool closure, std::vector<Ineq>& out);

/// Shifts G m (m integer) for which cl(P + G m) meets the closed box of the
/// given radius around center.
std::vector<RationalVector> shifts_near(const PolyPiece& piece, int n, const RationalVector& center,
                                        const Rational& radius);

void for_each_integer_point(const std::vector<Integer>& lo, const std::vector<Integer>& hi,
                            const std::function<void(const std::vector<Integer>&)>& fn);

/// z in P (or in its closure).
bool satisfies(const PolyPiece& piece, const RationalVector& z, bool closure);

}  // namespace rva::geo
