#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rva/arith.hpp"
#include "rva/automaton.hpp"
#include "rva/definability.hpp"
#include "rva/logic.hpp"
#include "rva/rational.hpp"

namespace rva {

/// a . z (cmp) c with cmp one of <, <=, =, >=, >.
struct HalfSpace {
  RationalVector a;
  Comparator cmp = Comparator::Le;
  Rational c = 0;
};

/// Polyhedron P plus the integer span of the period vectors.
struct PolyPiece {
  std::vector<HalfSpace> constraints;
  std::vector<std::vector<Integer>> periods;
};

/// Finite union of periodic rational polyhedra in R^n, n <= 3.
struct PeriodicPolySet {
  int arity = 1;
  std::vector<PolyPiece> pieces;
};

/// Reads the "polyset 1" text format. The result is normalized.
PeriodicPolySet parse_polyset(std::string_view text);
PeriodicPolySet load_polyset(const std::filesystem::path& path);
std::string to_text(const PeriodicPolySet& p);

/// Drops empty pieces and periods along which a piece is invariant; rejects
/// arity > 3, dependent periods and periods that are recession directions of
/// their polyhedron (those would make local windows meet infinitely many
/// distinct translates).
PeriodicPolySet normalize(PeriodicPolySet p);

bool contains(const PeriodicPolySet& p, const RationalVector& x);

/// Formula in x1..xn (integer multipliers m1.. are bound) and its automaton.
Formula to_formula(const PeriodicPolySet& p);
RelationAutomaton to_automaton(const PeriodicPolySet& p, int base);

/// Germ of the set at a point: a finite union of polyhedral cones h with
/// (a . h cmp 0) for every listed constraint.
struct LocalGerm {
  int dims = 1;
  std::vector<std::vector<std::pair<RationalVector, Comparator>>> cones;
};

LocalGerm germ_at(const PeriodicPolySet& p, const RationalVector& x);
/// Equality of germs translated to a common origin.
bool same_germ(const LocalGerm& a, const LocalGerm& b);

/// Basis of Str(x); empty means x is singular.
using StrataBasis = std::vector<RationalVector>;
StrataBasis strata_at(const PeriodicPolySet& p, const RationalVector& x);
StrataBasis strata_of(const LocalGerm& g);

/// A radius below which the ball around x sees exactly the germ.
Rational safe_radius(const PeriodicPolySet& p, const RationalVector& x);

bool sim_equiv(const PeriodicPolySet& p, const RationalVector& x, const RationalVector& y);

struct SingularSet {
  bool infinite = false;
  std::vector<RationalVector> points;       // all of them when finite, those found otherwise
  std::optional<std::vector<Integer>> period;  // x + Z*period stays singular
  std::optional<RationalVector> base_point;
};

SingularSet singular_set(const PeriodicPolySet& p);

/// Section { z : z_coordinate = value } viewed in the remaining coordinates.
PeriodicPolySet section(const PeriodicPolySet& p, int coordinate, const Rational& value);
/// Values of z_coordinate where sections may change shape, within the window
/// the oracle inspects.
std::vector<Rational> critical_values(const PeriodicPolySet& p, int coordinate);

struct ConditionReport {
  bool fsp = true, rsp = true, ds = true;
  bool fu = true, ip = true, fp = true;
  std::string ds_failure;  // e.g. "x1 = 0" when a section fails
  SingularSet singular;
  Verdict s_verdict = Verdict::Definable;
  Verdict l_verdict = Verdict::Definable;
};

ConditionReport check_conditions(const PeriodicPolySet& p);

}  // namespace rva
