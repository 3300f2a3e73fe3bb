#include "linear.hpp"

#include <algorithm>

namespace rva::geo {

namespace {

bool is_zero(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

// Eliminates `var` from the system by pairing opposite-sign rows.
std::vector<Ineq> eliminate(const std::vector<Ineq>& system, int var) {
  std::vector<Ineq> pos, neg, out;
  for (const auto& row : system) {
    if (row.a[var] > 0) pos.push_back(row);
    else if (row.a[var] < 0) neg.push_back(row);
    else out.push_back(row);
  }
  for (const auto& p : pos)
    for (const auto& n : neg) {
      const Rational sp = p.a[var], sn = -n.a[var];
      Ineq c;
      c.a.resize(p.a.size());
      for (std::size_t j = 0; j < p.a.size(); ++j) c.a[j] = p.a[j] * sn + n.a[j] * sp;
      c.a[var] = 0;
      c.b = p.b * sn + n.b * sp;
      c.strict = p.strict || n.strict;
      out.push_back(std::move(c));
    }
  // Drop duplicates to slow the quadratic growth.
  std::vector<Ineq> dedup;
  for (auto& c : out) {
    Rational scale = 0;
    for (const auto& x : c.a)
      if (x != 0) {
        scale = abs(x);
        break;
      }
    if (scale != 0) {
      for (auto& x : c.a) x /= scale;
      c.b /= scale;
    }
    bool seen = false;
    for (auto& d : dedup)
      if (d.a == c.a) {
        // Same left side: keep the tighter bound.
        if (c.b < d.b || (c.b == d.b && c.strict && !d.strict)) d = c;
        seen = true;
        break;
      }
    if (!seen) dedup.push_back(std::move(c));
  }
  return dedup;
}

bool trivially_consistent(const std::vector<Ineq>& system) {
  for (const auto& row : system)
    if (is_zero(row.a) && (row.strict ? !(0 < row.b) : !(0 <= row.b))) return false;
  return true;
}

}  // namespace

Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool feasible(std::vector<Ineq> system, int dims) {
  for (int v = 0; v < dims; ++v) {
    if (!trivially_consistent(system)) return false;
    system = eliminate(system, v);
  }
  return trivially_consistent(system);
}

Interval project_onto(std::vector<Ineq> system, int dims, int var) {
  for (int v = 0; v < dims; ++v) {
    if (v == var) continue;
    if (!trivially_consistent(system)) return Interval{.empty = true};
    system = eliminate(system, v);
  }
  Interval out;
  if (!trivially_consistent(system)) {
    out.empty = true;
    return out;
  }
  for (const auto& row : system) {
    const Rational c = row.a[var];
    if (c == 0) continue;
    const Rational bound = row.b / c;
    auto& bound_ref = c > 0 ? out.hi : out.lo;
    bool& strict_ref = c > 0 ? out.hi_strict : out.lo_strict;
    const bool tighter = !bound_ref || (c > 0 ? bound < *bound_ref : bound > *bound_ref);
    if (tighter) {
      bound_ref = bound;
      strict_ref = row.strict;
    } else if (bound == *bound_ref && row.strict) {
      strict_ref = true;
    }
  }
  if (out.lo && out.hi && (*out.lo > *out.hi || (*out.lo == *out.hi && (out.lo_strict || out.hi_strict))))
    out.empty = true;
  return out;
}

Rational normalize_direction(RationalVector& v) {
  Integer den = 1;
  for (const auto& x : v) den = lcm_of(den, denominator_of(x));
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, numerator_of(x * den));
  if (g == 0) return 1;
  Rational factor = Rational(den) / Rational(g);
  for (const auto& x : v)
    if (x != 0) {
      if (x < 0) factor = -factor;
      break;
    }
  for (auto& x : v) x *= factor;
  return factor;
}

std::vector<int> row_reduce(std::vector<RationalVector>& rows, int cols) {
  std::vector<int> pivots;
  std::size_t r = 0;
  for (int c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const Rational lead = rows[r][c];
    for (auto& x : rows[r]) x /= lead;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Rational f = rows[i][c];
      for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

int rank_of(std::vector<RationalVector> rows) {
  if (rows.empty()) return 0;
  return static_cast<int>(row_reduce(rows, static_cast<int>(rows[0].size())).size());
}

std::vector<RationalVector> nullspace(const std::vector<RationalVector>& rows, int dims) {
  std::vector<RationalVector> m = rows;
  auto pivots = row_reduce(m, dims);
  std::vector<RationalVector> out;
  for (int free = 0; free < dims; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    RationalVector v(dims, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    normalize_direction(v);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<RationalVector> solve_square(std::vector<RationalVector> a, RationalVector b) {
  const int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i) a[i].push_back(b[i]);
  auto pivots = row_reduce(a, n);
  if (static_cast<int>(pivots.size()) < n) return std::nullopt;
  RationalVector x(n);
  for (int i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

}  // namespace rva::geo
