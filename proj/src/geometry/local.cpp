#include <algorithm>
#include <map>
#include <set>

#include "internal.hpp"
#include "rva/errors.hpp"

namespace rva {

using geo::Ineq;

namespace {

using Cone = std::vector<std::pair<RationalVector, Comparator>>;
using SignVector = std::vector<signed char>;

struct Hyperplane {
  RationalVector a;  // primitive, first nonzero entry positive
  Rational c;
  bool operator<(const Hyperplane& o) const { return std::tie(a, c) < std::tie(o.a, o.c); }
  bool operator==(const Hyperplane& o) const { return a == o.a && c == o.c; }
};

Hyperplane canonical(RationalVector a, Rational c) {
  const Rational f = geo::normalize_direction(a);
  return {std::move(a), c * f};
}

// Central arrangement given by primitive normals, with all realizable faces.
class Arrangement {
 public:
  explicit Arrangement(int dims) : dims_(dims) {}

  // Index of the normal and the sign relating `a` to it.
  std::pair<int, int> add(RationalVector a) {
    const Rational f = geo::normalize_direction(a);
    for (std::size_t i = 0; i < normals_.size(); ++i)
      if (normals_[i] == a) return {static_cast<int>(i), f > 0 ? 1 : -1};
    normals_.push_back(std::move(a));
    return {static_cast<int>(normals_.size()) - 1, f > 0 ? 1 : -1};
  }

  const std::vector<RationalVector>& normals() const { return normals_; }

  std::vector<SignVector> faces() const {
    std::vector<SignVector> faces{SignVector{}};
    for (std::size_t j = 0; j < normals_.size(); ++j) {
      std::vector<SignVector> next;
      for (const auto& f : faces)
        for (signed char s : {-1, 0, 1}) {
          SignVector g = f;
          g.push_back(s);
          if (realizable(g)) next.push_back(std::move(g));
        }
      faces = std::move(next);
    }
    return faces;
  }

 private:
  bool realizable(const SignVector& s) const {
    std::vector<Ineq> sys;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const Comparator c = s[j] < 0 ? Comparator::Lt : s[j] > 0 ? Comparator::Gt : Comparator::Eq;
      geo::append_row(normals_[j], c, 0, false, sys);
    }
    return geo::feasible(sys, dims_);
  }

  int dims_;
  std::vector<RationalVector> normals_;
};

bool sign_satisfies(int s, Comparator c) {
  switch (c) {
    case Comparator::Lt: return s < 0;
    case Comparator::Le: return s <= 0;
    case Comparator::Eq: return s == 0;
    case Comparator::Ge: return s >= 0;
    case Comparator::Gt: return s > 0;
    case Comparator::Ne: return s != 0;
  }
  return false;
}

// A germ's cones rewritten against the arrangement's normal indices.
struct IndexedGerm {
  std::vector<std::vector<std::tuple<int, int, Comparator>>> cones;

  bool member(const SignVector& face) const {
    for (const auto& cone : cones) {
      bool in = true;
      for (const auto& [idx, sign, cmp] : cone)
        if (!sign_satisfies(sign * face[idx], cmp)) {
          in = false;
          break;
        }
      if (in) return true;
    }
    return false;
  }
};

IndexedGerm index_germ(const LocalGerm& g, Arrangement& arr) {
  IndexedGerm out;
  for (const auto& cone : g.cones) {
    std::vector<std::tuple<int, int, Comparator>> rows;
    for (const auto& [a, cmp] : cone) {
      auto [idx, sign] = arr.add(a);
      rows.emplace_back(idx, sign, cmp);
    }
    out.cones.push_back(std::move(rows));
  }
  return out;
}

bool is_full_or_empty(const LocalGerm& g) {
  if (g.cones.empty()) return true;
  return std::any_of(g.cones.begin(), g.cones.end(), [](const Cone& c) { return c.empty(); });
}

// Is membership constant on each face of the sub-arrangement `keep`?
bool union_of_faces(const std::vector<SignVector>& faces, const std::vector<char>& membership,
                    const std::vector<char>& keep) {
  std::map<SignVector, char> seen;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    SignVector key;
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (keep[j]) key.push_back(faces[f][j]);
    auto [it, fresh] = seen.emplace(std::move(key), membership[f]);
    if (!fresh && it->second != membership[f]) return false;
  }
  return true;
}

Rational norm1(const RationalVector& a) {
  Rational s = 0;
  for (const auto& x : a) s += abs(x);
  return s;
}

Rational norm_inf(const RationalVector& a) {
  Rational m = 0;
  for (const auto& x : a) m = std::max(m, Rational(abs(x)));
  return m;
}

// Hyperplanes of all translates meeting the box of the given radius.
std::vector<Hyperplane> hyperplanes_near(const PeriodicPolySet& p, const RationalVector& center,
                                         const Rational& radius) {
  std::set<Hyperplane> out;
  for (const auto& piece : p.pieces)
    for (const auto& shift : geo::shifts_near(piece, p.arity, center, radius))
      for (const auto& h : piece.constraints) {
        if (norm1(h.a) == 0) continue;
        out.insert(canonical(h.a, h.c + geo::dot(h.a, shift)));
      }
  return {out.begin(), out.end()};
}

// Window radius for global searches: covers the untranslated pieces' vertices
// and a couple of periods in every direction.
Rational search_radius(const PeriodicPolySet& p) {
  Rational anchor = 0, periods = 0;
  const int n = p.arity;
  for (const auto& piece : p.pieces) {
    for (const auto& g : piece.periods) periods += norm_inf(geo::as_rational(g));
    std::vector<Hyperplane> hs;
    for (const auto& h : piece.constraints)
      if (norm1(h.a) != 0) {
        hs.push_back(canonical(h.a, h.c));
        anchor = std::max(anchor, Rational(abs(h.c) / norm1(h.a)));
      }
    std::vector<int> idx(n);
    std::function<void(int, int)> pick = [&](int depth, int from) {
      if (depth == n) {
        std::vector<RationalVector> a;
        RationalVector b;
        for (int i : idx) {
          a.push_back(hs[i].a);
          b.push_back(hs[i].c);
        }
        if (auto v = geo::solve_square(a, b)) anchor = std::max(anchor, norm_inf(*v));
        return;
      }
      for (int i = from; i < static_cast<int>(hs.size()); ++i) {
        idx[depth] = i;
        pick(depth + 1, i + 1);
      }
    };
    pick(0, 0);
  }
  return Rational(geo::ceil_of(anchor + 2 * periods)) + 2;
}

std::vector<RationalVector> arrangement_vertices(const std::vector<Hyperplane>& hs, int n, const Rational& radius) {
  std::set<RationalVector> out;
  std::vector<int> idx(n);
  std::function<void(int, int)> pick = [&](int depth, int from) {
    if (depth == n) {
      std::vector<RationalVector> a;
      RationalVector b;
      for (int i : idx) {
        a.push_back(hs[i].a);
        b.push_back(hs[i].c);
      }
      if (auto v = geo::solve_square(a, b); v && norm_inf(*v) <= radius) out.insert(*v);
      return;
    }
    for (int i = from; i < static_cast<int>(hs.size()); ++i) {
      idx[depth] = i;
      pick(depth + 1, i + 1);
    }
  };
  pick(0, 0);
  return {out.begin(), out.end()};
}

bool period_of_piece(const PolyPiece& piece, const RationalVector& g) {
  // g = G m + l with m integer and l in the lineality space of P.
  const int k = static_cast<int>(piece.periods.size());
  std::vector<RationalVector> normals;
  for (const auto& h : piece.constraints) normals.push_back(h.a);
  auto residual_ok = [&](const RationalVector& m) {
    RationalVector r = g;
    for (int j = 0; j < k; ++j)
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= m[j] * Rational(piece.periods[j][i]);
    return std::all_of(normals.begin(), normals.end(), [&](const RationalVector& a) { return geo::dot(a, r) == 0; });
  };
  if (k == 0) return residual_ok({});
  // Rows: a . G m = a . g for each normal.
  std::vector<RationalVector> rows;
  for (const auto& a : normals) {
    RationalVector row;
    for (int j = 0; j < k; ++j) row.push_back(geo::dot(a, geo::as_rational(piece.periods[j])));
    row.push_back(geo::dot(a, g));
    rows.push_back(std::move(row));
  }
  auto pivots = geo::row_reduce(rows, k + 1);
  if (std::find(pivots.begin(), pivots.end(), k) != pivots.end()) return false;
  if (static_cast<int>(pivots.size()) == k) {
    RationalVector m(k);
    for (int j = 0; j < k; ++j) m[j] = rows[j][k];
    return std::all_of(m.begin(), m.end(), [](const Rational& x) { return denominator_of(x) == 1; }) &&
           residual_ok(m);
  }
  // Underdetermined (cannot happen for normalized pieces); search a small box.
  bool found = false;
  geo::for_each_integer_point(std::vector<Integer>(k, -8), std::vector<Integer>(k, 8), [&](const std::vector<Integer>& m) {
    if (!found) found = residual_ok(geo::as_rational(m));
  });
  return found;
}

bool global_period(const PeriodicPolySet& p, const RationalVector& g) {
  return std::all_of(p.pieces.begin(), p.pieces.end(), [&](const PolyPiece& piece) { return period_of_piece(piece, g); });
}

std::vector<std::vector<Integer>> period_candidates(const PeriodicPolySet& p) {
  std::set<std::vector<Integer>> out;
  const int n = p.arity;
  geo::for_each_integer_point(std::vector<Integer>(n, -2), std::vector<Integer>(n, 2), [&](const std::vector<Integer>& g) {
    // g and -g are periods together; keep the one whose first nonzero entry is positive.
    auto lead = std::find_if(g.begin(), g.end(), [](const Integer& x) { return x != 0; });
    if (lead != g.end() && *lead > 0) out.insert(g);
  });
  for (const auto& piece : p.pieces)
    for (const auto& g : piece.periods) out.insert(g);
  std::vector<std::vector<Integer>> v(out.begin(), out.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return norm_inf(geo::as_rational(a)) < norm_inf(geo::as_rational(b));
  });
  return v;
}

RationalVector add_scaled(const RationalVector& x, const std::vector<Integer>& g, long long k) {
  RationalVector out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += Rational(g[i] * k);
  return out;
}

std::string point_text(int coordinate, const Rational& value) {
  return "x" + std::to_string(coordinate + 1) + " = " + to_string(value);
}

}  // namespace

LocalGerm germ_at(const PeriodicPolySet& p, const RationalVector& x) {
  if (static_cast<int>(x.size()) != p.arity) throw ValidationError("point has the wrong dimension");
  LocalGerm g;
  g.dims = p.arity;
  for (const auto& piece : p.pieces)
    for (const auto& shift : geo::shifts_near(piece, p.arity, x, 0)) {
      const RationalVector y = geo::minus(x, shift);
      Cone cone;
      for (const auto& h : piece.constraints)
        if (geo::dot(h.a, y) == h.c && norm1(h.a) != 0) cone.emplace_back(h.a, h.cmp);
      g.cones.push_back(std::move(cone));
    }
  return g;
}

StrataBasis strata_of(const LocalGerm& g) {
  const int n = g.dims;
  StrataBasis full;
  for (int i = 0; i < n; ++i) {
    RationalVector e(n, 0);
    e[i] = 1;
    full.push_back(std::move(e));
  }
  if (is_full_or_empty(g)) return full;
  Arrangement arr(n);
  IndexedGerm ig = index_germ(g, arr);
  auto faces = arr.faces();
  std::vector<char> membership;
  for (const auto& f : faces) membership.push_back(ig.member(f));
  // Drop hyperplanes the germ does not depend on; the rest cut out Str.
  std::vector<char> keep(arr.normals().size(), 1);
  for (std::size_t j = 0; j < keep.size(); ++j) {
    keep[j] = 0;
    if (!union_of_faces(faces, membership, keep)) keep[j] = 1;
  }
  std::vector<RationalVector> rows;
  for (std::size_t j = 0; j < keep.size(); ++j)
    if (keep[j]) rows.push_back(arr.normals()[j]);
  if (rows.empty()) return full;
  return geo::nullspace(rows, n);
}

StrataBasis strata_at(const PeriodicPolySet& p, const RationalVector& x) { return strata_of(germ_at(p, x)); }

bool same_germ(const LocalGerm& a, const LocalGerm& b) {
  if (a.dims != b.dims) return false;
  Arrangement arr(a.dims);
  IndexedGerm ia = index_germ(a, arr), ib = index_germ(b, arr);
  for (const auto& f : arr.faces())
    if (ia.member(f) != ib.member(f)) return false;
  return true;
}

bool sim_equiv(const PeriodicPolySet& p, const RationalVector& x, const RationalVector& y) {
  return same_germ(germ_at(p, x), germ_at(p, y));
}

Rational safe_radius(const PeriodicPolySet& p, const RationalVector& x) {
  if (static_cast<int>(x.size()) != p.arity) throw ValidationError("point has the wrong dimension");
  Rational best = 1;
  for (const auto& piece : p.pieces)
    for (const auto& shift : geo::shifts_near(piece, p.arity, x, 1)) {
      const RationalVector y = geo::minus(x, shift);
      const bool near = geo::satisfies(piece, y, true);
      Rational far = 0;
      for (const auto& h : piece.constraints) {
        const Rational w = norm1(h.a);
        if (w == 0) continue;
        const Rational gap = geo::dot(h.a, y) - h.c;
        const Rational d = abs(gap) / w;
        if (near) {
          if (gap != 0) best = std::min(best, d);
        } else {
          // Violated constraints keep the whole translate at least d away.
          Comparator c = h.cmp;
          if (c == Comparator::Lt) c = Comparator::Le;
          if (c == Comparator::Gt) c = Comparator::Ge;
          if (!compare(geo::dot(h.a, y), c, h.c)) far = std::max(far, d);
        }
      }
      if (!near) best = std::min(best, far);
    }
  return best / 2;
}

SingularSet singular_set(const PeriodicPolySet& p) {
  const int n = p.arity;
  const Rational radius = search_radius(p);
  const RationalVector origin(n, 0);
  SingularSet out;
  for (const auto& v : arrangement_vertices(hyperplanes_near(p, origin, radius), n, radius))
    if (strata_at(p, v).empty()) out.points.push_back(v);
  std::stable_sort(out.points.begin(), out.points.end(),
                   [](const RationalVector& a, const RationalVector& b) { return norm_inf(a) < norm_inf(b); });
  if (out.points.empty()) return out;
  // A period of the whole set repeats every singular point.
  for (const auto& g : period_candidates(p))
    if (global_period(p, geo::as_rational(g))) {
      out.infinite = true;
      out.period = g;
      out.base_point = out.points.front();
      return out;
    }
  // Otherwise look for a piece period along which singular points recur.
  for (const auto& s : out.points)
    for (const auto& piece : p.pieces)
      for (const auto& g : piece.periods) {
        bool recurs = true;
        for (long long k : {1LL, 2LL, 3LL, -1LL})
          if (!strata_at(p, add_scaled(s, g, k)).empty()) {
            recurs = false;
            break;
          }
        if (recurs) {
          out.infinite = true;
          out.period = g;
          out.base_point = s;
          return out;
        }
      }
  return out;
}

PeriodicPolySet section(const PeriodicPolySet& p, int coordinate, const Rational& value) {
  const int n = p.arity;
  if (n < 2) throw ValidationError("sections need arity at least 2");
  if (coordinate < 0 || coordinate >= n) throw ValidationError("section coordinate out of range");
  auto drop = [&](const auto& v) {
    std::decay_t<decltype(v)> out;
    for (int i = 0; i < n; ++i)
      if (i != coordinate) out.push_back(v[i]);
    return out;
  };
  PeriodicPolySet out;
  out.arity = n - 1;
  for (const auto& piece : p.pieces) {
    const int k = static_cast<int>(piece.periods.size());
    // Unimodular U with (row of coordinate in G) * U = (g, 0, ..., 0).
    std::vector<Integer> row(k);
    for (int j = 0; j < k; ++j) row[j] = piece.periods[j][coordinate];
    std::vector<std::vector<Integer>> u(k, std::vector<Integer>(k, 0));
    for (int j = 0; j < k; ++j) u[j][j] = 1;
    auto col_op = [&](int dst, int src, const Integer& f) {  // col dst -= f * col src
      row[dst] -= f * row[src];
      for (int i = 0; i < k; ++i) u[i][dst] -= f * u[i][src];
    };
    auto col_swap = [&](int a, int b) {
      std::swap(row[a], row[b]);
      for (int i = 0; i < k; ++i) std::swap(u[i][a], u[i][b]);
    };
    for (int j = 1; j < k; ++j)
      while (row[j] != 0) {
        col_op(0, j, row[0] / row[j]);
        col_swap(0, j);
      }
    auto column = [&](int c) {
      std::vector<Integer> g(n, 0);
      for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i) g[i] += u[j][c] * piece.periods[j][i];
      return g;
    };
    const bool moving = k > 0 && row[0] != 0;
    PolyPiece base;
    for (int c = moving ? 1 : 0; c < k; ++c) base.periods.push_back(drop(column(c)));
    // Translates along the first column move the slice; enumerate them.
    std::vector<Integer> steps{0};
    RationalVector step_vec(n, 0);
    if (moving) {
      step_vec = geo::as_rational(column(0));
      std::vector<Ineq> sys;
      for (const auto& h : piece.constraints) geo::append_halfspace(h, RationalVector(n, 0), true, sys);
      auto iv = geo::project_onto(sys, n, coordinate);
      if (iv.empty) continue;
      if (!iv.lo || !iv.hi)
        throw ValidationError("section of a piece unbounded along the frozen coordinate is unsupported");
      // value - t * g in [lo, hi].
      const Rational g = Rational(row[0]);
      Rational a = (value - *iv.hi) / g, b = (value - *iv.lo) / g;
      if (a > b) std::swap(a, b);
      steps.clear();
      for (Integer t = geo::ceil_of(a); t <= floor_of(b); ++t) steps.push_back(t);
    }
    for (const auto& t : steps) {
      RationalVector shift(n);
      for (int i = 0; i < n; ++i) shift[i] = step_vec[i] * Rational(t);
      PolyPiece slice = base;
      bool empty = false;
      for (const auto& h : piece.constraints) {
        // a . (z - shift) cmp c with z_coordinate = value.
        HalfSpace s;
        s.a = drop(h.a);
        s.cmp = h.cmp;
        s.c = h.c + geo::dot(h.a, shift) - h.a[coordinate] * value;
        if (norm1(s.a) == 0) {
          if (!compare(Rational(0), s.cmp, s.c)) empty = true;
          continue;
        }
        slice.constraints.push_back(std::move(s));
      }
      if (!empty) out.pieces.push_back(std::move(slice));
    }
  }
  return normalize(std::move(out));
}

std::vector<Rational> critical_values(const PeriodicPolySet& p, int coordinate) {
  const int n = p.arity;
  if (coordinate < 0 || coordinate >= n) throw ValidationError("coordinate out of range");
  const Rational radius = search_radius(p);
  auto hs = hyperplanes_near(p, RationalVector(n, 0), radius);
  std::set<Rational> out;
  // Flats on which the coordinate is constant.
  std::vector<int> idx;
  std::function<void(int)> pick = [&](int from) {
    if (!idx.empty()) {
      std::vector<RationalVector> rows;
      for (int i : idx) {
        RationalVector r = hs[i].a;
        r.push_back(hs[i].c);
        rows.push_back(std::move(r));
      }
      auto pivots = geo::row_reduce(rows, n + 1);
      if (std::find(pivots.begin(), pivots.end(), n) != pivots.end()) return;  // empty flat
      for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] != coordinate) continue;
        bool alone = true;
        for (int j = 0; j < n; ++j) alone = alone && (j == coordinate || rows[r][j] == 0);
        if (alone && abs(rows[r][n]) <= radius) out.insert(rows[r][n]);
      }
    }
    if (static_cast<int>(idx.size()) == n) return;
    for (int i = from; i < static_cast<int>(hs.size()); ++i) {
      idx.push_back(i);
      pick(i + 1);
      idx.pop_back();
    }
  };
  pick(0);
  return {out.begin(), out.end()};
}

ConditionReport check_conditions(const PeriodicPolySet& p) {
  ConditionReport r;
  r.singular = singular_set(p);
  r.fsp = !r.singular.infinite;
  r.rsp = true;  // every arrangement vertex of a rational presentation is rational
  if (p.arity >= 2) {
    for (int i = 0; i < p.arity && r.ds; ++i) {
      auto crit = critical_values(p, i);
      std::vector<Rational> probes;
      if (crit.empty()) probes.push_back(Rational(1, 2));
      for (std::size_t j = 0; j < crit.size(); ++j) {
        if (j == 0) probes.push_back(crit[j] - 1);
        probes.push_back(crit[j]);
        probes.push_back(j + 1 < crit.size() ? Rational((crit[j] + crit[j + 1]) / 2) : Rational(crit[j] + 1));
      }
      for (const auto& c : probes) {
        auto sub = check_conditions(section(p, i, c));
        if (sub.s_verdict == Verdict::NotDefinable) {
          r.ds = false;
          r.ds_failure = point_text(i, c);
          break;
        }
      }
    }
  }
  // Presentations with integer periods are definable with the integer predicate,
  // so the cube decomposition conditions always hold here.
  r.s_verdict = r.fsp && r.rsp && r.ds ? Verdict::Definable : Verdict::NotDefinable;
  r.l_verdict = Verdict::Definable;
  return r;
}

}  // namespace rva
