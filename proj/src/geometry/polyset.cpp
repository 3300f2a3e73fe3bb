#include <fstream>
#include <functional>
#include <sstream>

#include "internal.hpp"
#include "linear.hpp"
#include "rva/errors.hpp"
#include "rva/geometry.hpp"

namespace rva {

using geo::Ineq;

namespace {

Comparator parse_cmp(const std::string& tok, std::size_t line) {
  if (tok == "<") return Comparator::Lt;
  if (tok == "<=") return Comparator::Le;
  if (tok == "=") return Comparator::Eq;
  if (tok == ">=") return Comparator::Ge;
  if (tok == ">") return Comparator::Gt;
  throw ParseError("expected one of < <= = >= > but found '" + tok + "'", line, 0);
}

Rational parse_number(const std::string& tok, std::size_t line) {
  try {
    return parse_rational(tok);
  } catch (const ParseError&) {
    throw ParseError("malformed number '" + tok + "'", line, 0);
  }
}

std::string vector_text(const std::vector<Integer>& g) {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) out += (i ? " " : "") + g[i].str();
  return out;
}

}  // namespace

namespace geo {

RationalVector as_rational(const std::vector<Integer>& g) { return RationalVector(g.begin(), g.end()); }

RationalVector minus(const RationalVector& a, const RationalVector& b) {
  RationalVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Integer ceil_of(const Rational& q) { return -floor_of(-q); }

void append_row(const RationalVector& row, Comparator cmp, const Rational& rhs, bool closure, std::vector<Ineq>& out) {
  auto neg = [](RationalVector v) {
    for (auto& x : v) x = -x;
    return v;
  };
  switch (cmp) {
    case Comparator::Lt: out.push_back({row, rhs, !closure}); break;
    case Comparator::Le: out.push_back({row, rhs, false}); break;
    case Comparator::Gt: out.push_back({neg(row), -rhs, !closure}); break;
    case Comparator::Ge: out.push_back({neg(row), -rhs, false}); break;
    case Comparator::Eq:
      out.push_back({row, rhs, false});
      out.push_back({neg(row), -rhs, false});
      break;
    case Comparator::Ne: throw ValidationError("polyset constraints cannot use !=");
  }
}

void append_halfspace(const HalfSpace& h, const RationalVector& shift, bool closure, std::vector<Ineq>& out) {
  append_row(h.a, h.cmp, h.c + dot(h.a, shift), closure, out);
}

std::vector<Ineq> box(const RationalVector& center, const Rational& radius, int dims) {
  std::vector<Ineq> out;
  for (std::size_t i = 0; i < center.size(); ++i) {
    RationalVector e(dims, 0);
    e[i] = 1;
    out.push_back({e, center[i] + radius, false});
    e[i] = -1;
    out.push_back({e, radius - center[i], false});
  }
  return out;
}

std::vector<RationalVector> shifts_near(const PolyPiece& piece, int n, const RationalVector& center,
                                        const Rational& radius) {
  const int k = static_cast<int>(piece.periods.size());
  const int dims = n + k;
  // Variables z (n) then m (k): z in the box and a . (z - G m) cmp c.
  std::vector<Ineq> system = box(center, radius, dims);
  for (const auto& h : piece.constraints) {
    RationalVector row(dims, 0);
    for (int i = 0; i < n; ++i) row[i] = h.a[i];
    for (int j = 0; j < k; ++j) row[n + j] = -dot(h.a, as_rational(piece.periods[j]));
    append_row(row, h.cmp, h.c, true, system);
  }
  std::vector<Integer> lo(k), hi(k);
  for (int j = 0; j < k; ++j) {
    auto iv = project_onto(system, dims, n + j);
    if (iv.empty) return {};
    if (!iv.lo || !iv.hi) throw ValidationError("polyset piece meets a window in infinitely many translates");
    lo[j] = ceil_of(*iv.lo);
    hi[j] = floor_of(*iv.hi);
  }
  std::vector<RationalVector> out;
  for_each_integer_point(lo, hi, [&](const std::vector<Integer>& m) {
    RationalVector shift(n, 0);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) shift[i] += Rational(m[j] * piece.periods[j][i]);
    std::vector<Ineq> sub = box(center, radius, n);
    for (const auto& h : piece.constraints) append_halfspace(h, shift, true, sub);
    if (feasible(sub, n)) out.push_back(std::move(shift));
  });
  return out;
}

void for_each_integer_point(const std::vector<Integer>& lo, const std::vector<Integer>& hi,
                            const std::function<void(const std::vector<Integer>&)>& fn) {
  const std::size_t k = lo.size();
  for (std::size_t j = 0; j < k; ++j)
    if (lo[j] > hi[j]) return;
  std::vector<Integer> cur = lo;
  while (true) {
    fn(cur);
    std::size_t j = 0;
    while (j < k && cur[j] == hi[j]) {
      cur[j] = lo[j];
      ++j;
    }
    if (j == k) return;
    ++cur[j];
  }
}

bool satisfies(const PolyPiece& piece, const RationalVector& z, bool closure) {
  for (const auto& h : piece.constraints) {
    Comparator c = h.cmp;
    if (closure && c == Comparator::Lt) c = Comparator::Le;
    if (closure && c == Comparator::Gt) c = Comparator::Ge;
    if (!compare(dot(h.a, z), c, h.c)) return false;
  }
  return true;
}

}  // namespace geo

PeriodicPolySet parse_polyset(std::string_view text) {
  PeriodicPolySet p;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  bool header = false, have_arity = false;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "polyset" || tok[1] != "1") throw ParseError("expected 'polyset 1'", line, 0);
      header = true;
    } else if (tok[0] == "arity") {
      if (have_arity || tok.size() != 2) throw ParseError("expected a single 'arity <n>' line", line, 0);
      try {
        p.arity = std::stoi(tok[1]);
      } catch (const std::exception&) {
        throw ParseError("malformed arity '" + tok[1] + "'", line, 0);
      }
      if (p.arity < 1) throw ParseError("arity must be positive", line, 0);
      have_arity = true;
    } else if (tok[0] == "piece") {
      if (!have_arity) throw ParseError("'piece' before 'arity'", line, 0);
      p.pieces.emplace_back();
    } else if (tok[0] == "ineq") {
      if (p.pieces.empty()) throw ParseError("'ineq' outside a piece", line, 0);
      if (static_cast<int>(tok.size()) != p.arity + 3) throw ParseError("ineq needs arity coefficients, a comparator and a constant", line, 0);
      HalfSpace h;
      for (int i = 0; i < p.arity; ++i) h.a.push_back(parse_number(tok[1 + i], line));
      h.cmp = parse_cmp(tok[1 + p.arity], line);
      h.c = parse_number(tok[2 + p.arity], line);
      p.pieces.back().constraints.push_back(std::move(h));
    } else if (tok[0] == "period") {
      if (p.pieces.empty()) throw ParseError("'period' outside a piece", line, 0);
      if (static_cast<int>(tok.size()) != p.arity + 1) throw ParseError("period needs arity integer entries", line, 0);
      std::vector<Integer> g;
      for (int i = 0; i < p.arity; ++i) {
        Rational q = parse_number(tok[1 + i], line);
        if (denominator_of(q) != 1) throw ParseError("period entries must be integers", line, 0);
        g.push_back(numerator_of(q));
      }
      p.pieces.back().periods.push_back(std::move(g));
    } else {
      throw ParseError("unknown directive '" + tok[0] + "'", line, 0);
    }
  }
  if (!header) throw ParseError("empty polyset file", 0, 0);
  if (!have_arity) throw ParseError("missing 'arity' line", 0, 0);
  return normalize(std::move(p));
}

PeriodicPolySet load_polyset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_polyset(buf.str());
}

std::string to_text(const PeriodicPolySet& p) {
  std::string out = "polyset 1\narity " + std::to_string(p.arity) + "\n";
  for (const auto& piece : p.pieces) {
    out += "piece\n";
    for (const auto& h : piece.constraints) {
      out += "  ineq";
      for (const auto& a : h.a) out += " " + to_string(a);
      out += " " + to_string(h.cmp) + " " + to_string(h.c) + "\n";
    }
    for (const auto& g : piece.periods) out += "  period " + vector_text(g) + "\n";
  }
  return out;
}

PeriodicPolySet normalize(PeriodicPolySet p) {
  const int n = p.arity;
  if (n < 1 || n > 3) throw ValidationError("polyset arity " + std::to_string(n) + " unsupported (1 to 3)");
  std::vector<PolyPiece> kept;
  for (auto& piece : p.pieces) {
    for (const auto& h : piece.constraints) {
      if (static_cast<int>(h.a.size()) != n) throw ValidationError("constraint has the wrong number of coefficients");
      if (h.cmp == Comparator::Ne) throw ValidationError("polyset constraints cannot use !=");
    }
    std::vector<Ineq> sys;
    for (const auto& h : piece.constraints) geo::append_halfspace(h, RationalVector(n, 0), false, sys);
    if (!geo::feasible(sys, n)) continue;
    std::vector<std::vector<Integer>> periods;
    for (const auto& g : piece.periods) {
      if (static_cast<int>(g.size()) != n) throw ValidationError("period has the wrong number of entries");
      bool zero = true, lineal = true;
      for (const auto& x : g) zero = zero && x == 0;
      for (const auto& h : piece.constraints) lineal = lineal && geo::dot(h.a, geo::as_rational(g)) == 0;
      if (!zero && !lineal) periods.push_back(g);
    }
    piece.periods = periods;
    // No nonzero d with G d in the recession cone of P.
    const int k = static_cast<int>(periods.size());
    if (k > 0) {
      std::vector<Ineq> cone;
      for (const auto& h : piece.constraints) {
        HalfSpace hd;
        for (int j = 0; j < k; ++j) hd.a.push_back(geo::dot(h.a, geo::as_rational(periods[j])));
        hd.cmp = h.cmp == Comparator::Lt ? Comparator::Le : h.cmp == Comparator::Gt ? Comparator::Ge : h.cmp;
        hd.c = 0;
        geo::append_halfspace(hd, RationalVector(k, 0), false, cone);
      }
      for (int j = 0; j < k; ++j)
        for (int sign : {1, -1}) {
          auto probe = cone;
          RationalVector e(k, 0);
          e[j] = -sign;
          probe.push_back({e, -1, false});  // sign * d_j >= 1
          if (geo::feasible(probe, k))
            throw ValidationError("periods of a piece must be independent and not recession directions of its polyhedron");
        }
    }
    kept.push_back(std::move(piece));
  }
  p.pieces = std::move(kept);
  return p;
}

bool contains(const PeriodicPolySet& p, const RationalVector& x) {
  if (static_cast<int>(x.size()) != p.arity) throw ValidationError("point has the wrong dimension");
  for (const auto& piece : p.pieces) {
    for (const auto& shift : geo::shifts_near(piece, p.arity, x, 0))
      if (geo::satisfies(piece, geo::minus(x, shift), false)) return true;
  }
  return false;
}

Formula to_formula(const PeriodicPolySet& p) {
  std::vector<Formula> pieces;
  for (const auto& piece : p.pieces) {
    std::vector<std::string> ms;
    std::vector<Formula> parts;
    for (std::size_t j = 0; j < piece.periods.size(); ++j) {
      ms.push_back("m" + std::to_string(j + 1));
      parts.push_back(fml::is_int(Term::var(ms.back())));
    }
    for (const auto& h : piece.constraints) {
      Term lhs;
      for (int i = 0; i < p.arity; ++i)
        if (h.a[i] != 0) lhs = lhs + h.a[i] * Term::var("x" + std::to_string(i + 1));
      for (std::size_t j = 0; j < piece.periods.size(); ++j) {
        const Rational w = geo::dot(h.a, geo::as_rational(piece.periods[j]));
        if (w != 0) lhs = lhs - w * Term::var(ms[j]);
      }
      parts.push_back(fml::compare(lhs, h.cmp, Term::constant_term(h.c)));
    }
    pieces.push_back(fml::exists(ms, fml::conj(parts)));
  }
  return fml::disj(pieces);
}

RelationAutomaton to_automaton(const PeriodicPolySet& p, int base) {
  std::vector<std::string> vars;
  for (int i = 1; i <= p.arity; ++i) vars.push_back("x" + std::to_string(i));
  return compile_formula(to_formula(p), base, vars, {});
}

}  // namespace rva
