#include "rva/definability.hpp"

#include <algorithm>
#include <functional>

#include "rva/errors.hpp"
#include "rva/intdef.hpp"
#include "rva/omega.hpp"

namespace rva {

namespace {

using fml::conj;
using fml::disj;
using fml::neg;

Term var(const std::string& name) { return Term::var(name); }
Term num(long long c) { return Term::constant_term(Rational(c)); }
Formula cmp(Term a, Comparator c, Term b) { return fml::compare(std::move(a), c, std::move(b)); }

std::vector<std::string> names(const std::string& stem, const std::vector<int>& tracks) {
  std::vector<std::string> out;
  for (int t : tracks) out.push_back(stem + std::to_string(t));
  return out;
}

std::vector<Term> terms(const std::vector<std::string>& vars) {
  std::vector<Term> out;
  for (const auto& v : vars) out.push_back(var(v));
  return out;
}

std::vector<Term> plus(const std::vector<Term>& a, const std::vector<Term>& b) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

std::vector<Term> minus(const std::vector<Term>& a, const std::vector<Term>& b) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
  return out;
}

// |c|_I < bound, with the max norm expanded componentwise.
Formula norm_lt(const std::vector<Term>& c, const Term& bound) {
  std::vector<Formula> parts;
  for (const auto& t : c) {
    parts.push_back(cmp(t, Comparator::Lt, bound));
    parts.push_back(cmp(Rational(-1) * t, Comparator::Lt, bound));
  }
  return conj(parts);
}

Formula norm_gt(const std::vector<Term>& c, const Term& bound) {
  std::vector<Formula> parts;
  for (const auto& t : c) {
    parts.push_back(cmp(t, Comparator::Gt, bound));
    parts.push_back(cmp(Rational(-1) * t, Comparator::Gt, bound));
  }
  return disj(parts);
}

Formula nonzero(const std::vector<Term>& c) {
  std::vector<Formula> parts;
  for (const auto& t : c) parts.push_back(cmp(t, Comparator::Ne, num(0)));
  return disj(parts);
}

// X applied to xi + z, where z ranges over the live tracks.
Formula x_at(const FrozenPattern& p, const std::vector<Term>& xi, const std::vector<Term>& live) {
  std::vector<Term> args(p.n);
  auto frozen = p.frozen();
  for (std::size_t i = 0; i < p.live.size(); ++i) args[p.live[i] - 1] = live[i];
  for (std::size_t i = 0; i < frozen.size(); ++i) args[frozen[i] - 1] = xi[i];
  return fml::rel("X", args);
}

Formula all_int(const std::vector<Term>& c) {
  std::vector<Formula> parts;
  for (const auto& t : c) parts.push_back(fml::is_int(t));
  return conj(parts);
}

class LocalBuilder {
 public:
  explicit LocalBuilder(FrozenPattern p) : p_(std::move(p)), xi_(names("xi", p_.frozen())), xi_terms_(terms(xi_)) {}
  // Frozen coordinates fixed to constants.
  LocalBuilder(FrozenPattern p, const RationalVector& xi) : LocalBuilder(std::move(p)) {
    xi_terms_.clear();
    for (const auto& c : xi) xi_terms_.push_back(Term::constant_term(c));
  }

  const std::vector<std::string>& xi() const { return xi_; }
  std::vector<std::string> vec(const std::string& stem) const { return names(stem, p_.live); }

  // phi(xi, x, r, s, v): v is a translation invariance of X near x, 0 < |v| < s.
  Formula phi(const std::vector<Term>& x, const Term& r, const Term& s, const std::vector<Term>& v) const {
    return conj({nonzero(v), norm_lt(v, s), invariant(x, r, v)});
  }

  // v-translation invariance of the section on B(x, r).
  Formula invariant(const std::vector<Term>& x, const Term& r, const std::vector<Term>& v) const {
    auto y = terms(vec("y"));
    auto inside = conj(norm_lt(minus(y, x), r), norm_lt(minus(plus(y, v), x), r));
    auto same = fml::iff(x_at(p_, xi_terms_, y), x_at(p_, xi_terms_, plus(y, v)));
    return fml::forall(vec("y"), fml::implies(inside, same));
  }

  Formula qs(const std::vector<Term>& x) const {
    const Term r = var("r"), s = var("s");
    auto v = vec("v"), u = vec("u");
    auto phi_v = phi(x, r, s, terms(v));
    // phi(v/2) takes the term v/2 directly; introducing w with v = w + w
    // would cost an extra projection of a relation with 2|I| + 2 tracks.
    std::vector<Term> half;
    for (const auto& t : terms(v)) half.push_back(Rational(1, 2) * t);
    auto halving = fml::forall(v, fml::implies(phi_v, phi(x, r, s, half)));
    // Closure is required only at nonzero limits u, since phi excludes v = 0.
    // For 0 < |u| < s the bound |v| < s is open around u, so u is a limit of
    // quasi-strata iff it is a limit of invariance vectors; dropping s there
    // keeps the inner relation one track smaller.
    // The box |v - u| < e is applied one coordinate at a time, each v_i
    // projected right after its own constraint, which keeps one track less
    // alive than quantifying all of v over the full box.
    const Term e = var("e");
    Formula near = invariant(x, r, terms(v));
    for (std::size_t i = 0; i < v.size(); ++i)
      near = fml::exists(v[i], conj(near, norm_lt({var(v[i]) - var(u[i])}, e)));
    auto approaches = fml::forall("e", fml::implies(cmp(e, Comparator::Gt, num(0)), near));
    auto closed = fml::forall(
        u, fml::implies(conj({nonzero(terms(u)), norm_lt(terms(u), s), approaches}), invariant(x, r, terms(u))));
    auto body = conj({cmp(num(0), Comparator::Lt, s), cmp(s, Comparator::Lt, r), fml::exists(v, phi_v), halving, closed});
    return neg(fml::exists(std::vector<std::string>{"r", "s"}, body));
  }

  Formula fs() const {
    auto x = vec("x"), x2 = vec("z");
    const Term t = var("t"), sep = var("sep");
    auto bounded = fml::exists(
        "t", conj(cmp(t, Comparator::Gt, num(0)), fml::forall(x, fml::implies(qs(terms(x)), norm_lt(terms(x), t)))));
    std::vector<Formula> differ;
    for (std::size_t i = 0; i < x.size(); ++i) differ.push_back(cmp(var(x[i]), Comparator::Ne, var(x2[i])));
    auto all = x;
    all.insert(all.end(), x2.begin(), x2.end());
    auto separated = fml::exists(
        "sep", conj(cmp(sep, Comparator::Gt, num(0)),
                    fml::forall(all, fml::implies(conj({qs(terms(x)), qs(terms(x2)), disj(differ)}),
                                                  norm_gt(minus(terms(x), terms(x2)), sep)))));
    return conj(bounded, separated);
  }

 private:
  FrozenPattern p_;
  std::vector<std::string> xi_;
  std::vector<Term> xi_terms_;
};

std::vector<std::string> with_prefix(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  auto out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

RationalVector merge_point(const FrozenPattern& p, const RationalVector& xi, const RationalVector& x) {
  RationalVector out(p.n);
  auto frozen = p.frozen();
  for (std::size_t i = 0; i < frozen.size(); ++i) out[frozen[i] - 1] = xi[i];
  for (std::size_t i = 0; i < p.live.size(); ++i) out[p.live[i] - 1] = x[i];
  return out;
}

void require_saturated(const RelationAutomaton& x) {
  if (!x.saturated()) throw ValidationError("relation must be saturated; run saturate first");
}

std::string vector_text(const std::vector<Integer>& a) {
  std::string out = "(";
  for (std::size_t i = 0; i < a.size(); ++i) out += (i ? "," : "") + a[i].str();
  return out + ")";
}

}  // namespace

std::vector<int> FrozenPattern::frozen() const {
  std::vector<int> out;
  for (int t = 1; t <= n; ++t)
    if (std::find(live.begin(), live.end(), t) == live.end()) out.push_back(t);
  return out;
}

std::string FrozenPattern::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < live.size(); ++i) out += (i ? "," : "") + std::to_string(live[i]);
  return out + "}";
}

std::vector<FrozenPattern> FrozenPattern::all_nonempty(int n) {
  // Singletons first, the full pattern last.
  std::vector<FrozenPattern> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    FrozenPattern p{n, {}};
    for (int t = 0; t < n; ++t)
      if (mask & (1 << t)) p.live.push_back(t + 1);
    out.push_back(p);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.live.size() < b.live.size(); });
  return out;
}

LocalFormulas build_local_formulas(int n, const std::vector<int>& live) {
  if (n < 1) throw ValidationError("arity must be positive");
  if (live.empty()) throw ValidationError("the live track set I must be nonempty");
  FrozenPattern p{n, live};
  std::sort(p.live.begin(), p.live.end());
  if (std::adjacent_find(p.live.begin(), p.live.end()) != p.live.end() || p.live.front() < 1 || p.live.back() > n)
    throw ValidationError("live tracks must be distinct indices in 1.." + std::to_string(n));
  LocalBuilder b(p);
  LocalFormulas out;
  out.pattern = p;
  out.xi = b.xi();
  out.x = b.vec("x");
  out.v = b.vec("v");
  out.phi = b.phi(terms(out.x), var("r"), var("s"), terms(out.v));
  out.qs = b.qs(terms(out.x));
  out.fs = b.fs();
  return out;
}

Formula quasi_singular_at(int n, const std::vector<int>& live, const RationalVector& point) {
  if (static_cast<int>(point.size()) != n) throw ValidationError("point has the wrong dimension");
  auto lf = build_local_formulas(n, live);
  RationalVector xi, x;
  for (int t : lf.pattern.frozen()) xi.push_back(point[t - 1]);
  std::vector<Term> at;
  for (int t : lf.pattern.live) at.push_back(Term::constant_term(point[t - 1]));
  return LocalBuilder(lf.pattern, xi).qs(at);
}

Formula finite_singular_at(int n, const std::vector<int>& live, const RationalVector& xi) {
  auto lf = build_local_formulas(n, live);
  if (xi.size() != lf.xi.size()) throw ValidationError("xi needs one value per frozen track");
  return LocalBuilder(lf.pattern, xi).fs();
}

Formula build_phi_n(int n) {
  std::vector<Formula> parts;
  for (const auto& p : FrozenPattern::all_nonempty(n)) {
    auto lf = build_local_formulas(n, p.live);
    parts.push_back(fml::forall(lf.xi, lf.fs));
  }
  return conj(parts);
}

Formula approx_formula(const std::vector<Term>& x, const std::vector<Term>& y) {
  if (x.size() != y.size() || x.empty()) throw ValidationError("approx needs two vectors of the same positive length");
  std::vector<int> tracks;
  for (std::size_t i = 1; i <= x.size(); ++i) tracks.push_back(static_cast<int>(i));
  auto z = names("cz", tracks);
  std::vector<Formula> cube;
  for (const auto& zi : z) {
    cube.push_back(cmp(num(0), Comparator::Le, var(zi)));
    cube.push_back(cmp(var(zi), Comparator::Lt, num(1)));
  }
  auto same = fml::iff(fml::rel("X", plus(x, terms(z))), fml::rel("X", plus(y, terms(z))));
  return conj({all_int(x), all_int(y), fml::forall(z, fml::implies(conj(cube), same))});
}

Formula build_approx(int n) {
  std::vector<int> tracks;
  for (int i = 1; i <= n; ++i) tracks.push_back(i);
  return approx_formula(terms(names("x", tracks)), terms(names("y", tracks)));
}

std::string to_string(Verdict v) { return v == Verdict::Definable ? "Definable" : "NotDefinable"; }

DefinabilityReport decide_s_definable(const RelationAutomaton& x) {
  require_saturated(x);
  const int n = x.arity();
  Compiler compiler(x.base(), {{"X", x}});
  DefinabilityReport report;
  report.stage_sizes.emplace_back("input", x.num_states());
  for (const auto& p : FrozenPattern::all_nonempty(n)) {
    auto lf = build_local_formulas(n, p.live);
    const bool holds = compiler.eval(fml::forall(lf.xi, lf.fs));
    report.stage_sizes.emplace_back("FS" + p.to_string(), compiler.stats().largest_automaton);
    if (holds) continue;
    report.verdict = Verdict::NotDefinable;
    report.failing_pattern = p;
    report.failing_tag = p.live.size() == static_cast<std::size_t>(n) ? "FSP" : "DS";
    report.evidence = "FS fails for I=" + p.to_string();
    // Quasi-singular points of a failing generalized projection.
    auto vars = with_prefix(lf.xi, lf.x);
    auto region = compiler.compile(lf.xi.empty() ? lf.qs : conj(lf.qs, neg(lf.fs)), vars);
    report.stage_sizes.emplace_back("witness region", region.num_states());
    if (auto w = emptiness_witness(region)) {
      auto point = decode(*w, region.base(), region.arity());
      RationalVector xi(point.begin(), point.begin() + lf.xi.size());
      RationalVector live(point.begin() + lf.xi.size(), point.end());
      report.witness_word = *w;
      report.witness = merge_point(p, xi, live);
      report.evidence += "; quasi-singular point " + to_string(*report.witness);
    }
    return report;
  }
  return report;
}

DecompositionReport decompose(const RelationAutomaton& x, const DecompositionOptions& options) {
  require_saturated(x);
  const int n = x.arity();
  Compiler compiler(x.base(), {{"X", x}});
  std::vector<int> tracks;
  for (int i = 1; i <= n; ++i) tracks.push_back(i);
  auto xs = names("px", tracks), ys = names("py", tracks);
  // Every integer point is ~ to some point of norm below N.
  auto covered = fml::forall(
      xs, fml::implies(all_int(terms(xs)),
                       fml::exists(ys, conj(norm_lt(terms(ys), var("N")), approx_formula(terms(ys), terms(xs))))));
  DecompositionReport report;
  report.fu_holds = compiler.eval(fml::exists("N", covered));
  if (!report.fu_holds) return report;

  auto bounds = compiler.compile(covered, {"N"});
  Integer bound = 1;
  for (int e = 0;; ++e, bound *= 2) {
    if (e > options.max_bound_exponent)
      throw EngineLimitError("cube class bound search (N > 2^" + std::to_string(options.max_bound_exponent) + ")",
                             bounds.num_states());
    if (member(bounds, {Rational(bound)})) break;
  }
  report.bound = bound;

  // Integer points with |y| < N, by norm then lexicographically.
  const long long radius = static_cast<long long>(bound) - 1;
  std::size_t count = 1;
  for (int i = 0; i < n; ++i) {
    count *= static_cast<std::size_t>(2 * radius + 1);
    if (count > options.max_box_points) throw EngineLimitError("cube class enumeration", count);
  }
  std::vector<std::vector<long long>> points;
  std::vector<long long> cur(n, -radius);
  for (std::size_t i = 0; i < count; ++i) {
    points.push_back(cur);
    for (int t = n - 1; t >= 0; --t) {
      if (++cur[t] <= radius) break;
      cur[t] = -radius;
    }
  }
  auto norm = [](const std::vector<long long>& p) {
    long long m = 0;
    for (long long c : p) m = std::max(m, c < 0 ? -c : c);
    return m;
  };
  std::stable_sort(points.begin(), points.end(), [&](const auto& a, const auto& b) { return norm(a) < norm(b); });

  auto approx = compiler.compile(build_approx(n), with_prefix(names("x", tracks), names("y", tracks)));
  std::vector<std::vector<long long>> reps;
  for (const auto& p : points) {
    bool known = false;
    for (const auto& r : reps) {
      RationalVector pair;
      for (long long c : p) pair.emplace_back(c);
      for (long long c : r) pair.emplace_back(c);
      if (member(approx, pair)) {
        known = true;
        break;
      }
    }
    if (!known) reps.push_back(p);
  }

  auto zs = names("dz", tracks);
  for (const auto& r : reps) {
    std::vector<Term> a;
    for (long long c : r) a.push_back(num(c));
    std::vector<Formula> cube;
    for (const auto& z : zs) {
      cube.push_back(cmp(num(0), Comparator::Le, var(z)));
      cube.push_back(cmp(var(z), Comparator::Lt, num(1)));
    }
    cube.push_back(fml::rel("X", plus(a, terms(zs))));
    std::vector<Integer> rep(r.begin(), r.end());
    report.classes.push_back(CubeClass{rep, compiler.compile(approx_formula(terms(xs), a), xs),
                                       compiler.compile(conj(cube), zs)});
  }
  return report;
}

DefinabilityReport decide_l_definable(const RelationAutomaton& x, const DecompositionOptions& options) {
  auto d = decompose(x, options);
  DefinabilityReport report;
  report.stage_sizes.emplace_back("input", x.num_states());
  if (!d.fu_holds) {
    report.verdict = Verdict::NotDefinable;
    report.failing_tag = "FU";
    report.evidence = "infinitely many distinct unit cube patterns";
    return report;
  }
  for (const auto& c : d.classes) {
    ClassCheck row;
    row.representative = c.representative;
    row.sigma_states = c.sigma.num_states();
    row.delta_states = c.delta.num_states();
    row.ip = presburger_definable(integer_restrict_to_dfa(c.sigma));
    if (row.ip) {
      auto s = decide_s_definable(c.delta);
      row.fp = s.verdict == Verdict::Definable;
      if (!*row.fp && report.verdict == Verdict::Definable) {
        report.verdict = Verdict::NotDefinable;
        report.failing_tag = "FP";
        report.failing_class = c.representative;
        report.evidence = "cube pattern of class " + vector_text(c.representative) + " is not S-definable (" +
                          s.evidence + ")";
        report.witness = s.witness;
        report.witness_word = s.witness_word;
      }
    } else if (report.verdict == Verdict::Definable) {
      report.verdict = Verdict::NotDefinable;
      report.failing_tag = "IP";
      report.failing_class = c.representative;
      report.evidence = "integer part of class " + vector_text(c.representative) + " is not Presburger definable";
    }
    report.classes.push_back(row);
  }
  report.stage_sizes.emplace_back("classes", d.classes.size());
  return report;
}

}  // namespace rva
