#include "rva/intdef.hpp"

#include <functional>
#include <map>

#include "rva/arith.hpp"
#include "rva/errors.hpp"
#include "rva/omega.hpp"

namespace rva {

int IntegerRelationDfa::letters() const {
  int l = 1;
  for (int i = 0; i < arity; ++i) l *= base;
  return l;
}

bool IntegerRelationDfa::accepts(std::span<const int> word) const {
  int q = initial;
  for (int l : word) q = next(q, l);
  return accepting[q] != 0;
}

namespace {

// Acceptance of q . letter . 0^omega.
bool accepts_zero_tail(const RelationAutomaton& a, int q, int letter) {
  std::map<int, int> seen;
  std::vector<int> path;
  int p = a.next(q, letter);
  while (!seen.count(p)) {
    seen[p] = static_cast<int>(path.size());
    path.push_back(p);
    p = a.next(p, 0);
  }
  int best = a.parity_of(p);
  for (std::size_t i = seen[p]; i < path.size(); ++i) best = std::min(best, a.parity_of(path[i]));
  return best % 2 == 0;
}

Term var(const std::string& name) { return Term::var(name); }
Formula cmp(Term a, Comparator c, Term b) { return fml::compare(std::move(a), c, std::move(b)); }
Term num(long long c) { return Term::constant_term(Rational(c)); }

using RelApp = std::function<Formula(const std::vector<Term>&)>;

std::vector<std::string> vec(const std::string& stem, int level, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(stem + std::to_string(level) + "_" + std::to_string(i));
  return out;
}

std::vector<Term> terms(const std::vector<std::string>& v) {
  std::vector<Term> out;
  for (const auto& s : v) out.push_back(var(s));
  return out;
}

Formula ints(const std::vector<std::string>& v) {
  std::vector<Formula> parts;
  for (const auto& s : v) parts.push_back(fml::is_int(var(s)));
  return fml::conj(parts);
}

Formula ultimately_periodic(const RelApp& y, int level) {
  const std::string p = "p" + std::to_string(level), bound = "N" + std::to_string(level), x = "x" + std::to_string(level);
  auto step = [&](bool up) {
    auto guard = fml::conj(fml::is_int(var(x)), up ? cmp(var(x), Comparator::Gt, var(bound))
                                                   : cmp(var(x), Comparator::Lt, Rational(-1) * var(bound)));
    auto shifted = up ? var(x) + var(p) : var(x) - var(p);
    return fml::forall(x, fml::implies(guard, fml::iff(y({var(x)}), y({shifted}))));
  };
  return fml::exists(std::vector<std::string>{p, bound},
                     fml::conj({fml::is_int(var(p)), cmp(var(p), Comparator::Gt, num(0)), step(true), step(false)}));
}

// a <= |x| for the max norm.
Formula below_norm(const Term& a, const std::vector<Term>& x) {
  std::vector<Formula> parts;
  for (const auto& c : x) {
    parts.push_back(cmp(a, Comparator::Le, c));
    parts.push_back(cmp(a, Comparator::Le, Rational(-1) * c));
  }
  return fml::disj(parts);
}

Formula locally_periodic(const RelApp& y, int n, int level, int ratio_exponent) {
  const Rational scale = Rational(Integer(1) << ratio_exponent);
  const std::string k = "K" + std::to_string(level);
  auto x = vec("x", level, n), v = vec("v", level, n), z = vec("y", level, n);
  auto ball = [&](const std::vector<Term>& point) {
    std::vector<Formula> parts;
    for (int i = 0; i < n; ++i) {
      Term d = scale * (point[i] - var(x[i]));
      parts.push_back(below_norm(d, terms(x)));
      parts.push_back(below_norm(Rational(-1) * d, terms(x)));
    }
    return fml::conj(parts);
  };
  std::vector<Term> zv;
  for (int i = 0; i < n; ++i) zv.push_back(var(z[i]) + var(v[i]));
  std::vector<Formula> small{ints(v)}, nonzero;
  for (const auto& c : v) {
    small.push_back(cmp(var(c), Comparator::Le, var(k)));
    small.push_back(cmp(Rational(-1) * var(c), Comparator::Le, var(k)));
    nonzero.push_back(cmp(var(c), Comparator::Ne, num(0)));
  }
  small.push_back(fml::disj(nonzero));
  auto periodic = fml::forall(
      z, fml::implies(fml::conj({ints(z), ball(terms(z)), ball(zv)}), fml::iff(y(terms(z)), y(zv))));
  return fml::exists(k, fml::forall(x, fml::implies(ints(x), fml::exists(v, fml::conj(fml::conj(small), periodic)))));
}

Formula criterion(const RelApp& y, int n, int ratio_exponent);

Formula sections(const RelApp& y, int n, int ratio_exponent) {
  std::vector<Formula> parts;
  const std::string c = "c" + std::to_string(n);
  for (int i = 0; i < n; ++i) {
    RelApp section = [y, i, c](const std::vector<Term>& args) {
      std::vector<Term> full(args);
      full.insert(full.begin() + i, var(c));
      return y(full);
    };
    parts.push_back(fml::forall(c, fml::implies(fml::is_int(var(c)), criterion(section, n - 1, ratio_exponent))));
  }
  return fml::conj(parts);
}

Formula criterion(const RelApp& y, int n, int ratio_exponent) {
  if (n == 1) return ultimately_periodic(y, 1);
  return fml::conj(sections(y, n, ratio_exponent), locally_periodic(y, n, n, ratio_exponent));
}

RelApp symbol_y() {
  return [](const std::vector<Term>& args) { return fml::rel("Y", args); };
}

}  // namespace

IntegerRelationDfa integer_restrict_to_dfa(const RelationAutomaton& sigma) {
  const int n = sigma.arity();
  RelationAutomaton integers = universal_relation(sigma.base(), n);
  for (int t = 0; t < n; ++t) integers = product(integers, int_atom(sigma.base(), n, t), BoolOp::And);
  if (auto w = emptiness_witness(product(sigma, complement(integers), BoolOp::And)))
    throw ValidationError("relation has a non-integer member " + to_string(decode(*w, sigma.base(), n)));
  IntegerRelationDfa d;
  d.base = sigma.base();
  d.arity = n;
  d.initial = sigma.initial();
  const int star = sigma.alphabet().star();
  for (int q = 0; q < sigma.num_states(); ++q) {
    for (int l = 0; l < star; ++l) d.table.push_back(sigma.next(q, l));
    d.accepting.push_back(accepts_zero_tail(sigma, q, star));
  }
  return minimize(d);
}

IntegerRelationDfa minimize(const IntegerRelationDfa& d) {
  const int letters = d.letters();
  // Reachable states in BFS order.
  std::vector<int> order{d.initial}, index(d.num_states(), -1);
  index[d.initial] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int l = 0; l < letters; ++l) {
      int t = d.next(order[i], l);
      if (index[t] < 0) {
        index[t] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  const int m = static_cast<int>(order.size());
  std::vector<int> cls(m);
  for (int i = 0; i < m; ++i) cls[i] = d.accepting[order[i]] ? 1 : 0;
  for (int classes = -1;;) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> next(m);
    for (int i = 0; i < m; ++i) {
      std::vector<int> sig{cls[i]};
      for (int l = 0; l < letters; ++l) sig.push_back(cls[index[d.next(order[i], l)]]);
      next[i] = ids.emplace(std::move(sig), static_cast<int>(ids.size())).first->second;
    }
    cls = std::move(next);
    if (static_cast<int>(ids.size()) == classes) break;
    classes = static_cast<int>(ids.size());
  }
  // Renumber classes breadth-first from the initial state.
  std::vector<int> rename(m, -1), rep;
  std::vector<int> queue{cls[0]};
  rename[cls[0]] = 0;
  std::vector<int> member_of(m, -1);
  for (int i = 0; i < m; ++i)
    if (member_of[cls[i]] < 0) member_of[cls[i]] = i;
  IntegerRelationDfa out;
  out.base = d.base;
  out.arity = d.arity;
  out.initial = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const int s = member_of[queue[i]];
    out.accepting.push_back(d.accepting[order[s]]);
    for (int l = 0; l < letters; ++l) {
      int c = cls[index[d.next(order[s], l)]];
      if (rename[c] < 0) {
        rename[c] = static_cast<int>(queue.size());
        queue.push_back(c);
      }
      out.table.push_back(rename[c]);
    }
  }
  return out;
}

RelationAutomaton lift(const IntegerRelationDfa& d) {
  const int digits = d.letters();
  const int letters = digits + 1;
  const int m = d.num_states();
  const int zeros = m, dead = m + 1;
  std::vector<int> table(static_cast<std::size_t>(m + 2) * letters);
  std::vector<int> marks(m + 2, 0);
  marks[zeros] = 1;
  for (int q = 0; q < m; ++q) {
    for (int l = 0; l < digits; ++l) table[static_cast<std::size_t>(q) * letters + l] = d.next(q, l);
    table[static_cast<std::size_t>(q) * letters + digits] = d.accepting[q] ? zeros : dead;
  }
  for (int l = 0; l < letters; ++l) {
    table[static_cast<std::size_t>(zeros) * letters + l] = l == 0 ? zeros : dead;
    table[static_cast<std::size_t>(dead) * letters + l] = dead;
  }
  RelationAutomaton raw(d.base, d.arity, AcceptanceKind::Wdba, d.initial, std::move(table), std::move(marks), false);
  return saturate(product(raw, universal_relation(d.base, d.arity), BoolOp::And));
}

Formula presburger_criterion(int n, int ratio_exponent) {
  if (n < 1) throw ValidationError("arity must be positive");
  return criterion(symbol_y(), n, ratio_exponent);
}

bool presburger_definable(const IntegerRelationDfa& d, const PresburgerOptions& options) {
  Compiler compiler(d.base, {{"Y", lift(d)}});
  if (d.arity == 1) return compiler.eval(presburger_criterion(1, 0));
  for (int j = 0; j <= options.max_ratio_exponent; ++j) {
    if (!compiler.eval(sections(symbol_y(), d.arity, j))) {
      if (d.arity == 2) return false;
      continue;
    }
    if (compiler.eval(locally_periodic(symbol_y(), d.arity, d.arity, j))) return true;
  }
  throw EngineLimitError("local periodicity search (ratio up to 2^" + std::to_string(options.max_ratio_exponent) + ")",
                         compiler.stats().largest_automaton);
}

}  // namespace rva
