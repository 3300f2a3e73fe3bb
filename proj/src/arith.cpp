#include "rva/arith.hpp"

#include <map>

#include "rva/errors.hpp"
#include "rva/omega.hpp"

namespace rva {

std::string to_string(Comparator c) {
  switch (c) {
    case Comparator::Lt: return "<";
    case Comparator::Le: return "<=";
    case Comparator::Eq: return "=";
    case Comparator::Ne: return "!=";
    case Comparator::Ge: return ">=";
    case Comparator::Gt: return ">";
  }
  return "?";
}

bool compare(const Rational& lhs, Comparator c, const Rational& rhs) {
  switch (c) {
    case Comparator::Lt: return lhs < rhs;
    case Comparator::Le: return lhs <= rhs;
    case Comparator::Eq: return lhs == rhs;
    case Comparator::Ne: return lhs != rhs;
    case Comparator::Ge: return lhs >= rhs;
    case Comparator::Gt: return lhs > rhs;
  }
  return false;
}

bool evaluate(const LinearAtom& atom, const RationalVector& point) {
  Rational sum = 0;
  for (std::size_t i = 0; i < atom.coefficients.size(); ++i) sum += Rational(atom.coefficients[i]) * point.at(i);
  return compare(sum, atom.cmp, Rational(atom.constant));
}

namespace {

long long to_ll(const Integer& v) {
  if (v > Integer(1) << 40 || v < -(Integer(1) << 40)) throw ValidationError("linear atom coefficient too large");
  return static_cast<long long>(v);
}

// Incrementally numbered state table.
class TableBuilder {
 public:
  explicit TableBuilder(int letters) : letters_(letters) {}
  int add(int mark) {
    marks_.push_back(mark);
    table_.resize(table_.size() + letters_, -1);
    return static_cast<int>(marks_.size()) - 1;
  }
  void set(int q, int l, int t) { table_[static_cast<std::size_t>(q) * letters_ + l] = t; }
  RelationAutomaton build(int base, int arity, int init, bool saturated) {
    return RelationAutomaton(base, arity, AcceptanceKind::Wdba, init, std::move(table_), std::move(marks_), saturated);
  }

 private:
  int letters_;
  std::vector<int> table_;
  std::vector<int> marks_;
};

}  // namespace

RelationAutomaton linear_atom(const LinearAtom& atom, int base, int arity) {
  if (static_cast<int>(atom.coefficients.size()) != arity) throw ValidationError("coefficient count does not match arity");
  Alphabet alpha(base, arity);
  const int letters = alpha.size();
  std::vector<long long> a(arity);
  long long m_neg = 0, m_pos = 0;
  bool all_zero = true;
  for (int i = 0; i < arity; ++i) {
    a[i] = to_ll(atom.coefficients[i]);
    (a[i] < 0 ? m_neg : m_pos) += a[i];
    if (a[i] != 0) all_zero = false;
  }
  const long long c = to_ll(atom.constant);
  if (all_zero) {
    return compare(Rational(0), atom.cmp, Rational(c)) ? universal_relation(base, arity) : empty_relation(base, arity);
  }
  const Comparator cmp = atom.cmp;
  const bool eq_ok = cmp == Comparator::Eq || cmp == Comparator::Le || cmp == Comparator::Ge;
  const bool gt_ok = cmp == Comparator::Gt || cmp == Comparator::Ge || cmp == Comparator::Ne;
  const bool lt_ok = cmp == Comparator::Lt || cmp == Comparator::Le || cmp == Comparator::Ne;
  const long long hi = std::max(c, 0LL) - m_neg;  // t above: sum already exceeds c
  const long long lo = std::min(c, 0LL) - m_pos;  // t below: sum already below c

  // Per-letter weighted digit sums.
  std::vector<long long> weight(letters, 0);
  std::vector<long long> sign_weight(letters, 0);
  for (int l = 0; l < alpha.star(); ++l)
    for (int i = 0; i < arity; ++i) {
      weight[l] += a[i] * alpha.digit(l, i);
      if (alpha.digit(l, i) == base - 1) sign_weight[l] -= a[i];
    }

  TableBuilder b(letters);
  const int init = b.add(0);
  const int dead = b.add(0);
  const int gt_int = b.add(0), lt_int = b.add(0);
  const int gt_frac = b.add(gt_ok), lt_frac = b.add(lt_ok);
  std::map<long long, int> int_states, frac_states;
  std::vector<std::pair<int, long long>> todo_int, todo_frac;
  auto int_state = [&](long long t) {
    if (t > hi) return gt_int;
    if (t < lo) return lt_int;
    auto [it, fresh] = int_states.emplace(t, 0);
    if (fresh) {
      it->second = b.add(0);
      todo_int.emplace_back(it->second, t);
    }
    return it->second;
  };
  auto frac_state = [&](long long r) {
    if (r < m_neg) return gt_frac;
    if (r > m_pos) return lt_frac;
    auto [it, fresh] = frac_states.emplace(r, 0);
    if (fresh) {
      it->second = b.add(eq_ok);
      todo_frac.emplace_back(it->second, r);
    }
    return it->second;
  };
  for (int l = 0; l < letters; ++l) {
    b.set(dead, l, dead);
    b.set(gt_int, l, l == alpha.star() ? gt_frac : gt_int);
    b.set(lt_int, l, l == alpha.star() ? lt_frac : lt_int);
    b.set(gt_frac, l, l == alpha.star() ? dead : gt_frac);
    b.set(lt_frac, l, l == alpha.star() ? dead : lt_frac);
  }
  for (int l = 0; l < letters; ++l) b.set(init, l, alpha.is_sign_column(l) ? int_state(sign_weight[l]) : dead);
  while (!todo_int.empty() || !todo_frac.empty()) {
    if (!todo_int.empty()) {
      auto [q, t] = todo_int.back();
      todo_int.pop_back();
      for (int l = 0; l < letters; ++l)
        b.set(q, l, l == alpha.star() ? frac_state(c - t) : int_state(base * t + weight[l]));
      continue;
    }
    auto [q, r] = todo_frac.back();
    todo_frac.pop_back();
    for (int l = 0; l < letters; ++l) b.set(q, l, l == alpha.star() ? dead : frac_state(base * r - weight[l]));
  }
  return minimize_and_classify(b.build(base, arity, init, true));
}

RelationAutomaton int_atom(int base, int arity, int track) {
  if (track < 0 || track >= arity) throw ValidationError("int atom track out of range");
  Alphabet alpha(base, arity);
  const int letters = alpha.size();
  TableBuilder b(letters);
  const int init = b.add(0), integer = b.add(0), frac0 = b.add(0), zeros = b.add(1), tops = b.add(1), dead = b.add(0);
  for (int l = 0; l < letters; ++l) {
    const bool star = l == alpha.star();
    const int d = star ? -1 : alpha.digit(l, track);
    b.set(init, l, alpha.is_sign_column(l) ? integer : dead);
    b.set(integer, l, star ? frac0 : integer);
    b.set(frac0, l, star ? dead : d == 0 ? zeros : d == base - 1 ? tops : dead);
    b.set(zeros, l, d == 0 ? zeros : dead);
    b.set(tops, l, d == base - 1 ? tops : dead);
    b.set(dead, l, dead);
  }
  return minimize_and_classify(b.build(base, arity, init, true));
}

RelationAutomaton xk_atom(int base) {
  // Tracks: 0 = x, 1 = y, 2 = z. Built for canonical y and z, then saturated.
  Alphabet alpha(base, 3);
  const int letters = alpha.size();
  TableBuilder b(letters);
  const int init = b.add(0), dead = b.add(0), ok = b.add(1);
  // Integer phase: z digit of the previous column, and x's digit under y's 1 (or -1).
  auto int_id = [&](int z_last, int x_at_y) { return 3 + z_last * (base + 1) + (x_at_y + 1); };
  for (int i = 0; i < base * (base + 1); ++i) b.add(0);
  // Fractional phase with y's 1 still to come, indexed by z.
  const int frac0 = b.add(0);
  for (int z = 1; z < base; ++z) b.add(0);
  for (int l = 0; l < letters; ++l) {
    const bool star = l == alpha.star();
    const int xd = star ? -1 : alpha.digit(l, 0), yd = star ? -1 : alpha.digit(l, 1), zd = star ? -1 : alpha.digit(l, 2);
    b.set(dead, l, dead);
    b.set(ok, l, !star && yd == 0 && zd == 0 ? ok : dead);
    b.set(init, l, alpha.is_sign_column(l) && yd == 0 && zd == 0 ? int_id(0, -1) : dead);
    for (int zl = 0; zl < base; ++zl)
      for (int xy = -1; xy < base; ++xy) {
        int to = dead;
        if (star) {
          to = xy >= 0 ? (xy == zl ? ok : dead) : frac0 + zl;
        } else if (zl == 0) {
          if (yd == 0) to = int_id(zd, xy);
          else if (yd == 1 && xy < 0) to = int_id(zd, xd);
        }
        b.set(int_id(zl, xy), l, to);
      }
    for (int z = 0; z < base; ++z) {
      int to = dead;
      if (!star && zd == 0) {
        if (yd == 0) to = frac0 + z;
        else if (yd == 1) to = xd == z ? ok : dead;
      }
      b.set(frac0 + z, l, to);
    }
  }
  return saturate(b.build(base, 3, init, false));
}

}  // namespace rva
