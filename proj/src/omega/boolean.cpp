#include <algorithm>
#include <unordered_map>

#include "internal.hpp"
#include "rva/errors.hpp"
#include "rva/limits.hpp"

namespace rva {

namespace detail {

namespace {

void require_compatible(const RelationAutomaton& a, const RelationAutomaton& b) {
  if (a.base() != b.base()) throw ValidationError("base mismatch: " + std::to_string(a.base()) + " vs " + std::to_string(b.base()));
  if (a.arity() != b.arity())
    throw ValidationError("arity mismatch: " + std::to_string(a.arity()) + " vs " + std::to_string(b.arity()));
}

/// Breadth-first synchronized product over state tuples encoded in 64 bits.
/// `step(key, letter)` returns the successor key, `mark(key)` its acceptance mark.
template <class Step, class Mark>
RelationAutomaton explore(int base, int arity, AcceptanceKind kind, std::uint64_t init, Step&& step, Mark&& mark,
                          bool saturated, const char* stage) {
  const int letters = Alphabet(base, arity).size();
  std::unordered_map<std::uint64_t, int> ids;
  std::vector<std::uint64_t> keys{init};
  ids.emplace(init, 0);
  std::vector<int> table;
  std::vector<int> marks;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::uint64_t key = keys[i];
    marks.push_back(mark(key));
    for (int l = 0; l < letters; ++l) {
      std::uint64_t t = step(key, l);
      auto [it, fresh] = ids.emplace(t, static_cast<int>(keys.size()));
      if (fresh) {
        keys.push_back(t);
        if ((keys.size() & 1023) == 0) check_engine_limits(stage, keys.size());
      }
      table.push_back(it->second);
    }
  }
  check_engine_limits(stage, keys.size());
  return RelationAutomaton(base, arity, kind, 0, std::move(table), std::move(marks), saturated);
}

inline std::uint64_t pack(std::uint64_t p, std::uint64_t q, std::uint64_t f = 0) { return (p << 33) | (q << 2) | f; }
inline int first(std::uint64_t k) { return static_cast<int>(k >> 33); }
inline int second(std::uint64_t k) { return static_cast<int>((k >> 2) & 0x7fffffffu); }
inline int flag(std::uint64_t k) { return static_cast<int>(k & 3u); }

template <class Mark>
RelationAutomaton pair_product(const RelationAutomaton& a, const RelationAutomaton& b, AcceptanceKind kind,
                               Mark&& mark) {
  return explore(
      a.base(), a.arity(), kind, pack(a.initial(), b.initial()),
      [&](std::uint64_t k, int l) { return pack(a.next(first(k), l), b.next(second(k), l)); },
      [&](std::uint64_t k) { return mark(first(k), second(k)); }, a.saturated() && b.saturated(), "product");
}

RelationAutomaton with_marks(const RelationAutomaton& a, AcceptanceKind kind, std::vector<int> marks) {
  std::vector<int> table(a.transitions().begin(), a.transitions().end());
  return RelationAutomaton(a.base(), a.arity(), kind, a.initial(), std::move(table), std::move(marks), a.saturated());
}

/// Replaces priorities by their normalized form; weak languages become wdba.
RelationAutomaton normalized(const RelationAutomaton& a, ParityClass& cls) {
  if (a.kind() == AcceptanceKind::Wdba) {
    cls = ParityClass::Weak;
    return a;
  }
  auto norm = normalized_priorities(a);
  cls = classify_normalized(a, norm);
  if (cls == ParityClass::Weak) {
    for (int& v : norm) v = v % 2 == 0 ? 1 : 0;
    return with_marks(a, AcceptanceKind::Wdba, std::move(norm));
  }
  if (cls == ParityClass::CoBuchi)
    for (int& v : norm)
      if (v == 0) v = 2;
  return with_marks(a, AcceptanceKind::Parity, std::move(norm));
}

RelationAutomaton nba_and(const RelationAutomaton& a, const RelationAutomaton& b) {
  Nba x = to_nba(a), y = to_nba(b);
  Nba out;
  out.letters = x.letters;
  std::unordered_map<std::uint64_t, int> ids;
  std::vector<std::uint64_t> keys;
  auto id_of = [&](std::uint64_t key) {
    auto [it, fresh] = ids.emplace(key, static_cast<int>(keys.size()));
    if (fresh) keys.push_back(key);
    return it->second;
  };
  for (int p : x.initial)
    for (int q : y.initial) out.initial.push_back(id_of(pack(p, q, 0)));
  std::vector<int> cell;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const int p = first(keys[i]), q = second(keys[i]), f = flag(keys[i]);
    out.accepting.push_back(f == 1 && y.accepting[q]);
    const int nf = f == 0 ? (x.accepting[p] ? 1 : 0) : (y.accepting[q] ? 0 : 1);
    for (int l = 0; l < out.letters; ++l) {
      cell.clear();
      for (int s : x.succ(p, l))
        for (int t : y.succ(q, l)) cell.push_back(id_of(pack(s, t, nf)));
      std::sort(cell.begin(), cell.end());
      cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
      out.push_cell(cell);
    }
    if ((keys.size() & 1023) == 0) check_engine_limits("product (nondeterministic)", keys.size());
  }
  auto d = determinize(out, a.base(), a.arity());
  return d.with_saturated(a.saturated() && b.saturated());
}

RelationAutomaton and_normalized(const RelationAutomaton& a, ParityClass ca, const RelationAutomaton& b,
                                 ParityClass cb) {
  using PC = ParityClass;
  if (ca == PC::Weak && cb == PC::Weak)
    return pair_product(a, b, AcceptanceKind::Wdba, [&](int p, int q) { return a.accepting(p) && b.accepting(q) ? 1 : 0; });
  if (ca == PC::Weak || cb == PC::Weak) {
    const bool swap = cb == PC::Weak;
    const RelationAutomaton& w = swap ? b : a;
    const RelationAutomaton& o = swap ? a : b;
    return pair_product(w, o, AcceptanceKind::Parity,
                        [&](int p, int q) { return w.accepting(p) ? o.priority(q) + 2 : 1; });
  }
  if (ca == PC::CoBuchi && cb == PC::CoBuchi)
    return pair_product(a, b, AcceptanceKind::Parity,
                        [&](int p, int q) { return a.priority(p) % 2 == 1 || b.priority(q) % 2 == 1 ? 1 : 2; });
  if (ca == PC::Buchi && cb == PC::Buchi) {
    // Deterministic degeneralization: the flag records which side we wait for.
    return explore(
        a.base(), a.arity(), AcceptanceKind::Parity, pack(a.initial(), b.initial(), 0),
        [&](std::uint64_t k, int l) {
          int p = first(k), q = second(k), f = flag(k);
          int nf = f == 0 ? (a.priority(p) == 0 ? 1 : 0) : (b.priority(q) == 0 ? 0 : 1);
          return pack(a.next(p, l), b.next(q, l), nf);
        },
        [&](std::uint64_t k) { return flag(k) == 1 && b.priority(second(k)) == 0 ? 0 : 1; },
        a.saturated() && b.saturated(), "product");
  }
  if ((ca == PC::Buchi && cb == PC::CoBuchi) || (ca == PC::CoBuchi && cb == PC::Buchi)) {
    const bool swap = ca == PC::CoBuchi;
    const RelationAutomaton& bu = swap ? b : a;
    const RelationAutomaton& co = swap ? a : b;
    return pair_product(bu, co, AcceptanceKind::Parity, [&](int p, int q) {
      if (co.priority(q) % 2 == 1) return 1;
      if (bu.priority(p) == 0) return 2;
      return 3;
    });
  }
  return nba_and(a, b);
}

}  // namespace

RelationAutomaton raw_complement(const RelationAutomaton& a) {
  std::vector<int> marks(a.marks().begin(), a.marks().end());
  for (int& m : marks) m = a.kind() == AcceptanceKind::Wdba ? 1 - m : m + 1;
  return with_marks(a, a.kind(), std::move(marks));
}

}  // namespace detail

using namespace detail;

RelationAutomaton universal_relation(int base, int arity) {
  Alphabet alpha(base, arity);
  const int letters = alpha.size();
  // 0: before the sign column, 1: integer digits, 2: fractional digits, 3: dead
  std::vector<int> table(4 * letters);
  for (int l = 0; l < letters; ++l) {
    table[0 * letters + l] = alpha.is_sign_column(l) ? 1 : 3;
    table[1 * letters + l] = l == alpha.star() ? 2 : 1;
    table[2 * letters + l] = l == alpha.star() ? 3 : 2;
    table[3 * letters + l] = 3;
  }
  return RelationAutomaton(base, arity, AcceptanceKind::Wdba, 0, std::move(table), {0, 0, 1, 0}, true);
}

RelationAutomaton empty_relation(int base, int arity) {
  const int letters = Alphabet(base, arity).size();
  return RelationAutomaton(base, arity, AcceptanceKind::Wdba, 0, std::vector<int>(letters, 0), {0}, true);
}

RelationAutomaton complement(const RelationAutomaton& a) {
  return product(raw_complement(a), universal_relation(a.base(), a.arity()), BoolOp::And);
}

RelationAutomaton product(const RelationAutomaton& a0, const RelationAutomaton& b0, BoolOp op) {
  require_compatible(a0, b0);
  ParityClass ca, cb;
  RelationAutomaton a = normalized(a0, ca);
  RelationAutomaton b = normalized(b0, cb);
  if (op == BoolOp::Or) {
    if (ca == ParityClass::Weak && cb == ParityClass::Weak)
      return minimize_and_classify(pair_product(
          a, b, AcceptanceKind::Wdba, [&](int p, int q) { return a.accepting(p) || b.accepting(q) ? 1 : 0; }));
    if (ca == ParityClass::Buchi && cb == ParityClass::Buchi)
      return minimize_and_classify(pair_product(
          a, b, AcceptanceKind::Parity, [&](int p, int q) { return a.priority(p) == 0 || b.priority(q) == 0 ? 0 : 1; }));
    // De Morgan over all words; well-formedness is untouched by the double flip.
    ParityClass nca, ncb;
    RelationAutomaton na = normalized(raw_complement(a), nca);
    RelationAutomaton nb = normalized(raw_complement(b), ncb);
    return minimize_and_classify(raw_complement(and_normalized(na, nca, nb, ncb)));
  }
  return minimize_and_classify(and_normalized(a, ca, b, cb));
}

RelationAutomaton embed(const RelationAutomaton& a, int arity, std::span<const int> track_map) {
  if (static_cast<int>(track_map.size()) != a.arity()) throw ValidationError("track map size does not match arity");
  Alphabet src = a.alphabet();
  Alphabet dst(a.base(), arity);
  std::vector<char> mapped(arity, 0);
  for (int t : track_map) {
    if (t < 0 || t >= arity) throw ValidationError("track map target out of range");
    mapped[t] = 1;
  }
  std::vector<int> image(dst.size());
  std::vector<char> free_sign_ok(dst.size(), 0);
  std::vector<int> digits(a.arity());
  for (int l = 0; l < dst.size(); ++l) {
    if (l == dst.star()) {
      image[l] = src.star();
      continue;
    }
    for (int i = 0; i < a.arity(); ++i) digits[i] = dst.digit(l, track_map[i]);
    image[l] = src.letter(digits);
    bool ok = true;
    for (int t = 0; t < arity; ++t) {
      int d = dst.digit(l, t);
      if (!mapped[t] && d != 0 && d != a.base() - 1) ok = false;
    }
    free_sign_ok[l] = ok;
  }
  // Repeated targets make the letter map non-injective, which can only help
  // minimization; states of `a` keep their indices, then the fresh start and sink.
  const int n = a.num_states();
  const int start = n, sink = n + 1;
  const int letters = dst.size();
  std::vector<int> table(static_cast<std::size_t>(n + 2) * letters);
  std::vector<int> marks(n + 2);
  const bool wdba = a.kind() == AcceptanceKind::Wdba;
  for (int q = 0; q < n; ++q) {
    marks[q] = a.marks()[q];
    for (int l = 0; l < letters; ++l) table[static_cast<std::size_t>(q) * letters + l] = a.next(q, image[l]);
  }
  for (int l = 0; l < letters; ++l) {
    table[static_cast<std::size_t>(start) * letters + l] = free_sign_ok[l] ? a.next(a.initial(), image[l]) : sink;
    table[static_cast<std::size_t>(sink) * letters + l] = sink;
  }
  marks[start] = a.marks()[a.initial()];
  marks[sink] = wdba ? 0 : 1;
  return minimize_and_classify(
      RelationAutomaton(a.base(), arity, a.kind(), start, std::move(table), std::move(marks), a.saturated()));
}

bool equivalent(const RelationAutomaton& a, const RelationAutomaton& b) {
  require_compatible(a, b);
  auto left = product(a, complement(b), BoolOp::And);
  if (!is_empty(left)) return false;
  return is_empty(product(b, complement(a), BoolOp::And));
}

}  // namespace rva
