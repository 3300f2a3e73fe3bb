#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "internal.hpp"
#include "rva/errors.hpp"

namespace rva {

namespace {

// Breadth-first predecessor tree from `source` over states satisfying `allowed`.
// Returns for each state the (previous state, letter) pair, source maps to itself.
std::vector<std::pair<int, int>> bfs(const RelationAutomaton& a, int source, const std::vector<char>& allowed) {
  std::vector<std::pair<int, int>> pred(a.num_states(), {-1, -1});
  std::queue<int> queue;
  pred[source] = {source, -1};
  queue.push(source);
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop();
    for (int l = 0; l < a.alphabet_size(); ++l) {
      int t = a.next(q, l);
      if (!allowed[t] || pred[t].first != -1) continue;
      pred[t] = {q, l};
      queue.push(t);
    }
  }
  return pred;
}

std::vector<int> path_to(const std::vector<std::pair<int, int>>& pred, int target) {
  std::vector<int> letters;
  for (int q = target; pred[q].second != -1; q = pred[q].first) letters.push_back(pred[q].second);
  std::reverse(letters.begin(), letters.end());
  return letters;
}

// Shortest nonempty cycle through q inside `allowed`.
std::optional<std::vector<int>> cycle_through(const RelationAutomaton& a, int q, const std::vector<char>& allowed) {
  std::optional<std::vector<int>> out;
  // First step is forced out of q, then a shortest path back.
  auto pred = bfs(a, q, allowed);
  std::size_t best_len = SIZE_MAX;
  for (int l = 0; l < a.alphabet_size(); ++l) {
    int t = a.next(q, l);
    if (!allowed[t]) continue;
    if (t == q) return std::vector<int>{l};
  }
  // Predecessors of q inside the allowed region that are reachable from q.
  for (int p = 0; p < a.num_states(); ++p) {
    if (!allowed[p] || pred[p].first == -1) continue;
    for (int l = 0; l < a.alphabet_size(); ++l) {
      if (a.next(p, l) != q) continue;
      auto path = path_to(pred, p);
      if (path.size() + 1 < best_len) {
        best_len = path.size() + 1;
        path.push_back(l);
        out = std::move(path);
      }
      break;
    }
  }
  return out;
}

int run(const RelationAutomaton& a, int q, std::span<const int> word) {
  for (int l : word) q = a.next(q, l);
  return q;
}

struct TrackDigits {
  int sign = 0;
  std::vector<int> integer;     // most significant first, L digits
  std::vector<int> frac;        // prefix followed by one period
  std::size_t frac_prefix = 0;  // length of the non-repeating part
};

Integer ipow(int base, std::size_t e) {
  Integer r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

// Digits of a fractional part p/q in [0,1) by long division; detects the period.
void fraction_digits(const Rational& f, int base, std::vector<int>& digits, std::size_t& prefix, std::size_t& period) {
  Integer num = numerator_of(f), den = denominator_of(f);
  std::map<Integer, std::size_t> seen;
  digits.clear();
  while (true) {
    auto [it, fresh] = seen.emplace(num, digits.size());
    if (!fresh) {
      prefix = it->second;
      period = digits.size() - prefix;
      return;
    }
    num *= base;
    Integer d = num / den;
    digits.push_back(static_cast<int>(d));
    num -= d * den;
  }
}

UPWord assemble(const std::vector<TrackDigits>& tracks, int base, std::size_t int_len, std::size_t pre,
                std::size_t per) {
  const int arity = static_cast<int>(tracks.size());
  Alphabet alpha(base, arity);
  UPWord w;
  std::vector<int> col(arity);
  for (int t = 0; t < arity; ++t) col[t] = tracks[t].sign;
  w.prefix.push_back(alpha.letter(col));
  for (std::size_t i = 0; i < int_len; ++i) {
    for (int t = 0; t < arity; ++t) col[t] = tracks[t].integer[i];
    w.prefix.push_back(alpha.letter(col));
  }
  w.prefix.push_back(alpha.star());
  auto frac_at = [&](const TrackDigits& td, std::size_t i) {
    if (i < td.frac_prefix) return td.frac[i];
    std::size_t p = td.frac.size() - td.frac_prefix;
    return td.frac[td.frac_prefix + (i - td.frac_prefix) % p];
  };
  for (std::size_t i = 0; i < pre + per; ++i) {
    for (int t = 0; t < arity; ++t) col[t] = frac_at(tracks[t], i);
    (i < pre ? w.prefix : w.period).push_back(alpha.letter(col));
  }
  return w;
}

std::vector<TrackDigits> track_digits(const RationalVector& point, int base, std::size_t int_len) {
  std::vector<TrackDigits> out;
  const Integer span = ipow(base, int_len);
  for (const Rational& x : point) {
    TrackDigits td;
    Integer fl = floor_of(x);
    if (fl < -span || fl >= span) throw ValidationError("padding too short for point");
    td.sign = fl < 0 ? base - 1 : 0;
    Integer rest = fl < 0 ? Integer(fl + span) : fl;
    td.integer.assign(int_len, 0);
    for (std::size_t i = int_len; i-- > 0;) {
      td.integer[i] = static_cast<int>(rest % base);
      rest /= base;
    }
    std::size_t prefix, period;
    fraction_digits(x - Rational(fl), base, td.frac, prefix, period);
    td.frac_prefix = prefix;
    out.push_back(std::move(td));
  }
  return out;
}

std::size_t minimal_int_len(const RationalVector& point, int base) {
  std::size_t len = 0;
  for (const Rational& x : point) {
    Integer fl = floor_of(x);
    while (fl < -ipow(base, len) || fl >= ipow(base, len)) ++len;
  }
  return len;
}

UPWord encode_with(const std::vector<TrackDigits>& tracks, int base, std::size_t int_len) {
  std::size_t pre = 0;
  Integer per = 1;
  for (const auto& td : tracks) {
    pre = std::max(pre, td.frac_prefix);
    per = lcm_of(per, Integer(td.frac.size() - td.frac_prefix));
  }
  return assemble(tracks, base, int_len, pre, static_cast<std::size_t>(per));
}

// The other encoding of a k-adic track: last nonzero non-sign digit decremented, then k-1 forever.
bool make_dual(TrackDigits& td, int base) {
  const bool terminating = td.frac.size() - td.frac_prefix == 1 && td.frac.back() == 0;
  if (!terminating) return false;
  std::vector<int> digits = td.integer;
  digits.insert(digits.end(), td.frac.begin(), td.frac.begin() + static_cast<long>(td.frac_prefix));
  int last = -1;
  for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i)
    if (digits[i] != 0) {
      last = i;
      break;
    }
  if (last < 0) {
    if (td.sign != 0) return false;  // needs one more padding column; handled by the caller's longer encoding
    td.sign = base - 1;
    std::fill(digits.begin(), digits.end(), base - 1);
  } else {
    digits[last] -= 1;
    for (std::size_t i = last + 1; i < digits.size(); ++i) digits[i] = base - 1;
  }
  const std::size_t int_len = td.integer.size();
  td.integer.assign(digits.begin(), digits.begin() + static_cast<long>(int_len));
  td.frac.assign(digits.begin() + static_cast<long>(int_len), digits.end());
  td.frac_prefix = td.frac.size();
  td.frac.push_back(base - 1);
  return true;
}

}  // namespace

std::optional<UPWord> emptiness_witness(const RelationAutomaton& a) {
  const int n = a.num_states();
  std::vector<char> all(n, 1);
  auto from_init = bfs(a, a.initial(), all);
  std::vector<std::size_t> depth(n, 0);
  for (int q = 0; q < n; ++q)
    if (from_init[q].first != -1) depth[q] = path_to(from_init, q).size();
  std::vector<int> pr(n);
  int max_p = 0;
  for (int q = 0; q < n; ++q) {
    pr[q] = a.parity_of(q);
    max_p = std::max(max_p, pr[q]);
  }
  std::optional<UPWord> best;
  std::size_t best_len = SIZE_MAX;
  for (int p = 0; p <= max_p; p += 2) {
    std::vector<char> allowed(n);
    for (int q = 0; q < n; ++q) allowed[q] = pr[q] >= p;
    auto sccs = detail::scc_dense(n, a.alphabet_size(), a.transitions(), allowed);
    std::vector<int> candidates;
    for (int q = 0; q < n; ++q)
      if (pr[q] == p && from_init[q].first != -1 && sccs.nontrivial[sccs.id[q]]) candidates.push_back(q);
    std::stable_sort(candidates.begin(), candidates.end(), [&](int x, int y) { return depth[x] < depth[y]; });
    if (candidates.size() > 8) candidates.resize(8);
    for (int q : candidates) {
      auto cycle = cycle_through(a, q, allowed);
      if (!cycle) continue;
      auto prefix = path_to(from_init, q);
      if (prefix.size() + cycle->size() < best_len) {
        best_len = prefix.size() + cycle->size();
        best = UPWord{std::move(prefix), std::move(*cycle)};
      }
    }
  }
  return best;
}

bool is_empty(const RelationAutomaton& a) {
  // Cheaper than a witness: some reachable state of even priority p lies in a
  // nontrivial SCC of the subgraph with priorities >= p.
  const int n = a.num_states();
  std::vector<char> reach(n, 0);
  std::vector<int> stack{a.initial()};
  reach[a.initial()] = 1;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int l = 0; l < a.alphabet_size(); ++l) {
      int t = a.next(q, l);
      if (!reach[t]) {
        reach[t] = 1;
        stack.push_back(t);
      }
    }
  }
  std::set<int> evens;
  for (int q = 0; q < n; ++q)
    if (reach[q] && a.parity_of(q) % 2 == 0) evens.insert(a.parity_of(q));
  for (int p : evens) {
    std::vector<char> allowed(n);
    for (int q = 0; q < n; ++q) allowed[q] = reach[q] && a.parity_of(q) >= p;
    auto sccs = detail::scc_dense(n, a.alphabet_size(), a.transitions(), allowed);
    for (int q = 0; q < n; ++q)
      if (allowed[q] && a.parity_of(q) == p && sccs.nontrivial[sccs.id[q]]) return false;
  }
  return true;
}

bool accepts(const RelationAutomaton& a, const UPWord& word) {
  if (word.period.empty()) throw ValidationError("ultimately periodic word needs a nonempty period");
  int q = run(a, a.initial(), word.prefix);
  std::map<int, int> boundary;  // state at block start -> block index
  std::vector<int> starts;
  while (boundary.emplace(q, static_cast<int>(starts.size())).second) {
    starts.push_back(q);
    q = run(a, q, word.period);
  }
  // Blocks from boundary[q] on repeat forever; collect the least parity value.
  int least = INT32_MAX;
  for (std::size_t b = boundary[q]; b < starts.size(); ++b) {
    int s = starts[b];
    for (int l : word.period) {
      s = a.next(s, l);
      least = std::min(least, a.parity_of(s));
    }
  }
  return least % 2 == 0;
}

UPWord encode(const RationalVector& point, int base) {
  if (point.empty()) throw ValidationError("cannot encode an empty tuple");
  const std::size_t len = minimal_int_len(point, base);
  return encode_with(track_digits(point, base, len), base, len);
}

std::vector<UPWord> encodings(const RationalVector& point, int base) {
  std::vector<UPWord> out;
  const std::size_t len = minimal_int_len(point, base);
  out.push_back(encode_with(track_digits(point, base, len), base, len));
  const auto padded = track_digits(point, base, len + 1);
  out.push_back(encode_with(padded, base, len + 1));
  std::vector<std::size_t> dualizable;
  for (std::size_t t = 0; t < padded.size(); ++t) {
    TrackDigits probe = padded[t];
    if (make_dual(probe, base)) dualizable.push_back(t);
  }
  // Every nonempty subset of the tracks with a second encoding.
  const std::size_t m = std::min<std::size_t>(dualizable.size(), 10);
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    auto tracks = padded;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) make_dual(tracks[dualizable[i]], base);
    out.push_back(encode_with(tracks, base, len + 1));
  }
  return out;
}

bool member(const RelationAutomaton& a, const RationalVector& point) {
  if (static_cast<int>(point.size()) != a.arity())
    throw ValidationError("point has " + std::to_string(point.size()) + " components, relation arity is " +
                          std::to_string(a.arity()));
  if (a.saturated()) return accepts(a, encode(point, a.base()));
  for (const auto& w : encodings(point, a.base()))
    if (accepts(a, w)) return true;
  return false;
}

RationalVector decode(const UPWord& word, int base, int arity) {
  Alphabet alpha(base, arity);
  auto star = std::find(word.prefix.begin(), word.prefix.end(), alpha.star());
  if (word.prefix.empty() || star == word.prefix.end() || star == word.prefix.begin())
    throw ValidationError("word has no radix column after the sign column");
  if (std::count(word.prefix.begin(), word.prefix.end(), alpha.star()) != 1 ||
      std::count(word.period.begin(), word.period.end(), alpha.star()) != 0 || word.period.empty())
    throw ValidationError("word is not a well-formed encoding");
  if (!alpha.is_sign_column(word.prefix.front())) throw ValidationError("first column is not a sign column");
  const std::size_t star_at = static_cast<std::size_t>(star - word.prefix.begin());
  const std::size_t a_len = word.prefix.size() - star_at - 1;
  const std::size_t b_len = word.period.size();
  RationalVector out;
  for (int t = 0; t < arity; ++t) {
    Integer v = alpha.digit(word.prefix[0], t) == 0 ? 0 : -1;
    for (std::size_t i = 1; i < star_at; ++i) v = v * base + alpha.digit(word.prefix[i], t);
    Integer f = 0, g = 0;
    for (std::size_t i = star_at + 1; i < word.prefix.size(); ++i) f = f * base + alpha.digit(word.prefix[i], t);
    for (int l : word.period) g = g * base + alpha.digit(l, t);
    Rational frac = (Rational(f) + Rational(g, ipow(base, b_len) - 1)) / Rational(ipow(base, a_len));
    out.push_back(Rational(v) + frac);
  }
  return out;
}

}  // namespace rva
