#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "internal.hpp"
#include "rva/limits.hpp"

namespace rva {

namespace detail {

namespace {

// Iterative Tarjan over an implicit graph given by a successor enumerator.
template <class ForEachSucc>
Sccs tarjan(int states, std::span<const char> alive, ForEachSucc&& for_each_succ) {
  Sccs out;
  out.id.assign(states, -1);
  std::vector<int> index(states, -1), low(states, 0);
  std::vector<char> on_stack(states, 0), self_loop(states, 0);
  std::vector<int> stack;
  std::vector<std::pair<int, std::vector<int>>> frames;
  int counter = 0;
  auto is_alive = [&](int q) { return alive.empty() || alive[q]; };
  auto successors = [&](int v) {
    std::vector<int> s;
    for_each_succ(v, [&](int t) {
      if (is_alive(t)) s.push_back(t);
    });
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  };
  std::vector<std::size_t> cursor;
  for (int root = 0; root < states; ++root) {
    if (!is_alive(root) || index[root] != -1) continue;
    frames.clear();
    cursor.clear();
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    frames.emplace_back(root, successors(root));
    cursor.push_back(0);
    while (!frames.empty()) {
      int v = frames.back().first;
      auto& succ = frames.back().second;
      std::size_t& c = cursor.back();
      if (c < succ.size()) {
        int w = succ[c++];
        if (w == v) self_loop[v] = 1;
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, successors(w));
          cursor.push_back(0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int size = 0;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.id[w] = out.count;
          ++size;
        } while (w != v);
        out.nontrivial.push_back(size > 1 || self_loop[v]);
        ++out.count;
      }
      frames.pop_back();
      cursor.pop_back();
      if (!frames.empty()) {
        int parent = frames.back().first;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return out;
}

// Moore refinement. Returns class ids numbered by first occurrence.
std::vector<int> refine(int n, int letters, std::span<const int> table, std::vector<int> cls) {
  int classes = 0;
  {
    std::unordered_map<int, int> renum;
    for (int& c : cls) {
      auto [it, fresh] = renum.emplace(c, static_cast<int>(renum.size()));
      c = it->second;
    }
    classes = static_cast<int>(renum.size());
  }
  const std::size_t width = static_cast<std::size_t>(letters) + 1;
  std::vector<int> rows(static_cast<std::size_t>(n) * width);
  while (true) {
    for (int q = 0; q < n; ++q) {
      int* row = &rows[q * width];
      row[0] = cls[q];
      for (int a = 0; a < letters; ++a) row[a + 1] = cls[table[static_cast<std::size_t>(q) * letters + a]];
    }
    auto hash = [&](int q) {
      std::size_t h = 1469598103934665603ull;
      const int* row = &rows[q * width];
      for (std::size_t i = 0; i < width; ++i) h = (h ^ static_cast<std::size_t>(row[i])) * 1099511628211ull;
      return h;
    };
    auto eq = [&](int p, int q) {
      return std::equal(&rows[p * width], &rows[p * width] + width, &rows[q * width]);
    };
    std::unordered_map<int, int, decltype(hash), decltype(eq)> ids(n * 2 + 1, hash, eq);
    std::vector<int> next(n);
    for (int q = 0; q < n; ++q) {
      auto [it, fresh] = ids.emplace(q, static_cast<int>(ids.size()));
      next[q] = it->second;
    }
    int count = static_cast<int>(ids.size());
    cls.swap(next);
    if (count == classes) break;
    classes = count;
  }
  return cls;
}

RelationAutomaton quotient(const RelationAutomaton& a, const std::vector<int>& cls, const std::vector<int>& marks_by_state,
                           AcceptanceKind kind) {
  int classes = 0;
  for (int c : cls) classes = std::max(classes, c + 1);
  const int letters = a.alphabet_size();
  std::vector<int> table(static_cast<std::size_t>(classes) * letters);
  std::vector<int> marks(classes);
  std::vector<char> done(classes, 0);
  for (int q = 0; q < a.num_states(); ++q) {
    int c = cls[q];
    if (done[c]) continue;
    done[c] = 1;
    marks[c] = marks_by_state[q];
    for (int l = 0; l < letters; ++l) table[static_cast<std::size_t>(c) * letters + l] = cls[a.next(q, l)];
  }
  return trim_and_renumber(RelationAutomaton(a.base(), a.arity(), kind, cls[a.initial()], std::move(table),
                                             std::move(marks), a.saturated()));
}

RelationAutomaton minimize_wdba(const RelationAutomaton& a) {
  const int n = a.num_states();
  const int letters = a.alphabet_size();
  Sccs sccs = scc_dense(n, letters, a.transitions());
  std::vector<std::vector<int>> members(sccs.count);
  for (int q = 0; q < n; ++q) members[sccs.id[q]].push_back(q);
  const int top = 2 * n + 4;
  std::vector<int> color(sccs.count, top);
  for (int c = 0; c < sccs.count; ++c) {
    int m = top;
    for (int q : members[c])
      for (int l = 0; l < letters; ++l) {
        int t = sccs.id[a.next(q, l)];
        if (t != c) m = std::min(m, color[t]);
      }
    if (!sccs.nontrivial[c]) {
      color[c] = m;
    } else if (a.accepting(members[c][0])) {
      color[c] = m % 2 == 0 ? m : m - 1;
    } else {
      color[c] = m % 2 == 1 ? m : m - 1;
    }
  }
  std::vector<int> acc(n);
  for (int q = 0; q < n; ++q) acc[q] = color[sccs.id[q]] % 2 == 0 ? 1 : 0;
  auto cls = refine(n, letters, a.transitions(), acc);
  return quotient(a, cls, acc, AcceptanceKind::Wdba);
}

void normalize_scc(const RelationAutomaton& a, const std::vector<int>& states, int floor, std::vector<int>& out,
                   std::vector<char>& alive) {
  int m = a.priority(states[0]);
  for (int q : states) m = std::min(m, a.priority(q));
  const int top = (floor % 2 == m % 2) ? floor : floor + 1;
  std::vector<int> rest;
  for (int q : states) {
    out[q] = top;
    if (a.priority(q) != m) rest.push_back(q);
  }
  if (rest.empty()) return;
  for (int q : states) alive[q] = 0;
  for (int q : rest) alive[q] = 1;
  Sccs sub = scc_dense(a.num_states(), a.alphabet_size(), a.transitions(), alive);
  for (int q : rest) alive[q] = 0;
  std::vector<std::vector<int>> groups(sub.count);
  for (int q : rest) groups[sub.id[q]].push_back(q);
  for (int g = 0; g < sub.count; ++g) {
    if (groups[g].empty() || !sub.nontrivial[g]) continue;
    normalize_scc(a, groups[g], top, out, alive);
  }
}

}  // namespace

Sccs scc_dense(int states, int letters, std::span<const int> table, std::span<const char> alive) {
  return tarjan(states, alive, [&](int v, auto&& emit) {
    const int* row = table.data() + static_cast<std::size_t>(v) * letters;
    for (int l = 0; l < letters; ++l) emit(row[l]);
  });
}

Sccs scc_nba(const Nba& nba) {
  return tarjan(nba.num_states(), {}, [&](int v, auto&& emit) {
    for (int l = 0; l < nba.letters; ++l)
      for (int t : nba.succ(v, l)) emit(t);
  });
}

std::vector<int> normalized_priorities(const RelationAutomaton& a) {
  const int n = a.num_states();
  std::vector<int> out(n, 0);
  if (a.kind() == AcceptanceKind::Wdba) {
    for (int q = 0; q < n; ++q) out[q] = a.accepting(q) ? 0 : 1;
    return out;
  }
  Sccs sccs = scc_dense(n, a.alphabet_size(), a.transitions());
  std::vector<std::vector<int>> members(sccs.count);
  for (int q = 0; q < n; ++q) members[sccs.id[q]].push_back(q);
  std::vector<char> alive(n, 0);
  for (int c = 0; c < sccs.count; ++c)
    if (sccs.nontrivial[c]) normalize_scc(a, members[c], 0, out, alive);
  return out;
}

ParityClass classify_normalized(const RelationAutomaton& a, std::span<const int> normalized) {
  if (a.kind() == AcceptanceKind::Wdba) return ParityClass::Weak;
  Sccs sccs = scc_dense(a.num_states(), a.alphabet_size(), a.transitions());
  std::vector<int> lo(sccs.count, 1 << 30), hi(sccs.count, -1);
  for (int q = 0; q < a.num_states(); ++q) {
    int c = sccs.id[q];
    if (!sccs.nontrivial[c]) continue;
    lo[c] = std::min(lo[c], normalized[q]);
    hi[c] = std::max(hi[c], normalized[q]);
  }
  bool weak = true, cobuchi = true, buchi = true;
  for (int c = 0; c < sccs.count; ++c) {
    if (hi[c] < 0) continue;
    if (lo[c] != hi[c]) weak = false;
    if (!(hi[c] == 0 || (lo[c] >= 1 && hi[c] <= 2))) cobuchi = false;
    if (hi[c] > 1) buchi = false;
  }
  if (weak) return ParityClass::Weak;
  if (cobuchi) return ParityClass::CoBuchi;
  if (buchi) return ParityClass::Buchi;
  return ParityClass::General;
}

RelationAutomaton trim_and_renumber(const RelationAutomaton& a) {
  const int letters = a.alphabet_size();
  std::vector<int> id(a.num_states(), -1);
  std::vector<int> order;
  id[a.initial()] = 0;
  order.push_back(a.initial());
  for (std::size_t i = 0; i < order.size(); ++i) {
    int q = order[i];
    for (int l = 0; l < letters; ++l) {
      int t = a.next(q, l);
      if (id[t] == -1) {
        id[t] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  }
  std::vector<int> table(order.size() * letters);
  std::vector<int> marks(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    marks[i] = a.marks()[order[i]];
    for (int l = 0; l < letters; ++l) table[i * letters + l] = id[a.next(order[i], l)];
  }
  return RelationAutomaton(a.base(), a.arity(), a.kind(), 0, std::move(table), std::move(marks), a.saturated());
}

}  // namespace detail

using namespace detail;

RelationAutomaton minimize_and_classify(const RelationAutomaton& input) {
  RelationAutomaton a = trim_and_renumber(input);
  if (a.kind() == AcceptanceKind::Wdba) return minimize_wdba(a);
  auto norm = normalized_priorities(a);
  if (classify_normalized(a, norm) == ParityClass::Weak) {
    std::vector<int> acc(a.num_states());
    for (int q = 0; q < a.num_states(); ++q) acc[q] = norm[q] % 2 == 0 ? 1 : 0;
    std::vector<int> table(a.transitions().begin(), a.transitions().end());
    return minimize_wdba(RelationAutomaton(a.base(), a.arity(), AcceptanceKind::Wdba, a.initial(), std::move(table),
                                           std::move(acc), a.saturated()));
  }
  auto cls = refine(a.num_states(), a.alphabet_size(), a.transitions(), norm);
  RelationAutomaton q = quotient(a, cls, norm, AcceptanceKind::Parity);
  // Quotienting can merge SCC fragments; renormalize once more for stable output.
  auto again = normalized_priorities(q);
  std::vector<int> table(q.transitions().begin(), q.transitions().end());
  return RelationAutomaton(q.base(), q.arity(), AcceptanceKind::Parity, q.initial(), std::move(table),
                           std::move(again), q.saturated());
}

ParityClass classify(const RelationAutomaton& a) {
  if (a.kind() == AcceptanceKind::Wdba) return ParityClass::Weak;
  return classify_normalized(a, normalized_priorities(a));
}

bool isomorphic(const RelationAutomaton& a, const RelationAutomaton& b) {
  if (a.base() != b.base() || a.arity() != b.arity() || a.kind() != b.kind()) return false;
  auto x = trim_and_renumber(a);
  auto y = trim_and_renumber(b);
  if (x.num_states() != y.num_states()) return false;
  return std::equal(x.transitions().begin(), x.transitions().end(), y.transitions().begin()) &&
         std::equal(x.marks().begin(), x.marks().end(), y.marks().begin());
}

}  // namespace rva
