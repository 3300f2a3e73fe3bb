#include <algorithm>
#include <set>
#include <unordered_map>

#include "internal.hpp"
#include "rva/errors.hpp"
#include "rva/limits.hpp"

namespace rva {

namespace detail {

namespace {

Nba from_deterministic(const RelationAutomaton& a, const std::vector<char>& good, bool cobuchi) {
  Nba out;
  out.letters = a.alphabet_size();
  out.cobuchi = cobuchi;
  out.initial = {a.initial()};
  out.accepting = good;
  for (int q = 0; q < a.num_states(); ++q)
    for (int l = 0; l < out.letters; ++l) {
      int t = a.next(q, l);
      out.push_cell(std::span<const int>(&t, 1));
    }
  return out;
}

// Union of successor sets, deduplicated with a stamp array.
class SetStepper {
 public:
  explicit SetStepper(const Nba& nba) : nba_(nba), stamp_(nba.num_states(), 0) {}

  void step(std::span<const int> from, int letter, std::vector<int>& out) {
    out.clear();
    ++epoch_;
    for (int q : from)
      for (int t : nba_.succ(q, letter))
        if (stamp_[t] != epoch_) {
          stamp_[t] = epoch_;
          out.push_back(t);
        }
    std::sort(out.begin(), out.end());
  }

 private:
  const Nba& nba_;
  std::vector<unsigned> stamp_;
  unsigned epoch_ = 0;
};

}  // namespace

Nba to_nba(const RelationAutomaton& a) {
  const int n = a.num_states();
  std::vector<char> good(n);
  if (a.kind() == AcceptanceKind::Wdba) {
    for (int q = 0; q < n; ++q) good[q] = a.accepting(q);
    return from_deterministic(a, good, false);
  }
  auto norm = normalized_priorities(a);
  auto cls = classify_normalized(a, norm);
  if (cls != ParityClass::General) {
    for (int q = 0; q < n; ++q) good[q] = norm[q] % 2 == 0;
    return from_deterministic(a, good, cls == ParityClass::CoBuchi);
  }
  // Copy construction: copy p guesses that p is the least priority seen
  // infinitely often; it may only visit priorities >= p.
  int max_p = 0;
  for (int v : norm) max_p = std::max(max_p, v);
  const int copies = max_p / 2 + 2;  // index 0 is the waiting copy, index c >= 1 is priority 2(c-1)
  auto id = [&](int q, int c) { return q * copies + c; };
  auto allowed = [&](int q, int c) { return c == 0 || norm[q] >= 2 * (c - 1); };
  Nba out;
  out.letters = a.alphabet_size();
  out.accepting.assign(static_cast<std::size_t>(n) * copies, 0);
  for (int c = 0; c < copies; ++c)
    if (allowed(a.initial(), c)) out.initial.push_back(id(a.initial(), c));
  std::vector<int> cell;
  for (int q = 0; q < n; ++q)
    for (int c = 0; c < copies; ++c) {
      out.accepting[id(q, c)] = c >= 1 && norm[q] == 2 * (c - 1);
      for (int l = 0; l < out.letters; ++l) {
        cell.clear();
        if (allowed(q, c)) {
          int t = a.next(q, l);
          if (c == 0) {
            for (int d = 0; d < copies; ++d)
              if (allowed(t, d)) cell.push_back(id(t, d));
          } else if (allowed(t, c)) {
            cell.push_back(id(t, c));
          }
        }
        out.push_cell(cell);
      }
    }
  return out;
}

Nba erase_track(const Nba& nba, int base, int arity, int track) {
  Alphabet src(base, arity), dst(base, arity - 1);
  int low = 1;
  for (int t = 0; t < track; ++t) low *= base;
  Nba out;
  out.letters = dst.size();
  out.cobuchi = nba.cobuchi;
  out.initial = nba.initial;
  out.accepting = nba.accepting;
  std::vector<int> cell;
  std::vector<unsigned> stamp(nba.num_states(), 0);
  unsigned epoch = 0;
  for (int q = 0; q < nba.num_states(); ++q)
    for (int l = 0; l < out.letters; ++l) {
      cell.clear();
      ++epoch;
      auto add = [&](int src_letter) {
        for (int t : nba.succ(q, src_letter))
          if (stamp[t] != epoch) {
            stamp[t] = epoch;
            cell.push_back(t);
          }
      };
      if (l == dst.star()) {
        add(src.star());
      } else {
        int lo = l % low, hi = l / low;
        for (int d = 0; d < base; ++d) add(lo + d * low + hi * low * base);
      }
      std::sort(cell.begin(), cell.end());
      out.push_cell(cell);
    }
  return out;
}

Nba pad_closure(const Nba& nba, int base, int arity) {
  Alphabet alpha(base, arity);
  std::vector<int> signs;
  for (int l = 0; l < alpha.size(); ++l)
    if (alpha.is_sign_column(l)) signs.push_back(l);
  const int n = nba.num_states();
  const int iota = n;
  SetStepper stepper(nba);
  Nba out = nba;
  out.initial = {iota};
  out.accepting.push_back(0);
  for (std::size_t i = 0; i < signs.size(); ++i) out.accepting.push_back(0);
  std::vector<int> cell;
  // Row of iota.
  for (int l = 0; l < alpha.size(); ++l) {
    cell.clear();
    auto it = std::find(signs.begin(), signs.end(), l);
    if (it != signs.end()) cell.push_back(iota + 1 + static_cast<int>(it - signs.begin()));
    out.push_cell(cell);
  }
  std::vector<int> current, next, reach;
  for (std::size_t j = 0; j < signs.size(); ++j) {
    const int s = signs[j];
    // V_s: states reachable on s^i for some i >= 1.
    std::set<std::vector<int>> seen;
    std::vector<char> in_v(n, 0);
    current = nba.initial;
    std::sort(current.begin(), current.end());
    while (true) {
      stepper.step(current, s, next);
      if (!seen.insert(next).second) break;
      for (int q : next) in_v[q] = 1;
      current = next;
    }
    std::vector<int> v;
    for (int q = 0; q < n; ++q)
      if (in_v[q]) v.push_back(q);
    const int self = iota + 1 + static_cast<int>(j);
    for (int l = 0; l < alpha.size(); ++l) {
      stepper.step(v, l, reach);
      if (l == s) reach.push_back(self);
      out.push_cell(reach);
    }
  }
  return out;
}

Nba dual_closure(const Nba& nba, int base, int arity) {
  Alphabet alpha(base, arity);
  int mode_count = 1;
  for (int t = 0; t < arity; ++t) mode_count *= 3;
  // Per-track modes: 0 equal, 1 original continues with 0 and read word with k-1,
  // 2 original continues with k-1 and read word with 0.
  auto pack = [&](int q, int modes, int first) {
    return (static_cast<std::uint64_t>(q) * mode_count + modes) * 2 + first;
  };
  std::unordered_map<std::uint64_t, int> ids;
  std::vector<std::uint64_t> keys;
  auto id_of = [&](std::uint64_t key) {
    auto [it, fresh] = ids.emplace(key, static_cast<int>(keys.size()));
    if (fresh) keys.push_back(key);
    return it->second;
  };
  Nba out;
  out.letters = alpha.size();
  out.cobuchi = nba.cobuchi;
  for (int q : nba.initial) out.initial.push_back(id_of(pack(q, 0, 1)));
  const int top = base - 1;
  std::vector<int> cell;
  std::vector<std::vector<std::pair<int, int>>> options(arity);  // (original digit, mode)
  std::vector<int> digits(arity);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::uint64_t key = keys[i];
    const int first = static_cast<int>(key % 2);
    const int modes = static_cast<int>((key / 2) % mode_count);
    const int q = static_cast<int>(key / 2 / mode_count);
    out.accepting.push_back(nba.accepting[q]);
    for (int l = 0; l < alpha.size(); ++l) {
      cell.clear();
      if (l == alpha.star()) {
        for (int t : nba.succ(q, l)) cell.push_back(id_of(pack(t, modes, 0)));
      } else {
        bool feasible = true;
        int m = modes;
        for (int tr = 0; tr < arity; ++tr, m /= 3) {
          auto& opt = options[tr];
          opt.clear();
          const int c = alpha.digit(l, tr);
          const int mode = m % 3;
          if (mode == 0) {
            opt.emplace_back(c, 0);
            if (first) {
              if (c == top) opt.emplace_back(0, 1);
              if (c == 0) opt.emplace_back(top, 2);
            } else {
              if (c + 1 <= top) opt.emplace_back(c + 1, 1);
              if (c - 1 >= 0) opt.emplace_back(c - 1, 2);
            }
          } else if (mode == 1) {
            if (c == top) opt.emplace_back(0, 1);
          } else {
            if (c == 0) opt.emplace_back(top, 2);
          }
          if (opt.empty()) feasible = false;
        }
        if (feasible) {
          std::vector<std::size_t> idx(arity, 0);
          while (true) {
            int new_modes = 0, mult = 1;
            for (int tr = 0; tr < arity; ++tr) {
              digits[tr] = options[tr][idx[tr]].first;
              new_modes += options[tr][idx[tr]].second * mult;
              mult *= 3;
            }
            for (int t : nba.succ(q, alpha.letter(digits))) cell.push_back(id_of(pack(t, new_modes, 0)));
            int tr = 0;
            while (tr < arity && ++idx[tr] == options[tr].size()) idx[tr++] = 0;
            if (tr == arity) break;
          }
        }
      }
      std::sort(cell.begin(), cell.end());
      cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
      out.push_cell(cell);
    }
    if ((keys.size() & 4095) == 0) check_engine_limits("saturation", keys.size());
  }
  return out;
}

bool is_weak(const Nba& nba) {
  Sccs sccs = scc_nba(nba);
  std::vector<int> kind(sccs.count, -1);
  for (int q = 0; q < nba.num_states(); ++q) {
    int c = sccs.id[q];
    if (!sccs.nontrivial[c]) continue;
    int acc = nba.accepting[q] ? 1 : 0;
    if (kind[c] == -1) kind[c] = acc;
    else if (kind[c] != acc) return false;
  }
  return true;
}

RelationAutomaton determinize(const Nba& nba, int base, int arity) {
  if (nba.cobuchi || is_weak(nba)) return determinize_breakpoint(nba, base, arity);
  return determinize_safra(nba, base, arity);
}

}  // namespace detail

using namespace detail;

RelationAutomaton saturate(const RelationAutomaton& a) {
  Nba n = pad_closure(dual_closure(pad_closure(to_nba(a), a.base(), a.arity()), a.base(), a.arity()), a.base(),
                      a.arity());
  return minimize_and_classify(determinize(n, a.base(), a.arity()).with_saturated(true));
}

RelationAutomaton project_exists(const RelationAutomaton& input, int track) {
  if (input.arity() < 2) throw ValidationError("projection needs arity at least 2");
  if (track < 0 || track >= input.arity()) throw ValidationError("projected track out of range");
  const RelationAutomaton a = input.saturated() ? input : saturate(input);
  Nba n = pad_closure(erase_track(to_nba(a), a.base(), a.arity(), track), a.base(), a.arity() - 1);
  return minimize_and_classify(determinize(n, a.base(), a.arity() - 1).with_saturated(true));
}

}  // namespace rva
