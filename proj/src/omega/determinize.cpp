#include <algorithm>
#include <span>
#include <unordered_map>

#include "internal.hpp"
#include "rva/limits.hpp"

namespace rva::detail {

namespace {

std::size_t hash_span(std::span<const int> v) {
  std::size_t h = 1469598103934665603ull ^ v.size();
  for (int x : v) h = (h ^ static_cast<std::size_t>(static_cast<unsigned>(x))) * 1099511628211ull;
  return h ^ (h >> 29);
}

// Keys live in one arena; the table is open addressing over state ids.
class Interner {
 public:
  Interner() : slots_(1024, -1) {}

  int id(std::span<const int> key, bool& fresh) {
    const std::size_t h = hash_span(key);
    std::size_t mask = slots_.size() - 1;
    for (std::size_t i = h & mask;; i = (i + 1) & mask) {
      const int s = slots_[i];
      if (s < 0) break;
      if (hashes_[s] == h && std::ranges::equal(key_of(s), key)) {
        fresh = false;
        return s;
      }
    }
    fresh = true;
    const int s = static_cast<int>(hashes_.size());
    hashes_.push_back(h);
    arena_.insert(arena_.end(), key.begin(), key.end());
    offsets_.push_back(arena_.size());
    if (hashes_.size() * 2 > slots_.size()) grow();
    else place(s);
    return s;
  }
  std::span<const int> key_of(int i) const {
    return {arena_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::vector<int> key(int i) const {
    auto k = key_of(i);
    return {k.begin(), k.end()};
  }
  std::size_t size() const { return hashes_.size(); }

 private:
  void place(int s) {
    const std::size_t mask = slots_.size() - 1;
    std::size_t i = hashes_[s] & mask;
    while (slots_[i] >= 0) i = (i + 1) & mask;
    slots_[i] = s;
  }
  void grow() {
    slots_.assign(slots_.size() * 2, -1);
    for (int s = 0; s < static_cast<int>(hashes_.size()); ++s) place(s);
  }

  std::vector<int> slots_;
  std::vector<std::size_t> hashes_;
  std::vector<int> arena_;
  std::vector<std::size_t> offsets_{0};
};

}  // namespace

RelationAutomaton determinize_breakpoint(const Nba& nba, int base, int arity) {
  // Key layout: |S|, S..., O...
  Interner states;
  std::vector<unsigned> stamp(nba.num_states(), 0);
  unsigned epoch = 0;
  auto image = [&](const int* begin, const int* end, int letter, std::vector<int>& out) {
    out.clear();
    ++epoch;
    for (const int* p = begin; p != end; ++p)
      for (int t : nba.succ(*p, letter))
        if (stamp[t] != epoch) {
          stamp[t] = epoch;
          out.push_back(t);
        }
    std::sort(out.begin(), out.end());
  };
  std::vector<int> init = nba.initial;
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());
  {
    std::vector<int> key{static_cast<int>(init.size())};
    key.insert(key.end(), init.begin(), init.end());
    bool fresh;
    states.id(std::move(key), fresh);
  }
  std::vector<int> table, marks;
  std::vector<int> s2, o2;
  std::vector<int> key, next;
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto k = states.key_of(static_cast<int>(i));
    key.assign(k.begin(), k.end());
    const int ns = key[0];
    const int* s_begin = key.data() + 1;
    const int* s_end = s_begin + ns;
    const int* o_begin = s_end;
    const int* o_end = key.data() + key.size();
    const bool o_empty = o_begin == o_end;
    marks.push_back(o_empty ? 1 : 2);
    for (int l = 0; l < nba.letters; ++l) {
      image(s_begin, s_end, l, s2);
      if (o_empty) {
        o2.clear();
        for (int q : s2)
          if (nba.accepting[q]) o2.push_back(q);
      } else {
        image(o_begin, o_end, l, o2);
        o2.erase(std::remove_if(o2.begin(), o2.end(), [&](int q) { return !nba.accepting[q]; }), o2.end());
      }
      next.assign(1, static_cast<int>(s2.size()));
      next.insert(next.end(), s2.begin(), s2.end());
      next.insert(next.end(), o2.begin(), o2.end());
      bool fresh;
      table.push_back(states.id(next, fresh));
      if (fresh && (states.size() & 1023) == 0) check_engine_limits("determinization (breakpoint)", states.size());
    }
  }
  check_engine_limits("determinization (breakpoint)", states.size());
  return RelationAutomaton(base, arity, AcceptanceKind::Parity, 0, std::move(table), std::move(marks), false);
}

namespace {

// A Safra tree: nodes in age order (index = rank), parent < child index.
struct SafraTree {
  std::vector<int> parent;
  std::vector<std::vector<int>> label;

  std::vector<int> serialize(int entering_priority) const {
    std::vector<int> out{entering_priority, static_cast<int>(parent.size())};
    for (std::size_t i = 0; i < parent.size(); ++i) {
      out.push_back(parent[i]);
      out.push_back(static_cast<int>(label[i].size()));
      out.insert(out.end(), label[i].begin(), label[i].end());
    }
    return out;
  }

  static SafraTree parse(const std::vector<int>& key, int& priority) {
    SafraTree t;
    priority = key[0];
    const int nodes = key[1];
    std::size_t p = 2;
    for (int i = 0; i < nodes; ++i) {
      t.parent.push_back(key[p++]);
      const int size = key[p++];
      t.label.emplace_back(key.begin() + p, key.begin() + p + size);
      p += size;
    }
    return t;
  }
};

}  // namespace

RelationAutomaton determinize_safra(const Nba& nba, int base, int arity) {
  const int n = nba.num_states();
  const int quiet = 2 * (n + 2) + 1;
  Interner states;
  std::vector<unsigned> stamp(n, 0);
  unsigned epoch = 0;
  auto image = [&](const std::vector<int>& from, int letter) {
    std::vector<int> out;
    ++epoch;
    for (int q : from)
      for (int t : nba.succ(q, letter))
        if (stamp[t] != epoch) {
          stamp[t] = epoch;
          out.push_back(t);
        }
    std::sort(out.begin(), out.end());
    return out;
  };
  {
    SafraTree t;
    std::vector<int> init = nba.initial;
    std::sort(init.begin(), init.end());
    init.erase(std::unique(init.begin(), init.end()), init.end());
    if (!init.empty()) {
      t.parent.push_back(-1);
      t.label.push_back(init);
    }
    bool fresh;
    states.id(t.serialize(quiet), fresh);
  }
  std::vector<int> table, marks;
  std::vector<char> in_set(n, 0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    int entering;
    const SafraTree tree = SafraTree::parse(states.key(static_cast<int>(i)), entering);
    marks.push_back(entering);
    const int old_count = static_cast<int>(tree.parent.size());
    for (int l = 0; l < nba.letters; ++l) {
      std::vector<int> parent = tree.parent;
      std::vector<std::vector<int>> label = tree.label;
      // 1. spawn children holding the accepting part of each label
      for (int v = 0; v < old_count; ++v) {
        std::vector<int> acc;
        for (int q : label[v])
          if (nba.accepting[q]) acc.push_back(q);
        if (!acc.empty()) {
          parent.push_back(v);
          label.push_back(std::move(acc));
        }
      }
      // 2. successor sets
      for (auto& lab : label) lab = image(lab, l);
      // 3. horizontal merge: a state stays only in the oldest branch
      const int total = static_cast<int>(parent.size());
      std::vector<std::vector<int>> claimed(total);  // union of labels of processed children, per parent
      std::vector<std::vector<int>> children(total);
      for (int v = 0; v < total; ++v) {
        if (parent[v] < 0) continue;
        const int p = parent[v];
        // keep what the parent holds and no older sibling claimed
        ++epoch;
        for (int q : label[p]) stamp[q] = epoch;
        const unsigned in_parent = epoch;
        ++epoch;
        for (int q : claimed[p]) stamp[q] = epoch;
        std::vector<int> kept;
        for (int q : label[v])
          if (stamp[q] == in_parent) kept.push_back(q);
        label[v] = std::move(kept);
        std::vector<int> merged;
        std::set_union(claimed[p].begin(), claimed[p].end(), label[v].begin(), label[v].end(),
                       std::back_inserter(merged));
        claimed[p] = std::move(merged);
        children[p].push_back(v);
      }
      // 4. remove empty nodes (their descendants are empty as well)
      std::vector<char> removed(total, 0);
      for (int v = 0; v < total; ++v)
        if (label[v].empty() || (parent[v] >= 0 && removed[parent[v]])) removed[v] = 1;
      // 5. vertical merge: a node covered by its children absorbs them and is marked
      std::vector<char> marked(total, 0);
      for (int v = 0; v < total; ++v) {
        if (removed[v]) continue;
        if (parent[v] >= 0 && removed[parent[v]]) {
          removed[v] = 1;
          continue;
        }
        std::size_t covered = 0;
        bool any_child = false;
        for (int c : children[v])
          if (!removed[c]) {
            covered += label[c].size();
            any_child = true;
          }
        if (any_child && covered == label[v].size()) {
          marked[v] = 1;
          // descendants are removed through the parent check above
          for (int c : children[v]) removed[c] = 1;
        }
      }
      // removal of descendants of removed nodes (children come after parents)
      for (int v = 0; v < total; ++v)
        if (parent[v] >= 0 && removed[parent[v]]) removed[v] = 1;
      int red = -1, green = -1;
      for (int v = 0; v < old_count; ++v) {
        if (removed[v] && red < 0) red = v;
        if (marked[v] && green < 0) green = v;
      }
      int priority = quiet;
      if (green >= 0 && (red < 0 || green < red)) priority = 2 * green;
      else if (red >= 0) priority = 2 * red + 1;
      SafraTree next;
      std::vector<int> renum(total, -1);
      for (int v = 0; v < total; ++v) {
        if (removed[v]) continue;
        renum[v] = static_cast<int>(next.parent.size());
        next.parent.push_back(parent[v] < 0 ? -1 : renum[parent[v]]);
        next.label.push_back(std::move(label[v]));
      }
      bool fresh;
      table.push_back(states.id(next.serialize(priority), fresh));
      if (fresh && (states.size() & 255) == 0) check_engine_limits("determinization (Safra)", states.size());
    }
  }
  check_engine_limits("determinization (Safra)", states.size());
  return RelationAutomaton(base, arity, AcceptanceKind::Parity, 0, std::move(table), std::move(marks), false);
}

}  // namespace rva::detail
