#pragma once

// Shared plumbing of the omega-automata kernel. Not installed.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rva/automaton.hpp"
#include "rva/omega.hpp"

namespace rva::detail {

/// Nondeterministic automaton in compressed row form. With `cobuchi` set a run
/// is accepting iff it eventually stays inside `accepting`; otherwise iff it
/// visits `accepting` infinitely often.
struct Nba {
  int letters = 0;
  bool cobuchi = false;
  std::vector<int> initial;
  std::vector<char> accepting;
  std::vector<std::size_t> offsets{0};
  std::vector<int> targets;

  int num_states() const { return static_cast<int>(accepting.size()); }
  std::span<const int> succ(int q, int a) const {
    std::size_t row = static_cast<std::size_t>(q) * letters + a;
    return {targets.data() + offsets[row], offsets[row + 1] - offsets[row]};
  }
  /// Appends the successor list of the next (state, letter) cell.
  /// Cells are filled state by state, letters in increasing order.
  void push_cell(std::span<const int> succs) {
    targets.insert(targets.end(), succs.begin(), succs.end());
    offsets.push_back(targets.size());
  }
};

/// Strongly connected components; ids follow Tarjan completion order, so
/// every edge goes from a higher or equal id to a lower or equal id.
struct Sccs {
  std::vector<int> id;
  std::vector<char> nontrivial;
  int count = 0;
};

Sccs scc_dense(int states, int letters, std::span<const int> table, std::span<const char> alive = {});
Sccs scc_nba(const Nba& nba);

/// Priorities in the normalized (top-down) form; transient states get 0.
std::vector<int> normalized_priorities(const RelationAutomaton& a);
ParityClass classify_normalized(const RelationAutomaton& a, std::span<const int> normalized);

/// Acceptance flips without re-intersecting with the well-formed words.
RelationAutomaton raw_complement(const RelationAutomaton& a);

/// Keeps states reachable from the initial state, numbered in breadth-first order.
RelationAutomaton trim_and_renumber(const RelationAutomaton& a);

Nba to_nba(const RelationAutomaton& a);
Nba erase_track(const Nba& nba, int base, int arity, int track);
/// Accepts every re-padding of the accepted words (sign column added or removed).
Nba pad_closure(const Nba& nba, int base, int arity);
/// Accepts every per-track dual-tail variant of the accepted words.
Nba dual_closure(const Nba& nba, int base, int arity);
bool is_weak(const Nba& nba);

RelationAutomaton determinize(const Nba& nba, int base, int arity);
RelationAutomaton determinize_breakpoint(const Nba& nba, int base, int arity);
RelationAutomaton determinize_safra(const Nba& nba, int base, int arity);

}  // namespace rva::detail
