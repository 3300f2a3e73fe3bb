#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rva/automaton.hpp"
#include "rva/logic.hpp"
#include "rva/rational.hpp"

namespace rva {

/// Live tracks I (1-based, sorted) of an n-ary relation; the other tracks are
/// frozen to the parameter vector xi.
struct FrozenPattern {
  int n = 1;
  std::vector<int> live;

  std::vector<int> frozen() const;
  std::string to_string() const;  // "{1,2}"
  static std::vector<FrozenPattern> all_nonempty(int n);
};

/// Quasi-stratum predicate, quasi-singularity and finiteness formulas for one
/// pattern. The relation symbol is "X". Variable names are listed per role.
struct LocalFormulas {
  FrozenPattern pattern;
  Formula phi;  // free: xi..., x..., r, s, v...
  Formula qs;   // free: x..., xi...
  Formula fs;   // free: xi...
  std::vector<std::string> xi, x, v;
};

LocalFormulas build_local_formulas(int n, const std::vector<int>& live);

/// QS_{n,I} as a sentence at a fixed point of R^n (frozen and live
/// coordinates both taken from `point`).
Formula quasi_singular_at(int n, const std::vector<int>& live, const RationalVector& point);
/// FS_{n,I} with the frozen coordinates fixed to `xi`.
Formula finite_singular_at(int n, const std::vector<int>& live, const RationalVector& xi);

/// Conjunction over nonempty I of "for all xi, FS_{n,I}(xi)".
Formula build_phi_n(int n);

/// x ~ y: both integer vectors with identical unit cubes. Free: x1..xn, y1..yn.
Formula build_approx(int n);
/// Same formula with arbitrary terms in place of x and y.
Formula approx_formula(const std::vector<Term>& x, const std::vector<Term>& y);

enum class Verdict { Definable, NotDefinable };
std::string to_string(Verdict v);

struct ClassCheck {
  std::vector<Integer> representative;
  bool ip = false;
  std::optional<bool> fp;  // not evaluated once IP fails
  std::size_t sigma_states = 0;
  std::size_t delta_states = 0;
};

struct DefinabilityReport {
  Verdict verdict = Verdict::Definable;
  /// Empty when definable. Otherwise FSP or DS (some FS conjunct failed for the
  /// full pattern or for a proper section), or FU, IP, FP.
  std::string failing_tag;
  std::string evidence;
  std::optional<FrozenPattern> failing_pattern;
  std::optional<UPWord> witness_word;
  std::optional<RationalVector> witness;
  std::optional<std::vector<Integer>> failing_class;
  std::vector<ClassCheck> classes;
  std::vector<std::pair<std::string, std::size_t>> stage_sizes;
};

struct CubeClass {
  std::vector<Integer> representative;
  RelationAutomaton sigma;  // integer points whose unit cube matches the representative's
  RelationAutomaton delta;  // the cube content, translated to [0,1)^n
};

struct DecompositionReport {
  bool fu_holds = false;
  std::optional<Integer> bound;
  std::vector<CubeClass> classes;
};

struct DecompositionOptions {
  int max_bound_exponent = 16;
  std::size_t max_box_points = 1'000'000;
};

DefinabilityReport decide_s_definable(const RelationAutomaton& x);
DecompositionReport decompose(const RelationAutomaton& x, const DecompositionOptions& options = {});
DefinabilityReport decide_l_definable(const RelationAutomaton& x, const DecompositionOptions& options = {});

}  // namespace rva
