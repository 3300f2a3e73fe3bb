#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rva {

/// Letters of the n-track base-k alphabet. Digit columns are numbered
/// sum_t d_t * k^t (track 0 least significant); the radix column, written
/// with n stars, is the last letter.
class Alphabet {
 public:
  Alphabet(int base, int arity);

  int base() const { return base_; }
  int arity() const { return arity_; }
  int size() const { return star_ + 1; }
  int star() const { return star_; }
  int digit_letters() const { return star_; }

  int digit(int letter, int track) const { return (letter / powers_[track]) % base_; }
  int letter(std::span<const int> digits) const;
  /// True when every track carries 0 or k-1: a legal first column.
  bool is_sign_column(int letter) const;

  std::string format(int letter) const;
  /// Inverse of format(); returns -1 on malformed text.
  int parse(std::string_view text) const;

 private:
  int base_;
  int arity_;
  int star_;
  std::vector<int> powers_;
};

enum class AcceptanceKind { Wdba, Parity };

/// Deterministic, complete omega-automaton over an n-track base-k alphabet.
///
/// For Wdba the per-state mark is 1 (accepting) or 0; for Parity it is a
/// priority and a run is accepting iff the least priority seen infinitely
/// often is even. Values are immutable once constructed.
class RelationAutomaton {
 public:
  RelationAutomaton(int base, int arity, AcceptanceKind kind, int initial,
                    std::vector<int> transitions, std::vector<int> marks, bool saturated);

  int base() const { return base_; }
  int arity() const { return arity_; }
  Alphabet alphabet() const { return Alphabet(base_, arity_); }
  int alphabet_size() const { return letters_; }
  int num_states() const { return static_cast<int>(marks_.size()); }
  int initial() const { return initial_; }
  AcceptanceKind kind() const { return kind_; }
  bool saturated() const { return saturated_; }

  int next(int state, int letter) const { return transitions_[static_cast<std::size_t>(state) * letters_ + letter]; }
  bool accepting(int state) const { return marks_[state] != 0; }
  int priority(int state) const { return marks_[state]; }
  /// Uniform view: Wdba accepting -> 0, rejecting -> 1; Parity -> priority.
  int parity_of(int state) const;

  std::span<const int> transitions() const { return transitions_; }
  std::span<const int> marks() const { return marks_; }

  RelationAutomaton with_saturated(bool saturated) const;

 private:
  int base_;
  int arity_;
  int letters_;
  AcceptanceKind kind_;
  int initial_;
  std::vector<int> transitions_;
  std::vector<int> marks_;
  bool saturated_;
};

/// Ultimately periodic word prefix . period^omega.
struct UPWord {
  std::vector<int> prefix;
  std::vector<int> period;
};

std::string format_upword(const UPWord& word, const Alphabet& alphabet);

}  // namespace rva
