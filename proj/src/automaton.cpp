#include "rva/automaton.hpp"

#include "rva/errors.hpp"

namespace rva {

Alphabet::Alphabet(int base, int arity) : base_(base), arity_(arity) {
  if (base < 2 || base > 10) throw ValidationError("base must be between 2 and 10");
  if (arity < 1) throw ValidationError("arity must be positive");
  int p = 1;
  for (int t = 0; t < arity; ++t) {
    powers_.push_back(p);
    if (p > (1 << 24) / base) throw ValidationError("alphabet too large");
    p *= base;
  }
  star_ = p;
}

int Alphabet::letter(std::span<const int> digits) const {
  int out = 0;
  for (int t = 0; t < arity_; ++t) out += digits[t] * powers_[t];
  return out;
}

bool Alphabet::is_sign_column(int letter) const {
  if (letter == star_) return false;
  for (int t = 0; t < arity_; ++t) {
    int d = digit(letter, t);
    if (d != 0 && d != base_ - 1) return false;
  }
  return true;
}

std::string Alphabet::format(int letter) const {
  if (letter == star_) return std::string(arity_, '*');
  std::string out;
  for (int t = 0; t < arity_; ++t) out += static_cast<char>('0' + digit(letter, t));
  return out;
}

int Alphabet::parse(std::string_view text) const {
  if (static_cast<int>(text.size()) != arity_) return -1;
  if (text.find('*') != std::string_view::npos) {
    for (char c : text)
      if (c != '*') return -1;
    return star_;
  }
  int out = 0;
  for (int t = 0; t < arity_; ++t) {
    int d = text[t] - '0';
    if (d < 0 || d >= base_) return -1;
    out += d * powers_[t];
  }
  return out;
}

RelationAutomaton::RelationAutomaton(int base, int arity, AcceptanceKind kind, int initial,
                                     std::vector<int> transitions, std::vector<int> marks,
                                     bool saturated)
    : base_(base),
      arity_(arity),
      letters_(Alphabet(base, arity).size()),
      kind_(kind),
      initial_(initial),
      transitions_(std::move(transitions)),
      marks_(std::move(marks)),
      saturated_(saturated) {
  const auto n = marks_.size();
  if (n == 0) throw ValidationError("automaton has no states");
  if (transitions_.size() != n * static_cast<std::size_t>(letters_))
    throw ValidationError("transition table size does not match states x letters");
  if (initial_ < 0 || static_cast<std::size_t>(initial_) >= n) throw ValidationError("initial state out of range");
  for (int t : transitions_)
    if (t < 0 || static_cast<std::size_t>(t) >= n) throw ValidationError("transition target out of range");
  for (int m : marks_)
    if (m < 0 || (kind_ == AcceptanceKind::Wdba && m > 1)) throw ValidationError("invalid acceptance mark");
}

int RelationAutomaton::parity_of(int state) const {
  if (kind_ == AcceptanceKind::Wdba) return marks_[state] ? 0 : 1;
  return marks_[state];
}

RelationAutomaton RelationAutomaton::with_saturated(bool saturated) const {
  RelationAutomaton copy = *this;
  copy.saturated_ = saturated;
  return copy;
}

std::string format_upword(const UPWord& word, const Alphabet& alphabet) {
  std::string out;
  for (int l : word.prefix) out += alphabet.format(l) + " ";
  out += "(";
  for (std::size_t i = 0; i < word.period.size(); ++i) {
    if (i) out += " ";
    out += alphabet.format(word.period[i]);
  }
  out += ")^w";
  return out;
}

}  // namespace rva
