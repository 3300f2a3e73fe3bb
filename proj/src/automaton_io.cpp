#include "rva/automaton_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "omega/internal.hpp"
#include "rva/errors.hpp"
#include "rva/omega.hpp"

namespace rva {

namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

int to_int(const std::string& s, std::size_t line, const char* what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) || s.size() > 9)
    throw ParseError(std::string("expected ") + what + ", got '" + s + "'", line, 0);
  return std::stoi(s);
}

struct Header {
  int base = 0, arity = 0, states = -1, init = -1;
  std::string kind;
  bool saturated = false;
  bool saw_saturated = false;
  std::vector<int> acc;
  std::map<int, int> prio;
  std::vector<std::set<int>> table;
  std::vector<std::tuple<std::size_t, int, std::string, int>> trans;  // line, from, label, to
};

// Latest appearance record: the Muller condition becomes a parity condition
// on (state, record, value) triples.
RelationAutomaton muller_to_parity(int base, int arity, int init, const std::vector<int>& delta, int m,
                                   const std::vector<std::set<int>>& table) {
  const int letters = Alphabet(base, arity).size();
  std::set<std::vector<int>> accepting_sets;
  for (const auto& s : table) accepting_sets.insert(std::vector<int>(s.begin(), s.end()));
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> keys;  // record..., value; record[0] is the current state
  auto id_of = [&](std::vector<int> key) {
    auto [it, fresh] = ids.emplace(key, static_cast<int>(keys.size()));
    if (fresh) keys.push_back(std::move(key));
    return it->second;
  };
  std::vector<int> start;
  start.push_back(init);
  for (int q = 0; q < m; ++q)
    if (q != init) start.push_back(q);
  start.push_back(0);
  id_of(start);
  std::vector<int> tr, prio;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::vector<int> key = keys[i];
    prio.push_back(2 * m + 2 - key[m]);
    for (int l = 0; l < letters; ++l) {
      const int t = delta[static_cast<std::size_t>(key[0]) * letters + l];
      std::vector<int> rec(key.begin(), key.begin() + m);
      const int h = static_cast<int>(std::find(rec.begin(), rec.end(), t) - rec.begin());
      std::vector<int> hit(rec.begin(), rec.begin() + h + 1);
      std::sort(hit.begin(), hit.end());
      rec.erase(rec.begin() + h);
      rec.insert(rec.begin(), t);
      rec.push_back(2 * h + (accepting_sets.count(hit) ? 2 : 1));
      tr.push_back(id_of(std::move(rec)));
    }
  }
  return RelationAutomaton(base, arity, AcceptanceKind::Parity, 0, std::move(tr), std::move(prio), false);
}

}  // namespace

RelationAutomaton load_automaton(std::string_view text) {
  Header h;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  bool saw_magic = false;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto words = split_words(raw);
    if (words.empty()) continue;
    const std::string& d = words[0];
    auto need = [&](std::size_t count) {
      if (words.size() != count) throw ParseError("directive '" + d + "' expects " + std::to_string(count - 1) + " argument(s)", line_no, 0);
    };
    if (!saw_magic) {
      if (d != "rva" || words.size() != 2 || words[1] != "1") throw ParseError("expected header 'rva 1'", line_no, 0);
      saw_magic = true;
      continue;
    }
    if (d == "base") {
      need(2);
      h.base = to_int(words[1], line_no, "a base");
      if (h.base < 2 || h.base > 10) throw ParseError("base must be between 2 and 10", line_no, 0);
    } else if (d == "arity") {
      need(2);
      h.arity = to_int(words[1], line_no, "an arity");
      if (h.arity < 1) throw ParseError("arity must be positive", line_no, 0);
    } else if (d == "kind") {
      need(2);
      if (words[1] != "wdba" && words[1] != "parity" && words[1] != "muller")
        throw ParseError("unknown kind '" + words[1] + "'", line_no, 0);
      h.kind = words[1];
    } else if (d == "states") {
      need(2);
      h.states = to_int(words[1], line_no, "a state count");
      if (h.states < 1) throw ParseError("at least one state is required", line_no, 0);
    } else if (d == "init") {
      need(2);
      h.init = to_int(words[1], line_no, "a state");
    } else if (d == "acc") {
      for (std::size_t i = 1; i < words.size(); ++i) h.acc.push_back(to_int(words[i], line_no, "a state"));
    } else if (d == "prio") {
      for (std::size_t i = 1; i < words.size(); ++i) {
        auto colon = words[i].find(':');
        if (colon == std::string::npos) throw ParseError("expected <state>:<priority>", line_no, 0);
        int q = to_int(words[i].substr(0, colon), line_no, "a state");
        int p = to_int(words[i].substr(colon + 1), line_no, "a priority");
        if (!h.prio.emplace(q, p).second) throw ParseError("duplicate priority for state " + std::to_string(q), line_no, 0);
      }
    } else if (d == "table") {
      std::string rest = raw.substr(raw.find("table") + 5);
      std::string cur;
      std::stringstream ss(rest);
      while (std::getline(ss, cur, ';')) {
        auto open = cur.find('{'), close = cur.find('}');
        if (open == std::string::npos || close == std::string::npos || close < open)
          throw ParseError("expected {q,...} in table", line_no, 0);
        std::set<int> set;
        std::stringstream inner(cur.substr(open + 1, close - open - 1));
        std::string item;
        while (std::getline(inner, item, ',')) {
          auto w = split_words(item);
          if (w.size() != 1) throw ParseError("malformed table entry", line_no, 0);
          set.insert(to_int(w[0], line_no, "a state"));
        }
        h.table.push_back(std::move(set));
      }
    } else if (d == "saturated") {
      need(2);
      if (words[1] != "true" && words[1] != "false") throw ParseError("expected true or false", line_no, 0);
      h.saturated = words[1] == "true";
      h.saw_saturated = true;
    } else if (d == "trans") {
      need(4);
      h.trans.emplace_back(line_no, to_int(words[1], line_no, "a state"), words[2], to_int(words[3], line_no, "a state"));
    } else {
      throw ParseError("unknown directive '" + d + "'", line_no, 0);
    }
  }
  if (!saw_magic) throw ParseError("empty automaton file", line_no, 0);
  if (h.base == 0) throw ParseError("missing 'base'", line_no, 0);
  if (h.arity == 0) throw ParseError("missing 'arity'", line_no, 0);
  if (h.kind.empty()) throw ParseError("missing 'kind'", line_no, 0);
  if (h.states < 0) throw ParseError("missing 'states'", line_no, 0);
  if (h.init < 0) throw ParseError("missing 'init'", line_no, 0);
  if (h.init >= h.states) throw ValidationError("initial state out of range");

  Alphabet alpha(h.base, h.arity);
  const int letters = alpha.size();
  std::vector<int> delta(static_cast<std::size_t>(h.states) * letters, -1);
  for (const auto& [ln, from, label, to] : h.trans) {
    if (from >= h.states || to >= h.states) throw ParseError("state out of range", ln, 0);
    int l = alpha.parse(label);
    if (l < 0)
      throw ParseError("label '" + label + "' does not match base " + std::to_string(h.base) + " and arity " +
                           std::to_string(h.arity),
                       ln, 0);
    int& slot = delta[static_cast<std::size_t>(from) * letters + l];
    if (slot != -1 && slot != to)
      throw ValidationError("nondeterministic transition from state " + std::to_string(from) + " on label " + label +
                            " (line " + std::to_string(ln) + ")");
    slot = to;
  }
  for (int q = 0; q < h.states; ++q)
    for (int l = 0; l < letters; ++l)
      if (delta[static_cast<std::size_t>(q) * letters + l] == -1)
        throw ValidationError("incomplete automaton: state " + std::to_string(q) + " has no transition on label " +
                              alpha.format(l));

  std::optional<RelationAutomaton> a;
  if (h.kind == "wdba") {
    std::vector<int> marks(h.states, 0);
    for (int q : h.acc) {
      if (q >= h.states) throw ValidationError("accepting state out of range");
      marks[q] = 1;
    }
    auto sccs = detail::scc_dense(h.states, letters, delta);
    std::vector<int> seen(sccs.count, -1);
    for (int q = 0; q < h.states; ++q) {
      int c = sccs.id[q];
      if (!sccs.nontrivial[c]) continue;
      if (seen[c] == -1) seen[c] = marks[q];
      else if (seen[c] != marks[q])
        throw ValidationError("kind wdba but a strongly connected component mixes accepting and rejecting states (state " +
                              std::to_string(q) + ")");
    }
    a.emplace(h.base, h.arity, AcceptanceKind::Wdba, h.init, delta, marks, h.saturated);
  } else if (h.kind == "parity") {
    std::vector<int> marks(h.states);
    for (int q = 0; q < h.states; ++q) {
      auto it = h.prio.find(q);
      if (it == h.prio.end()) throw ValidationError("state " + std::to_string(q) + " has no priority");
      marks[q] = it->second;
    }
    for (const auto& [q, p] : h.prio)
      if (q >= h.states) throw ValidationError("priority for state out of range");
    a.emplace(h.base, h.arity, AcceptanceKind::Parity, h.init, delta, marks, h.saturated);
  } else {
    for (const auto& s : h.table)
      for (int q : s)
        if (q >= h.states) throw ValidationError("table state out of range");
    a.emplace(muller_to_parity(h.base, h.arity, h.init, delta, h.states, h.table).with_saturated(h.saturated));
  }
  RelationAutomaton out = product(*a, universal_relation(h.base, h.arity), BoolOp::And);
  if (!out.saturated()) {
    RelationAutomaton sat = saturate(out);
    if (equivalent(sat, out.with_saturated(true))) out = out.with_saturated(true);
  }
  return out;
}

RelationAutomaton load_automaton_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_automaton(ss.str());
}

std::string write_automaton(const RelationAutomaton& input) {
  RelationAutomaton a = detail::trim_and_renumber(input);
  Alphabet alpha = a.alphabet();
  std::ostringstream out;
  out << "rva 1\nbase " << a.base() << "\narity " << a.arity() << "\nkind "
      << (a.kind() == AcceptanceKind::Wdba ? "wdba" : "parity") << "\nstates " << a.num_states() << "\ninit "
      << a.initial() << "\n";
  if (a.kind() == AcceptanceKind::Wdba) {
    out << "acc";
    for (int q = 0; q < a.num_states(); ++q)
      if (a.accepting(q)) out << " " << q;
    out << "\n";
  } else {
    out << "prio";
    for (int q = 0; q < a.num_states(); ++q) out << " " << q << ":" << a.priority(q);
    out << "\n";
  }
  out << "saturated " << (a.saturated() ? "true" : "false") << "\n";
  for (int q = 0; q < a.num_states(); ++q)
    for (int l = 0; l < a.alphabet_size(); ++l) out << "trans " << q << " " << alpha.format(l) << " " << a.next(q, l) << "\n";
  return out.str();
}

void write_automaton_file(const RelationAutomaton& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << write_automaton(a);
}

}  // namespace rva
