#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "rva/errors.hpp"
#include "rva/logic.hpp"

namespace rva {

std::optional<std::string> Term::as_variable() const {
  if (addends.size() == 1 && addends[0].first == 1 && constant == 0) return addends[0].second;
  return std::nullopt;
}

Term operator+(Term a, const Term& b) {
  a.addends.insert(a.addends.end(), b.addends.begin(), b.addends.end());
  a.constant += b.constant;
  return a;
}

Term operator-(Term a, const Term& b) { return std::move(a) + Rational(-1) * b; }

Term operator*(const Rational& k, Term a) {
  for (auto& [c, v] : a.addends) c *= k;
  a.constant *= k;
  return a;
}

namespace fml {

namespace {
using K = FormulaNode::Kind;
Formula make(FormulaNode node) { return std::make_shared<const FormulaNode>(std::move(node)); }
FormulaNode node(K kind) {
  FormulaNode n;
  n.kind = kind;
  return n;
}
}  // namespace

Formula truth(bool value) { return make(node(value ? K::True : K::False)); }

Formula compare(Term lhs, Comparator c, Term rhs) {
  auto n = node(K::Compare);
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  n.cmp = c;
  return make(std::move(n));
}

Formula is_int(Term t) {
  auto n = node(K::Int);
  n.lhs = std::move(t);
  return make(std::move(n));
}

Formula rel(std::string name, std::vector<Term> args) {
  auto n = node(K::Rel);
  n.name = std::move(name);
  n.args = std::move(args);
  return make(std::move(n));
}

Formula neg(Formula f) {
  auto n = node(K::Not);
  n.left = std::move(f);
  return make(std::move(n));
}

static Formula binary(K kind, Formula a, Formula b) {
  auto n = node(kind);
  n.left = std::move(a);
  n.right = std::move(b);
  return make(std::move(n));
}

Formula conj(Formula a, Formula b) { return binary(K::And, std::move(a), std::move(b)); }
Formula disj(Formula a, Formula b) { return binary(K::Or, std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) { return binary(K::Implies, std::move(a), std::move(b)); }
Formula iff(Formula a, Formula b) { return binary(K::Iff, std::move(a), std::move(b)); }

Formula conj(const std::vector<Formula>& fs) {
  if (fs.empty()) return truth(true);
  Formula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = conj(out, fs[i]);
  return out;
}

Formula disj(const std::vector<Formula>& fs) {
  if (fs.empty()) return truth(false);
  Formula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = disj(out, fs[i]);
  return out;
}

Formula exists(std::string var, Formula body) {
  auto n = node(K::Exists);
  n.name = std::move(var);
  n.left = std::move(body);
  return make(std::move(n));
}

Formula forall(std::string var, Formula body) {
  auto n = node(K::Forall);
  n.name = std::move(var);
  n.left = std::move(body);
  return make(std::move(n));
}

Formula exists(const std::vector<std::string>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = exists(*it, std::move(body));
  return body;
}

Formula forall(const std::vector<std::string>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = forall(*it, std::move(body));
  return body;
}

}  // namespace fml

namespace {

using K = FormulaNode::Kind;

std::string term_string(const Term& t) {
  std::string out;
  bool first = true;
  for (const auto& [c, v] : t.addends) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (mag != 1) out += to_string(mag) + "*";
    out += v;
    first = false;
  }
  if (first) return to_string(t.constant);
  if (t.constant != 0) {
    Rational mag = t.constant < 0 ? Rational(-t.constant) : t.constant;
    out += (t.constant < 0 ? " - " : " + ") + to_string(mag);
  }
  return out;
}

void print(const Formula& f, std::string& out) {
  switch (f->kind) {
    case K::True: out += "true"; return;
    case K::False: out += "false"; return;
    case K::Compare: out += term_string(f->lhs) + " " + to_string(f->cmp) + " " + term_string(f->rhs); return;
    case K::Int: out += "int(" + term_string(f->lhs) + ")"; return;
    case K::Rel:
      out += f->name + "(";
      for (std::size_t i = 0; i < f->args.size(); ++i) out += (i ? ", " : "") + term_string(f->args[i]);
      out += ")";
      return;
    case K::Not: out += "!"; print(f->left, out); return;
    case K::And: case K::Or: case K::Implies: case K::Iff: {
      const char* op = f->kind == K::And ? " & " : f->kind == K::Or ? " | " : f->kind == K::Implies ? " -> " : " <-> ";
      out += "(";
      print(f->left, out);
      out += op;
      print(f->right, out);
      out += ")";
      return;
    }
    case K::Exists: case K::Forall:
      out += std::string("(") + (f->kind == K::Exists ? "E " : "A ") + f->name + ". ";
      print(f->left, out);
      out += ")";
      return;
  }
}

void collect_free(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out,
                  std::set<std::string>& seen) {
  auto term = [&](const Term& t) {
    for (const auto& [c, v] : t.addends) {
      if (std::find(bound.begin(), bound.end(), v) != bound.end()) continue;
      if (seen.insert(v).second) out.push_back(v);
    }
  };
  switch (f->kind) {
    case K::True: case K::False: return;
    case K::Compare: term(f->lhs); term(f->rhs); return;
    case K::Int: term(f->lhs); return;
    case K::Rel: for (const auto& a : f->args) term(a); return;
    case K::Not: collect_free(f->left, bound, out, seen); return;
    case K::And: case K::Or: case K::Implies: case K::Iff:
      collect_free(f->left, bound, out, seen);
      collect_free(f->right, bound, out, seen);
      return;
    case K::Exists: case K::Forall:
      bound.push_back(f->name);
      collect_free(f->left, bound, out, seen);
      bound.pop_back();
      return;
  }
}

void collect_relations(const Formula& f, std::map<std::string, std::size_t>& out) {
  if (!f) return;
  if (f->kind == K::Rel) {
    auto [it, fresh] = out.emplace(f->name, f->args.size());
    if (!fresh && it->second != f->args.size())
      throw ValidationError("relation " + f->name + " is used with arities " + std::to_string(it->second) + " and " +
                            std::to_string(f->args.size()));
  }
  collect_relations(f->left, out);
  collect_relations(f->right, out);
}

// ---------------------------------------------------------------- parser

struct Token {
  enum Type { Ident, Number, Op, End } type;
  std::string text;
  std::size_t column;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t col = i + 1;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) ++j;
      out.push_back({Token::Ident, std::string(s.substr(i, j - i)), col});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Number, std::string(s.substr(i, j - i)), col});
      i = j;
      continue;
    }
    static const char* ops[] = {"<->", "->", "<=", ">=", "!=", "<", ">", "=", "!", "&", "|", "(", ")", ",", ".",
                                "+", "-", "*", "/"};
    bool matched = false;
    for (const char* op : ops) {
      std::string_view o(op);
      if (s.substr(i, o.size()) == o) {
        out.push_back({Token::Op, std::string(o), col});
        i += o.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", 1, col);
  }
  out.push_back({Token::End, "", s.size() + 1});
  return out;
}

bool is_keyword(const std::string& s) { return s == "true" || s == "false" || s == "int" || s == "E" || s == "A"; }

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : t_(std::move(tokens)) {}

  Formula parse() {
    Formula f = iff();
    if (peek().type != Token::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return t_[std::min(pos_ + ahead, t_.size() - 1)]; }
  bool is_op(const char* op, std::size_t ahead = 0) const {
    return peek(ahead).type == Token::Op && peek(ahead).text == op;
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw ParseError(t.type == Token::End ? "unexpected end of input" : what, 1, t.column);
  }
  void expect(const char* op) {
    if (!is_op(op)) fail(std::string("expected '") + op + "' but found '" + peek().text + "'");
    ++pos_;
  }

  Formula iff() {
    Formula f = imp();
    while (is_op("<->")) {
      ++pos_;
      f = fml::iff(f, imp());
    }
    return f;
  }
  Formula imp() {
    Formula f = disj();
    if (is_op("->")) {
      ++pos_;
      return fml::implies(f, imp());
    }
    return f;
  }
  Formula disj() {
    Formula f = conj();
    while (is_op("|")) {
      ++pos_;
      f = fml::disj(f, conj());
    }
    return f;
  }
  Formula conj() {
    Formula f = unary();
    while (is_op("&")) {
      ++pos_;
      f = fml::conj(f, unary());
    }
    return f;
  }
  Formula unary() {
    if (is_op("!")) {
      ++pos_;
      return fml::neg(unary());
    }
    const Token& t = peek();
    if (t.type == Token::Ident && (t.text == "E" || t.text == "A")) {
      ++pos_;
      if (peek().type != Token::Ident || is_keyword(peek().text)) fail("expected a variable after quantifier");
      std::string var = peek().text;
      ++pos_;
      expect(".");
      Formula body = iff();
      return t.text == "E" ? fml::exists(var, body) : fml::forall(var, body);
    }
    return primary();
  }
  Formula primary() {
    const Token& t = peek();
    if (is_op("(")) {
      ++pos_;
      Formula f = iff();
      expect(")");
      return f;
    }
    if (t.type == Token::Ident && t.text == "true") {
      ++pos_;
      return fml::truth(true);
    }
    if (t.type == Token::Ident && t.text == "false") {
      ++pos_;
      return fml::truth(false);
    }
    if (t.type == Token::Ident && t.text == "int") {
      ++pos_;
      expect("(");
      Term arg = term();
      expect(")");
      return fml::is_int(arg);
    }
    if (t.type == Token::Ident && !is_keyword(t.text) && is_op("(", 1)) {
      std::string name = t.text;
      pos_ += 2;
      std::vector<Term> args{term()};
      while (is_op(",")) {
        ++pos_;
        args.push_back(term());
      }
      expect(")");
      return fml::rel(name, args);
    }
    if (t.type == Token::End) fail("");
    Term lhs = term();
    static const std::pair<const char*, Comparator> cmps[] = {{"<=", Comparator::Le}, {">=", Comparator::Ge},
                                                               {"!=", Comparator::Ne}, {"<", Comparator::Lt},
                                                               {">", Comparator::Gt},  {"=", Comparator::Eq}};
    for (const auto& [op, c] : cmps)
      if (is_op(op)) {
        ++pos_;
        Term rhs = term();
        return fml::compare(lhs, c, rhs);
      }
    fail("expected a comparison operator but found '" + peek().text + "'");
  }

  Rational rat() {
    if (peek().type != Token::Number) fail("expected a number but found '" + peek().text + "'");
    Integer num(peek().text);
    ++pos_;
    if (is_op("/")) {
      ++pos_;
      if (peek().type != Token::Number) fail("expected a denominator");
      Integer den(peek().text);
      if (den == 0) fail("zero denominator");
      ++pos_;
      return Rational(num, den);
    }
    return Rational(num);
  }

  Term addend() {
    const Token& t = peek();
    if (t.type == Token::Ident) {
      if (is_keyword(t.text)) fail("unexpected keyword '" + t.text + "'");
      ++pos_;
      return Term::var(t.text);
    }
    Rational k = rat();
    if (is_op("*")) {
      ++pos_;
      if (peek().type != Token::Ident || is_keyword(peek().text)) fail("expected a variable after '*'");
      std::string v = peek().text;
      ++pos_;
      return Term{{{k, v}}, 0};
    }
    return Term::constant_term(k);
  }

  Term term() {
    bool negate = false;
    if (is_op("-")) {
      ++pos_;
      negate = true;
    }
    Term out = addend();
    if (negate) out = Rational(-1) * out;
    while (is_op("+") || is_op("-")) {
      const bool minus = is_op("-");
      ++pos_;
      Term next = addend();
      out = minus ? out - next : out + next;
    }
    return out;
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
};

// Renames bound variables so that no binder shadows another binder or a free variable.
Formula alpha_rename(const Formula& f, std::map<std::string, std::string>& scope, std::set<std::string>& used) {
  auto rename_term = [&](const Term& t) {
    Term out = t;
    for (auto& [c, v] : out.addends) {
      auto it = scope.find(v);
      if (it != scope.end()) v = it->second;
    }
    return out;
  };
  switch (f->kind) {
    case K::True: case K::False: return f;
    case K::Compare: return fml::compare(rename_term(f->lhs), f->cmp, rename_term(f->rhs));
    case K::Int: return fml::is_int(rename_term(f->lhs));
    case K::Rel: {
      std::vector<Term> args;
      for (const auto& a : f->args) args.push_back(rename_term(a));
      return fml::rel(f->name, args);
    }
    case K::Not: return fml::neg(alpha_rename(f->left, scope, used));
    case K::And: return fml::conj(alpha_rename(f->left, scope, used), alpha_rename(f->right, scope, used));
    case K::Or: return fml::disj(alpha_rename(f->left, scope, used), alpha_rename(f->right, scope, used));
    case K::Implies: return fml::implies(alpha_rename(f->left, scope, used), alpha_rename(f->right, scope, used));
    case K::Iff: return fml::iff(alpha_rename(f->left, scope, used), alpha_rename(f->right, scope, used));
    case K::Exists: case K::Forall: {
      std::string name = f->name;
      if (used.count(name)) {
        int k = 1;
        while (used.count(f->name + "_" + std::to_string(k))) ++k;
        name = f->name + "_" + std::to_string(k);
      }
      used.insert(name);
      auto saved = scope.find(f->name) == scope.end() ? std::optional<std::string>() : scope[f->name];
      scope[f->name] = name;
      Formula body = alpha_rename(f->left, scope, used);
      if (saved) scope[f->name] = *saved;
      else scope.erase(f->name);
      return f->kind == K::Exists ? fml::exists(name, body) : fml::forall(name, body);
    }
  }
  return f;
}

void all_names(const Formula& f, std::set<std::string>& out) {
  if (!f) return;
  auto term = [&](const Term& t) {
    for (const auto& [c, v] : t.addends) out.insert(v);
  };
  term(f->lhs);
  term(f->rhs);
  for (const auto& a : f->args) term(a);
  if (f->kind == K::Exists || f->kind == K::Forall) out.insert(f->name);
  all_names(f->left, out);
  all_names(f->right, out);
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound, out;
  std::set<std::string> seen;
  collect_free(f, bound, out, seen);
  return out;
}

std::map<std::string, std::size_t> relation_symbols(const Formula& f) {
  std::map<std::string, std::size_t> out;
  collect_relations(f, out);
  return out;
}

Formula parse_formula(std::string_view text, const std::optional<std::vector<std::string>>& declared_free) {
  Formula raw = Parser(lex(text)).parse();
  std::set<std::string> used;
  for (const auto& v : free_variables(raw)) used.insert(v);
  if (declared_free)
    for (const auto& v : *declared_free) used.insert(v);
  std::map<std::string, std::string> scope;
  Formula f = alpha_rename(raw, scope, used);
  if (declared_free) {
    for (const auto& v : free_variables(f))
      if (std::find(declared_free->begin(), declared_free->end(), v) == declared_free->end())
        throw ValidationError("unbound variable '" + v + "'");
  }
  relation_symbols(f);
  return f;
}

}  // namespace rva
