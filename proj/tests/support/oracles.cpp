#include "support/oracles.hpp"

#include <set>
#include <stdexcept>

#include "rva/omega.hpp"

namespace rva::oracle {

namespace {

const char* kCmp[] = {"<", "<=", "=", "!=", ">=", ">"};

bool apply_cmp(const Rational& l, int cmp, const Rational& r) {
  switch (cmp) {
    case 0: return l < r;
    case 1: return l <= r;
    case 2: return l == r;
    case 3: return l != r;
    case 4: return l >= r;
    default: return l > r;
  }
}

std::string rational_text(const Rational& q) {
  Integer n = boost::multiprecision::numerator(q), d = boost::multiprecision::denominator(q);
  return d == 1 ? n.str() : n.str() + "/" + d.str();
}

std::string linear_text(const std::vector<int>& c, const Rational& constant) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    const int a = std::abs(c[i]);
    if (out.empty()) out += c[i] < 0 ? "-" : "";
    else out += c[i] < 0 ? " - " : " + ";
    out += (a == 1 ? "" : std::to_string(a) + "*") + "x" + std::to_string(i + 1);
  }
  if (constant != 0 || out.empty()) {
    const Rational a = abs(constant);
    if (out.empty()) out = (constant < 0 ? "-" : "") + rational_text(a);
    else out += (constant < 0 ? " - " : " + ") + rational_text(a);
  }
  return out;
}

Integer ipow(int base, std::size_t e) {
  Integer r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

std::vector<std::string> variable_names(int vars) {
  std::vector<std::string> out;
  for (int i = 1; i <= vars; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

Rational random_rational(std::mt19937& rng, int max_den, int max_abs) {
  const int den = std::uniform_int_distribution<int>(1, max_den)(rng);
  const int num = std::uniform_int_distribution<int>(-max_abs * den, max_abs * den)(rng);
  return Rational(num, den);
}

RationalVector random_point(std::mt19937& rng, int n, int max_den, int max_abs) {
  RationalVector p;
  for (int i = 0; i < n; ++i) p.push_back(random_rational(rng, max_den, max_abs));
  return p;
}

Rational random_kadic(std::mt19937& rng, int base, int max_abs) {
  const int e = std::uniform_int_distribution<int>(0, 4)(rng);
  const int den = static_cast<int>(ipow(base, e));
  const int num = std::uniform_int_distribution<int>(-max_abs * den, max_abs * den)(rng);
  return Rational(num, den);
}

std::shared_ptr<QfFormula> random_qf(std::mt19937& rng, int vars, int depth) {
  auto f = std::make_shared<QfFormula>();
  std::uniform_int_distribution<int> pick(0, 9);
  const int r = depth == 0 ? 0 : pick(rng);
  if (r <= 3) {
    // Atom; about one in five is an integrality atom.
    f->op = std::uniform_int_distribution<int>(0, 4)(rng) == 0 ? QfFormula::Op::IntAtom : QfFormula::Op::Atom;
    std::uniform_int_distribution<int> coeff(-4, 4);
    do {
      f->coefficients.assign(vars, 0);
      for (auto& c : f->coefficients) c = coeff(rng);
    } while (std::all_of(f->coefficients.begin(), f->coefficients.end(), [](int c) { return c == 0; }));
    f->constant = random_rational(rng, 8, 4);
    f->cmp = std::uniform_int_distribution<int>(0, 5)(rng);
    return f;
  }
  if (r == 4) {
    f->op = QfFormula::Op::Not;
    f->left = random_qf(rng, vars, depth - 1);
    return f;
  }
  f->op = r <= 6 ? QfFormula::Op::And : QfFormula::Op::Or;
  f->left = random_qf(rng, vars, depth - 1);
  f->right = random_qf(rng, vars, depth - 1);
  return f;
}

std::string render(const QfFormula& f) {
  switch (f.op) {
    case QfFormula::Op::Atom:
      return linear_text(f.coefficients, 0) + " " + kCmp[f.cmp] + " " + linear_text({}, f.constant);
    case QfFormula::Op::IntAtom: return "int(" + linear_text(f.coefficients, f.constant) + ")";
    case QfFormula::Op::Not: return "!(" + render(*f.left) + ")";
    case QfFormula::Op::And: return "(" + render(*f.left) + " & " + render(*f.right) + ")";
    case QfFormula::Op::Or: return "(" + render(*f.left) + " | " + render(*f.right) + ")";
  }
  return "";
}

bool evaluate(const QfFormula& f, const RationalVector& x) {
  auto lhs = [&] {
    Rational s = 0;
    for (std::size_t i = 0; i < f.coefficients.size(); ++i) s += Rational(f.coefficients[i]) * x[i];
    return s;
  };
  switch (f.op) {
    case QfFormula::Op::Atom: return apply_cmp(lhs(), f.cmp, f.constant);
    case QfFormula::Op::IntAtom: return boost::multiprecision::denominator(Rational(lhs() + f.constant)) == 1;
    case QfFormula::Op::Not: return !evaluate(*f.left, x);
    case QfFormula::Op::And: return evaluate(*f.left, x) && evaluate(*f.right, x);
    case QfFormula::Op::Or: return evaluate(*f.left, x) || evaluate(*f.right, x);
  }
  return false;
}

UPWord encode_point(const RationalVector& x, int base, const std::vector<bool>& dual) {
  const int n = static_cast<int>(x.size());
  // Enough integer digits that |x_t| < k^(len-1) for every track.
  std::size_t int_len = 1;
  for (const auto& v : x)
    while (Rational(abs(v)) >= Rational(ipow(base, int_len - 1))) ++int_len;
  // Fractional length and per-track digit strings.
  std::size_t frac_len = 0;
  for (int t = 0; t < n; ++t) {
    if (!dual[t]) continue;
    Integer d = boost::multiprecision::denominator(x[t]);
    std::size_t e = 0;
    while (d % base == 0) {
      d /= base;
      ++e;
    }
    if (d != 1) throw std::invalid_argument("dual tail requested for a non k-adic value");
    frac_len = std::max(frac_len, e);
  }
  // Non-k-adic tracks: long division produces a preperiod and a period.
  struct Track {
    int sign;
    std::vector<int> digits;  // integer digits then fractional prefix
    std::vector<int> period;
  };
  std::vector<Track> tracks(n);
  std::size_t pre_frac = frac_len, per = 1;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> fractions(n);
  for (int t = 0; t < n; ++t) {
    Rational u = x[t];
    tracks[t].sign = u < 0 ? base - 1 : 0;
    if (u < 0) u += Rational(ipow(base, int_len));
    const Integer ip = boost::multiprecision::numerator(u) / boost::multiprecision::denominator(u);
    Rational frac = u - Rational(ip);
    std::vector<int> idig(int_len);
    Integer v = ip;
    for (std::size_t i = int_len; i-- > 0;) {
      idig[i] = static_cast<int>(v % base);
      v /= base;
    }
    tracks[t].digits = idig;
    // Long division with remainder cycle detection.
    std::vector<int> fd;
    std::vector<Rational> seen;
    while (std::find(seen.begin(), seen.end(), frac) == seen.end()) {
      seen.push_back(frac);
      const Rational s = frac * base;
      const Integer d = boost::multiprecision::numerator(s) / boost::multiprecision::denominator(s);
      fd.push_back(static_cast<int>(d));
      frac = s - Rational(d);
    }
    const std::size_t start = std::find(seen.begin(), seen.end(), frac) - seen.begin();
    fractions[t] = {std::vector<int>(fd.begin(), fd.begin() + start), std::vector<int>(fd.begin() + start, fd.end())};
    pre_frac = std::max(pre_frac, start);
    const std::size_t p = fd.size() - start;
    per = static_cast<std::size_t>(boost::multiprecision::lcm(Integer(per), Integer(p)));
  }
  // Digit of track t at fractional position i (0-based), and the dual rewrite.
  std::vector<std::vector<int>> frac_digits(n), tails(n);
  for (int t = 0; t < n; ++t) {
    const auto& [pre, cyc] = fractions[t];
    auto digit = [&](std::size_t i) { return i < pre.size() ? pre[i] : cyc[(i - pre.size()) % cyc.size()]; };
    for (std::size_t i = 0; i < pre_frac; ++i) frac_digits[t].push_back(digit(i));
    for (std::size_t i = 0; i < per; ++i) tails[t].push_back(digit(pre_frac + i));
    if (!dual[t]) continue;
    std::vector<int> all = tracks[t].digits;
    all.insert(all.end(), frac_digits[t].begin(), frac_digits[t].end());
    auto last = std::find_if(all.rbegin(), all.rend(), [](int d) { return d != 0; });
    if (last == all.rend()) {
      if (tracks[t].sign != 0) throw std::invalid_argument("no dual encoding at this length");
      tracks[t].sign = base - 1;
      std::fill(all.begin(), all.end(), base - 1);
    } else {
      *last -= 1;
      std::fill(all.rbegin(), last, base - 1);
    }
    tracks[t].digits.assign(all.begin(), all.begin() + static_cast<long>(int_len));
    frac_digits[t].assign(all.begin() + static_cast<long>(int_len), all.end());
    tails[t].assign(per, base - 1);
  }
  Alphabet alpha(base, n);
  auto column = [&](auto&& digit_of) {
    std::vector<int> d(n);
    for (int t = 0; t < n; ++t) d[t] = digit_of(t);
    return alpha.letter(d);
  };
  UPWord w;
  w.prefix.push_back(column([&](int t) { return tracks[t].sign; }));
  for (std::size_t i = 0; i < int_len; ++i) w.prefix.push_back(column([&](int t) { return tracks[t].digits[i]; }));
  w.prefix.push_back(alpha.star());
  for (std::size_t i = 0; i < pre_frac; ++i) w.prefix.push_back(column([&](int t) { return frac_digits[t][i]; }));
  for (std::size_t i = 0; i < per; ++i) w.period.push_back(column([&](int t) { return tails[t][i]; }));
  return w;
}

RelationAutomaton cantor4_automaton() {
  // 0 start, 1 integer zeros, 2 even fractional position, 3 after a 0, 4 after a 1, 5 reject.
  constexpr int L = 3;  // letters 0, 1, radix
  std::vector<int> t(6 * L, 5);
  t[0 * L + 0] = 1;
  t[1 * L + 0] = 1;
  t[1 * L + 2] = 2;
  t[2 * L + 0] = 3;
  t[2 * L + 1] = 4;
  t[3 * L + 0] = 2;
  t[4 * L + 1] = 2;
  RelationAutomaton raw(2, 1, AcceptanceKind::Wdba, 0, t, {0, 0, 1, 1, 1, 0}, false);
  return minimize_and_classify(saturate(raw));
}

bool cantor4_member(const Rational& q0) {
  Rational q = q0;
  std::set<Rational> seen;
  while (seen.insert(q).second) {
    if (q < 0 || q > 1) return false;
    if (q <= Rational(1, 4)) q *= 4;
    else if (q >= Rational(3, 4)) q = 4 * q - 3;
    else return false;
  }
  return true;
}

RelationAutomaton powers_of_two_automaton() {
  // 0 start, 1 leading zeros, 2 after the single one, 3 fractional zeros, 4 reject.
  constexpr int L = 3;
  std::vector<int> t(5 * L, 4);
  t[0 * L + 0] = 1;
  t[1 * L + 0] = 1;
  t[1 * L + 1] = 2;
  t[2 * L + 0] = 2;
  t[2 * L + 2] = 3;
  t[3 * L + 0] = 3;
  RelationAutomaton raw(2, 1, AcceptanceKind::Wdba, 0, t, {0, 0, 0, 1, 0}, false);
  return minimize_and_classify(saturate(raw));
}

bool power_of_two(const Rational& q) {
  if (boost::multiprecision::denominator(q) != 1 || q < 1) return false;
  Integer n = boost::multiprecision::numerator(q);
  return (n & (n - 1)) == 0;
}

int square_class(const RationalVector& p) {
  const Rational& x = p[0];
  const Rational& y = p[1];
  if (x < 0 || x > 1 || y < 0 || y > 1) return 1;
  const bool x0 = x == 0, x1 = x == 1, y0 = y == 0, y1 = y == 1;
  if ((x0 || x1) && (y0 || y1)) return 6 + (x1 ? 1 : 0) + (y1 ? 2 : 0);
  if (x0) return 2;
  if (x1) return 3;
  if (y0) return 4;
  if (y1) return 5;
  return 0;
}

int square_dimension(int cls) { return cls <= 1 ? 2 : cls <= 5 ? 1 : 0; }

}  // namespace rva::oracle
