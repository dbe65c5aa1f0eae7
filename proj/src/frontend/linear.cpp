#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

#include "smtkc/frontend.hpp"

namespace smtkc {

LinTerm LinTerm::constant(Rational c) {
  LinTerm t;
  t.constant_ = std::move(c);
  return t;
}

LinTerm LinTerm::variable(RealVar v, Rational coeff) {
  LinTerm t;
  t.set(v, std::move(coeff));
  return t;
}

Rational LinTerm::coeff(RealVar v) const {
  auto it = coeffs_.find(v);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

std::vector<RealVar> LinTerm::variables() const {
  std::vector<RealVar> out;
  out.reserve(coeffs_.size());
  for (const auto& [v, c] : coeffs_) out.push_back(v);
  return out;
}

Rational LinTerm::evaluate(const RealPoint& point) const {
  Rational sum = constant_;
  for (const auto& [v, c] : coeffs_) {
    auto it = point.find(v);
    if (it != point.end()) sum += c * it->second;
  }
  return sum;
}

void LinTerm::set(RealVar v, Rational c) {
  if (sgn(c) == 0)
    coeffs_.erase(v);
  else
    coeffs_[v] = std::move(c);
}

LinTerm& LinTerm::operator+=(const LinTerm& other) {
  for (const auto& [v, c] : other.coeffs_) set(v, coeff(v) + c);
  constant_ += other.constant_;
  return *this;
}

LinTerm& LinTerm::operator-=(const LinTerm& other) {
  for (const auto& [v, c] : other.coeffs_) set(v, coeff(v) - c);
  constant_ -= other.constant_;
  return *this;
}

LinTerm& LinTerm::operator*=(const Rational& k) {
  if (sgn(k) == 0) {
    coeffs_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [v, c] : coeffs_) c *= k;
  constant_ *= k;
  return *this;
}

namespace {

// Positive factor turning all coefficients and the constant into coprime integers.
Rational integral_scale(const LinTerm& t) {
  BigInt den = t.constant_part().get_den();
  for (const auto& [v, c] : t.coeffs()) den = lcm(den, BigInt(c.get_den()));
  BigInt g = 0;
  auto fold = [&](const Rational& q) {
    BigInt n = q.get_num() * (den / q.get_den());
    g = gcd(g, BigInt(abs(n)));
  };
  for (const auto& [v, c] : t.coeffs()) fold(c);
  fold(t.constant_part());
  if (g == 0) g = 1;
  return Rational(den, g);
}

}  // namespace

LinTerm canonical_leq_term(const LinTerm& t) {
  Rational k = integral_scale(t);
  k.canonicalize();
  return t * k;
}

LinTerm canonical_eq_term(const LinTerm& t) {
  LinTerm out = canonical_leq_term(t);
  if (!out.coeffs().empty() && sgn(out.coeffs().begin()->second) < 0) out *= Rational(-1);
  return out;
}

Atom Atom::truth() { return Atom{}; }

Atom Atom::prop(std::string name) {
  Atom a;
  a.kind_ = AtomKind::Prop;
  a.name_ = std::move(name);
  return a;
}

Atom Atom::leq(const LinTerm& term) {
  if (term.is_constant()) throw std::invalid_argument("Atom::leq: constant term");
  Atom a;
  a.kind_ = AtomKind::LinLeq;
  a.term_ = canonical_leq_term(term);
  return a;
}

Atom Atom::eq(const LinTerm& term) {
  if (term.is_constant()) throw std::invalid_argument("Atom::eq: constant term");
  Atom a;
  a.kind_ = AtomKind::LinEq;
  a.term_ = canonical_eq_term(term);
  return a;
}

std::string Atom::key() const {
  std::ostringstream os;
  switch (kind_) {
    case AtomKind::Truth: return "t";
    case AtomKind::Prop: return "p:" + name_;
    case AtomKind::LinLeq: os << "l:"; break;
    case AtomKind::LinEq: os << "e:"; break;
  }
  for (const auto& [v, c] : term_.coeffs()) os << v << '*' << c.get_str() << ' ';
  os << term_.constant_part().get_str();
  return os.str();
}

NormalizedLiteral normalize_comparison(Comparison op, const LinTerm& lhs, const LinTerm& rhs) {
  // Each comparison becomes (term, relation, polarity) over `term <= 0` or `term = 0`.
  LinTerm term;
  bool equality = false;
  bool positive = true;
  switch (op) {
    case Comparison::Le: term = lhs - rhs; break;
    case Comparison::Ge: term = rhs - lhs; break;
    case Comparison::Lt: term = rhs - lhs; positive = false; break;  // l<r == !(r-l<=0)
    case Comparison::Gt: term = lhs - rhs; positive = false; break;
    case Comparison::Eq: term = lhs - rhs; equality = true; break;
    case Comparison::Ne: term = lhs - rhs; equality = true; positive = false; break;
  }
  if (term.is_constant()) {
    const Rational& c = term.constant_part();
    bool value = equality ? sgn(c) == 0 : sgn(c) <= 0;
    return {Atom::truth(), value == positive};
  }
  return {equality ? Atom::eq(term) : Atom::leq(term), positive};
}

bool holds(Comparison op, const LinTerm& lhs, const LinTerm& rhs, const RealPoint& point) {
  Rational l = lhs.evaluate(point);
  Rational r = rhs.evaluate(point);
  switch (op) {
    case Comparison::Lt: return l < r;
    case Comparison::Le: return l <= r;
    case Comparison::Gt: return l > r;
    case Comparison::Ge: return l >= r;
    case Comparison::Eq: return l == r;
    case Comparison::Ne: return l != r;
  }
  return false;
}

bool holds(const Atom& atom, bool positive, const RealPoint& point) {
  switch (atom.kind()) {
    case AtomKind::Truth: return positive;
    case AtomKind::LinLeq: return (sgn(atom.term().evaluate(point)) <= 0) == positive;
    case AtomKind::LinEq: return (sgn(atom.term().evaluate(point)) == 0) == positive;
    case AtomKind::Prop: break;
  }
  throw std::invalid_argument("holds: propositional atom has no value at a real point");
}

int AtomTable::intern(const Atom& atom) {
  if (atom.kind() == AtomKind::Truth)
    throw std::invalid_argument("AtomTable::intern: constant atoms are not tabled");
  auto [it, inserted] = index_.try_emplace(atom.key(), static_cast<int>(atoms_.size()) + 1);
  if (inserted) atoms_.push_back(atom);
  return it->second;
}

std::optional<int> AtomTable::find(const Atom& atom) const {
  auto it = index_.find(atom.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

RealVar AtomTable::declare_real(const std::string& name) {
  auto [it, inserted] = real_index_.try_emplace(name, static_cast<RealVar>(real_names_.size()));
  if (inserted) real_names_.push_back(name);
  return it->second;
}

std::optional<RealVar> AtomTable::find_real(const std::string& name) const {
  auto it = real_index_.find(name);
  if (it == real_index_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Names with whitespace are written as SMT-LIB quoted symbols.
std::string quoted(const std::string& name) {
  bool plain = std::none_of(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c); });
  return plain && !name.empty() ? name : "|" + name + "|";
}

std::string unquoted(const std::string& tok) {
  if (tok.size() >= 2 && tok.front() == '|' && tok.back() == '|') return tok.substr(1, tok.size() - 2);
  return tok;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  bool in_bar = false;
  for (char c : text) {
    if (c == '|') in_bar = !in_bar;
    if (!in_bar && std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (in_bar) throw std::invalid_argument("atom: unterminated quoted name");
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

std::string AtomTable::serialize(const Atom& atom) const {
  std::ostringstream os;
  switch (atom.kind()) {
    case AtomKind::Truth: return "true";
    case AtomKind::Prop: return "bool " + quoted(atom.name());
    case AtomKind::LinLeq: os << "leq"; break;
    case AtomKind::LinEq: os << "eq"; break;
  }
  // Ordered by name so the text does not depend on declaration order.
  std::vector<std::pair<std::string, Rational>> terms;
  for (const auto& [v, c] : atom.term().coeffs()) terms.emplace_back(real_names_.at(static_cast<std::size_t>(v)), c);
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [name, c] : terms) os << ' ' << c.get_str() << '*' << quoted(name);
  os << ' ' << atom.term().constant_part().get_str();
  return os.str();
}

Atom AtomTable::parse_atom(std::string_view text) {
  std::vector<std::string> tokens = split_tokens(text);
  std::string kind = tokens.empty() ? std::string() : tokens.front();
  if (!tokens.empty()) tokens.erase(tokens.begin());
  if (kind == "bool") {
    if (tokens.empty()) throw std::invalid_argument("atom: missing propositional name");
    if (tokens.size() > 1) throw std::invalid_argument("atom: trailing tokens after name");
    return Atom::prop(unquoted(tokens[0]));
  }
  if (kind != "leq" && kind != "eq") throw std::invalid_argument("atom: unknown kind '" + kind + "'");
  if (tokens.size() < 2) throw std::invalid_argument("atom: linear atom needs a term and a constant");
  auto rational = [](const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0 || s.empty()) throw std::invalid_argument("atom: bad number '" + s + "'");
    if (sgn(q.get_den()) == 0) throw std::invalid_argument("atom: zero denominator");
    q.canonicalize();
    return q;
  };
  LinTerm term = LinTerm::constant(rational(tokens.back()));
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    auto star = tokens[i].find('*');
    if (star == std::string::npos || star == 0 || star + 1 == tokens[i].size())
      throw std::invalid_argument("atom: expected <coeff>*<var>, got '" + tokens[i] + "'");
    term += LinTerm::variable(declare_real(unquoted(tokens[i].substr(star + 1))), rational(tokens[i].substr(0, star)));
  }
  if (term.is_constant()) throw std::invalid_argument("atom: linear atom without variables");
  return kind == "leq" ? Atom::leq(term) : Atom::eq(term);
}

Expr Expr::negation(Expr e) { return {Kind::Not, {}, {std::move(e)}}; }
Expr Expr::conjunction(std::vector<Expr> kids) { return {Kind::And, {}, std::move(kids)}; }
Expr Expr::disjunction(std::vector<Expr> kids) { return {Kind::Or, {}, std::move(kids)}; }
Expr Expr::implication(Expr lhs, Expr rhs) { return {Kind::Implies, {}, {std::move(lhs), std::move(rhs)}}; }

bool evaluate(const Expr& e, const std::vector<bool>& values) {
  switch (e.kind) {
    case Expr::Kind::True: return true;
    case Expr::Kind::False: return false;
    case Expr::Kind::Lit: return values.at(static_cast<std::size_t>(e.lit.var)) == e.lit.positive;
    case Expr::Kind::Not: return !evaluate(e.kids.front(), values);
    case Expr::Kind::And:
      return std::all_of(e.kids.begin(), e.kids.end(), [&](const Expr& k) { return evaluate(k, values); });
    case Expr::Kind::Or:
      return std::any_of(e.kids.begin(), e.kids.end(), [&](const Expr& k) { return evaluate(k, values); });
    case Expr::Kind::Implies: return !evaluate(e.kids[0], values) || evaluate(e.kids[1], values);
  }
  return false;
}

namespace {

void collect_atoms(const Expr& e, std::unordered_set<int>& seen, std::vector<int>& order) {
  if (e.kind == Expr::Kind::Lit) {
    if (seen.insert(e.lit.var).second) order.push_back(e.lit.var);
    return;
  }
  for (const Expr& k : e.kids) collect_atoms(k, seen, order);
}

}  // namespace

std::vector<Atom> atoms_of(const Formula& f) {
  std::unordered_set<int> seen;
  std::vector<int> order;
  collect_atoms(f.root, seen, order);
  std::vector<Atom> out;
  out.reserve(order.size());
  for (int id : order) out.push_back(f.atoms.atom(id));
  return out;
}

}  // namespace smtkc
