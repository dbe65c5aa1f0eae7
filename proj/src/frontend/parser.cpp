#include <cctype>
#include <unordered_map>

#include "smtkc/frontend.hpp"

namespace smtkc {
namespace {

struct SExpr {
  enum class Kind { Symbol, Numeral, String, Keyword, List };
  Kind kind = Kind::Symbol;
  std::string text;
  std::vector<SExpr> items;
  std::size_t line = 0;

  bool is_list() const { return kind == Kind::List; }
  bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
};

std::string where(const SExpr& e) { return " (line " + std::to_string(e.line) + ")"; }

bool looks_numeric(std::string_view tok) {
  std::size_t i = 0;
  if (i < tok.size() && tok[i] == '-') ++i;
  std::size_t digits = 0;
  while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i, ++digits;
  if (digits == 0) return false;
  if (i == tok.size()) return true;
  if (tok[i] != '.') return false;
  ++i;
  std::size_t frac = 0;
  while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i, ++frac;
  return frac > 0 && i == tok.size();
}

Rational numeral_value(std::string_view tok) {
  bool negative = !tok.empty() && tok.front() == '-';
  if (negative) tok.remove_prefix(1);
  auto dot = tok.find('.');
  Rational value;
  if (dot == std::string_view::npos) {
    value = Rational(BigInt(std::string(tok)));
  } else {
    std::string digits = std::string(tok.substr(0, dot)) + std::string(tok.substr(dot + 1));
    BigInt den = 1;
    for (std::size_t k = dot + 1; k < tok.size(); ++k) den *= 10;
    value = Rational(BigInt(digits), den);
    value.canonicalize();
  }
  return negative ? Rational(-value) : value;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    char c = text_[pos_];
    if (c == ')') throw SyntaxError("unexpected ')'" + where(e));
    if (c == '(') {
      ++pos_;
      e.kind = SExpr::Kind::List;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw SyntaxError("unterminated list" + where(e));
        if (text_[pos_] == ')') {
          ++pos_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == '|') {
      auto end = text_.find('|', pos_ + 1);
      if (end == std::string_view::npos) throw SyntaxError("unterminated quoted symbol" + where(e));
      e.text = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
      for (char q : e.text) line_ += q == '\n';
      pos_ = end + 1;
      return e;
    }
    if (c == '"') {
      e.kind = SExpr::Kind::String;
      std::size_t i = pos_ + 1;
      for (;; ++i) {
        if (i >= text_.size()) throw SyntaxError("unterminated string literal" + where(e));
        if (text_[i] == '"') {
          if (i + 1 < text_.size() && text_[i + 1] == '"') {
            ++i;
            continue;
          }
          break;
        }
      }
      e.text = std::string(text_.substr(pos_ + 1, i - pos_ - 1));
      pos_ = i + 1;
      return e;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';' || d == '|' || d == '"')
        break;
      ++pos_;
    }
    e.text = std::string(text_.substr(start, pos_ - start));
    if (looks_numeric(e.text))
      e.kind = SExpr::Kind::Numeral;
    else if (e.text.front() == ':')
      e.kind = SExpr::Kind::Keyword;
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

enum class Sort { Bool, Real };

class Interpreter {
 public:
  Formula run(const std::vector<SExpr>& commands) {
    std::vector<Expr> asserted;
    for (const SExpr& cmd : commands) {
      if (!cmd.is_list() || cmd.items.empty() || cmd.items[0].kind != SExpr::Kind::Symbol)
        throw SyntaxError("expected a command" + where(cmd));
      const std::string& name = cmd.items[0].text;
      if (name == "set-logic") {
        expect_arity(cmd, 2);
        if (!cmd.items[1].is_symbol("QF_LRA"))
          throw UnsupportedFeature("logic '" + cmd.items[1].text + "' is not QF_LRA" + where(cmd));
      } else if (name == "declare-const") {
        expect_arity(cmd, 3);
        declare(cmd.items[1], cmd.items[2]);
      } else if (name == "declare-fun") {
        expect_arity(cmd, 4);
        if (!cmd.items[2].is_list()) throw SyntaxError("declare-fun: expected parameter list" + where(cmd));
        if (!cmd.items[2].items.empty())
          throw UnsupportedFeature("uninterpreted function '" + cmd.items[1].text + "'" + where(cmd));
        declare(cmd.items[1], cmd.items[3]);
      } else if (name == "assert") {
        expect_arity(cmd, 2);
        asserted.push_back(formula(cmd.items[1]));
      } else if (name == "set-info" || name == "set-option" || name == "check-sat" || name == "get-model" ||
                 name == "get-info" || name == "exit") {
        // no effect on the compiled formula
      } else {
        throw UnsupportedFeature("command '" + name + "'" + where(cmd));
      }
    }
    Formula out;
    if (asserted.empty())
      out.root = Expr::truth();
    else if (asserted.size() == 1)
      out.root = std::move(asserted.front());
    else
      out.root = Expr::conjunction(std::move(asserted));
    out.atoms = std::move(atoms_);
    return out;
  }

 private:
  static void expect_arity(const SExpr& cmd, std::size_t n) {
    if (cmd.items.size() != n)
      throw SyntaxError("'" + cmd.items[0].text + "' expects " + std::to_string(n - 1) + " argument(s)" + where(cmd));
  }

  void declare(const SExpr& name, const SExpr& sort) {
    if (name.kind != SExpr::Kind::Symbol) throw SyntaxError("expected a symbol to declare" + where(name));
    if (sorts_.count(name.text)) throw SyntaxError("symbol '" + name.text + "' declared twice" + where(name));
    if (sort.is_symbol("Real")) {
      sorts_[name.text] = Sort::Real;
      atoms_.declare_real(name.text);
    } else if (sort.is_symbol("Bool")) {
      sorts_[name.text] = Sort::Bool;
    } else {
      throw UnsupportedFeature("sort '" + (sort.is_list() ? std::string("(...)") : sort.text) + "'" + where(sort));
    }
  }

  Sort symbol_sort(const SExpr& e) const {
    if (e.text == "true" || e.text == "false") return Sort::Bool;
    auto it = sorts_.find(e.text);
    if (it == sorts_.end()) throw UndeclaredSymbol("undeclared symbol '" + e.text + "'" + where(e));
    return it->second;
  }

  Sort sort_of(const SExpr& e) const {
    switch (e.kind) {
      case SExpr::Kind::Numeral: return Sort::Real;
      case SExpr::Kind::Symbol: return symbol_sort(e);
      case SExpr::Kind::List: {
        if (e.items.empty()) throw SyntaxError("empty application" + where(e));
        const SExpr& head = e.items[0];
        if (head.is_symbol("+") || head.is_symbol("-") || head.is_symbol("*") || head.is_symbol("/"))
          return Sort::Real;
        if (head.is_symbol("!") && e.items.size() >= 2) return sort_of(e.items[1]);
        return Sort::Bool;
      }
      default: throw SyntaxError("unexpected token '" + e.text + "'" + where(e));
    }
  }

  static void reject_unsupported_head(const SExpr& head, const SExpr& e) {
    static const char* const kUnsupported[] = {"forall", "exists", "let", "ite", "xor", "to_real", "to_int",
                                               "is_int", "div", "mod", "abs", "match"};
    for (const char* h : kUnsupported)
      if (head.is_symbol(h)) throw UnsupportedFeature("'" + head.text + "' is outside QF_LRA subset" + where(e));
  }

  LinTerm term(const SExpr& e) {
    if (e.kind == SExpr::Kind::Numeral) return LinTerm::constant(numeral_value(e.text));
    if (e.kind == SExpr::Kind::Symbol) {
      if (symbol_sort(e) != Sort::Real) throw SyntaxError("expected a Real term, got '" + e.text + "'" + where(e));
      return LinTerm::variable(*atoms_.find_real(e.text));
    }
    if (!e.is_list() || e.items.empty()) throw SyntaxError("malformed term" + where(e));
    const SExpr& head = e.items[0];
    reject_unsupported_head(head, e);
    std::size_t argc = e.items.size() - 1;
    if (head.is_symbol("+")) {
      LinTerm sum;
      for (std::size_t i = 1; i < e.items.size(); ++i) sum += term(e.items[i]);
      return sum;
    }
    if (head.is_symbol("-")) {
      if (argc == 0) throw SyntaxError("'-' needs an argument" + where(e));
      LinTerm first = term(e.items[1]);
      if (argc == 1) return -first;
      for (std::size_t i = 2; i < e.items.size(); ++i) first -= term(e.items[i]);
      return first;
    }
    if (head.is_symbol("*")) {
      if (argc == 0) throw SyntaxError("'*' needs arguments" + where(e));
      LinTerm product = term(e.items[1]);
      for (std::size_t i = 2; i < e.items.size(); ++i) {
        LinTerm factor = term(e.items[i]);
        if (factor.is_constant()) {
          product *= factor.constant_part();
        } else if (product.is_constant()) {
          factor *= product.constant_part();
          product = std::move(factor);
        } else {
          throw UnsupportedFeature("nonlinear product" + where(e));
        }
      }
      return product;
    }
    if (head.is_symbol("/")) {
      if (argc < 2) throw SyntaxError("'/' needs two or more arguments" + where(e));
      LinTerm quotient = term(e.items[1]);
      for (std::size_t i = 2; i < e.items.size(); ++i) {
        LinTerm divisor = term(e.items[i]);
        if (!divisor.is_constant()) throw UnsupportedFeature("division by a variable term" + where(e));
        if (sgn(divisor.constant_part()) == 0) throw UnsupportedFeature("division by zero" + where(e));
        quotient *= Rational(1) / divisor.constant_part();
      }
      return quotient;
    }
    if (head.kind == SExpr::Kind::Symbol && !sorts_.count(head.text))
      throw UndeclaredSymbol("undeclared function '" + head.text + "'" + where(e));
    throw SyntaxError("expected a Real term" + where(e));
  }

  Expr comparison(Comparison op, const LinTerm& lhs, const LinTerm& rhs) {
    NormalizedLiteral n = normalize_comparison(op, lhs, rhs);
    if (n.is_constant()) return n.constant_value() ? Expr::truth() : Expr::falsity();
    return Expr::literal({atoms_.intern(n.atom), n.positive});
  }

  Expr chain(const SExpr& e, Comparison op) {
    if (e.items.size() < 3) throw SyntaxError("'" + e.items[0].text + "' needs two or more arguments" + where(e));
    std::vector<LinTerm> terms;
    for (std::size_t i = 1; i < e.items.size(); ++i) terms.push_back(term(e.items[i]));
    std::vector<Expr> parts;
    for (std::size_t i = 0; i + 1 < terms.size(); ++i) parts.push_back(comparison(op, terms[i], terms[i + 1]));
    return parts.size() == 1 ? std::move(parts.front()) : Expr::conjunction(std::move(parts));
  }

  static Expr iff(Expr a, Expr b) {
    Expr fwd = Expr::implication(a, b);
    Expr bwd = Expr::implication(std::move(b), std::move(a));
    return Expr::conjunction({std::move(fwd), std::move(bwd)});
  }

  Expr equality(const SExpr& e, bool distinct) {
    if (e.items.size() < 3) throw SyntaxError("'" + e.items[0].text + "' needs two or more arguments" + where(e));
    Sort s = sort_of(e.items[1]);
    for (std::size_t i = 2; i < e.items.size(); ++i)
      if (sort_of(e.items[i]) != s) throw SyntaxError("mixed sorts in '" + e.items[0].text + "'" + where(e));
    if (s == Sort::Real) {
      if (!distinct) return chain(e, Comparison::Eq);
      std::vector<LinTerm> terms;
      for (std::size_t i = 1; i < e.items.size(); ++i) terms.push_back(term(e.items[i]));
      std::vector<Expr> parts;
      for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j) parts.push_back(comparison(Comparison::Ne, terms[i], terms[j]));
      return parts.size() == 1 ? std::move(parts.front()) : Expr::conjunction(std::move(parts));
    }
    std::vector<Expr> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(formula(e.items[i]));
    std::vector<Expr> parts;
    if (distinct) {
      for (std::size_t i = 0; i < args.size(); ++i)
        for (std::size_t j = i + 1; j < args.size(); ++j) parts.push_back(Expr::negation(iff(args[i], args[j])));
    } else {
      for (std::size_t i = 0; i + 1 < args.size(); ++i) parts.push_back(iff(args[i], args[i + 1]));
    }
    return parts.size() == 1 ? std::move(parts.front()) : Expr::conjunction(std::move(parts));
  }

  Expr formula(const SExpr& e) {
    if (e.kind == SExpr::Kind::Symbol) {
      if (e.text == "true") return Expr::truth();
      if (e.text == "false") return Expr::falsity();
      if (symbol_sort(e) != Sort::Bool) throw SyntaxError("expected a Bool term, got '" + e.text + "'" + where(e));
      return Expr::literal({atoms_.intern(Atom::prop(e.text)), true});
    }
    if (e.kind == SExpr::Kind::Numeral) throw SyntaxError("numeral used as a formula" + where(e));
    if (!e.is_list() || e.items.empty()) throw SyntaxError("malformed formula" + where(e));
    const SExpr& head = e.items[0];
    if (head.is_list()) throw SyntaxError("higher-order application" + where(e));
    reject_unsupported_head(head, e);
    std::size_t argc = e.items.size() - 1;
    auto args = [&] {
      std::vector<Expr> out;
      for (std::size_t i = 1; i < e.items.size(); ++i) out.push_back(formula(e.items[i]));
      return out;
    };
    if (head.is_symbol("not")) {
      if (argc != 1) throw SyntaxError("'not' takes one argument" + where(e));
      return Expr::negation(formula(e.items[1]));
    }
    if (head.is_symbol("and")) return argc == 0 ? Expr::truth() : Expr::conjunction(args());
    if (head.is_symbol("or")) return argc == 0 ? Expr::falsity() : Expr::disjunction(args());
    if (head.is_symbol("=>")) {
      if (argc < 2) throw SyntaxError("'=>' needs two or more arguments" + where(e));
      std::vector<Expr> parts = args();
      Expr acc = std::move(parts.back());
      for (std::size_t i = parts.size() - 1; i-- > 0;) acc = Expr::implication(std::move(parts[i]), std::move(acc));
      return acc;
    }
    if (head.is_symbol("=")) return equality(e, false);
    if (head.is_symbol("distinct")) return equality(e, true);
    if (head.is_symbol("<=")) return chain(e, Comparison::Le);
    if (head.is_symbol("<")) return chain(e, Comparison::Lt);
    if (head.is_symbol(">=")) return chain(e, Comparison::Ge);
    if (head.is_symbol(">")) return chain(e, Comparison::Gt);
    if (head.is_symbol("!")) {
      if (argc < 1) throw SyntaxError("'!' needs a term" + where(e));
      return formula(e.items[1]);
    }
    if (head.is_symbol("+") || head.is_symbol("-") || head.is_symbol("*") || head.is_symbol("/")) {
      term(e);  // surfaces nonlinearity before the sort error
      throw SyntaxError("arithmetic term used as a formula" + where(e));
    }
    if (!sorts_.count(head.text)) throw UndeclaredSymbol("undeclared function '" + head.text + "'" + where(e));
    throw SyntaxError("'" + head.text + "' is not a function" + where(e));
  }

  std::unordered_map<std::string, Sort> sorts_;
  AtomTable atoms_;
};

}  // namespace

Formula parse_smt2(std::string_view text) {
  Reader reader(text);
  return Interpreter{}.run(reader.read_all());
}

}  // namespace smtkc
