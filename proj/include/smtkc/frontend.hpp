#pragma once

// QF_LRA front end: linear terms, canonical theory atoms, formula trees and
// the SMT-LIB2 reader.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "smtkc/rational.hpp"

namespace smtkc {

/// Dense, 0-based id of a real-valued variable (declaration order).
using RealVar = int;

/// Point in real space; variables absent from the map read as 0.
using RealPoint = std::map<RealVar, Rational>;

class LinTerm {
 public:
  LinTerm() = default;

  static LinTerm constant(Rational c);
  static LinTerm variable(RealVar v, Rational coeff = 1);

  const std::map<RealVar, Rational>& coeffs() const { return coeffs_; }
  const Rational& constant_part() const { return constant_; }
  Rational coeff(RealVar v) const;
  bool is_constant() const { return coeffs_.empty(); }
  std::vector<RealVar> variables() const;

  Rational evaluate(const RealPoint& point) const;

  LinTerm& operator+=(const LinTerm& other);
  LinTerm& operator-=(const LinTerm& other);
  LinTerm& operator*=(const Rational& k);

  friend LinTerm operator+(LinTerm a, const LinTerm& b) { return a += b; }
  friend LinTerm operator-(LinTerm a, const LinTerm& b) { return a -= b; }
  friend LinTerm operator*(LinTerm a, const Rational& k) { return a *= k; }
  friend LinTerm operator*(const Rational& k, LinTerm a) { return a *= k; }
  friend LinTerm operator-(LinTerm a) { return a *= Rational(-1); }

  friend bool operator==(const LinTerm&, const LinTerm&) = default;

 private:
  void set(RealVar v, Rational c);

  std::map<RealVar, Rational> coeffs_;  // never holds a zero coefficient
  Rational constant_;
};

enum class AtomKind : std::uint8_t {
  Truth,   // reserved constant atom; its negation is falsity
  Prop,    // propositional variable
  LinLeq,  // term <= 0
  LinEq,   // term = 0
};

class Atom {
 public:
  static Atom truth();
  static Atom prop(std::string name);
  /// Canonical `term <= 0` / `term = 0`; `term` must mention a variable.
  static Atom leq(const LinTerm& term);
  static Atom eq(const LinTerm& term);

  AtomKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const LinTerm& term() const { return term_; }
  bool is_linear() const { return kind_ == AtomKind::LinLeq || kind_ == AtomKind::LinEq; }

  /// Structural identity string over variable ids (not names).
  std::string key() const;

  friend bool operator==(const Atom&, const Atom&) = default;

 private:
  AtomKind kind_ = AtomKind::Truth;
  std::string name_;
  LinTerm term_;
};

/// Scale to coprime integer coefficients (constant included) by a positive
/// factor. LinEq additionally makes the first nonzero coefficient positive.
LinTerm canonical_leq_term(const LinTerm& t);
LinTerm canonical_eq_term(const LinTerm& t);

/// A literal over a Boolean variable. Atom ids and Boolean variables share one
/// id space: atom id i is Boolean variable i.
struct Literal {
  int var = 0;
  bool positive = true;

  Literal operator~() const { return {var, !positive}; }
  int dimacs() const { return positive ? var : -var; }
  static Literal from_dimacs(int d) { return {d < 0 ? -d : d, d > 0}; }

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

enum class Comparison : std::uint8_t { Lt, Le, Gt, Ge, Eq, Ne };

struct NormalizedLiteral {
  Atom atom;
  bool positive = true;

  bool is_constant() const { return atom.kind() == AtomKind::Truth; }
  /// Only meaningful when is_constant().
  bool constant_value() const { return positive; }
};

NormalizedLiteral normalize_comparison(Comparison op, const LinTerm& lhs, const LinTerm& rhs);

bool holds(Comparison op, const LinTerm& lhs, const LinTerm& rhs, const RealPoint& point);
/// Truth of a (possibly negated) linear or constant atom at a point.
bool holds(const Atom& atom, bool positive, const RealPoint& point);

/// Atom table with dense ids 1..n plus the real-variable name table.
class AtomTable {
 public:
  /// Returns the id of `atom`, adding it if new. Truth atoms are rejected.
  int intern(const Atom& atom);
  std::optional<int> find(const Atom& atom) const;
  const Atom& atom(int id) const { return atoms_.at(static_cast<std::size_t>(id - 1)); }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

  RealVar declare_real(const std::string& name);
  std::optional<RealVar> find_real(const std::string& name) const;
  const std::vector<std::string>& real_names() const { return real_names_; }

  /// `bool <name>` or `leq|eq <c>*<var> ... <constant>` with integer coefficients.
  std::string serialize(const Atom& atom) const;
  std::string serialize(int id) const { return serialize(atom(id)); }
  /// Inverse of serialize; declares unseen real variables.
  Atom parse_atom(std::string_view text);

 private:
  std::vector<Atom> atoms_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> real_names_;
  std::unordered_map<std::string, RealVar> real_index_;
};

struct Expr {
  enum class Kind : std::uint8_t { True, False, Lit, Not, And, Or, Implies };

  Kind kind = Kind::True;
  Literal lit;
  std::vector<Expr> kids;

  static Expr truth() { return {}; }
  static Expr falsity() { return {Kind::False, {}, {}}; }
  static Expr literal(Literal l) { return {Kind::Lit, l, {}}; }
  static Expr negation(Expr e);
  static Expr conjunction(std::vector<Expr> kids);
  static Expr disjunction(std::vector<Expr> kids);
  static Expr implication(Expr lhs, Expr rhs);

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Evaluate under a total assignment; `values[i]` is the value of atom id i
/// (index 0 unused).
bool evaluate(const Expr& e, const std::vector<bool>& values);

struct Formula {
  Expr root;
  AtomTable atoms;
};

/// Atoms in first-occurrence order of a left-to-right walk; element i has id i+1.
std::vector<Atom> atoms_of(const Formula& f);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};
class UnsupportedFeature : public ParseError {
 public:
  using ParseError::ParseError;
};
class UndeclaredSymbol : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Reads the QF_LRA subset: set-logic, declare-const, nullary declare-fun over
/// Real/Bool, assert; and/or/not/=>, Boolean and Real (dis)equalities,
/// chained comparisons, + - and scaling by rational constants.
Formula parse_smt2(std::string_view text);

}  // namespace smtkc
