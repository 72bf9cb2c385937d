#pragma once

#include <compare>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "combi/error.hpp"

namespace combi {

/// A relational language: named relation symbols with fixed arities.
/// Equality is a logical builtin and never appears here. Order of
/// declaration is preserved (it fixes file output and enumeration order).
class Signature {
public:
  struct Relation {
    std::string name;
    int arity;
    bool operator==(const Relation&) const = default;
  };

  Signature() = default;

  /// Declares a relation. Throws ArityError for arity < 1 and
  /// DuplicateRelation when the name is already taken.
  void add(const std::string& name, int arity);

  bool has(const std::string& name) const;
  /// Arity of a declared symbol; throws UnknownSymbol otherwise.
  int arity(const std::string& name) const;

  const std::vector<Relation>& relations() const { return rels_; }
  bool empty() const { return rels_.empty(); }

  /// Same name/arity pairs, declaration order ignored.
  bool operator==(const Signature& other) const;

  /// Union of two languages; a name with conflicting arities throws
  /// SignatureMismatch. Symbols of `a` keep their order, new ones follow.
  static Signature merged(const Signature& a, const Signature& b);

private:
  std::vector<Relation> rels_;
};

/// Variables form the closed namespace x1, x2, ...; only the index is kept.
struct Variable {
  int index = 0;
  auto operator<=>(const Variable&) const = default;
  std::string name() const { return "x" + std::to_string(index); }
};

/// Immutable first-order formula over a relational signature.
/// Nodes are shared; copying a Formula is cheap.
class Formula {
public:
  enum class Kind { Atom, Eq, Not, Bin, Quant };
  enum class BinOp { And, Or, Implies };
  enum class Quantifier { Exists, Forall };

  static Formula atom(std::string rel, std::vector<Variable> args);
  static Formula eq(Variable lhs, Variable rhs);
  static Formula negate(Formula sub);
  static Formula binary(BinOp op, Formula lhs, Formula rhs);
  static Formula conj(Formula lhs, Formula rhs) { return binary(BinOp::And, std::move(lhs), std::move(rhs)); }
  static Formula disj(Formula lhs, Formula rhs) { return binary(BinOp::Or, std::move(lhs), std::move(rhs)); }
  static Formula impl(Formula lhs, Formula rhs) { return binary(BinOp::Implies, std::move(lhs), std::move(rhs)); }
  static Formula quantify(Quantifier q, Variable var, Formula body);
  static Formula exists(Variable var, Formula body) { return quantify(Quantifier::Exists, var, std::move(body)); }
  static Formula forall(Variable var, Formula body) { return quantify(Quantifier::Forall, var, std::move(body)); }

  Kind kind() const;

  // Atom
  const std::string& rel() const;
  const std::vector<Variable>& args() const;
  // Eq
  Variable eq_lhs() const;
  Variable eq_rhs() const;
  // Not
  const Formula& sub() const;
  // Bin
  BinOp bin_op() const;
  const Formula& bin_lhs() const;
  const Formula& bin_rhs() const;
  // Quant
  Quantifier quant() const;
  Variable quant_var() const;
  const Formula& body() const;

  /// Structural equality.
  bool operator==(const Formula& other) const;

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

/// Free variables in first-occurrence order (left to right).
std::vector<Variable> free_variables(const Formula& f);

/// Quantifier nesting depth.
int quantifier_rank(const Formula& f);

/// Number of AST nodes.
int node_count(const Formula& f);

/// Every variable index occurring in f, free or bound (binders included).
std::set<int> variable_indices(const Formula& f);

/// Replaces free occurrences of `from` by `to`. `to` must not occur in f
/// at all, otherwise capture is possible; callers pick `to` fresh.
Formula rename_free(const Formula& f, Variable from, Variable to);

/// Folds a nonempty list into a left-associated chain of `op`.
Formula fold_binary(Formula::BinOp op, const std::vector<Formula>& parts);

/// Canonical printer. render followed by parse_formula is the identity
/// on ASTs; parentheses are emitted only where precedence requires them.
std::string render(const Formula& f);

/// Parses the ASCII grammar: quantifiers `A xk .` / `E xk .`,
/// connectives `!` `&` `|` `->`, atoms `Name(x1,...,xn)`, equality
/// `xi = xj`, parentheses. Precedence ! > & > | > ->; `->` associates
/// right, `&`/`|` left; a quantifier body extends maximally right.
/// Throws SyntaxError, UnknownSymbol, ArityMismatch.
Formula parse_formula(const std::string& text, const Signature& sig);

/// Parses while inferring the signature from atom usage (first use of a
/// symbol fixes its arity; a later mismatch is ArityMismatch).
std::pair<Formula, Signature> parse_formula_lenient(const std::string& text);

/// Parses signature declaration lines of the form `rel Name/arity`
/// (blank lines and `#` comments allowed).
Signature parse_signature(const std::string& text);

}  // namespace combi
