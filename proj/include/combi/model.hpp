#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "combi/logic.hpp"

namespace combi {

/// Finite relational structure with universe {0, ..., size-1}.
/// Every symbol of the signature has an interpretation (possibly empty).
/// Treated as immutable once built; all operations below are pure.
class FiniteStructure {
public:
  FiniteStructure() = default;
  FiniteStructure(Signature sig, int size);

  /// Adds a tuple; length must match the symbol's arity and entries must
  /// lie in the universe.
  void add_tuple(const std::string& rel, const std::vector<int>& tuple);

  bool holds(const std::string& rel, const std::vector<int>& tuple) const;
  const std::set<std::vector<int>>& tuples(const std::string& rel) const;

  const Signature& sig() const { return sig_; }
  int size() const { return size_; }

  bool operator==(const FiniteStructure& other) const;

private:
  Signature sig_;
  int size_ = 0;
  std::map<std::string, std::set<std::vector<int>>> interp_;
};

using Assignment = std::map<Variable, int>;

/// Tarskian satisfaction; quantifiers range over the whole universe.
/// Throws SignatureMismatch for symbols the structure lacks and
/// UnboundVariable for free variables missing from the assignment.
bool evaluate(const FiniteStructure& a, const Formula& f, const Assignment& assignment = {});

/// Witnessing bijection (as image vector) preserving all relations both
/// ways, or nullopt. Backtracking over color-refined candidates; meant
/// for desk-scale sizes.
std::optional<std::vector<int>> are_isomorphic(const FiniteStructure& a, const FiniteStructure& b);

/// Every automorphism of `a`, as image vectors.
std::vector<std::vector<int>> all_automorphisms(const FiniteStructure& a);

/// Number of orbits of Aut(a) acting coordinatewise on universe^n.
/// Throws EmptyUniverse for size 0.
long long orbit_count(const FiniteStructure& a, int n);

/// True iff Duplicator wins the r-round Ehrenfeucht-Fraisse game on
/// (a, b): the two structures agree on all sentences of quantifier
/// rank <= r. Exact game-tree recursion memoized on positions.
bool ef_equivalent(const FiniteStructure& a, const FiniteStructure& b, int r);

/// Every sentence over `sig` with quantifier rank <= rank_bound and AST
/// node count <= size_bound, each exactly once up to the canonical form:
/// a quantifier in a context with v variables in scope always binds
/// x(v+1). Exhaustive oracle; keep the bounds tiny.
std::vector<Formula> enumerate_sentences(const Signature& sig, int rank_bound, int size_bound);

/// A structure block read from a file.
struct NamedStructure {
  std::string name;
  FiniteStructure structure;
};

/// Reads `structure <name> ... end` blocks (see README for the format).
/// Names must be unique within the input. Throws FormatError.
std::vector<NamedStructure> read_structures(std::istream& in);

/// Writes one structure block in the canonical order (signature order,
/// tuples sorted). Empty relations are omitted.
void write_structure(std::ostream& out, const std::string& name, const FiniteStructure& s);

}  // namespace combi
