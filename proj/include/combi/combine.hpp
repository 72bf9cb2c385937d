#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "combi/model.hpp"

namespace combi {

/// Tagged family of finite structures over a merged language. Members may
/// be declared over different sub-languages; on construction every member
/// is lifted to the union signature, interpreting missing symbols empty.
class FamilySpec {
public:
  struct Member {
    std::string tag;
    FiniteStructure structure;
  };

  FamilySpec() = default;
  /// Throws DuplicateTag and SignatureMismatch (conflicting arities).
  explicit FamilySpec(std::vector<Member> members);

  const std::vector<Member>& members() const { return members_; }
  const Signature& shared_sig() const { return shared_sig_; }
  bool empty() const { return members_.empty(); }

  /// Member lookup by tag; throws UnknownTag.
  const FiniteStructure& member(const std::string& tag) const;
  bool has_tag(const std::string& tag) const;

private:
  std::vector<Member> members_;  // lifted to shared_sig_
  Signature shared_sig_;
};

enum class CombineMode { P, E };

/// Result of combining a family: the base structure plus bookkeeping that
/// remembers where each element came from. Elements adopted from a file
/// may lack an origin (they witness the residual).
class CombinedStructure {
public:
  const FiniteStructure& base() const { return base_; }
  CombineMode mode() const { return mode_; }
  const std::string& e_symbol() const { return e_symbol_; }
  const std::vector<std::string>& tags() const { return tags_; }
  const std::vector<std::optional<std::pair<std::string, int>>>& origin() const { return origin_; }

  /// Elements whose origin tag is `tag`, ascending.
  std::vector<int> block(const std::string& tag) const;

private:
  friend CombinedStructure p_combine(const FamilySpec&);
  friend CombinedStructure e_combine(const FamilySpec&, const std::string&);
  friend CombinedStructure adopt_p_combination(const FiniteStructure&, const std::vector<std::string>&);

  FiniteStructure base_;
  CombineMode mode_ = CombineMode::P;
  std::string e_symbol_;
  std::vector<std::string> tags_;
  std::vector<std::optional<std::pair<std::string, int>>> origin_;
};

/// Disjoint union of the members, each block carrying a fresh unary
/// predicate P_<tag>. Throws EmptyFamily, EmptyMember and SymbolClash
/// (a member language already uses some P_<tag>).
CombinedStructure p_combine(const FamilySpec& fam);

/// Disjoint union of the members whose blocks become the classes of one
/// fresh binary equivalence relation (named `e_symbol`). Same errors as
/// p_combine, with the clash check against `e_symbol`.
CombinedStructure e_combine(const FamilySpec& fam, const std::string& e_symbol = "E");

/// Substructure induced on the class of element `e`, reduced to the shared
/// language (the equivalence symbol removed) and relabeled to 0..m-1 in
/// origin order. Throws NotAnECombination, ElementOutOfRange.
FiniteStructure restrict_to_class(const CombinedStructure& c, int e);

/// Substructure on the named P-block, reduced to the shared language.
/// Throws NotAPCombination, UnknownTag.
FiniteStructure restrict_to_predicate(const CombinedStructure& c, const std::string& tag);

/// Reinterprets a plain structure as a P-combination: the listed P_<tag>
/// predicates must be pairwise disjoint unary symbols; uncovered elements
/// have no origin. Throws UnknownSymbol, InvalidCombination.
CombinedStructure adopt_p_combination(const FiniteStructure& s, const std::vector<std::string>& tags);

/// Elements satisfying no P_<tag>: the realizations of the residual type.
/// Empty for freshly built combinations.
std::vector<int> p_infinity_residual(const CombinedStructure& c);

/// Relativization of `f` to one class of the equivalence `e_symbol` that
/// meets `sigma` (a formula with exactly one free variable). Atoms and
/// negations are guarded by equivalence links over the ambient variable
/// tuple plus a witness that the class meets sigma; quantifiers guard
/// their bound variable the same way. The ambient tuple starts as the
/// free variables of `f` and grows through quantifiers, so subformulas
/// without free variables stay anchored to the class under evaluation.
/// Free variables of the result equal those of `f`. The witness variable
/// and any renamed shadowing binders take the smallest indices absent
/// from `f` and `sigma`. Throws ArityError (e_symbol not binary in sig)
/// and SigmaArity.
Formula relativize(const Formula& f, const Signature& sig, const std::string& e_symbol, const Formula& sigma);

/// A family file: one `family <name> members <tag...>` header plus a
/// structure block (model format) per tag.
struct NamedFamily {
  std::string name;
  FamilySpec family;
};

NamedFamily read_family(std::istream& in);
void write_family(std::ostream& out, const NamedFamily& fam);

}  // namespace combi
