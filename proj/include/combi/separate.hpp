#pragma once

#include <string>
#include <vector>

#include "combi/combine.hpp"
#include "combi/model.hpp"

namespace combi {

/// How a separating sentence was obtained.
enum class SeparatorKind { GameExtracted, ScottFallback };

/// A sentence together with the pair of structures it separates: true on
/// the witness_true side, false on the witness_false side.
struct SeparationCertificate {
  Formula sentence;
  std::string witness_true;
  std::string witness_false;
  int rank;  // quantifier_rank(sentence)
  SeparatorKind kind;
};

/// Sentence true in B exactly when B is isomorphic to `a`: asserts
/// size-many pairwise distinct elements realizing a's atomic diagram and
/// nothing else. Rank is size + 1. Throws EmptyUniverse.
Formula scott_sentence(const FiniteStructure& a);

/// Canonical rank-r game sentence for `a`: true in B iff B and `a` agree
/// on all sentences of quantifier rank <= r. Children are emitted in
/// element order with syntactic duplicates collapsed; throws the internal
/// budget error when the tree exceeds `node_budget`.
Formula hintikka_sentence(const FiniteStructure& a, int r, int node_budget);

/// Least r such that some rank-r sentence separates a from b.
/// Pre: not isomorphic.
int least_separating_rank(const FiniteStructure& a, const FiniteStructure& b);

/// Minimal-rank separating certificate for two non-isomorphic structures
/// over one signature. The sentence is the canonical game sentence of
/// `a` at the least separating rank; if that would exceed 10000 AST
/// nodes the Scott sentence of `a` is returned instead (rank a.size()+1,
/// recorded as ScottFallback). Throws NotSeparable for isomorphic inputs.
SeparationCertificate separating_sentence(const FiniteStructure& a, const FiniteStructure& b,
                                          const std::string& tag_true = "A",
                                          const std::string& tag_false = "B");

/// Negated sentence with swapped witnesses; rank is unchanged.
SeparationCertificate flip(const SeparationCertificate& c);

/// Conjunction separating the shared true witness from both false
/// witnesses. Throws WitnessMismatch when the true witnesses differ.
Formula conjoin(const SeparationCertificate& c1, const SeparationCertificate& c2);

/// One certificate per family member not isomorphic to the target, in
/// family order. Throws UnknownTag.
std::vector<SeparationCertificate> e_separating_set(const std::string& target, const FamilySpec& fam);

/// Evaluates the certificate against the two structures it names.
bool check_certificate(const SeparationCertificate& c, const FiniteStructure& true_side,
                       const FiniteStructure& false_side);

}  // namespace combi
