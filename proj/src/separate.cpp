#include "combi/separate.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace combi {

namespace {

constexpr int kNodeBudget = 10000;

// Atomic facts about the pebbled tuple, in a fixed order: equalities for
// i < j, then every relation in signature order over all argument
// index-tuples (lexicographic), each positively or negated as it holds.
std::vector<Formula> atomic_profile(const FiniteStructure& a, const std::vector<int>& pebbles) {
  int k = static_cast<int>(pebbles.size());
  std::vector<Formula> out;
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) {
      Formula eq = Formula::eq(Variable{i}, Variable{j});
      out.push_back(pebbles[i - 1] == pebbles[j - 1] ? eq : Formula::negate(eq));
    }
  for (const auto& r : a.sig().relations()) {
    std::vector<int> idx(r.arity, 1);
    while (true) {
      std::vector<Variable> args;
      std::vector<int> tuple;
      for (int i : idx) {
        args.push_back(Variable{i});
        tuple.push_back(pebbles[i - 1]);
      }
      Formula at = Formula::atom(r.name, args);
      out.push_back(a.holds(r.name, tuple) ? at : Formula::negate(at));
      int p = r.arity - 1;
      for (; p >= 0; --p) {
        if (++idx[p] <= k) break;
        idx[p] = 1;
      }
      if (p < 0) break;
    }
  }
  return out;
}

struct HintikkaBuilder {
  const FiniteStructure& a;
  long long budget;
  long long calls = 0;

  struct Piece {
    Formula f;
    long long nodes;  // tree node count; subtrees are shared, so track it here
  };

  Piece build(std::vector<int>& pebbles, int r) {
    if (++calls > 2'000'000) fail("BudgetExceeded", "game sentence search too large");
    int k = static_cast<int>(pebbles.size());
    if (r == 0) {
      assert(k >= 1);
      std::vector<Formula> profile = atomic_profile(a, pebbles);
      if (profile.empty())  // one pebble over the empty signature has no facts
        profile.push_back(Formula::eq(Variable{1}, Variable{1}));
      Formula out = fold_binary(Formula::BinOp::And, profile);
      return {out, node_count(out)};
    }
    Variable next{k + 1};
    std::vector<Piece> children;
    std::vector<std::string> seen;  // syntactic dedup, first occurrence kept
    for (int c = 0; c < a.size(); ++c) {
      pebbles.push_back(c);
      Piece child = build(pebbles, r - 1);
      pebbles.pop_back();
      std::string key = render(child.f);
      if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
        seen.push_back(key);
        children.push_back(std::move(child));
      }
    }
    std::vector<Formula> parts;
    long long nodes = 0;
    for (const Piece& child : children) {
      parts.push_back(Formula::exists(next, child.f));
      nodes += child.nodes + 1;
    }
    if (children.empty()) {
      // Empty universe: nothing exists.
      parts.push_back(Formula::forall(next, Formula::negate(Formula::eq(next, next))));
      nodes += 3;
    } else {
      std::vector<Formula> alts;
      for (const Piece& child : children) {
        alts.push_back(child.f);
        nodes += child.nodes;
      }
      parts.push_back(Formula::forall(next, fold_binary(Formula::BinOp::Or, alts)));
      nodes += static_cast<long long>(children.size());  // or-folds plus the forall
    }
    nodes += static_cast<long long>(parts.size()) - 1;  // and-folds
    if (nodes > budget) fail("BudgetExceeded", "game sentence exceeds the node budget");
    return {fold_binary(Formula::BinOp::And, parts), nodes};
  }
};

}  // namespace

Formula hintikka_sentence(const FiniteStructure& a, int r, int node_budget) {
  if (r < 1) fail("ArityError", "game sentences need rank >= 1");
  HintikkaBuilder builder{a, node_budget};
  std::vector<int> pebbles;
  return builder.build(pebbles, r).f;
}

Formula scott_sentence(const FiniteStructure& a) {
  if (a.size() == 0) fail("EmptyUniverse", "no Scott sentence for the empty structure");
  int k = a.size();
  std::vector<int> pebbles(k);
  for (int i = 0; i < k; ++i) pebbles[i] = i;  // xi stands for element i-1
  std::vector<Formula> parts = atomic_profile(a, pebbles);
  Variable extra{k + 1};
  std::vector<Formula> among;
  for (int i = 1; i <= k; ++i) among.push_back(Formula::eq(extra, Variable{i}));
  parts.push_back(Formula::forall(extra, fold_binary(Formula::BinOp::Or, among)));
  Formula body = fold_binary(Formula::BinOp::And, parts);
  for (int i = k; i >= 1; --i) body = Formula::exists(Variable{i}, std::move(body));
  return body;
}

int least_separating_rank(const FiniteStructure& a, const FiniteStructure& b) {
  // Non-isomorphic finite structures are told apart well within
  // max(|A|, |B|) + 1 rounds.
  int bound = std::max(a.size(), b.size()) + 1;
  for (int r = 1; r <= bound; ++r)
    if (!ef_equivalent(a, b, r)) return r;
  fail("NotSeparable", "no separating rank found; structures look elementarily equivalent");
}

SeparationCertificate separating_sentence(const FiniteStructure& a, const FiniteStructure& b,
                                          const std::string& tag_true, const std::string& tag_false) {
  if (!(a.sig() == b.sig())) fail("SignatureMismatch", "structures have different signatures");
  if (are_isomorphic(a, b))
    fail("NotSeparable", "isomorphic finite structures satisfy the same sentences");
  int r = least_separating_rank(a, b);
  try {
    Formula s = hintikka_sentence(a, r, kNodeBudget);
    return {std::move(s), tag_true, tag_false, r, SeparatorKind::GameExtracted};
  } catch (const Error& e) {
    if (e.kind() != "BudgetExceeded") throw;
    Formula s = scott_sentence(a);
    int rank = quantifier_rank(s);
    return {std::move(s), tag_true, tag_false, rank, SeparatorKind::ScottFallback};
  }
}

SeparationCertificate flip(const SeparationCertificate& c) {
  return {Formula::negate(c.sentence), c.witness_false, c.witness_true, c.rank, c.kind};
}

Formula conjoin(const SeparationCertificate& c1, const SeparationCertificate& c2) {
  if (c1.witness_true != c2.witness_true)
    fail("WitnessMismatch", "certificates witness different structures: " + c1.witness_true + " vs " +
                                c2.witness_true);
  return Formula::conj(c1.sentence, c2.sentence);
}

std::vector<SeparationCertificate> e_separating_set(const std::string& target, const FamilySpec& fam) {
  const FiniteStructure& pivot = fam.member(target);  // throws UnknownTag
  std::vector<SeparationCertificate> out;
  for (const auto& m : fam.members()) {
    if (m.tag == target) continue;
    if (are_isomorphic(pivot, m.structure)) continue;
    out.push_back(separating_sentence(pivot, m.structure, target, m.tag));
  }
  return out;
}

bool check_certificate(const SeparationCertificate& c, const FiniteStructure& true_side,
                       const FiniteStructure& false_side) {
  return evaluate(true_side, c.sentence) && !evaluate(false_side, c.sentence) &&
         quantifier_rank(c.sentence) == c.rank;
}

}  // namespace combi
