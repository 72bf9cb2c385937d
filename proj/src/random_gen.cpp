#include "combi/random_gen.hpp"

namespace combi {

FiniteStructure random_structure(Rng& rng, const Signature& sig, int size) {
  FiniteStructure out(sig, size);
  for (const auto& r : sig.relations()) {
    std::vector<int> tuple(r.arity, 0);
    while (true) {
      std::uint64_t den = std::uint64_t{1} << std::min(r.arity, 3);
      if (rng.chance(1, den)) out.add_tuple(r.name, tuple);
      int p = r.arity - 1;
      for (; p >= 0; --p) {
        if (++tuple[p] < size) break;
        tuple[p] = 0;
      }
      if (p < 0) break;
    }
  }
  return out;
}

namespace {

Formula random_formula_rec(Rng& rng, const Signature& sig, int depth, std::vector<Variable>& scope,
                           int binder_pool) {
  int pick;
  if (depth <= 0)
    pick = rng.next_int(2);  // leaf; callers never reach depth 0 without scope
  else if (scope.empty())
    pick = 7;  // nothing to mention yet, bind a variable first
  else
    pick = rng.next_int(8);
  auto leaf = [&]() -> Formula {
    if (!sig.empty() && rng.chance(2, 3)) {
      const auto& r = sig.relations()[rng.next_int(static_cast<int>(sig.relations().size()))];
      std::vector<Variable> args;
      for (int i = 0; i < r.arity; ++i) args.push_back(scope[rng.next_int(static_cast<int>(scope.size()))]);
      return Formula::atom(r.name, std::move(args));
    }
    Variable a = scope[rng.next_int(static_cast<int>(scope.size()))];
    Variable b = scope[rng.next_int(static_cast<int>(scope.size()))];
    return Formula::eq(a, b);
  };
  switch (pick) {
    case 0:
    case 1: return leaf();
    case 2: return Formula::negate(random_formula_rec(rng, sig, depth - 1, scope, binder_pool));
    case 3:
    case 4:
    case 5: {
      auto op = pick == 3 ? Formula::BinOp::And : pick == 4 ? Formula::BinOp::Or : Formula::BinOp::Implies;
      Formula lhs = random_formula_rec(rng, sig, depth - 1, scope, binder_pool);
      Formula rhs = random_formula_rec(rng, sig, depth - 1, scope, binder_pool);
      return Formula::binary(op, std::move(lhs), std::move(rhs));
    }
    default: {
      Variable v{1 + rng.next_int(binder_pool)};
      scope.push_back(v);
      Formula body = random_formula_rec(rng, sig, depth - 1, scope, binder_pool);
      scope.pop_back();
      return rng.chance(1, 2) ? Formula::exists(v, std::move(body)) : Formula::forall(v, std::move(body));
    }
  }
}

}  // namespace

Formula random_formula(Rng& rng, const Signature& sig, int depth, int free_vars, bool require_free) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Variable> scope;
    for (int i = 1; i <= free_vars; ++i) scope.push_back(Variable{i});
    Formula f = random_formula_rec(rng, sig, depth, scope, free_vars + 2);
    if (!require_free || !free_variables(f).empty()) return f;
  }
  fail("BoundExceeded", "could not draw a formula with free variables");
}

FamilySpec random_family(Rng& rng, const Signature& sig, int max_members, int max_size) {
  int members = 1 + rng.next_int(max_members);
  std::vector<FamilySpec::Member> out;
  for (int m = 1; m <= members; ++m) {
    int size = 1 + rng.next_int(max_size);
    out.push_back({"m" + std::to_string(m), random_structure(rng, sig, size)});
  }
  return FamilySpec(std::move(out));
}

}  // namespace combi
