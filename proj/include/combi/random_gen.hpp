#pragma once

#include <cstdint>
#include <random>

#include "combi/combine.hpp"

namespace combi {

/// Deterministic RNG wrapper. Sampling avoids std::uniform_int_distribution
/// so the same seed yields the same stream on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform-ish value in [0, bound).
  std::uint64_t next(std::uint64_t bound) { return bound == 0 ? 0 : eng_() % bound; }
  int next_int(int bound) { return static_cast<int>(next(static_cast<std::uint64_t>(bound))); }
  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return next(den) < num; }

private:
  std::mt19937_64 eng_;
};

/// Random structure: every possible tuple of each relation is included
/// with probability 1/2 (unary) or 1/2^arity otherwise.
FiniteStructure random_structure(Rng& rng, const Signature& sig, int size);

/// Random formula of AST height <= depth whose free variables are drawn
/// from x1..free_vars; binders may reuse indices up to free_vars + 2, so
/// shadowing occurs. Retries until at least one free variable is left
/// when require_free is set.
Formula random_formula(Rng& rng, const Signature& sig, int depth, int free_vars, bool require_free);

/// Family of 1..max_members random structures of size 1..max_size over
/// one signature, tagged m1, m2, ...
FamilySpec random_family(Rng& rng, const Signature& sig, int max_members, int max_size);

}  // namespace combi
