// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cstdio>
#include <vector>

#include "combi/random_gen.hpp"
#include "combi/selftest.hpp"
#include "combi/separate.hpp"
#include "combi/spectra.hpp"
#include "oracles.hpp"

using namespace combi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool ok;
  std::string detail;
};

Signature qr_sig() {
  Signature sig;
  sig.add("Q", 1);
  sig.add("R", 2);
  return sig;
}

// 1. Relativized evaluation on the combined structure agrees with plain
// evaluation on the class substructure, whenever the class meets sigma,
// over seeded families and formulas.
Outcome criterion1() {
  auto start = Clock::now();
  Rng rng(1001);
  Signature sig = qr_sig();
  int pairs = 0, assignments = 0, mismatches = 0;
  for (int round = 0; round < 520; ++round) {
    FamilySpec fam = random_family(rng, sig, 3, 3);
    CombinedStructure c = e_combine(fam);
    Formula sigma =
        round % 2 == 0 ? Formula::eq(Variable{1}, Variable{1}) : Formula::atom("Q", {Variable{1}});
    Formula f = random_formula(rng, sig, 3, 1 + round % 3, true);
    Formula rel = relativize(f, c.base().sig(), "E", sigma);
    auto free = free_variables(f);
    Variable sigma_var = free_variables(sigma).front();
    ++pairs;
    for (const auto& member : fam.members()) {
      auto block = c.block(member.tag);
      FiniteStructure sub = restrict_to_class(c, block.front());
      bool meets = false;
      for (int e : block)
        if (evaluate(c.base(), sigma, {{sigma_var, e}})) meets = true;
      if (!meets) continue;
      std::vector<int> pick(free.size(), 0);
      while (true) {
        Assignment global, local;
        for (size_t i = 0; i < free.size(); ++i) {
          global[free[i]] = block[pick[i]];
          local[free[i]] = pick[i];
        }
        if (evaluate(c.base(), rel, global) != evaluate(sub, f, local)) ++mismatches;
        ++assignments;
        int p = static_cast<int>(free.size()) - 1;
        for (; p >= 0; --p) {
          if (++pick[p] < static_cast<int>(block.size())) break;
          pick[p] = 0;
        }
        if (p < 0) break;
      }
    }
  }
  double elapsed = seconds_since(start);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d pairs, %d one-class assignments, %d mismatches, %.1fs", pairs,
                assignments, mismatches, elapsed);
  return {pairs >= 500 && mismatches == 0 && elapsed < 60.0, buf};
}

// 2. The atom clause prints token-for-token in the canonical grammar.
Outcome criterion2() {
  Signature sig;
  sig.add("R", 2);
  sig.add("E", 2);
  Formula f = parse_formula("R(x1,x2)", sig);
  Formula rel = relativize(f, sig, "E", Formula::eq(Variable{1}, Variable{1}));
  std::string expected =
      "R(x1,x2) & E(x1,x1) & E(x1,x2) & E(x2,x1) & E(x2,x2) & (E x3 . E(x1,x3) & x3 = x3)";
  std::string got = render(rel);
  bool round_trips = parse_formula(got, sig) == rel;
  return {got == expected && round_trips, got == expected ? "exact match" : "got: " + got};
}

// 3. Separation certificates: check, flip, conjoin, and rank minimality
// against exhaustive sentence enumeration on the small pairs.
Outcome criterion3() {
  std::vector<Signature> sig_pool(4);
  sig_pool[1].add("P", 1);
  sig_pool[2].add("R", 2);
  sig_pool[3].add("P", 1);
  sig_pool[3].add("R", 2);

  Rng rng(3003);
  int certified = 0, conjoined = 0, minimality_checked = 0, failures = 0;
  std::map<int, std::vector<Formula>> enum_cache;  // sig index * 10 + rank
  while (certified < 200 || conjoined < 100) {
    int which = rng.next_int(4);
    const Signature& sig = sig_pool[which];
    FiniteStructure a = random_structure(rng, sig, 1 + rng.next_int(5));
    FiniteStructure b = random_structure(rng, sig, 1 + rng.next_int(5));
    if (are_isomorphic(a, b)) continue;

    SeparationCertificate cert = separating_sentence(a, b, "i", "j");
    if (!check_certificate(cert, a, b)) ++failures;
    SeparationCertificate flipped = flip(cert);
    if (!check_certificate(flipped, b, a)) ++failures;
    if (flipped.rank != cert.rank) ++failures;
    ++certified;

    if (conjoined < 100) {
      FiniteStructure c = random_structure(rng, sig, 1 + rng.next_int(5));
      if (!are_isomorphic(a, c)) {
        SeparationCertificate second = separating_sentence(a, c, "i", "k");
        Formula both = conjoin(cert, second);
        if (!(evaluate(a, both) && !evaluate(b, both) && !evaluate(c, both))) ++failures;
        ++conjoined;
      }
    }

    if (a.size() <= 3 && b.size() <= 3 && minimality_checked < 60) {
      int r = least_separating_rank(a, b);
      if (!ef_equivalent(a, b, r - 1)) ++failures;
      if (cert.kind == SeparatorKind::GameExtracted && cert.rank != r) ++failures;
      int enum_rank = std::min(r - 1, 2);
      if (enum_rank >= 1) {
        int key = which * 10 + enum_rank;
        if (!enum_cache.count(key))
          enum_cache[key] = enumerate_sentences(sig, enum_rank, which >= 2 ? 6 : 7);
        for (const Formula& s : enum_cache[key])
          if (evaluate(a, s) != evaluate(b, s)) ++failures;
        ++minimality_checked;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d pairs, %d triples, %d minimality checks, %d failures", certified,
                conjoined, minimality_checked, failures);
  return {certified >= 200 && conjoined >= 100 && minimality_checked > 0 && failures == 0, buf};
}

// 4. The game on bare sets matches the analytic rule.
Outcome criterion4() {
  Signature sig;
  int bad = 0;
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b)
      for (int r = 0; r <= 6; ++r)
        if (ef_equivalent(FiniteStructure(sig, a), FiniteStructure(sig, b), r) !=
            oracles::ef_bare_rule(a, b, r))
          ++bad;
  bool anchors = ef_equivalent(FiniteStructure(sig, 3), FiniteStructure(sig, 2), 2) &&
                 !ef_equivalent(FiniteStructure(sig, 3), FiniteStructure(sig, 2), 3);
  char buf[96];
  std::snprintf(buf, sizeof buf, "343 points, %d disagreements", bad);
  return {bad == 0 && anchors, buf};
}

// 5. Every closed form equals its enumeration oracle, exactly.
Outcome criterion5() {
  auto start = Clock::now();
  int bad = 0;
  for (int j = 0; j <= 4; ++j)
    for (int lambda = 1; lambda <= 5; ++lambda)
      if (!(i_infinity_singletons(ExtCardinal::fin(j), ExtCardinal::fin(lambda)) ==
            ExtCardinal::fin(oracle_i_infinity(j, lambda))))
        ++bad;
  if (!(i_infinity_singletons(ExtCardinal::fin(2), ExtCardinal::fin(1)) == ExtCardinal::fin(3))) ++bad;

  for (int m = 1; m <= 5; ++m) {
    if (esp_disjoint_orders(m, false) != oracle_component_states(m, 3, true, true)) ++bad;
    if (esp_disjoint_orders(m, true) != oracle_component_states(m, 3, false, true)) ++bad;
  }
  if (esp_disjoint_orders(1, false) != 2) ++bad;
  if (esp_disjoint_orders(2, true) != 5) ++bad;

  for (int n = 1; n <= 6; ++n)
    for (int m = 0; m <= 6; ++m)
      if (comb_rep(n, m) != oracles::multiset_count(n, m)) ++bad;
  if (comb_rep(2, 2) != 3) ++bad;

  double elapsed = seconds_since(start);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d disagreements, %.1fs", bad, elapsed);
  return {bad == 0 && elapsed < 30.0, buf};
}

// 6. Product law for countable-model counts.
Outcome criterion6() {
  bool ok = true;
  for (int k = 1; k <= 6; ++k)
    ok = ok && count_models_product(std::vector<ExtCardinal>(k, ExtCardinal::fin(1))) == ExtCardinal::fin(1);
  std::uint64_t pairs = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ++pairs;
  ok = ok && count_models_product({ExtCardinal::fin(3), ExtCardinal::fin(3)}) == ExtCardinal::fin(pairs);
  Rng rng(6006);
  for (int i = 0; i < 50; ++i) {
    std::vector<ExtCardinal> factors;
    int len = 1 + rng.next_int(4);
    for (int k = 0; k < len; ++k) factors.push_back(ExtCardinal::fin(1 + rng.next_int(4)));
    factors.insert(factors.begin() + rng.next_int(len + 1), ExtCardinal::omega());
    ok = ok && !(count_models_product(factors) < ExtCardinal::omega());
  }
  return {ok, "identity, pair-enumeration and absorption laws"};
}

// 7. Common-limit relations accept the known points and reject violations.
Outcome criterion7() {
  bool ok = comlim_validate(ExtCardinal::fin(1), ExtCardinal::fin(1), ExtCardinal::fin(1), ExtCardinal::fin(1));
  for (const auto& a : {ExtCardinal::fin(0), ExtCardinal::fin(2), ExtCardinal::fin(7), ExtCardinal::omega(),
                        ExtCardinal::continuum()})
    ok = ok && comlim_validate(a, a, a, a);
  ok = ok && !comlim_validate(ExtCardinal::fin(2), ExtCardinal::fin(3), ExtCardinal::fin(3), ExtCardinal::fin(3));

  Rng rng(7007);
  int rejected = 0, attempts = 0;
  while (rejected < 50 && attempts < 10000) {
    ++attempts;
    std::uint64_t a = rng.next(7), b = rng.next(7), c = rng.next(7), l = rng.next(7);
    bool min_violated = l > std::min(a, b);
    bool sum_violated = a + b != c + l;
    if (!min_violated && !sum_violated) continue;
    if (comlim_validate(ExtCardinal::fin(a), ExtCardinal::fin(b), ExtCardinal::fin(c), ExtCardinal::fin(l))) {
      ok = false;
      break;
    }
    ++rejected;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d violations rejected", rejected);
  return {ok && rejected >= 50, buf};
}

// 8. 1-orbits add up over disjoint tagged unions of non-isomorphic members.
Outcome criterion8() {
  Rng rng(8008);
  Signature sig;
  sig.add("Q", 1);
  int done = 0, bad = 0;
  while (done < 100) {
    FamilySpec fam = random_family(rng, sig, 3, 4);
    bool distinct = true;
    for (size_t i = 0; i < fam.members().size() && distinct; ++i)
      for (size_t j = i + 1; j < fam.members().size() && distinct; ++j)
        if (are_isomorphic(fam.members()[i].structure, fam.members()[j].structure)) distinct = false;
    if (!distinct) continue;
    CombinedStructure c = p_combine(fam);
    long long sum = 0;
    for (const auto& m : fam.members()) sum += orbit_count(m.structure, 1);
    if (orbit_count(c.base(), 1) != sum) ++bad;
    ++done;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d combinations, %d mismatches", done, bad);
  return {done >= 100 && bad == 0, buf};
}

// 9. Every emitted spectrum value lies in the allowed range.
Outcome criterion9() {
  std::vector<ExtCardinal> emitted;
  for (int j = 0; j <= 4; ++j)
    for (int lambda = 1; lambda <= 4; ++lambda)
      emitted.push_back(i_infinity_singletons(ExtCardinal::fin(j), ExtCardinal::fin(lambda)));
  emitted.push_back(i_infinity_singletons(ExtCardinal::omega(), ExtCardinal::omega()));
  emitted.push_back(i_infinity_singletons(ExtCardinal::omega(), ExtCardinal::fin(3)));
  for (int m = 1; m <= 5; ++m) {
    emitted.push_back(ExtCardinal::fin(esp_disjoint_orders(m, false)));
    emitted.push_back(ExtCardinal::fin(esp_disjoint_orders(m, true)));
  }
  for (int n = 1; n <= 5; ++n)
    for (int m = 0; m <= 5; ++m) emitted.push_back(ExtCardinal::fin(comb_rep(n, m)));
  emitted.push_back(ExtCardinal::fin(esp_tn(0)));
  for (int n = 2; n <= 6; ++n) emitted.push_back(ExtCardinal::fin(esp_tn(n)));
  emitted.push_back(ExtCardinal::fin(esp_t0_halfopen_variant));
  emitted.push_back(count_models_product({ExtCardinal::fin(2), ExtCardinal::omega()}));
  emitted.push_back(count_models_product({ExtCardinal::continuum(), ExtCardinal::fin(3)}));
  emitted.push_back(spectrum_report("i-infinity", {{"j", "2"}, {"lambda", "1"}}).closed_form);

  bool ok = true;
  for (const auto& v : emitted) ok = ok && esp_range_check(v);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu values in range", emitted.size());
  return {ok, buf};
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    Outcome (*run)();
  };
  const Entry entries[] = {
      {"relativization soundness sweep", criterion1},
      {"atom-clause golden print", criterion2},
      {"separation certificate properties", criterion3},
      {"game equivalence on bare sets", criterion4},
      {"closed forms equal oracles", criterion5},
      {"model-count product laws", criterion6},
      {"common-limit relations", criterion7},
      {"orbit additivity", criterion8},
      {"spectrum range law", criterion9},
  };
  int failures = 0;
  for (size_t i = 0; i < sizeof entries / sizeof entries[0]; ++i) {
    Outcome out = entries[i].run();
    std::printf("criterion %zu: %s - %s (%s)\n", i + 1, out.ok ? "PASS" : "FAIL", entries[i].label,
                out.detail.c_str());
    if (!out.ok) ++failures;
  }
  if (failures) std::printf("%d criteria failed\n", failures);
  else std::printf("all 9 criteria passed\n");
  return failures == 0 ? 0 : 1;
}
