#include "combi/selftest.hpp"

#include <ostream>
#include <sstream>

#include "combi/random_gen.hpp"
#include "combi/separate.hpp"
#include "combi/spectra.hpp"

namespace combi {

namespace {

struct Table {
  std::ostream& out;
  int failures = 0;

  void row(const std::string& name, bool ok) {
    out << (ok ? "PASS  " : "FAIL  ") << name << "\n";
    if (!ok) ++failures;
  }
};

void closed_forms(Table& t) {
  for (int j = 0; j <= 4; ++j)
    for (int lambda = 1; lambda <= 5; ++lambda) {
      ExtCardinal closed = i_infinity_singletons(ExtCardinal::fin(j), ExtCardinal::fin(lambda));
      std::uint64_t oracle = oracle_i_infinity(j, lambda);
      std::ostringstream name;
      name << "i-infinity j=" << j << " lambda=" << lambda << " closed=" << to_string(closed)
           << " oracle=" << oracle;
      t.row(name.str(), closed == ExtCardinal::fin(oracle));
    }
  for (int m = 1; m <= 5; ++m)
    for (int merged = 0; merged <= 1; ++merged) {
      std::uint64_t closed = esp_disjoint_orders(m, merged != 0);
      std::uint64_t oracle = oracle_component_states(m, 3, merged == 0, true);
      std::ostringstream name;
      name << "esp-orders m=" << m << " merged=" << merged << " closed=" << closed << " oracle=" << oracle;
      t.row(name.str(), closed == oracle);
    }
  for (int n = 1; n <= 5; ++n)
    for (int m = 0; m <= 5; ++m) {
      std::uint64_t closed = comb_rep(n, m);
      std::uint64_t oracle = oracle_component_states(m, n, false, false);
      std::ostringstream name;
      name << "comb-rep n=" << n << " m=" << m << " closed=" << closed << " oracle=" << oracle;
      t.row(name.str(), closed == oracle);
    }
}

void product_laws(Table& t) {
  bool ones = true;
  for (int k = 1; k <= 6; ++k) {
    std::vector<ExtCardinal> fs(k, ExtCardinal::fin(1));
    ones = ones && count_models_product(fs) == ExtCardinal::fin(1);
  }
  t.row("product of ones stays one", ones);
  t.row("pair product 3*3", count_models_product({ExtCardinal::fin(3), ExtCardinal::fin(3)}) ==
                                ExtCardinal::fin(9));
  t.row("omega factor absorbs", count_models_product({ExtCardinal::fin(2), ExtCardinal::omega()}) ==
                                    ExtCardinal::omega());
  t.row("comlim parity point", comlim_validate(ExtCardinal::fin(1), ExtCardinal::fin(1), ExtCardinal::fin(1),
                                               ExtCardinal::fin(1)));
  t.row("comlim identical-structure law",
        comlim_validate(ExtCardinal::fin(3), ExtCardinal::fin(3), ExtCardinal::fin(3), ExtCardinal::fin(3)) &&
            comlim_validate(ExtCardinal::omega(), ExtCardinal::omega(), ExtCardinal::omega(),
                            ExtCardinal::omega()));
  t.row("comlim rejects min-bound violation",
        !comlim_validate(ExtCardinal::fin(2), ExtCardinal::fin(3), ExtCardinal::fin(3), ExtCardinal::fin(3)));
}

void ef_rule(Table& t) {
  Signature sig;
  bool ok = true;
  for (int a = 0; a <= 5 && ok; ++a)
    for (int b = 0; b <= 5 && ok; ++b)
      for (int r = 0; r <= 5 && ok; ++r) {
        bool expected = a == b || (a >= r && b >= r);
        ok = ef_equivalent(FiniteStructure(sig, a), FiniteStructure(sig, b), r) == expected;
      }
  t.row("ef bare-set rule sizes<=5", ok);
}

void relativization_sweep(Table& t, std::uint64_t seed) {
  Rng rng(seed);
  Signature sig;
  sig.add("Q", 1);
  sig.add("R", 2);
  int checked = 0;
  bool ok = true;
  for (int round = 0; round < 50 && ok; ++round) {
    FamilySpec fam = random_family(rng, sig, 3, 3);
    CombinedStructure c = e_combine(fam);
    Formula sigma = round % 2 == 0 ? Formula::eq(Variable{1}, Variable{1})
                                   : Formula::atom("Q", {Variable{1}});
    Formula f = random_formula(rng, sig, 3, 2, true);
    Formula rel = relativize(f, c.base().sig(), "E", sigma);
    auto free = free_variables(f);
    for (const auto& member : fam.members()) {
      auto block = c.block(member.tag);
      FiniteStructure sub = restrict_to_class(c, block.front());
      bool meets = false;
      for (int e : block)
        if (evaluate(c.base(), sigma, {{free_variables(sigma).front(), e}})) meets = true;
      if (!meets) continue;
      std::vector<int> pick(free.size(), 0);
      while (true) {
        Assignment global, local;
        for (size_t i = 0; i < free.size(); ++i) {
          global[free[i]] = block[pick[i]];
          local[free[i]] = pick[i];
        }
        if (evaluate(c.base(), rel, global) != evaluate(sub, f, local)) ok = false;
        ++checked;
        int p = static_cast<int>(free.size()) - 1;
        for (; p >= 0; --p) {
          if (++pick[p] < static_cast<int>(block.size())) break;
          pick[p] = 0;
        }
        if (p < 0) break;
      }
    }
  }
  std::ostringstream name;
  name << "relativization soundness sweep (" << checked << " assignments)";
  t.row(name.str(), ok && checked > 0);
}

void orbit_additivity(Table& t, std::uint64_t seed) {
  Rng rng(seed + 1);
  Signature sig;
  sig.add("Q", 1);
  int done = 0;
  bool ok = true;
  while (done < 20 && ok) {
    FamilySpec fam = random_family(rng, sig, 3, 4);
    bool distinct = true;
    for (size_t i = 0; i < fam.members().size() && distinct; ++i)
      for (size_t j = i + 1; j < fam.members().size() && distinct; ++j)
        if (are_isomorphic(fam.members()[i].structure, fam.members()[j].structure)) distinct = false;
    if (!distinct) continue;
    CombinedStructure c = p_combine(fam);
    long long sum = 0;
    for (const auto& m : fam.members()) sum += orbit_count(m.structure, 1);
    ok = orbit_count(c.base(), 1) == sum;
    ++done;
  }
  t.row("orbit additivity over 20 combinations", ok);
}

}  // namespace

int run_selftest(std::ostream& out, std::uint64_t seed) {
  Table t{out};
  closed_forms(t);
  product_laws(t);
  ef_rule(t);
  relativization_sweep(t, seed);
  orbit_additivity(t, seed);
  out << (t.failures == 0 ? "all checks passed" : std::to_string(t.failures) + " checks failed") << "\n";
  return t.failures;
}

}  // namespace combi
