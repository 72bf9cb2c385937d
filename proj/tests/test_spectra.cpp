#include "combi/spectra.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace combi;

namespace {

const ExtCardinal k0 = ExtCardinal::fin(0);
const ExtCardinal k1 = ExtCardinal::fin(1);
const ExtCardinal k2 = ExtCardinal::fin(2);
const ExtCardinal k3 = ExtCardinal::fin(3);
const ExtCardinal kw = ExtCardinal::omega();
const ExtCardinal kc = ExtCardinal::continuum();

}  // namespace

TEST_CASE("extended cardinals order and absorb") {
  CHECK(k1 < k2);
  CHECK(k2 < kw);
  CHECK(kw < kc);
  CHECK(!(kc < kc));
  CHECK(card_min(k3, kw) == k3);
  CHECK(card_max(k3, kw) == kw);
  CHECK(card_add(k2, k3) == ExtCardinal::fin(5));
  CHECK(card_add(k2, kw) == kw);
  CHECK(card_add(kc, kw) == kc);
  CHECK(card_mul(k2, k3) == ExtCardinal::fin(6));
  CHECK(card_mul(k2, kc) == kc);

  std::vector<ExtCardinal> samples{k1, k2, k3, kw, kc};
  for (const auto& a : samples)
    for (const auto& b : samples) {
      CHECK(card_add(a, b) == card_add(b, a));
      CHECK(card_mul(a, b) == card_mul(b, a));
      for (const auto& c : samples) {
        CHECK(card_add(card_add(a, b), c) == card_add(a, card_add(b, c)));
        CHECK(card_mul(card_mul(a, b), c) == card_mul(a, card_mul(b, c)));
      }
    }
}

TEST_CASE("cardinal text forms") {
  CHECK(to_string(k3) == "3");
  CHECK(to_string(kw) == "omega");
  CHECK(to_string(kc) == "continuum");
  CHECK(parse_ext_cardinal("17") == ExtCardinal::fin(17));
  CHECK(parse_ext_cardinal("omega") == kw);
  CHECK(parse_ext_cardinal("continuum") == kc);
  CHECK_THROWS_WITH_AS(parse_ext_cardinal("aleph1"), doctest::Contains("FormatError"), Error);
}

TEST_CASE("model-count product") {
  CHECK(count_models_product({k1, k1, k1}) == k1);
  CHECK(count_models_product({k3, k3}) == ExtCardinal::fin(9));
  CHECK(count_models_product({k2, kw}) == kw);
  CHECK(count_models_product({kw, kc}) == kc);
  CHECK_THROWS_WITH_AS(count_models_product({}), doctest::Contains("EmptyProduct"), Error);
  CHECK_THROWS_WITH_AS(count_models_product({k1, k0}), doctest::Contains("ZeroFactor"), Error);

  // the product collapses to one exactly when every factor is one
  std::vector<std::vector<ExtCardinal>> lists{{k1}, {k1, k1, k1, k1}, {k1, k2}, {k2, k1}, {k3, k1, k1}};
  for (const auto& fs : lists) {
    bool all_one = std::all_of(fs.begin(), fs.end(), [](const ExtCardinal& f) { return f == k1; });
    CHECK((count_models_product(fs) == k1) == all_one);
  }

  // pair enumeration: choices for two independent components
  std::uint64_t pairs = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ++pairs;
  CHECK(count_models_product({k3, k3}) == ExtCardinal::fin(pairs));
}

TEST_CASE("residual count closed form") {
  CHECK(i_infinity_singletons(k0, k1) == k1);
  CHECK(i_infinity_singletons(k2, k1) == k3);
  CHECK(i_infinity_singletons(kw, kw) == kc);
  CHECK(i_infinity_singletons(kw, ExtCardinal::fin(5)) == kw);   // j infinite, j > lambda
  CHECK(i_infinity_singletons(kc, kc) == kc);
  CHECK(i_infinity_singletons(ExtCardinal::fin(3), kw) == ExtCardinal::fin(8));  // all subsets fit
  CHECK_THROWS_WITH_AS(i_infinity_singletons(k2, k0), doctest::Contains("ZeroFactor"), Error);
}

TEST_CASE("residual count oracle") {
  CHECK(oracle_i_infinity(0, 3) == 1);
  CHECK(oracle_i_infinity(2, 1) == 3);
  CHECK_THROWS_WITH_AS(oracle_i_infinity(7, 1), doctest::Contains("BoundExceeded"), Error);

  for (int j = 0; j <= 4; ++j)
    for (int lambda = 1; lambda <= 5; ++lambda) {
      CAPTURE(j);
      CAPTURE(lambda);
      CHECK(i_infinity_singletons(ExtCardinal::fin(j), ExtCardinal::fin(lambda)) ==
            ExtCardinal::fin(oracle_i_infinity(j, lambda)));
    }

  // adding a predicate or a slot never shrinks the count
  for (int j = 0; j < 4; ++j)
    for (int lambda = 1; lambda < 5; ++lambda) {
      CHECK(oracle_i_infinity(j, lambda) <= oracle_i_infinity(j + 1, lambda));
      CHECK(oracle_i_infinity(j, lambda) <= oracle_i_infinity(j, lambda + 1));
    }
}

TEST_CASE("disjoint order spectrum") {
  CHECK(esp_disjoint_orders(1, false) == 2);
  CHECK(esp_disjoint_orders(1, true) == 2);
  CHECK(esp_disjoint_orders(2, false) == 8);
  CHECK(esp_disjoint_orders(2, true) == 5);
  for (int m = 1; m <= 5; ++m) {
    CHECK(esp_disjoint_orders(m, false) == oracle_component_states(m, 3, true, true));
    CHECK(esp_disjoint_orders(m, true) == oracle_component_states(m, 3, false, true));
  }
}

TEST_CASE("component-state oracle") {
  CHECK(oracle_component_states(0, 3, true, true) == 0);
  CHECK(oracle_component_states(2, 3, true, true) == 8);
  CHECK(oracle_component_states(3, 2, false, false) == 4);
  CHECK_THROWS_WITH_AS(oracle_component_states(11, 3, true, true), doctest::Contains("BoundExceeded"),
                       Error);
  CHECK_THROWS_WITH_AS(oracle_component_states(2, 6, true, true), doctest::Contains("BoundExceeded"), Error);
}

TEST_CASE("combinations with repetition") {
  for (std::uint64_t n = 1; n <= 6; ++n) CHECK(comb_rep(n, 0) == 1);
  for (std::uint64_t m = 0; m <= 6; ++m) CHECK(comb_rep(1, m) == 1);
  CHECK(comb_rep(2, 2) == 3);
  for (int n = 1; n <= 6; ++n)
    for (int m = 0; m <= 6; ++m) CHECK(comb_rep(n, m) == oracles::multiset_count(n, m));
  CHECK_THROWS_WITH_AS(comb_rep(0, 2), doctest::Contains("ZeroFactor"), Error);
}

TEST_CASE("chained-order spectrum values") {
  CHECK(esp_tn(0) == 2);
  CHECK(esp_tn(3) == 3);
  CHECK(esp_tn(5) == 5);
  CHECK_THROWS_WITH_AS(esp_tn(1), doctest::Contains("UndefinedIndex"), Error);
  CHECK(esp_t0_halfopen_variant == 4);
}

TEST_CASE("common-limit relations") {
  CHECK(comlim_validate(k1, k1, k1, k1));
  for (const auto& a : {k0, k1, k3, kw, kc}) CHECK(comlim_validate(a, a, a, a));
  CHECK(!comlim_validate(k2, k3, k3, k3));          // violates the min bound
  CHECK(!comlim_validate(k2, k3, k2, k1));          // violates the max bound
  CHECK(!comlim_validate(k2, k3, ExtCardinal::fin(5), k1));  // violates the sum equation
  CHECK(comlim_validate(k2, k3, ExtCardinal::fin(4), k1));
  CHECK(comlim_validate(kw, k1, kw, k1));
  CHECK(esp_range_check(kw));
  CHECK(esp_range_check(kc));
  CHECK(esp_range_check(ExtCardinal::fin(7)));
}

TEST_CASE("the environment variable raises the desk-scale caps") {
  CHECK_THROWS_WITH_AS(oracle_i_infinity(7, 1), doctest::Contains("BoundExceeded"), Error);
  setenv("COMBI_MT_MAX_SIZE", "8", 1);
  CHECK(oracle_i_infinity(7, 1) == 8);  // the empty choice plus seven singleton picks
  unsetenv("COMBI_MT_MAX_SIZE");
  CHECK_THROWS_WITH_AS(oracle_i_infinity(7, 1), doctest::Contains("BoundExceeded"), Error);
}

TEST_CASE("singleton family generator") {
  FamilySpec fam = gen_family("singletons", {{"j", "2"}});
  REQUIRE(fam.members().size() == 2);
  CHECK(fam.member("q1").tuples("Q1").size() == 1);
  CHECK(fam.member("q1").tuples("Q2").empty());
  CHECK(fam.member("q2").tuples("Q2").size() == 1);
  CHECK(fam.member("q2").tuples("Q1").empty());
  for (const auto& m : fam.members()) CHECK(m.structure.size() >= 1);
}

TEST_CASE("unary chain generator") {
  FamilySpec fam = gen_family("unary_chain", {{"i", "1"}, {"n", "3"}});
  REQUIRE(fam.members().size() == 3);
  const FiniteStructure& biggest = fam.member("n3");
  CHECK(biggest.size() == 3);
  CHECK(biggest.tuples("P1").size() == 3);  // the whole universe
  CHECK(biggest.tuples("P2").empty());
}

TEST_CASE("independent predicates generator realizes every sign pattern") {
  FamilySpec fam = gen_family("independent_preds", {{"k", "2"}});
  const FiniteStructure& m = fam.members().front().structure;
  CHECK(m.size() == 4);
  std::set<std::pair<bool, bool>> patterns;
  for (int e = 0; e < m.size(); ++e) patterns.insert({m.holds("P1", {e}), m.holds("P2", {e})});
  CHECK(patterns.size() == 4);
}

TEST_CASE("path generator emits bounded-degree paths of the right diameter") {
  FamilySpec fam = gen_family("paths", {{"i", "2"}});
  REQUIRE(fam.members().size() == 2);
  for (const auto& member : fam.members()) {
    const FiniteStructure& s = member.structure;
    int diameter = member.tag == "d1" ? 1 : 2;
    std::vector<int> degree(s.size(), 0);
    for (const auto& t : s.tuples("R")) {
      CHECK(t[0] != t[1]);                     // irreflexive
      CHECK(s.holds("R", {t[1], t[0]}));       // symmetric
      ++degree[t[0]];
    }
    for (int d : degree) CHECK(d <= 2);

    // components are paths with diameter `diameter` (d+1 vertices each)
    auto comp = oracles::components_by_closure(s, "R");
    std::map<int, int> sizes;
    for (int c : comp) ++sizes[c];
    for (const auto& [root, count] : sizes) CHECK(count == diameter + 1);
  }
}

TEST_CASE("parity generator sizes") {
  FamilySpec a = gen_family("parity", {{"side", "a"}, {"m", "2"}});
  FamilySpec b = gen_family("parity", {{"side", "b"}, {"m", "2"}});
  CHECK(a.member("a1").size() == 2);
  CHECK(a.member("a2").size() == 4);
  CHECK(b.member("b1").size() == 3);
  CHECK(b.member("b2").size() == 5);
  for (const auto& m : a.members()) CHECK(m.structure.tuples("P").size() == static_cast<size_t>(m.structure.size()));
}

TEST_CASE("generator bounds and unknown kinds") {
  CHECK_THROWS_WITH_AS(gen_family("nope", {}), doctest::Contains("UnknownKind"), Error);
  CHECK_THROWS_WITH_AS(gen_family("singletons", {{"j", "9"}}), doctest::Contains("BoundExceeded"), Error);
  CHECK_THROWS_WITH_AS(gen_family("singletons", {}), doctest::Contains("MissingParam"), Error);
  CHECK_THROWS_WITH_AS(gen_family("paths", {{"i", "4"}, {"components", "3"}}),
                       doctest::Contains("BoundExceeded"), Error);
}

TEST_CASE("spectrum reports") {
  SpectrumReport r = spectrum_report("i-infinity", {{"j", "2"}, {"lambda", "1"}});
  CHECK(r.closed_form == k3);
  REQUIRE(r.oracle_value.has_value());
  CHECK(*r.oracle_value == 3);
  CHECK(r.agrees);

  SpectrumReport inf = spectrum_report("i-infinity", {{"j", "omega"}, {"lambda", "omega"}});
  CHECK(inf.closed_form == kc);
  CHECK(!inf.oracle_value.has_value());
  CHECK(inf.agrees);

  SpectrumReport orders = spectrum_report("esp-orders", {{"m", "2"}, {"merged", "1"}});
  CHECK(orders.closed_form == ExtCardinal::fin(5));
  CHECK(orders.agrees);

  CHECK(spectrum_report("esp-tn", {{"n", "4"}}).closed_form == ExtCardinal::fin(4));
  CHECK(spectrum_report("esp-t0-halfopen", {}).closed_form == ExtCardinal::fin(4));
  CHECK_THROWS_WITH_AS(spectrum_report("mystery", {}), doctest::Contains("UnknownKind"), Error);
  CHECK_THROWS_WITH_AS(spectrum_report("i-infinity", {{"j", "1"}}), doctest::Contains("MissingParam"),
                       Error);
}
