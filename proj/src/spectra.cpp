#include "combi/spectra.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace combi {

// -------------------------------------------------------------- ExtCardinal

bool ExtCardinal::operator<(const ExtCardinal& o) const {
  auto level = [](Kind k) { return k == Kind::Fin ? 0 : k == Kind::Omega ? 1 : 2; };
  if (level(kind) != level(o.kind)) return level(kind) < level(o.kind);
  return kind == Kind::Fin && value < o.value;
}

ExtCardinal card_add(ExtCardinal a, ExtCardinal b) {
  if (a.is_fin() && b.is_fin()) {
    if (a.value > UINT64_MAX - b.value) fail("BoundExceeded", "finite cardinal sum overflows");
    return ExtCardinal::fin(a.value + b.value);
  }
  return card_max(a, b);
}

ExtCardinal card_mul(ExtCardinal a, ExtCardinal b) {
  if (a.is_fin() && b.is_fin()) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a.value, b.value, &out)) fail("BoundExceeded", "finite cardinal product overflows");
    return ExtCardinal::fin(out);
  }
  return card_max(a, b);  // factors are >= 1, infinities absorb
}

ExtCardinal card_min(ExtCardinal a, ExtCardinal b) { return a < b ? a : b; }
ExtCardinal card_max(ExtCardinal a, ExtCardinal b) { return a < b ? b : a; }

std::string to_string(const ExtCardinal& c) {
  switch (c.kind) {
    case ExtCardinal::Kind::Fin: return std::to_string(c.value);
    case ExtCardinal::Kind::Omega: return "omega";
    case ExtCardinal::Kind::Continuum: return "continuum";
  }
  return "";
}

ExtCardinal parse_ext_cardinal(const std::string& text) {
  if (text == "omega") return ExtCardinal::omega();
  if (text == "continuum") return ExtCardinal::continuum();
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return ExtCardinal::fin(v);
  } catch (const std::exception&) {
    fail("FormatError", "expected a nonnegative integer, 'omega' or 'continuum', got '" + text + "'");
  }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // out * (n - k + i) / i, keeping intermediate values exact
    std::uint64_t num = n - k + i;
    std::uint64_t g = std::gcd(out, i);
    std::uint64_t o2 = out / g;
    std::uint64_t i2 = i / g;
    std::uint64_t g2 = std::gcd(num, i2);
    num /= g2;
    i2 /= g2;
    // i2 must be 1 now since C(n,k) is integral
    std::uint64_t prod = 0;
    if (i2 != 1 || __builtin_mul_overflow(o2, num, &prod))
      fail("BoundExceeded", "binomial coefficient overflows");
    out = prod;
  }
  return out;
}

// ------------------------------------------------------------- closed forms

int desk_cap(int dflt) {
  if (const char* env = std::getenv("COMBI_MT_MAX_SIZE")) {
    int v = std::atoi(env);
    if (v > dflt) return v;
  }
  return dflt;
}

ExtCardinal count_models_product(const std::vector<ExtCardinal>& factors) {
  if (factors.empty()) fail("EmptyProduct", "a combination has at least one component");
  ExtCardinal out = ExtCardinal::fin(1);
  for (const ExtCardinal& f : factors) {
    if (f < ExtCardinal::fin(1)) fail("ZeroFactor", "every component theory has at least one model");
    out = card_mul(out, f);
  }
  return out;
}

ExtCardinal i_infinity_singletons(ExtCardinal j, ExtCardinal lambda) {
  if (lambda < ExtCardinal::fin(1)) fail("ZeroFactor", "lambda must be at least 1");
  if (j.is_fin()) {
    std::uint64_t cut = lambda.is_fin() ? std::min(j.value, lambda.value) : j.value;
    std::uint64_t sum = 0;
    for (std::uint64_t i = 0; i <= cut; ++i) sum += binomial(j.value, i);
    return ExtCardinal::fin(sum);
  }
  if (lambda < j) return j;
  // 2^j for infinite j; 2^omega is the continuum, anything larger collapses.
  return ExtCardinal::continuum();
}

std::uint64_t oracle_i_infinity(int j, int lambda) {
  if (j < 0 || lambda < 1) fail("BoundExceeded", "need j >= 0 and lambda >= 1");
  if (j > desk_cap(6) || lambda > desk_cap(6)) fail("BoundExceeded", "oracle is capped at j, lambda <= 6");
  Signature sig;
  for (int q = 1; q <= j; ++q) sig.add("Q" + std::to_string(q), 1);

  // choice[q]: lambda for "empty", else the element carrying Q(q+1)
  std::vector<FiniteStructure> reps;
  std::vector<int> choice(static_cast<size_t>(j), 0);
  bool done = false;
  std::uint64_t count = 0;
  while (!done) {
    std::vector<bool> taken(static_cast<size_t>(lambda), false);
    bool disjoint = true;
    for (int q = 0; q < j && disjoint; ++q) {
      if (choice[q] == lambda) continue;
      if (taken[choice[q]]) disjoint = false;
      taken[choice[q]] = true;
    }
    if (disjoint) {
      FiniteStructure s(sig, lambda);
      for (int q = 0; q < j; ++q)
        if (choice[q] != lambda) s.add_tuple("Q" + std::to_string(q + 1), {choice[q]});
      bool fresh = std::none_of(reps.begin(), reps.end(),
                                [&](const FiniteStructure& r) { return are_isomorphic(r, s).has_value(); });
      if (fresh) {
        reps.push_back(std::move(s));
        ++count;
      }
    }
    done = true;
    for (int q = j - 1; q >= 0; --q) {
      if (++choice[q] <= lambda) { done = false; break; }
      choice[q] = 0;
    }
    if (j == 0) break;
  }
  if (j == 0) return 1;  // only the bare residual
  return count;
}

std::uint64_t esp_disjoint_orders(int m, bool merged) {
  if (m < 1) fail("BoundExceeded", "need m >= 1 components");
  if (!merged) {
    std::uint64_t out = 1;
    for (int i = 0; i < m; ++i) {
      if (__builtin_mul_overflow(out, std::uint64_t{3}, &out))
        fail("BoundExceeded", "3^m overflows");
    }
    return out - 1;
  }
  std::uint64_t mm = static_cast<std::uint64_t>(m);
  return mm * (mm + 1) / 2 + mm;
}

std::uint64_t oracle_component_states(int m, int states, bool labeled, bool exclude_all_empty) {
  if (m < 0 || states < 1) fail("BoundExceeded", "need m >= 0 and states >= 1");
  if (m > desk_cap(10) || states > desk_cap(5))
    fail("BoundExceeded", "oracle is capped at m <= 10, states <= 5");
  std::uint64_t count = 0;
  if (labeled) {
    std::vector<int> assign(static_cast<size_t>(m), 0);
    while (true) {
      bool all_empty = std::all_of(assign.begin(), assign.end(), [](int s) { return s == 0; });
      if (!(exclude_all_empty && all_empty)) ++count;
      int p = m - 1;
      for (; p >= 0; --p) {
        if (++assign[p] < states) break;
        assign[p] = 0;
      }
      if (p < 0) break;
    }
    return count;
  }
  // Multisets: nondecreasing state sequences.
  std::vector<int> assign(static_cast<size_t>(m), 0);
  auto rec = [&](auto&& self, int pos, int low) -> void {
    if (pos == m) {
      bool all_empty = m > 0 && std::all_of(assign.begin(), assign.end(), [](int s) { return s == 0; });
      if (m == 0) all_empty = true;
      if (!(exclude_all_empty && all_empty)) ++count;
      return;
    }
    for (int s = low; s < states; ++s) {
      assign[pos] = s;
      self(self, pos + 1, s);
    }
  };
  rec(rec, 0, 0);
  return count;
}

std::uint64_t comb_rep(std::uint64_t n, std::uint64_t m) {
  if (n < 1) fail("ZeroFactor", "need n >= 1 symbols");
  return binomial(n + m - 1, m);
}

std::uint64_t esp_tn(int n) {
  if (n == 0) return 2;
  if (n == 1)
    fail("UndefinedIndex", "the chained family needs n = 0 or n >= 2; n = 1 comes from a different construction");
  if (n < 0) fail("UndefinedIndex", "n must be nonnegative");
  return static_cast<std::uint64_t>(n);
}

bool comlim_validate(ExtCardinal sp_a, ExtCardinal sp_b, ExtCardinal sp_c, ExtCardinal comlim) {
  if (!(comlim <= card_min(sp_a, sp_b))) return false;
  if (!(card_max(sp_a, sp_b) <= sp_c)) return false;
  return card_add(sp_a, sp_b) == card_add(sp_c, comlim);
}

// --------------------------------------------------------------- generators

namespace {

int int_param(const std::map<std::string, std::string>& params, const std::string& key,
              std::optional<int> dflt = std::nullopt) {
  auto it = params.find(key);
  if (it == params.end()) {
    if (dflt) return *dflt;
    fail("MissingParam", "parameter " + key + " is required");
  }
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    fail("FormatError", "parameter " + key + " must be an integer, got '" + it->second + "'");
  }
}

void check_member_bounds(int members, int max_size) {
  int cap = desk_cap(8);
  if (members < 1 || members > cap)
    fail("BoundExceeded", "family would have " + std::to_string(members) + " members (cap " +
                              std::to_string(cap) + ")");
  if (max_size < 1 || max_size > cap)
    fail("BoundExceeded", "member size " + std::to_string(max_size) + " exceeds the cap " +
                              std::to_string(cap));
}

FamilySpec gen_singletons(const std::map<std::string, std::string>& params) {
  int j = int_param(params, "j");
  int size = int_param(params, "size", 1);
  check_member_bounds(j, size);
  Signature sig;
  for (int q = 1; q <= j; ++q) sig.add("Q" + std::to_string(q), 1);
  std::vector<FamilySpec::Member> members;
  for (int q = 1; q <= j; ++q) {
    FiniteStructure s(sig, size);
    s.add_tuple("Q" + std::to_string(q), {0});
    members.push_back({"q" + std::to_string(q), std::move(s)});
  }
  return FamilySpec(std::move(members));
}

FamilySpec gen_unary_chain(const std::map<std::string, std::string>& params) {
  int i = int_param(params, "i");
  int n = int_param(params, "n");
  int preds = int_param(params, "preds", std::max(i, 2));
  if (i < 1 || i > preds) fail("BoundExceeded", "need 1 <= i <= preds");
  check_member_bounds(n, n);
  if (preds > desk_cap(8)) fail("BoundExceeded", "too many predicates");
  Signature sig;
  for (int p = 1; p <= preds; ++p) sig.add("P" + std::to_string(p), 1);
  std::vector<FamilySpec::Member> members;
  for (int m = 1; m <= n; ++m) {
    FiniteStructure s(sig, m);
    for (int e = 0; e < m; ++e) s.add_tuple("P" + std::to_string(i), {e});
    members.push_back({"n" + std::to_string(m), std::move(s)});
  }
  return FamilySpec(std::move(members));
}

FamilySpec gen_independent_preds(const std::map<std::string, std::string>& params) {
  int k = int_param(params, "k");
  int count = int_param(params, "members", 1);
  if (k < 1 || k > 3) fail("BoundExceeded", "need 1 <= k <= 3 predicates");
  int patterns = 1 << k;
  check_member_bounds(count, patterns * count);
  Signature sig;
  for (int p = 1; p <= k; ++p) sig.add("P" + std::to_string(p), 1);
  std::vector<FamilySpec::Member> members;
  for (int t = 1; t <= count; ++t) {
    // every sign pattern realized exactly t times
    FiniteStructure s(sig, patterns * t);
    for (int pat = 0; pat < patterns; ++pat)
      for (int rep = 0; rep < t; ++rep)
        for (int p = 0; p < k; ++p)
          if (pat & (1 << p)) s.add_tuple("P" + std::to_string(p + 1), {pat * t + rep});
    members.push_back({"m" + std::to_string(t), std::move(s)});
  }
  return FamilySpec(std::move(members));
}

FamilySpec gen_paths(const std::map<std::string, std::string>& params) {
  int i = int_param(params, "i");
  int components = int_param(params, "components", 2);
  if (i < 1) fail("BoundExceeded", "need diameter i >= 1");
  check_member_bounds(i, (i + 1) * components);
  Signature sig;
  sig.add("R", 2);
  std::vector<FamilySpec::Member> members;
  for (int d = 1; d <= i; ++d) {
    int len = d + 1;  // vertices per path of diameter d
    FiniteStructure s(sig, len * components);
    for (int c = 0; c < components; ++c)
      for (int v = 0; v + 1 < len; ++v) {
        int a = c * len + v;
        s.add_tuple("R", {a, a + 1});
        s.add_tuple("R", {a + 1, a});
      }
    members.push_back({"d" + std::to_string(d), std::move(s)});
  }
  return FamilySpec(std::move(members));
}

FamilySpec gen_parity(const std::map<std::string, std::string>& params) {
  auto side_it = params.find("side");
  std::string side = side_it == params.end() ? "a" : side_it->second;
  if (side != "a" && side != "b") fail("FormatError", "side must be 'a' or 'b'");
  int m = int_param(params, "m");
  bool odd = side == "b";
  check_member_bounds(m, 2 * m + (odd ? 1 : 0));
  Signature sig;
  sig.add("P", 1);
  std::vector<FamilySpec::Member> members;
  for (int k = 1; k <= m; ++k) {
    int size = 2 * k + (odd ? 1 : 0);
    FiniteStructure s(sig, size);
    for (int e = 0; e < size; ++e) s.add_tuple("P", {e});
    members.push_back({side + std::to_string(k), std::move(s)});
  }
  return FamilySpec(std::move(members));
}

}  // namespace

FamilySpec gen_family(const std::string& kind, const std::map<std::string, std::string>& params) {
  if (kind == "singletons") return gen_singletons(params);
  if (kind == "unary_chain") return gen_unary_chain(params);
  if (kind == "independent_preds") return gen_independent_preds(params);
  if (kind == "paths") return gen_paths(params);
  if (kind == "parity") return gen_parity(params);
  fail("UnknownKind", "no family generator named " + kind);
}

// ------------------------------------------------------------------ reports

SpectrumReport spectrum_report(const std::string& formula, const std::map<std::string, std::string>& params) {
  SpectrumReport report;
  report.params = params;
  if (formula == "i-infinity") {
    auto jit = params.find("j");
    auto lit = params.find("lambda");
    if (jit == params.end() || lit == params.end()) fail("MissingParam", "i-infinity needs j and lambda");
    ExtCardinal j = parse_ext_cardinal(jit->second);
    ExtCardinal lambda = parse_ext_cardinal(lit->second);
    report.closed_form = i_infinity_singletons(j, lambda);
    if (j.is_fin() && lambda.is_fin() && j.value <= static_cast<std::uint64_t>(desk_cap(6)) &&
        lambda.value >= 1 && lambda.value <= static_cast<std::uint64_t>(desk_cap(6)))
      report.oracle_value = oracle_i_infinity(static_cast<int>(j.value), static_cast<int>(lambda.value));
  } else if (formula == "esp-orders") {
    int m = int_param(params, "m");
    bool merged = int_param(params, "merged", 0) != 0;
    report.closed_form = ExtCardinal::fin(esp_disjoint_orders(m, merged));
    if (m <= desk_cap(10)) report.oracle_value = oracle_component_states(m, 3, !merged, true);
  } else if (formula == "comb-rep") {
    int n = int_param(params, "n");
    int m = int_param(params, "m");
    if (n < 1 || m < 0) fail("BoundExceeded", "need n >= 1 and m >= 0");
    report.closed_form = ExtCardinal::fin(comb_rep(n, m));
    if (n <= desk_cap(5) && m <= desk_cap(10))
      report.oracle_value = oracle_component_states(m, n, false, false);
  } else if (formula == "esp-tn") {
    report.closed_form = ExtCardinal::fin(esp_tn(int_param(params, "n")));
  } else if (formula == "esp-t0-halfopen") {
    report.closed_form = ExtCardinal::fin(esp_t0_halfopen_variant);
  } else {
    fail("UnknownKind", "no spectrum formula named " + formula);
  }
  if (report.oracle_value && report.closed_form.is_fin())
    report.agrees = report.closed_form.value == *report.oracle_value;
  return report;
}

}  // namespace combi
