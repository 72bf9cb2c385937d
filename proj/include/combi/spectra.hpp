#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "combi/combine.hpp"

namespace combi {

/// Symbolic cardinal for spectrum arithmetic: a finite value, omega, or
/// the continuum. Every uncountable value collapses to Continuum; that is
/// the whole value range needed for countable-language spectra.
struct ExtCardinal {
  enum class Kind { Fin, Omega, Continuum };
  Kind kind = Kind::Fin;
  std::uint64_t value = 0;  // meaningful for Fin only

  static ExtCardinal fin(std::uint64_t n) { return {Kind::Fin, n}; }
  static ExtCardinal omega() { return {Kind::Omega, 0}; }
  static ExtCardinal continuum() { return {Kind::Continuum, 0}; }

  bool is_fin() const { return kind == Kind::Fin; }
  bool operator==(const ExtCardinal& o) const { return kind == o.kind && (kind != Kind::Fin || value == o.value); }
  bool operator<(const ExtCardinal& o) const;
  bool operator<=(const ExtCardinal& o) const { return *this < o || *this == o; }
};

/// Cardinal sum: exact on finite values, absorbing upward otherwise.
ExtCardinal card_add(ExtCardinal a, ExtCardinal b);
/// Cardinal product for values >= 1: exact on finite, absorbing upward.
ExtCardinal card_mul(ExtCardinal a, ExtCardinal b);
ExtCardinal card_min(ExtCardinal a, ExtCardinal b);
ExtCardinal card_max(ExtCardinal a, ExtCardinal b);

/// "3", "omega" or "continuum".
std::string to_string(const ExtCardinal& c);
/// Inverse of to_string; also accepts plain nonnegative integers.
ExtCardinal parse_ext_cardinal(const std::string& text);

/// Binomial coefficient with overflow detection (throws BoundExceeded).
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Number of countable models of a disjoint combination as a product over
/// the component counts. Factors must be >= 1 (ZeroFactor) and the list
/// nonempty (EmptyProduct).
ExtCardinal count_models_product(const std::vector<ExtCardinal>& factors);

/// Number of residual structures for the singleton-predicate family:
/// sum of C(j, i) for i <= min(j, lambda) when j is finite; j itself when
/// j is infinite and j > lambda; 2^j when j is infinite and j <= lambda.
/// lambda must be >= 1.
ExtCardinal i_infinity_singletons(ExtCardinal j, ExtCardinal lambda);

/// Ground truth for the finite branch: isomorphism classes of size-lambda
/// structures over unary Q1..Qj, each interpreted by at most one element,
/// pairwise disjoint. Exhaustive generation plus isomorphism filtering.
/// Desk-scale caps j <= 6, lambda <= 6 (COMBI_MT_MAX_SIZE overrides).
std::uint64_t oracle_i_infinity(int j, int lambda);

/// Spectrum of the disjoint union of m dense-order components:
/// 3^m - 1 distinct symbols, or m(m+1)/2 + m with the orders merged into
/// one symbol.
std::uint64_t esp_disjoint_orders(int m, bool merged);

/// Counts assignments of one of `states` states to m components by plain
/// enumeration: labeled components (states^m) or unlabeled multisets,
/// optionally excluding the all-empty assignment (state 0 everywhere).
/// Caps m <= 10, states <= 5 (COMBI_MT_MAX_SIZE overrides).
std::uint64_t oracle_component_states(int m, int states, bool labeled, bool exclude_all_empty);

/// Combinations with repetitions: C(n + m - 1, m).
std::uint64_t comb_rep(std::uint64_t n, std::uint64_t m);

/// Spectrum of the chained dense-order family: 2 for the base example
/// (n = 0), n for n >= 2. n = 1 needs a different construction and is
/// refused (UndefinedIndex).
std::uint64_t esp_tn(int n);

/// Spectrum of the half-open-interval variant of the base dense-order
/// family (least and greatest endpoints vary independently).
inline constexpr std::uint64_t esp_t0_halfopen_variant = 4;

/// Checks the three relations between two component spectra, the spectrum
/// of their disjoint union, and their common-limit count:
///   comlim <= min(spA, spB),  max(spA, spB) <= spC,
///   spA + spB = spC + comlim (cardinal arithmetic).
bool comlim_validate(ExtCardinal sp_a, ExtCardinal sp_b, ExtCardinal sp_c, ExtCardinal comlim);

/// Spectrum values of a countable combination theory are finite, omega,
/// or continuum; true for every ExtCardinal. Kept as the documented
/// range check where raw counts enter.
inline bool esp_range_check(const ExtCardinal&) { return true; }

/// Named family constructions at finite truncation:
///   singletons        j members, member k has Qk a singleton, others empty
///   unary_chain       members of sizes 1..n with P<i> the whole universe
///   independent_preds members realizing all sign patterns of k predicates
///   paths             members whose R-components are paths of diameter 1..i
///   parity            blocks of all-P sizes 2k (side a) or 2k+1 (side b)
/// Parameters are integer-valued except parity's side=a|b. Members and
/// member sizes are capped at 8 (COMBI_MT_MAX_SIZE overrides). Throws
/// UnknownKind, BoundExceeded, MissingParam.
FamilySpec gen_family(const std::string& kind, const std::map<std::string, std::string>& params);

/// Closed form next to its enumeration oracle, as printed by the CLI.
struct SpectrumReport {
  ExtCardinal closed_form;
  std::optional<std::uint64_t> oracle_value;
  std::map<std::string, std::string> params;
  bool agrees = true;
};

/// Evaluates a named spectrum formula: i-infinity (j, lambda),
/// esp-orders (m, merged), comb-rep (n, m), esp-tn (n),
/// esp-t0-halfopen. The oracle column is filled when the parameters sit
/// inside the oracle caps. Throws UnknownKind, MissingParam.
SpectrumReport spectrum_report(const std::string& formula, const std::map<std::string, std::string>& params);

/// Desk-scale cap: the default unless COMBI_MT_MAX_SIZE raises it.
int desk_cap(int dflt);

}  // namespace combi
