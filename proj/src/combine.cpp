#include "combi/combine.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>

namespace combi {

// --------------------------------------------------------------- FamilySpec

FamilySpec::FamilySpec(std::vector<Member> members) {
  for (const Member& m : members) {
    if (std::count_if(members.begin(), members.end(), [&](const Member& o) { return o.tag == m.tag; }) > 1)
      fail("DuplicateTag", "tag " + m.tag + " used twice");
    shared_sig_ = Signature::merged(shared_sig_, m.structure.sig());
  }
  for (Member& m : members) {
    FiniteStructure lifted(shared_sig_, m.structure.size());
    for (const auto& r : m.structure.sig().relations())
      for (const auto& t : m.structure.tuples(r.name)) lifted.add_tuple(r.name, t);
    members_.push_back({std::move(m.tag), std::move(lifted)});
  }
}

const FiniteStructure& FamilySpec::member(const std::string& tag) const {
  for (const Member& m : members_)
    if (m.tag == tag) return m.structure;
  fail("UnknownTag", "no member tagged " + tag);
}

bool FamilySpec::has_tag(const std::string& tag) const {
  return std::any_of(members_.begin(), members_.end(), [&](const Member& m) { return m.tag == tag; });
}

// -------------------------------------------------------------- combinators

std::vector<int> CombinedStructure::block(const std::string& tag) const {
  std::vector<int> out;
  for (int e = 0; e < base_.size(); ++e)
    if (origin_[e] && origin_[e]->first == tag) out.push_back(e);
  return out;
}

namespace {

void check_family(const FamilySpec& fam) {
  if (fam.empty()) fail("EmptyFamily", "a combination needs at least one member");
  for (const auto& m : fam.members())
    if (m.structure.size() == 0) fail("EmptyMember", "member " + m.tag + " has an empty universe");
}

// Copies member relations onto their blocks; no cross-block tuples exist.
void copy_blocks(const FamilySpec& fam, FiniteStructure& base,
                 std::vector<std::optional<std::pair<std::string, int>>>& origin) {
  int offset = 0;
  for (const auto& m : fam.members()) {
    for (int e = 0; e < m.structure.size(); ++e) origin.push_back(std::make_pair(m.tag, e));
    for (const auto& r : fam.shared_sig().relations()) {
      for (const auto& t : m.structure.tuples(r.name)) {
        std::vector<int> shifted(t);
        for (int& x : shifted) x += offset;
        base.add_tuple(r.name, shifted);
      }
    }
    offset += m.structure.size();
  }
}

}  // namespace

CombinedStructure p_combine(const FamilySpec& fam) {
  check_family(fam);
  Signature sig = fam.shared_sig();
  for (const auto& m : fam.members()) {
    std::string p = "P_" + m.tag;
    if (sig.has(p)) fail("SymbolClash", "member language already uses " + p);
    sig.add(p, 1);
  }
  int total = 0;
  for (const auto& m : fam.members()) total += m.structure.size();

  CombinedStructure out;
  out.mode_ = CombineMode::P;
  out.base_ = FiniteStructure(sig, total);
  copy_blocks(fam, out.base_, out.origin_);
  int offset = 0;
  for (const auto& m : fam.members()) {
    out.tags_.push_back(m.tag);
    for (int e = 0; e < m.structure.size(); ++e) out.base_.add_tuple("P_" + m.tag, {offset + e});
    offset += m.structure.size();
  }
  return out;
}

CombinedStructure e_combine(const FamilySpec& fam, const std::string& e_symbol) {
  check_family(fam);
  Signature sig = fam.shared_sig();
  if (sig.has(e_symbol)) fail("SymbolClash", "member language already uses " + e_symbol);
  sig.add(e_symbol, 2);
  int total = 0;
  for (const auto& m : fam.members()) total += m.structure.size();

  CombinedStructure out;
  out.mode_ = CombineMode::E;
  out.e_symbol_ = e_symbol;
  out.base_ = FiniteStructure(sig, total);
  copy_blocks(fam, out.base_, out.origin_);
  int offset = 0;
  for (const auto& m : fam.members()) {
    out.tags_.push_back(m.tag);
    for (int i = 0; i < m.structure.size(); ++i)
      for (int j = 0; j < m.structure.size(); ++j) out.base_.add_tuple(e_symbol, {offset + i, offset + j});
    offset += m.structure.size();
  }
  return out;
}

namespace {

FiniteStructure restrict_to_elements(const CombinedStructure& c, const std::vector<int>& elems,
                                     const Signature& reduced) {
  std::vector<int> local(c.base().size(), -1);
  for (size_t i = 0; i < elems.size(); ++i) local[elems[i]] = static_cast<int>(i);
  FiniteStructure out(reduced, static_cast<int>(elems.size()));
  for (const auto& r : reduced.relations()) {
    for (const auto& t : c.base().tuples(r.name)) {
      std::vector<int> mapped(t.size());
      bool inside = true;
      for (size_t i = 0; i < t.size(); ++i) {
        if (local[t[i]] < 0) { inside = false; break; }
        mapped[i] = local[t[i]];
      }
      if (inside) out.add_tuple(r.name, mapped);
    }
  }
  return out;
}

Signature without(const Signature& sig, const std::vector<std::string>& names) {
  Signature out;
  for (const auto& r : sig.relations())
    if (std::find(names.begin(), names.end(), r.name) == names.end()) out.add(r.name, r.arity);
  return out;
}

}  // namespace

FiniteStructure restrict_to_class(const CombinedStructure& c, int e) {
  if (c.mode() != CombineMode::E) fail("NotAnECombination", "class restriction needs an E-combination");
  if (e < 0 || e >= c.base().size())
    fail("ElementOutOfRange", "element " + std::to_string(e) + " outside the universe");
  if (!c.origin()[e]) fail("ElementOutOfRange", "element " + std::to_string(e) + " has no class");
  return restrict_to_elements(c, c.block(c.origin()[e]->first), without(c.base().sig(), {c.e_symbol()}));
}

FiniteStructure restrict_to_predicate(const CombinedStructure& c, const std::string& tag) {
  if (c.mode() != CombineMode::P) fail("NotAPCombination", "predicate restriction needs a P-combination");
  if (std::find(c.tags().begin(), c.tags().end(), tag) == c.tags().end())
    fail("UnknownTag", "no block tagged " + tag);
  std::vector<std::string> drop;
  for (const std::string& t : c.tags()) drop.push_back("P_" + t);
  return restrict_to_elements(c, c.block(tag), without(c.base().sig(), drop));
}

CombinedStructure adopt_p_combination(const FiniteStructure& s, const std::vector<std::string>& tags) {
  CombinedStructure out;
  out.mode_ = CombineMode::P;
  out.base_ = s;
  out.tags_ = tags;
  out.origin_.assign(s.size(), std::nullopt);
  for (const std::string& tag : tags) {
    std::string p = "P_" + tag;
    if (!s.sig().has(p)) fail("UnknownSymbol", "structure lacks " + p);
    if (s.sig().arity(p) != 1) fail("InvalidCombination", p + " is not unary");
    int local = 0;
    for (const auto& t : s.tuples(p)) {
      if (out.origin_[t[0]])
        fail("InvalidCombination", "element " + std::to_string(t[0]) + " tagged twice");
      out.origin_[t[0]] = std::make_pair(tag, local++);
    }
  }
  return out;
}

std::vector<int> p_infinity_residual(const CombinedStructure& c) {
  if (c.mode() != CombineMode::P) fail("NotAPCombination", "the residual is defined for P-combinations");
  std::vector<int> out;
  for (int e = 0; e < c.base().size(); ++e)
    if (!c.origin()[e]) out.push_back(e);
  return out;
}

// ------------------------------------------------------------ relativize

namespace {

// Hands out the smallest variable indices not used by the input formula
// or sigma, in increasing order.
class FreshVariables {
public:
  FreshVariables(const Formula& f, const Formula& sigma) {
    used_ = variable_indices(f);
    for (int i : variable_indices(sigma)) used_.insert(i);
  }
  Variable next() {
    while (used_.count(next_)) ++next_;
    used_.insert(next_);
    return Variable{next_};
  }

private:
  std::set<int> used_;
  int next_ = 1;
};

struct Relativizer {
  std::string e_symbol;
  Formula sigma_of_y;  // sigma with its free variable renamed to y
  Variable y;
  FreshVariables fresh;

  Formula e_link(Variable u, Variable v) const { return Formula::atom(e_symbol, {u, v}); }

  // exists y (E(anchor, y) & sigma(y))
  Formula witness(Variable anchor) const {
    return Formula::exists(y, Formula::conj(e_link(anchor, y), sigma_of_y));
  }

  // E-links over all ordered pairs of the ambient tuple, then the witness.
  std::vector<Formula> guard_grid(const std::vector<Variable>& ambient) const {
    std::vector<Formula> parts;
    for (Variable u : ambient)
      for (Variable v : ambient) parts.push_back(e_link(u, v));
    parts.push_back(witness(ambient.front()));
    return parts;
  }

  Formula walk(const Formula& f, const std::vector<Variable>& ambient) {
    switch (f.kind()) {
      case Formula::Kind::Atom:
      case Formula::Kind::Eq: {
        assert(!ambient.empty());  // atoms have arguments, so the tuple grew
        std::vector<Formula> parts{f};
        auto grid = guard_grid(ambient);
        parts.insert(parts.end(), grid.begin(), grid.end());
        return fold_binary(Formula::BinOp::And, parts);
      }
      case Formula::Kind::Not: {
        Formula inner = Formula::negate(walk(f.sub(), ambient));
        if (ambient.empty()) return inner;
        std::vector<Formula> parts{std::move(inner)};
        auto grid = guard_grid(ambient);
        parts.insert(parts.end(), grid.begin(), grid.end());
        return fold_binary(Formula::BinOp::And, parts);
      }
      case Formula::Kind::Bin:
        return Formula::binary(f.bin_op(), walk(f.bin_lhs(), ambient), walk(f.bin_rhs(), ambient));
      case Formula::Kind::Quant: {
        Variable v = f.quant_var();
        Formula body = f.body();
        if (std::find(ambient.begin(), ambient.end(), v) != ambient.end()) {
          // The binder shadows an ambient variable; rename it apart so the
          // guards below cannot capture.
          Variable renamed = fresh.next();
          body = rename_free(body, v, renamed);
          v = renamed;
        }
        std::vector<Variable> extended{v};
        extended.insert(extended.end(), ambient.begin(), ambient.end());
        Formula inner = walk(body, extended);
        std::vector<Formula> guard;
        for (Variable u : ambient) guard.push_back(e_link(v, u));
        guard.push_back(witness(v));
        if (f.quant() == Formula::Quantifier::Exists) {
          guard.push_back(std::move(inner));
          return Formula::exists(v, fold_binary(Formula::BinOp::And, guard));
        }
        return Formula::forall(v, Formula::impl(fold_binary(Formula::BinOp::And, guard), std::move(inner)));
      }
    }
    return f;
  }
};

}  // namespace

Formula relativize(const Formula& f, const Signature& sig, const std::string& e_symbol, const Formula& sigma) {
  if (!sig.has(e_symbol) || sig.arity(e_symbol) != 2)
    fail("ArityError", e_symbol + " must be a binary symbol of the target signature");
  std::vector<Variable> sigma_free = free_variables(sigma);
  if (sigma_free.size() != 1)
    fail("SigmaArity", "sigma must have exactly one free variable, got " + std::to_string(sigma_free.size()));

  Relativizer rel{e_symbol, sigma, Variable{0}, FreshVariables(f, sigma)};
  rel.y = rel.fresh.next();
  rel.sigma_of_y = rename_free(sigma, sigma_free.front(), rel.y);
  return rel.walk(f, free_variables(f));
}

// ------------------------------------------------------------------ file IO

NamedFamily read_family(std::istream& in) {
  // Split off `family` header lines, feed the rest to the structure reader.
  std::ostringstream blocks;
  std::string header;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = line;
    if (auto hash = stripped.find('#'); hash != std::string::npos) stripped.erase(hash);
    std::istringstream probe(stripped);
    std::string kw;
    if (probe >> kw && kw == "family") {
      if (!header.empty()) fail("FormatError", "line " + std::to_string(lineno) + ": second family header");
      header = stripped;
      continue;
    }
    blocks << line << "\n";
  }
  if (header.empty()) fail("FormatError", "missing 'family <name> members ...' header");

  std::istringstream hs(header);
  std::string kw, name, memkw;
  hs >> kw >> name >> memkw;
  if (name.empty() || memkw != "members")
    fail("FormatError", "family header must read 'family <name> members <tag...>'");
  std::vector<std::string> tags;
  std::string tag;
  while (hs >> tag) tags.push_back(tag);
  if (tags.empty()) fail("FormatError", "family " + name + " lists no members");

  std::istringstream body(blocks.str());
  auto structures = read_structures(body);
  std::vector<FamilySpec::Member> members;
  for (const std::string& t : tags) {
    auto it = std::find_if(structures.begin(), structures.end(),
                           [&](const NamedStructure& s) { return s.name == t; });
    if (it == structures.end()) fail("FormatError", "family member " + t + " has no structure block");
    members.push_back({t, it->structure});
  }
  return {name, FamilySpec(std::move(members))};
}

void write_family(std::ostream& out, const NamedFamily& fam) {
  out << "family " << fam.name << " members";
  for (const auto& m : fam.family.members()) out << " " << m.tag;
  out << "\n";
  for (const auto& m : fam.family.members()) write_structure(out, m.tag, m.structure);
}

}  // namespace combi
