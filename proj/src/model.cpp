#include "combi/model.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace combi {

// ---------------------------------------------------------- FiniteStructure

FiniteStructure::FiniteStructure(Signature sig, int size) : sig_(std::move(sig)), size_(size) {
  if (size < 0) fail("FormatError", "negative universe size");
  for (const auto& r : sig_.relations()) interp_[r.name];  // present, empty
}

void FiniteStructure::add_tuple(const std::string& rel, const std::vector<int>& tuple) {
  if (!sig_.has(rel)) fail("UnknownSymbol", "relation " + rel + " not in signature");
  if (static_cast<int>(tuple.size()) != sig_.arity(rel))
    fail("ArityMismatch", "tuple of length " + std::to_string(tuple.size()) + " for " + rel + "/" +
                              std::to_string(sig_.arity(rel)));
  for (int e : tuple)
    if (e < 0 || e >= size_)
      fail("ElementOutOfRange", "element " + std::to_string(e) + " outside universe of size " +
                                    std::to_string(size_));
  interp_[rel].insert(tuple);
}

bool FiniteStructure::holds(const std::string& rel, const std::vector<int>& tuple) const {
  auto it = interp_.find(rel);
  if (it == interp_.end()) fail("SignatureMismatch", "relation " + rel + " not interpreted");
  return it->second.count(tuple) > 0;
}

const std::set<std::vector<int>>& FiniteStructure::tuples(const std::string& rel) const {
  auto it = interp_.find(rel);
  if (it == interp_.end()) fail("SignatureMismatch", "relation " + rel + " not interpreted");
  return it->second;
}

bool FiniteStructure::operator==(const FiniteStructure& other) const {
  return size_ == other.size_ && sig_ == other.sig_ && interp_ == other.interp_;
}

// ----------------------------------------------------------------- evaluate

namespace {

bool eval_rec(const FiniteStructure& a, const Formula& f, Assignment& env) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      if (!a.sig().has(f.rel()))
        fail("SignatureMismatch", "relation " + f.rel() + " not in structure signature");
      if (a.sig().arity(f.rel()) != static_cast<int>(f.args().size()))
        fail("SignatureMismatch", "relation " + f.rel() + " used with wrong arity");
      std::vector<int> tuple;
      tuple.reserve(f.args().size());
      for (Variable v : f.args()) {
        auto it = env.find(v);
        if (it == env.end()) fail("UnboundVariable", v.name() + " has no value");
        tuple.push_back(it->second);
      }
      return a.holds(f.rel(), tuple);
    }
    case Formula::Kind::Eq: {
      auto l = env.find(f.eq_lhs());
      auto r = env.find(f.eq_rhs());
      if (l == env.end()) fail("UnboundVariable", f.eq_lhs().name() + " has no value");
      if (r == env.end()) fail("UnboundVariable", f.eq_rhs().name() + " has no value");
      return l->second == r->second;
    }
    case Formula::Kind::Not: return !eval_rec(a, f.sub(), env);
    case Formula::Kind::Bin: {
      switch (f.bin_op()) {
        case Formula::BinOp::And: return eval_rec(a, f.bin_lhs(), env) && eval_rec(a, f.bin_rhs(), env);
        case Formula::BinOp::Or: return eval_rec(a, f.bin_lhs(), env) || eval_rec(a, f.bin_rhs(), env);
        case Formula::BinOp::Implies: return !eval_rec(a, f.bin_lhs(), env) || eval_rec(a, f.bin_rhs(), env);
      }
      return false;
    }
    case Formula::Kind::Quant: {
      Variable v = f.quant_var();
      auto prev = env.find(v);
      std::optional<int> saved;
      if (prev != env.end()) saved = prev->second;
      bool universal = f.quant() == Formula::Quantifier::Forall;
      bool result = universal;
      for (int e = 0; e < a.size(); ++e) {
        env[v] = e;
        bool sub = eval_rec(a, f.body(), env);
        if (universal && !sub) { result = false; break; }
        if (!universal && sub) { result = true; break; }
      }
      if (saved)
        env[v] = *saved;
      else
        env.erase(v);
      return result;
    }
  }
  return false;
}

}  // namespace

bool evaluate(const FiniteStructure& a, const Formula& f, const Assignment& assignment) {
  Assignment env = assignment;
  return eval_rec(a, f, env);
}

// -------------------------------------------------------------- isomorphism

namespace {

// Per-element color: for every relation and argument position, how many
// tuples put the element there. Cheap invariant that prunes the search.
std::vector<std::vector<int>> colors(const FiniteStructure& s) {
  std::vector<std::vector<int>> out(s.size());
  for (const auto& r : s.sig().relations()) {
    for (auto& c : out) c.resize(c.size() + r.arity, 0);
  }
  int base = 0;
  for (const auto& r : s.sig().relations()) {
    for (const auto& t : s.tuples(r.name))
      for (int p = 0; p < r.arity; ++p) ++out[t[p]][base + p];
    base += r.arity;
  }
  return out;
}

struct IsoSearch {
  const FiniteStructure& a;
  const FiniteStructure& b;
  std::vector<std::vector<int>> ca, cb;
  std::vector<int> map;      // a -> b, -1 unset
  std::vector<bool> used;    // b side
  bool collect_all = false;
  std::vector<std::vector<int>> found;

  IsoSearch(const FiniteStructure& a_, const FiniteStructure& b_)
      : a(a_), b(b_), ca(colors(a_)), cb(colors(b_)), map(a_.size(), -1), used(b_.size(), false) {}

  // Checks tuples all of whose entries are already mapped and that involve
  // the freshly mapped element v (forward) or its image (backward).
  bool consistent(int v) const {
    for (const auto& r : a.sig().relations()) {
      for (const auto& t : a.tuples(r.name)) {
        bool touches = false, complete = true;
        for (int e : t) {
          if (e == v) touches = true;
          if (map[e] < 0) { complete = false; break; }
        }
        if (!touches || !complete) continue;
        std::vector<int> img(t.size());
        for (size_t i = 0; i < t.size(); ++i) img[i] = map[t[i]];
        if (!b.holds(r.name, img)) return false;
      }
      int w = map[v];
      for (const auto& t : b.tuples(r.name)) {
        bool touches = false, complete = true;
        std::vector<int> pre(t.size());
        for (size_t i = 0; i < t.size(); ++i) {
          if (t[i] == w) touches = true;
          auto it = std::find(map.begin(), map.end(), t[i]);
          if (it == map.end()) { complete = false; break; }
          pre[i] = static_cast<int>(it - map.begin());
        }
        if (!touches || !complete) continue;
        if (!a.holds(r.name, pre)) return false;
      }
    }
    return true;
  }

  bool extend(int v) {
    if (v == a.size()) {
      found.push_back(map);
      return true;
    }
    for (int w = 0; w < b.size(); ++w) {
      if (used[w] || ca[v] != cb[w]) continue;
      map[v] = w;
      used[w] = true;
      if (consistent(v) && extend(v + 1) && !collect_all) return true;
      map[v] = -1;
      used[w] = false;
    }
    return !found.empty() && !collect_all;
  }
};

}  // namespace

std::optional<std::vector<int>> are_isomorphic(const FiniteStructure& a, const FiniteStructure& b) {
  if (!(a.sig() == b.sig())) fail("SignatureMismatch", "structures have different signatures");
  if (a.size() != b.size()) return std::nullopt;
  for (const auto& r : a.sig().relations())
    if (a.tuples(r.name).size() != b.tuples(r.name).size()) return std::nullopt;
  IsoSearch search(a, b);
  search.extend(0);
  if (search.found.empty()) return std::nullopt;
  return search.found.front();
}

std::vector<std::vector<int>> all_automorphisms(const FiniteStructure& a) {
  IsoSearch search(a, a);
  search.collect_all = true;
  search.extend(0);
  return search.found;
}

long long orbit_count(const FiniteStructure& a, int n) {
  if (a.size() == 0) fail("EmptyUniverse", "orbit count needs a nonempty universe");
  if (n < 1) fail("ArityError", "orbit count needs n >= 1");
  auto autos = all_automorphisms(a);
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= a.size();

  auto encode = [&](const std::vector<int>& t) {
    long long code = 0;
    for (int e : t) code = code * a.size() + e;
    return code;
  };
  std::vector<bool> seen(static_cast<size_t>(total), false);
  long long orbits = 0;
  std::vector<int> tuple(n, 0);
  for (long long code = 0; code < total; ++code) {
    if (seen[static_cast<size_t>(code)]) {
      // advance tuple counter
    } else {
      ++orbits;
      std::vector<int> img(n);
      for (const auto& g : autos) {
        for (int i = 0; i < n; ++i) img[i] = g[tuple[i]];
        seen[static_cast<size_t>(encode(img))] = true;
      }
    }
    for (int i = n - 1; i >= 0; --i) {
      if (++tuple[i] < a.size()) break;
      tuple[i] = 0;
    }
  }
  return orbits;
}

// ------------------------------------------------------------------ EF game

namespace {

using Position = std::vector<std::pair<int, int>>;  // sorted pairs (a-elem, b-elem)

// The fresh pair keeps the position a partial isomorphism: injective both
// ways, and all relation tuples over mapped elements agree in both
// structures.
bool extension_ok(const FiniteStructure& a, const FiniteStructure& b, const Position& pos, int x, int y) {
  for (const auto& [px, py] : pos) {
    if ((px == x) != (py == y)) return false;
    if (px == x && py == y) return true;  // repeated pair, nothing new
  }
  Position ext = pos;
  ext.emplace_back(x, y);
  for (const auto& r : a.sig().relations()) {
    int k = r.arity;
    std::vector<int> idx(k, 0);
    while (true) {
      std::vector<int> ta(k), tb(k);
      bool involves_new = false;
      for (int i = 0; i < k; ++i) {
        ta[i] = ext[idx[i]].first;
        tb[i] = ext[idx[i]].second;
        if (idx[i] == static_cast<int>(ext.size()) - 1) involves_new = true;
      }
      if (involves_new && a.holds(r.name, ta) != b.holds(r.name, tb)) return false;
      int p = k - 1;
      for (; p >= 0; --p) {
        if (++idx[p] < static_cast<int>(ext.size())) break;
        idx[p] = 0;
      }
      if (p < 0) break;
    }
  }
  return true;
}

struct EfSolver {
  const FiniteStructure& a;
  const FiniteStructure& b;
  std::map<std::pair<Position, int>, bool> memo;

  bool duplicator_wins(Position pos, int r) {
    if (r == 0) return true;
    std::sort(pos.begin(), pos.end());
    auto key = std::make_pair(pos, r);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool wins = true;
    // Spoiler picks a side and an element; Duplicator needs some reply.
    for (int side = 0; side < 2 && wins; ++side) {
      const FiniteStructure& s = side == 0 ? a : b;
      const FiniteStructure& t = side == 0 ? b : a;
      for (int e = 0; e < s.size() && wins; ++e) {
        bool reply = false;
        for (int d = 0; d < t.size() && !reply; ++d) {
          int x = side == 0 ? e : d;
          int y = side == 0 ? d : e;
          if (!extension_ok(a, b, pos, x, y)) continue;
          Position next = pos;
          if (std::find(next.begin(), next.end(), std::make_pair(x, y)) == next.end())
            next.emplace_back(x, y);
          if (duplicator_wins(std::move(next), r - 1)) reply = true;
        }
        if (!reply) wins = false;
      }
    }
    memo[key] = wins;
    return wins;
  }
};

}  // namespace

bool ef_equivalent(const FiniteStructure& a, const FiniteStructure& b, int r) {
  if (!(a.sig() == b.sig())) fail("SignatureMismatch", "structures have different signatures");
  if (r < 0) fail("ArityError", "round count must be nonnegative");
  EfSolver solver{a, b, {}};
  return solver.duplicator_wins({}, r);
}

// ------------------------------------------------------- sentence streaming

std::vector<Formula> enumerate_sentences(const Signature& sig, int rank_bound, int size_bound) {
  if (rank_bound < 0 || size_bound < 0) fail("ArityError", "bounds must be nonnegative");
  // table[v][s][r]: formulas with free variables among x1..xv, exactly s
  // AST nodes and exact quantifier rank r. A quantifier in context v
  // binds x(v+1), so contexts never exceed rank_bound.
  auto table = std::vector<std::vector<std::vector<std::vector<Formula>>>>(
      rank_bound + 1,
      std::vector<std::vector<std::vector<Formula>>>(size_bound + 1,
                                                     std::vector<std::vector<Formula>>(rank_bound + 1)));
  for (int s = 1; s <= size_bound; ++s) {
    for (int v = 0; v <= rank_bound; ++v) {
      for (int r = 0; r <= rank_bound - v; ++r) {
        auto& slot = table[v][s][r];
        if (s == 1 && r == 0) {
          for (const auto& rel : sig.relations()) {
            std::vector<int> idx(rel.arity, 1);
            if (v == 0) continue;
            while (true) {
              std::vector<Variable> args;
              for (int i : idx) args.push_back(Variable{i});
              slot.push_back(Formula::atom(rel.name, std::move(args)));
              int p = rel.arity - 1;
              for (; p >= 0; --p) {
                if (++idx[p] <= v) break;
                idx[p] = 1;
              }
              if (p < 0) break;
            }
          }
          for (int i = 1; i <= v; ++i)
            for (int j = 1; j <= v; ++j) slot.push_back(Formula::eq(Variable{i}, Variable{j}));
          continue;
        }
        if (s == 1) continue;
        for (const Formula& f : table[v][s - 1][r]) slot.push_back(Formula::negate(f));
        for (Formula::BinOp op : {Formula::BinOp::And, Formula::BinOp::Or, Formula::BinOp::Implies}) {
          for (int s1 = 1; s1 <= s - 2; ++s1) {
            int s2 = s - 1 - s1;
            // max(r1, r2) == r: either r2 == r, or r1 == r and r2 < r.
            for (int r1 = 0; r1 <= r; ++r1)
              for (const Formula& l : table[v][s1][r1])
                for (const Formula& g : table[v][s2][r]) slot.push_back(Formula::binary(op, l, g));
            for (int r2 = 0; r2 < r; ++r2)
              for (const Formula& l : table[v][s1][r])
                for (const Formula& g : table[v][s2][r2]) slot.push_back(Formula::binary(op, l, g));
          }
        }
        if (r >= 1 && v + 1 <= rank_bound) {
          Variable bound{v + 1};
          for (Formula::Quantifier q : {Formula::Quantifier::Exists, Formula::Quantifier::Forall})
            for (const Formula& f : table[v + 1][s - 1][r - 1]) slot.push_back(Formula::quantify(q, bound, f));
        }
      }
    }
  }
  std::vector<Formula> out;
  for (int s = 1; s <= size_bound; ++s)
    for (int r = 0; r <= rank_bound; ++r)
      for (const Formula& f : table[0][s][r]) out.push_back(f);
  return out;
}

// ------------------------------------------------------------------ file IO

namespace {

std::vector<int> parse_tuple(const std::string& tok, int lineno) {
  if (tok.size() < 3 || tok.front() != '(' || tok.back() != ')')
    fail("FormatError", "line " + std::to_string(lineno) + ": expected tuple like (0,1), got '" + tok + "'");
  std::vector<int> out;
  std::string body = tok.substr(1, tok.size() - 2);
  std::istringstream in(body);
  std::string field;
  while (std::getline(in, field, ',')) {
    try {
      out.push_back(std::stoi(field));
    } catch (const std::exception&) {
      fail("FormatError", "line " + std::to_string(lineno) + ": bad element '" + field + "'");
    }
  }
  if (out.empty())
    fail("FormatError", "line " + std::to_string(lineno) + ": empty tuple");
  return out;
}

}  // namespace

std::vector<NamedStructure> read_structures(std::istream& in) {
  std::vector<NamedStructure> out;
  std::set<std::string> names;

  std::string line;
  int lineno = 0;
  bool in_block = false;
  std::string name;
  Signature sig;
  std::optional<FiniteStructure> current;

  auto flush = [&](int at_line) {
    if (!current) fail("FormatError", "line " + std::to_string(at_line) + ": structure lacks a universe line");
    out.push_back({name, std::move(*current)});
    current.reset();
    in_block = false;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "structure") {
      if (in_block) fail("FormatError", "line " + std::to_string(lineno) + ": nested structure block");
      if (!(ls >> name)) fail("FormatError", "line " + std::to_string(lineno) + ": structure needs a name");
      if (!names.insert(name).second)
        fail("FormatError", "line " + std::to_string(lineno) + ": duplicate structure name " + name);
      in_block = true;
      sig = Signature();
      current.reset();
      continue;
    }
    if (!in_block) fail("FormatError", "line " + std::to_string(lineno) + ": '" + kw + "' outside a block");
    if (kw == "sig") {
      std::string relkw, decl;
      if (!(ls >> relkw >> decl) || relkw != "rel")
        fail("FormatError", "line " + std::to_string(lineno) + ": expected 'sig rel Name/arity'");
      auto slash = decl.find('/');
      if (slash == std::string::npos)
        fail("FormatError", "line " + std::to_string(lineno) + ": expected Name/arity");
      int arity = 0;
      try {
        arity = std::stoi(decl.substr(slash + 1));
      } catch (const std::exception&) {
        fail("FormatError", "line " + std::to_string(lineno) + ": bad arity");
      }
      sig.add(decl.substr(0, slash), arity);
      continue;
    }
    if (kw == "universe") {
      int k = -1;
      if (!(ls >> k) || k < 0) fail("FormatError", "line " + std::to_string(lineno) + ": bad universe size");
      current.emplace(sig, k);
      continue;
    }
    if (kw == "rel") {
      if (!current)
        fail("FormatError", "line " + std::to_string(lineno) + ": rel line before universe line");
      std::string relname;
      if (!(ls >> relname) || relname.empty() || relname.back() != ':')
        fail("FormatError", "line " + std::to_string(lineno) + ": expected 'rel Name: tuples'");
      relname.pop_back();
      std::string tok;
      while (ls >> tok) current->add_tuple(relname, parse_tuple(tok, lineno));
      continue;
    }
    if (kw == "end") {
      flush(lineno);
      continue;
    }
    fail("FormatError", "line " + std::to_string(lineno) + ": unknown keyword '" + kw + "'");
  }
  if (in_block) fail("FormatError", "unterminated structure block for " + name);
  return out;
}

void write_structure(std::ostream& out, const std::string& name, const FiniteStructure& s) {
  out << "structure " << name << "\n";
  for (const auto& r : s.sig().relations()) out << "sig rel " << r.name << "/" << r.arity << "\n";
  out << "universe " << s.size() << "\n";
  for (const auto& r : s.sig().relations()) {
    const auto& ts = s.tuples(r.name);
    if (ts.empty()) continue;
    out << "rel " << r.name << ":";
    for (const auto& t : ts) {
      out << " (";
      for (size_t i = 0; i < t.size(); ++i) {
        if (i) out << ",";
        out << t[i];
      }
      out << ")";
    }
    out << "\n";
  }
  out << "end\n";
}

}  // namespace combi
