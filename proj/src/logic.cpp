#include "combi/logic.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <sstream>

namespace combi {

// ---------------------------------------------------------------- Signature

void Signature::add(const std::string& name, int arity) {
  if (arity < 1) fail("ArityError", "relation " + name + " declared with arity " + std::to_string(arity));
  if (has(name)) fail("DuplicateRelation", "relation " + name + " declared twice");
  rels_.push_back({name, arity});
}

bool Signature::has(const std::string& name) const {
  return std::any_of(rels_.begin(), rels_.end(), [&](const Relation& r) { return r.name == name; });
}

int Signature::arity(const std::string& name) const {
  for (const Relation& r : rels_)
    if (r.name == name) return r.arity;
  fail("UnknownSymbol", "relation " + name + " not in signature");
}

bool Signature::operator==(const Signature& other) const {
  if (rels_.size() != other.rels_.size()) return false;
  auto key = [](const Signature& s) {
    std::map<std::string, int> m;
    for (const Relation& r : s.rels_) m[r.name] = r.arity;
    return m;
  };
  return key(*this) == key(other);
}

Signature Signature::merged(const Signature& a, const Signature& b) {
  Signature out = a;
  for (const Relation& r : b.rels_) {
    if (out.has(r.name)) {
      if (out.arity(r.name) != r.arity)
        fail("SignatureMismatch", "relation " + r.name + " used with arities " +
                                      std::to_string(out.arity(r.name)) + " and " + std::to_string(r.arity));
    } else {
      out.rels_.push_back(r);
    }
  }
  return out;
}

// ------------------------------------------------------------------ Formula

struct Formula::Node {
  Kind kind;
  std::string rel;              // Atom
  std::vector<Variable> args;   // Atom
  Variable a{0}, b{0};          // Eq endpoints; Quant var in `a`
  BinOp op{};
  Quantifier q{};
  std::vector<Formula> kids;    // Not: 1, Bin: 2, Quant: 1
};

Formula Formula::atom(std::string rel, std::vector<Variable> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->rel = std::move(rel);
  n->args = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::eq(Variable lhs, Variable rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Eq;
  n->a = lhs;
  n->b = rhs;
  return Formula(std::move(n));
}

Formula Formula::negate(Formula sub) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->kids.push_back(std::move(sub));
  return Formula(std::move(n));
}

Formula Formula::binary(BinOp op, Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bin;
  n->op = op;
  n->kids.push_back(std::move(lhs));
  n->kids.push_back(std::move(rhs));
  return Formula(std::move(n));
}

Formula Formula::quantify(Quantifier q, Variable var, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Quant;
  n->q = q;
  n->a = var;
  n->kids.push_back(std::move(body));
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return n_->kind; }
const std::string& Formula::rel() const { assert(kind() == Kind::Atom); return n_->rel; }
const std::vector<Variable>& Formula::args() const { assert(kind() == Kind::Atom); return n_->args; }
Variable Formula::eq_lhs() const { assert(kind() == Kind::Eq); return n_->a; }
Variable Formula::eq_rhs() const { assert(kind() == Kind::Eq); return n_->b; }
const Formula& Formula::sub() const { assert(kind() == Kind::Not); return n_->kids[0]; }
Formula::BinOp Formula::bin_op() const { assert(kind() == Kind::Bin); return n_->op; }
const Formula& Formula::bin_lhs() const { assert(kind() == Kind::Bin); return n_->kids[0]; }
const Formula& Formula::bin_rhs() const { assert(kind() == Kind::Bin); return n_->kids[1]; }
Formula::Quantifier Formula::quant() const { assert(kind() == Kind::Quant); return n_->q; }
Variable Formula::quant_var() const { assert(kind() == Kind::Quant); return n_->a; }
const Formula& Formula::body() const { assert(kind() == Kind::Quant); return n_->kids[0]; }

bool Formula::operator==(const Formula& other) const {
  if (n_ == other.n_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Atom: return rel() == other.rel() && args() == other.args();
    case Kind::Eq: return eq_lhs() == other.eq_lhs() && eq_rhs() == other.eq_rhs();
    case Kind::Not: return sub() == other.sub();
    case Kind::Bin:
      return bin_op() == other.bin_op() && bin_lhs() == other.bin_lhs() && bin_rhs() == other.bin_rhs();
    case Kind::Quant:
      return quant() == other.quant() && quant_var() == other.quant_var() && body() == other.body();
  }
  return false;
}

// ------------------------------------------------------------------ queries

namespace {

void collect_free(const Formula& f, std::set<Variable>& bound, std::set<Variable>& seen,
                  std::vector<Variable>& out) {
  auto record = [&](Variable v) {
    if (!bound.count(v) && !seen.count(v)) {
      seen.insert(v);
      out.push_back(v);
    }
  };
  switch (f.kind()) {
    case Formula::Kind::Atom:
      for (Variable v : f.args()) record(v);
      break;
    case Formula::Kind::Eq:
      record(f.eq_lhs());
      record(f.eq_rhs());
      break;
    case Formula::Kind::Not:
      collect_free(f.sub(), bound, seen, out);
      break;
    case Formula::Kind::Bin:
      collect_free(f.bin_lhs(), bound, seen, out);
      collect_free(f.bin_rhs(), bound, seen, out);
      break;
    case Formula::Kind::Quant: {
      bool was_bound = bound.count(f.quant_var()) > 0;
      bound.insert(f.quant_var());
      collect_free(f.body(), bound, seen, out);
      if (!was_bound) bound.erase(f.quant_var());
      break;
    }
  }
}

}  // namespace

std::vector<Variable> free_variables(const Formula& f) {
  std::set<Variable> bound, seen;
  std::vector<Variable> out;
  collect_free(f, bound, seen, out);
  return out;
}

int quantifier_rank(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Eq: return 0;
    case Formula::Kind::Not: return quantifier_rank(f.sub());
    case Formula::Kind::Bin: return std::max(quantifier_rank(f.bin_lhs()), quantifier_rank(f.bin_rhs()));
    case Formula::Kind::Quant: return 1 + quantifier_rank(f.body());
  }
  return 0;
}

int node_count(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Eq: return 1;
    case Formula::Kind::Not: return 1 + node_count(f.sub());
    case Formula::Kind::Bin: return 1 + node_count(f.bin_lhs()) + node_count(f.bin_rhs());
    case Formula::Kind::Quant: return 1 + node_count(f.body());
  }
  return 0;
}

std::set<int> variable_indices(const Formula& f) {
  std::set<int> out;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    switch (g.kind()) {
      case Formula::Kind::Atom:
        for (Variable v : g.args()) out.insert(v.index);
        break;
      case Formula::Kind::Eq:
        out.insert(g.eq_lhs().index);
        out.insert(g.eq_rhs().index);
        break;
      case Formula::Kind::Not: self(self, g.sub()); break;
      case Formula::Kind::Bin:
        self(self, g.bin_lhs());
        self(self, g.bin_rhs());
        break;
      case Formula::Kind::Quant:
        out.insert(g.quant_var().index);
        self(self, g.body());
        break;
    }
  };
  walk(walk, f);
  return out;
}

Formula rename_free(const Formula& f, Variable from, Variable to) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::vector<Variable> args = f.args();
      for (Variable& v : args)
        if (v == from) v = to;
      return Formula::atom(f.rel(), std::move(args));
    }
    case Formula::Kind::Eq: {
      Variable l = f.eq_lhs() == from ? to : f.eq_lhs();
      Variable r = f.eq_rhs() == from ? to : f.eq_rhs();
      return Formula::eq(l, r);
    }
    case Formula::Kind::Not: return Formula::negate(rename_free(f.sub(), from, to));
    case Formula::Kind::Bin:
      return Formula::binary(f.bin_op(), rename_free(f.bin_lhs(), from, to), rename_free(f.bin_rhs(), from, to));
    case Formula::Kind::Quant:
      if (f.quant_var() == from) return f;  // shadowed below this binder
      return Formula::quantify(f.quant(), f.quant_var(), rename_free(f.body(), from, to));
  }
  return f;
}

Formula fold_binary(Formula::BinOp op, const std::vector<Formula>& parts) {
  assert(!parts.empty());
  Formula acc = parts.front();
  for (size_t i = 1; i < parts.size(); ++i) acc = Formula::binary(op, acc, parts[i]);
  return acc;
}

// ------------------------------------------------------------------ printer

namespace {

// Precedence levels: -> 1, | 2, & 3, ! 4, atoms/equality 5.
// Quantifiers swallow everything to their right, so a quantified child of
// any connective is parenthesized.
int level(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Quant: return 0;
    case Formula::Kind::Bin:
      switch (f.bin_op()) {
        case Formula::BinOp::Implies: return 1;
        case Formula::BinOp::Or: return 2;
        case Formula::BinOp::And: return 3;
      }
      return 1;
    case Formula::Kind::Not: return 4;
    case Formula::Kind::Atom:
    case Formula::Kind::Eq: return 5;
  }
  return 5;
}

void print(const Formula& f, int min_level, std::string& out) {
  if (level(f) < min_level) {
    out += '(';
    print(f, 0, out);
    out += ')';
    return;
  }
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      out += f.rel();
      out += '(';
      for (size_t i = 0; i < f.args().size(); ++i) {
        if (i) out += ',';
        out += f.args()[i].name();
      }
      out += ')';
      break;
    }
    case Formula::Kind::Eq:
      out += f.eq_lhs().name();
      out += " = ";
      out += f.eq_rhs().name();
      break;
    case Formula::Kind::Not:
      out += '!';
      // `!x1 = x2` parses fine but reads badly; keep equality bracketed.
      if (f.sub().kind() == Formula::Kind::Eq) {
        out += '(';
        print(f.sub(), 0, out);
        out += ')';
      } else {
        print(f.sub(), 4, out);
      }
      break;
    case Formula::Kind::Bin: {
      const char* tok = f.bin_op() == Formula::BinOp::And ? " & "
                        : f.bin_op() == Formula::BinOp::Or ? " | "
                                                           : " -> ";
      int lv = level(f);
      if (f.bin_op() == Formula::BinOp::Implies) {
        print(f.bin_lhs(), lv + 1, out);  // right-associative
        out += tok;
        print(f.bin_rhs(), lv, out);
      } else {
        print(f.bin_lhs(), lv, out);  // left-associative
        out += tok;
        print(f.bin_rhs(), lv + 1, out);
      }
      break;
    }
    case Formula::Kind::Quant:
      out += f.quant() == Formula::Quantifier::Exists ? "E " : "A ";
      out += f.quant_var().name();
      out += " . ";
      print(f.body(), 0, out);
      break;
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

// ------------------------------------------------------------------- parser

namespace {

struct Token {
  enum Type { Ident, LParen, RParen, Comma, Dot, Bang, Amp, Pipe, Arrow, Equals, End } type;
  std::string text;
  size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Ident, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Token::LParen, "(", i}); ++i; break;
      case ')': out.push_back({Token::RParen, ")", i}); ++i; break;
      case ',': out.push_back({Token::Comma, ",", i}); ++i; break;
      case '.': out.push_back({Token::Dot, ".", i}); ++i; break;
      case '!': out.push_back({Token::Bang, "!", i}); ++i; break;
      case '&': out.push_back({Token::Amp, "&", i}); ++i; break;
      case '|': out.push_back({Token::Pipe, "|", i}); ++i; break;
      case '=': out.push_back({Token::Equals, "=", i}); ++i; break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Token::Arrow, "->", i});
          i += 2;
          break;
        }
        [[fallthrough]];
      default:
        fail("SyntaxError", "position " + std::to_string(i + 1) + ": unexpected character '" +
                                std::string(1, c) + "'");
    }
  }
  out.push_back({Token::End, "", s.size()});
  return out;
}

bool variable_shaped(const std::string& t) {
  if (t.size() < 2 || t[0] != 'x') return false;
  if (t[1] == '0') return false;
  return std::all_of(t.begin() + 1, t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Parser {
public:
  Parser(std::vector<Token> toks, const Signature* sig, Signature* inferred)
      : toks_(std::move(toks)), sig_(sig), inferred_(inferred) {}

  Formula run() {
    Formula f = formula();
    expect(Token::End, "end of input");
    return f;
  }

private:
  std::vector<Token> toks_;
  size_t at_ = 0;
  const Signature* sig_;   // strict mode when set
  Signature* inferred_;    // lenient mode when set

  const Token& peek(size_t ahead = 0) const { return toks_[std::min(at_ + ahead, toks_.size() - 1)]; }
  Token take() { return toks_[at_ == toks_.size() - 1 ? at_ : at_++]; }

  [[noreturn]] void syntax(const std::string& expected) {
    const Token& t = peek();
    std::string found = t.type == Token::End ? "end of input" : "'" + t.text + "'";
    fail("SyntaxError", "position " + std::to_string(t.pos + 1) + ": expected " + expected + ", found " + found);
  }

  void expect(Token::Type type, const std::string& what) {
    if (peek().type != type) syntax(what);
    take();
  }

  Variable variable() {
    if (peek().type != Token::Ident || !variable_shaped(peek().text)) syntax("a variable (x1, x2, ...)");
    Token t = take();
    return Variable{std::stoi(t.text.substr(1))};
  }

  Formula formula() {  // -> level, right associative
    Formula lhs = or_level();
    if (peek().type == Token::Arrow) {
      take();
      return Formula::impl(std::move(lhs), formula());
    }
    return lhs;
  }

  Formula or_level() {
    Formula acc = and_level();
    while (peek().type == Token::Pipe) {
      take();
      acc = Formula::disj(std::move(acc), and_level());
    }
    return acc;
  }

  Formula and_level() {
    Formula acc = unary();
    while (peek().type == Token::Amp) {
      take();
      acc = Formula::conj(std::move(acc), unary());
    }
    return acc;
  }

  Formula unary() {
    if (peek().type == Token::Bang) {
      take();
      return Formula::negate(unary());
    }
    // Quantifier: bare A/E followed by anything but '('; body is maximal.
    if (peek().type == Token::Ident && (peek().text == "A" || peek().text == "E") &&
        peek(1).type != Token::LParen) {
      bool universal = peek().text == "A";
      take();
      Variable v = variable();
      expect(Token::Dot, "'.'");
      Formula b = formula();
      return universal ? Formula::forall(v, std::move(b)) : Formula::exists(v, std::move(b));
    }
    return primary();
  }

  Formula primary() {
    if (peek().type == Token::LParen) {
      take();
      Formula f = formula();
      expect(Token::RParen, "')'");
      return f;
    }
    if (peek().type != Token::Ident) syntax("a formula");
    if (peek(1).type == Token::LParen) return atom();
    Variable lhs = variable();
    expect(Token::Equals, "'='");
    Variable rhs = variable();
    return Formula::eq(lhs, rhs);
  }

  Formula atom() {
    Token name = take();
    expect(Token::LParen, "'('");
    std::vector<Variable> args;
    args.push_back(variable());
    while (peek().type == Token::Comma) {
      take();
      args.push_back(variable());
    }
    expect(Token::RParen, "')'");
    int n = static_cast<int>(args.size());
    if (sig_) {
      if (!sig_->has(name.text)) fail("UnknownSymbol", "relation " + name.text + " not in signature");
      if (sig_->arity(name.text) != n)
        fail("ArityMismatch", "relation " + name.text + " has arity " + std::to_string(sig_->arity(name.text)) +
                                  ", got " + std::to_string(n) + " arguments");
    } else {
      if (!inferred_->has(name.text)) {
        inferred_->add(name.text, n);
      } else if (inferred_->arity(name.text) != n) {
        fail("ArityMismatch", "relation " + name.text + " used with " +
                                  std::to_string(inferred_->arity(name.text)) + " and " + std::to_string(n) +
                                  " arguments");
      }
    }
    return Formula::atom(name.text, std::move(args));
  }
};

}  // namespace

Formula parse_formula(const std::string& text, const Signature& sig) {
  return Parser(tokenize(text), &sig, nullptr).run();
}

std::pair<Formula, Signature> parse_formula_lenient(const std::string& text) {
  Signature inferred;
  Formula f = Parser(tokenize(text), nullptr, &inferred).run();
  return {std::move(f), std::move(inferred)};
}

Signature parse_signature(const std::string& text) {
  Signature sig;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw != "rel")
      fail("FormatError", "line " + std::to_string(lineno) + ": expected 'rel Name/arity'");
    std::string decl;
    if (!(ls >> decl)) fail("FormatError", "line " + std::to_string(lineno) + ": missing declaration");
    auto slash = decl.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= decl.size())
      fail("FormatError", "line " + std::to_string(lineno) + ": expected Name/arity, got '" + decl + "'");
    int arity = 0;
    try {
      arity = std::stoi(decl.substr(slash + 1));
    } catch (const std::exception&) {
      fail("FormatError", "line " + std::to_string(lineno) + ": bad arity in '" + decl + "'");
    }
    sig.add(decl.substr(0, slash), arity);
  }
  return sig;
}

}  // namespace combi
