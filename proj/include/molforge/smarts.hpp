//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "molforge/mol.hpp"

namespace molforge {

// --- Pattern predicate trees ----------------------------------------------

struct AtomPrim {
  enum class Kind {
    Any,               // *
    AnyAromatic,       // a
    AnyAliphatic,      // A
    Element,           // #n
    AliphaticElement,  // C, [N], ...
    AromaticElement,   // c, [n], ...
    Charge,
    Degree,            // D<n>: heavy-atom degree
    TotalConn,         // X<n>: degree + hydrogens
    HCount,            // H<n>: total hydrogens
    InRing,            // R / R<n>
    NotInRing,         // R0
  };
  Kind kind = Kind::Any;
  int value = 0;
};

struct BondPrim {
  enum class Kind { Single, Double, Triple, Aromatic, Ring, Any };
  Kind kind = Kind::Any;
};

template <typename Prim>
struct Expr {
  enum class Op { Leaf, And, Or };
  Op op = Op::Leaf;
  bool negated = false;  // applies to leaves
  Prim prim{};
  std::vector<Expr> children;

  static Expr leaf(Prim p, bool neg = false) {
    Expr e;
    e.op = Op::Leaf;
    e.prim = p;
    e.negated = neg;
    return e;
  }
  static Expr make(Op o, std::vector<Expr> kids) {
    if (kids.size() == 1) return std::move(kids.front());
    Expr e;
    e.op = o;
    e.children = std::move(kids);
    return e;
  }
};

using AtomExpr = Expr<AtomPrim>;
using BondExpr = Expr<BondPrim>;

struct PatternBond {
  int a = 0;
  int b = 0;
  BondExpr expr;
};

// Parsed substructure query over the supported SMARTS subset.
struct Pattern {
  std::string source;
  std::vector<AtomExpr> atoms;
  std::vector<PatternBond> bonds;
  std::vector<std::vector<int>> adj;  // atom -> bond indices

  size_t atom_count() const { return atoms.size(); }
};

namespace detail {

inline int ring_membership(const Molecule& m, int atom) {
  int n = 0;
  for (const auto& ring : m.rings().atom_rings)
    for (int a : ring)
      if (a == atom) ++n;
  return n;
}

inline bool eval_atom_prim(const AtomPrim& p, const Molecule& m, int i) {
  const Atom& a = m.atom(i);
  switch (p.kind) {
    case AtomPrim::Kind::Any: return true;
    case AtomPrim::Kind::AnyAromatic: return a.aromatic;
    case AtomPrim::Kind::AnyAliphatic: return !a.aromatic;
    case AtomPrim::Kind::Element: return a.element == p.value;
    case AtomPrim::Kind::AliphaticElement: return a.element == p.value && !a.aromatic;
    case AtomPrim::Kind::AromaticElement: return a.element == p.value && a.aromatic;
    case AtomPrim::Kind::Charge: return a.formal_charge == p.value;
    case AtomPrim::Kind::Degree: return m.degree(i) == p.value;
    case AtomPrim::Kind::TotalConn: return m.degree(i) + a.hydrogens == p.value;
    case AtomPrim::Kind::HCount: return a.hydrogens == p.value;
    case AtomPrim::Kind::InRing:
      return p.value <= 1 ? a.in_ring : ring_membership(m, i) >= p.value;
    case AtomPrim::Kind::NotInRing: return !a.in_ring;
  }
  return false;
}

inline bool eval_bond_prim(const BondPrim& p, const Bond& b) {
  switch (p.kind) {
    case BondPrim::Kind::Single: return b.order == BondOrder::Single;
    case BondPrim::Kind::Double: return b.order == BondOrder::Double;
    case BondPrim::Kind::Triple: return b.order == BondOrder::Triple;
    case BondPrim::Kind::Aromatic: return b.order == BondOrder::Aromatic;
    case BondPrim::Kind::Ring: return b.in_ring;
    case BondPrim::Kind::Any: return true;
  }
  return false;
}

template <typename Prim, typename Eval>
inline bool eval_expr(const Expr<Prim>& e, Eval&& leaf_eval) {
  switch (e.op) {
    case Expr<Prim>::Op::Leaf: {
      bool v = leaf_eval(e.prim);
      return e.negated ? !v : v;
    }
    case Expr<Prim>::Op::And:
      for (const auto& c : e.children)
        if (!eval_expr(c, leaf_eval)) return false;
      return true;
    case Expr<Prim>::Op::Or:
      for (const auto& c : e.children)
        if (eval_expr(c, leaf_eval)) return true;
      return false;
  }
  return false;
}

}  // namespace detail

inline bool atom_matches(const AtomExpr& e, const Molecule& m, int atom) {
  return detail::eval_expr(e, [&](const AtomPrim& p) { return detail::eval_atom_prim(p, m, atom); });
}

inline bool bond_matches(const BondExpr& e, const Molecule& m, int bond) {
  const Bond& b = m.bond(bond);
  return detail::eval_expr(e, [&](const BondPrim& p) { return detail::eval_bond_prim(p, b); });
}

namespace detail {

struct SmartsParser {
  std::string_view text;
  size_t pos = 0;

  std::vector<AtomExpr> atoms;
  std::vector<PatternBond> bonds;

  [[noreturn]] void fail(const std::string& reason, size_t at) const {
    throw ParseError(at, reason);
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  int read_int(int fallback) {
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) return fallback;
    int v = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      ++pos;
    }
    return v;
  }

  // -- atom expression grammar: semi > comma > amp > not > primitive

  AtomPrim parse_atom_prim() {
    const size_t at = pos;
    char c = peek();
    if (c == '$') throw UnsupportedFeature("recursive SMARTS are not supported");
    if (c == '*') {
      ++pos;
      return {AtomPrim::Kind::Any, 0};
    }
    if (c == 'a') {
      ++pos;
      return {AtomPrim::Kind::AnyAromatic, 0};
    }
    if (c == 'A') {
      ++pos;
      return {AtomPrim::Kind::AnyAliphatic, 0};
    }
    if (c == '#') {
      ++pos;
      int z = read_int(-1);
      if (z < 1 || !valid_element(z)) fail("bad #n element number", at);
      return {AtomPrim::Kind::Element, z};
    }
    if (c == '+' || c == '-') {
      ++pos;
      int mag;
      if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
        mag = read_int(1);
      } else {
        mag = 1;
        while (!eof() && peek() == c) {
          ++mag;
          ++pos;
        }
      }
      return {AtomPrim::Kind::Charge, c == '+' ? mag : -mag};
    }
    if (c == 'D') {
      ++pos;
      return {AtomPrim::Kind::Degree, read_int(1)};
    }
    if (c == 'X') {
      ++pos;
      return {AtomPrim::Kind::TotalConn, read_int(1)};
    }
    if (c == 'H') {
      ++pos;
      return {AtomPrim::Kind::HCount, read_int(1)};
    }
    if (c == 'R') {
      ++pos;
      int n = read_int(-1);
      if (n == 0) return {AtomPrim::Kind::NotInRing, 0};
      return {AtomPrim::Kind::InRing, n < 0 ? 1 : n};
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string sym(1, c);
      if (pos + 1 < text.size() && std::islower(static_cast<unsigned char>(text[pos + 1]))) {
        std::string two = sym + text[pos + 1];
        if (element_from_symbol(two)) sym = two;
      }
      auto z = element_from_symbol(sym);
      if (!z) fail("unknown element '" + sym + "'", at);
      pos += sym.size();
      return {AtomPrim::Kind::AliphaticElement, *z};
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string sym(1, c);
      if (text.compare(pos, 2, "se") == 0) sym = "se";
      std::string upper = sym;
      upper[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(upper[0])));
      auto z = element_from_symbol(upper);
      if (!z || !aromatic_subset_element(*z)) fail("unknown aromatic element", at);
      pos += sym.size();
      return {AtomPrim::Kind::AromaticElement, *z};
    }
    fail(std::string("unexpected character '") + c + "' in atom expression", at);
  }

  bool at_atom_prim_start() const {
    if (eof()) return false;
    char c = peek();
    return c == '*' || c == '#' || c == '+' || c == '-' || c == '$' ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  AtomExpr parse_atom_not() {
    bool neg = false;
    while (!eof() && peek() == '!') {
      neg = !neg;
      ++pos;
    }
    if (!at_atom_prim_start()) fail("expected atom primitive", pos);
    return AtomExpr::leaf(parse_atom_prim(), neg);
  }

  AtomExpr parse_atom_and() {
    std::vector<AtomExpr> kids{parse_atom_not()};
    while (!eof()) {
      if (peek() == '&') {
        ++pos;
        kids.push_back(parse_atom_not());
      } else if (at_atom_prim_start() || peek() == '!') {
        kids.push_back(parse_atom_not());
      } else {
        break;
      }
    }
    return AtomExpr::make(AtomExpr::Op::And, std::move(kids));
  }

  AtomExpr parse_atom_comma() {
    std::vector<AtomExpr> kids{parse_atom_and()};
    while (!eof() && peek() == ',') {
      ++pos;
      kids.push_back(parse_atom_and());
    }
    return AtomExpr::make(AtomExpr::Op::Or, std::move(kids));
  }

  AtomExpr parse_atom_expr_bracket() {
    std::vector<AtomExpr> kids{parse_atom_comma()};
    while (!eof() && peek() == ';') {
      ++pos;
      kids.push_back(parse_atom_comma());
    }
    return AtomExpr::make(AtomExpr::Op::And, std::move(kids));
  }

  // -- bond expressions

  static std::optional<BondPrim> bond_prim_for(char c) {
    switch (c) {
      case '-': return BondPrim{BondPrim::Kind::Single};
      case '=': return BondPrim{BondPrim::Kind::Double};
      case '#': return BondPrim{BondPrim::Kind::Triple};
      case ':': return BondPrim{BondPrim::Kind::Aromatic};
      case '@': return BondPrim{BondPrim::Kind::Ring};
      case '~': return BondPrim{BondPrim::Kind::Any};
      default: return std::nullopt;
    }
  }

  bool at_bond_prim_start() const { return !eof() && bond_prim_for(peek()).has_value(); }

  BondExpr parse_bond_not() {
    bool neg = false;
    while (!eof() && peek() == '!') {
      neg = !neg;
      ++pos;
    }
    auto p = bond_prim_for(peek());
    if (!p) fail("expected bond primitive", pos);
    ++pos;
    return BondExpr::leaf(*p, neg);
  }

  BondExpr parse_bond_and() {
    std::vector<BondExpr> kids{parse_bond_not()};
    while (!eof()) {
      if (peek() == '&') {
        ++pos;
        kids.push_back(parse_bond_not());
      } else if (at_bond_prim_start() || peek() == '!') {
        kids.push_back(parse_bond_not());
      } else {
        break;
      }
    }
    return BondExpr::make(BondExpr::Op::And, std::move(kids));
  }

  BondExpr parse_bond_expr() {
    std::vector<BondExpr> kids{parse_bond_and()};
    while (!eof() && peek() == ',') {
      ++pos;
      kids.push_back(parse_bond_and());
    }
    BondExpr comma = BondExpr::make(BondExpr::Op::Or, std::move(kids));
    if (!eof() && peek() == ';') {
      std::vector<BondExpr> ands{std::move(comma)};
      while (!eof() && peek() == ';') {
        ++pos;
        ands.push_back(parse_bond_expr());
      }
      return BondExpr::make(BondExpr::Op::And, std::move(ands));
    }
    return comma;
  }

  static BondExpr default_bond() {
    // unspecified pattern bond: single or aromatic
    std::vector<BondExpr> kids;
    kids.push_back(BondExpr::leaf({BondPrim::Kind::Single}));
    kids.push_back(BondExpr::leaf({BondPrim::Kind::Aromatic}));
    return BondExpr::make(BondExpr::Op::Or, std::move(kids));
  }

  // -- topology

  void add_bond(int a, int b, std::optional<BondExpr> expr, size_t at) {
    for (const auto& bd : bonds)
      if ((bd.a == a && bd.b == b) || (bd.a == b && bd.b == a)) fail("duplicate pattern bond", at);
    bonds.push_back({a, b, expr ? std::move(*expr) : default_bond()});
  }

  int parse_atom() {
    const size_t at = pos;
    if (peek() == '[') {
      ++pos;
      if (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
        fail("isotope predicates are not supported", pos);
      AtomExpr e = parse_atom_expr_bracket();
      if (eof() || peek() != ']') fail("unterminated bracket expression", at);
      ++pos;
      atoms.push_back(std::move(e));
      return static_cast<int>(atoms.size() - 1);
    }
    // bare atom: organic subset / aromatic / wildcard
    AtomPrim p = parse_atom_prim();
    if (p.kind == AtomPrim::Kind::Charge || p.kind == AtomPrim::Kind::Degree ||
        p.kind == AtomPrim::Kind::TotalConn || p.kind == AtomPrim::Kind::HCount)
      fail("primitive requires brackets", at);
    atoms.push_back(AtomExpr::leaf(p));
    return static_cast<int>(atoms.size() - 1);
  }

  void run() {
    std::vector<int> stack;
    int prev = -1;
    std::optional<BondExpr> pending;
    std::map<int, std::pair<int, std::optional<BondExpr>>> open_rings;

    while (!eof()) {
      char c = peek();
      if (c == '$') throw UnsupportedFeature("recursive SMARTS are not supported");
      if (c == '(') {
        if (prev < 0) fail("branch before any atom", pos);
        stack.push_back(prev);
        ++pos;
        continue;
      }
      if (c == ')') {
        if (stack.empty()) fail("unmatched ')'", pos);
        prev = stack.back();
        stack.pop_back();
        ++pos;
        continue;
      }
      if (c == '.') fail("disconnected patterns are not supported", pos);
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0) fail("ring closure before any atom", pos);
        int number;
        size_t at = pos;
        if (c == '%') {
          if (pos + 2 >= text.size()) fail("bad %nn ring closure", pos);
          number = (text[pos + 1] - '0') * 10 + (text[pos + 2] - '0');
          pos += 3;
        } else {
          number = c - '0';
          ++pos;
        }
        auto it = open_rings.find(number);
        if (it == open_rings.end()) {
          open_rings[number] = {prev, std::move(pending)};
        } else {
          auto [other, open_expr] = std::move(it->second);
          open_rings.erase(it);
          std::optional<BondExpr> expr =
              pending ? std::move(pending) : std::move(open_expr);
          add_bond(other, prev, std::move(expr), at);
        }
        pending.reset();
        continue;
      }
      if (at_bond_prim_start() || c == '!') {
        if (prev < 0) fail("bond before any atom", pos);
        if (pending) fail("two bond expressions in a row", pos);
        pending = parse_bond_expr();
        continue;
      }
      if (c == '[' || at_atom_prim_start()) {
        int cur = parse_atom();
        if (prev >= 0) add_bond(prev, cur, std::move(pending), pos);
        pending.reset();
        prev = cur;
        continue;
      }
      fail(std::string("unexpected character '") + c + "'", pos);
    }
    if (pending) fail("dangling bond expression", text.size());
    if (!stack.empty()) fail("unclosed '('", text.size());
    if (!open_rings.empty())
      fail("unclosed ring closure " + std::to_string(open_rings.begin()->first), text.size());
    if (atoms.empty()) fail("empty pattern", 0);
  }
};

}  // namespace detail

inline Pattern parse_pattern(std::string_view text) {
  detail::SmartsParser p;
  p.text = text;
  p.run();

  Pattern out;
  out.source = std::string(text);
  out.atoms = std::move(p.atoms);
  out.bonds = std::move(p.bonds);
  out.adj.assign(out.atoms.size(), {});
  for (size_t bi = 0; bi < out.bonds.size(); ++bi) {
    out.adj[static_cast<size_t>(out.bonds[bi].a)].push_back(static_cast<int>(bi));
    out.adj[static_cast<size_t>(out.bonds[bi].b)].push_back(static_cast<int>(bi));
  }

  // connectivity check
  std::vector<char> seen(out.atoms.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  size_t reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int bi : out.adj[static_cast<size_t>(v)]) {
      const auto& b = out.bonds[static_cast<size_t>(bi)];
      int w = (b.a == v) ? b.b : b.a;
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != out.atoms.size()) throw ParseError(0, "pattern must be connected");
  return out;
}

}  // namespace molforge
