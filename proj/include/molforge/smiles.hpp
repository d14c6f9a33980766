//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "molforge/canon.hpp"
#include "molforge/mol.hpp"

namespace molforge {

struct SmilesDialect {
  bool accept_stereo = true;
  bool accept_isotopes = true;
  // When set, lowercase input that fails aromaticity perception is a
  // parse error instead of being silently kekulized.
  bool strict_aromatic_lowercase = true;
};

namespace detail {

struct ParsedAtom {
  AtomSpec spec;
  size_t offset = 0;
  bool bracket = false;
  bool has_preceding = false;  // bonded to the atom written before it
  std::optional<Chirality> written_chirality;  // as written, pre parity fix
  // Neighbor events in written order: atom index, or ~ring_number for a
  // ring-closure slot recorded at its digit position.
  std::vector<int> written_nbrs;
};

struct SmilesParser {
  std::string_view text;
  SmilesDialect dialect;
  size_t pos = 0;

  std::vector<ParsedAtom> atoms;
  std::vector<BondSpec> bonds;

  struct OpenRing {
    int atom;
    std::optional<BondOrder> order;
    size_t offset;
  };
  std::map<int, OpenRing> open_rings;

  [[noreturn]] void fail(const std::string& reason, size_t at) const {
    throw ParseError(at, reason);
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  static std::optional<BondOrder> bond_symbol(char c) {
    switch (c) {
      case '-': return BondOrder::Single;
      case '=': return BondOrder::Double;
      case '#': return BondOrder::Triple;
      case ':': return BondOrder::Aromatic;
      case '/':
      case '\\': return BondOrder::Single;  // directional bonds read as single (no E/Z model)
      default: return std::nullopt;
    }
  }

  void add_bond(int a, int b, std::optional<BondOrder> explicit_order, size_t at) {
    for (const auto& bd : bonds) {
      if ((bd.a == a && bd.b == b) || (bd.a == b && bd.b == a))
        fail("duplicate bond", at);
    }
    BondOrder order;
    if (explicit_order) {
      order = *explicit_order;
    } else {
      order = (atoms[static_cast<size_t>(a)].spec.aromatic &&
               atoms[static_cast<size_t>(b)].spec.aromatic)
                  ? BondOrder::Aromatic
                  : BondOrder::Single;
    }
    bonds.push_back({a, b, order});
  }

  int parse_bracket_atom() {
    const size_t start = pos;
    ++pos;  // consume '['
    ParsedAtom pa;
    pa.offset = start;
    pa.bracket = true;
    AtomSpec& spec = pa.spec;

    // isotope
    if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      int iso = 0;
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
        iso = iso * 10 + (peek() - '0');
        ++pos;
      }
      if (!dialect.accept_isotopes) fail("isotopes not accepted by dialect", start);
      spec.isotope = iso;
    }

    if (eof()) fail("unterminated bracket atom", start);

    // element symbol, aromatic if lowercase
    if (std::islower(static_cast<unsigned char>(peek()))) {
      std::string sym;
      sym += peek();
      // two-letter aromatic symbols: se, as
      if (pos + 1 < text.size() && (text.compare(pos, 2, "se") == 0 || text.compare(pos, 2, "as") == 0))
        sym += text[pos + 1];
      pos += sym.size();
      std::string upper = sym;
      upper[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(upper[0])));
      auto z = element_from_symbol(upper);
      if (!z || !aromatic_subset_element(*z)) fail("unknown aromatic element '" + sym + "'", start);
      spec.element = *z;
      spec.aromatic = true;
    } else if (std::isupper(static_cast<unsigned char>(peek()))) {
      std::string sym;
      sym += peek();
      if (pos + 1 < text.size() && std::islower(static_cast<unsigned char>(text[pos + 1]))) {
        std::string two = sym + text[pos + 1];
        if (element_from_symbol(two)) sym = two;
      }
      pos += sym.size();
      auto z = element_from_symbol(sym);
      if (!z) fail("unknown element '" + sym + "'", start);
      spec.element = *z;
    } else if (peek() == '*') {
      fail("wildcard atoms not supported", start);
    } else {
      fail("bad bracket atom", start);
    }

    // chirality
    if (!eof() && peek() == '@') {
      ++pos;
      Chirality c = Chirality::CCW;
      if (!eof() && peek() == '@') {
        ++pos;
        c = Chirality::CW;
      }
      if (!dialect.accept_stereo) fail("stereo not accepted by dialect", start);
      pa.written_chirality = c;
    }

    // hydrogen count
    int h = 0;
    if (!eof() && peek() == 'H') {
      ++pos;
      h = 1;
      if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
        h = peek() - '0';
        ++pos;
      }
    }
    spec.explicit_h = h;

    // charge
    if (!eof() && (peek() == '+' || peek() == '-')) {
      char sign = peek();
      ++pos;
      int mag = 1;
      if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
        mag = peek() - '0';
        ++pos;
      } else {
        while (!eof() && peek() == sign) {
          ++mag;
          ++pos;
        }
      }
      spec.formal_charge = (sign == '+') ? mag : -mag;
    }

    // atom class: accepted and ignored
    if (!eof() && peek() == ':') {
      ++pos;
      if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("bad atom class", pos);
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
    }

    if (eof() || peek() != ']') fail("unterminated bracket atom", start);
    ++pos;

    atoms.push_back(std::move(pa));
    return static_cast<int>(atoms.size() - 1);
  }

  int parse_organic_atom() {
    const size_t start = pos;
    ParsedAtom pa;
    pa.offset = start;
    static constexpr std::string_view two_letter[] = {"Cl", "Br"};
    for (auto sym : two_letter) {
      if (text.compare(pos, sym.size(), sym) == 0) {
        pa.spec.element = *element_from_symbol(std::string(sym));
        pos += sym.size();
        atoms.push_back(std::move(pa));
        return static_cast<int>(atoms.size() - 1);
      }
    }
    char c = peek();
    bool aromatic = std::islower(static_cast<unsigned char>(c)) != 0;
    char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    auto z = element_from_symbol(std::string(1, up));
    if (!z || !organic_subset_element(*z)) fail(std::string("unexpected character '") + c + "'", start);
    if (aromatic && !aromatic_subset_element(*z)) fail("element has no aromatic form", start);
    pa.spec.element = *z;
    pa.spec.aromatic = aromatic;
    ++pos;
    atoms.push_back(std::move(pa));
    return static_cast<int>(atoms.size() - 1);
  }

  void handle_ring_digit(int current, int number, std::optional<BondOrder> pending, size_t at) {
    auto it = open_rings.find(number);
    if (it == open_rings.end()) {
      open_rings[number] = {current, pending, at};
      atoms[static_cast<size_t>(current)].written_nbrs.push_back(~number);
      return;
    }
    OpenRing open = it->second;
    open_rings.erase(it);
    if (open.atom == current) fail("ring bond to self", at);
    std::optional<BondOrder> order;
    if (open.order && pending) {
      if (*open.order != *pending) fail("conflicting ring bond orders", at);
      order = pending;
    } else {
      order = open.order ? open.order : pending;
    }
    add_bond(open.atom, current, order, at);
    // resolve the opening side's placeholder and record the closing side
    for (int& slot : atoms[static_cast<size_t>(open.atom)].written_nbrs) {
      if (slot == ~number) {
        slot = current;
        break;
      }
    }
    atoms[static_cast<size_t>(current)].written_nbrs.push_back(open.atom);
  }

  void run() {
    std::vector<int> stack;
    int prev = -1;
    std::optional<BondOrder> pending;
    size_t pending_at = 0;

    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t') break;  // SMILES ends at whitespace
      if (c == '(') {
        if (prev < 0) fail("branch before any atom", pos);
        if (pending) fail("dangling bond before branch", pending_at);
        stack.push_back(prev);
        ++pos;
        continue;
      }
      if (c == ')') {
        if (stack.empty()) fail("unmatched ')'", pos);
        if (pending) fail("dangling bond before ')'", pending_at);
        prev = stack.back();
        stack.pop_back();
        ++pos;
        continue;
      }
      if (auto b = bond_symbol(c)) {
        if (pending) fail("two bond symbols in a row", pos);
        if (prev < 0) fail("bond before any atom", pos);
        pending = b;
        pending_at = pos;
        ++pos;
        continue;
      }
      if (c == '.') {
        if (pending) fail("bond before '.'", pending_at);
        prev = -1;
        ++pos;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0) fail("ring closure before any atom", pos);
        int number;
        size_t at = pos;
        if (c == '%') {
          if (pos + 2 >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos + 1])) ||
              !std::isdigit(static_cast<unsigned char>(text[pos + 2])))
            fail("bad %nn ring closure", pos);
          number = (text[pos + 1] - '0') * 10 + (text[pos + 2] - '0');
          pos += 3;
        } else {
          number = c - '0';
          ++pos;
        }
        handle_ring_digit(prev, number, pending, at);
        pending.reset();
        continue;
      }
      if (c == '[' || std::isalpha(static_cast<unsigned char>(c))) {
        int cur = (c == '[') ? parse_bracket_atom() : parse_organic_atom();
        if (prev >= 0) {
          add_bond(prev, cur, pending, atoms[static_cast<size_t>(cur)].offset);
          atoms[static_cast<size_t>(cur)].has_preceding = true;
          atoms[static_cast<size_t>(cur)].written_nbrs.push_back(prev);
          atoms[static_cast<size_t>(prev)].written_nbrs.push_back(cur);
        }
        pending.reset();
        prev = cur;
        continue;
      }
      fail(std::string("unexpected character '") + c + "'", pos);
    }

    if (pending) fail("dangling bond at end of input", pending_at);
    if (!stack.empty()) fail("unclosed '('", text.size());
    if (!open_rings.empty()) {
      const auto& first = *open_rings.begin();
      fail("unclosed ring closure " + std::to_string(first.first), first.second.offset);
    }
    if (atoms.empty()) fail("empty SMILES", 0);
  }

  // Convert written chirality to the stored reference frame (hydrogen
  // first, then neighbors by ascending atom index).
  void fix_chirality() {
    for (size_t i = 0; i < atoms.size(); ++i) {
      ParsedAtom& pa = atoms[i];
      if (!pa.written_chirality) continue;

      // Written order: preceding atom (already first in written_nbrs if
      // present), with the bracket hydrogen inserted right after it.
      std::vector<int> written;
      for (int slot : pa.written_nbrs) written.push_back(slot);
      int h = pa.spec.explicit_h.value_or(0);
      if (h > 1) {
        pa.spec.chirality = Chirality::None;  // not a tetrahedral center
        continue;
      }
      if (h == 1) {
        // The bracket hydrogen occupies the slot right after the
        // preceding atom (or first, when the atom opens its chain).
        written.insert(written.begin() + (pa.has_preceding ? 1 : 0), -1);
      }
      if (written.size() < 3) {
        pa.spec.chirality = Chirality::None;
        continue;
      }

      std::vector<int> reference = written;
      std::sort(reference.begin(), reference.end());  // H slot (-1) sorts first

      std::vector<int> rel(written.size());
      for (size_t k = 0; k < written.size(); ++k) {
        auto it = std::find(reference.begin(), reference.end(), written[k]);
        rel[k] = static_cast<int>(it - reference.begin());
      }
      int swaps = 0;
      for (size_t k = 0; k < rel.size(); ++k) {
        while (rel[k] != static_cast<int>(k)) {
          std::swap(rel[k], rel[static_cast<size_t>(rel[k])]);
          ++swaps;
        }
      }
      Chirality c = *pa.written_chirality;
      pa.spec.chirality = (swaps % 2 == 1) ? flip(c) : c;
    }
  }
};

}  // namespace detail

inline Molecule parse_smiles(std::string_view text, const SmilesDialect& dialect = {},
                             std::string name = {}) {
  detail::SmilesParser p;
  p.text = text;
  p.dialect = dialect;
  p.run();
  p.fix_chirality();

  std::vector<AtomSpec> specs;
  specs.reserve(p.atoms.size());
  std::vector<size_t> offsets;
  for (auto& pa : p.atoms) {
    specs.push_back(pa.spec);
    offsets.push_back(pa.offset);
  }
  try {
    Molecule m = build_molecule(std::move(specs), std::move(p.bonds), std::move(name));
    if (dialect.strict_aromatic_lowercase) {
      for (size_t i = 0; i < p.atoms.size(); ++i) {
        if (p.atoms[i].spec.aromatic && !m.atom(static_cast<int>(i)).aromatic)
          throw ParseError(offsets[i], "lowercase atom is not in a perceivable aromatic ring");
      }
    }
    return m;
  } catch (const ValenceError& e) {
    throw ParseError(0, std::string("valence failure: ") + e.what());
  } catch (const KekulizeError& e) {
    throw ParseError(0, std::string("kekulization failure: ") + e.what());
  } catch (const GraphError& e) {
    throw ParseError(0, std::string("graph failure: ") + e.what());
  }
}

namespace detail {

// Hydrogen count a reader would infer for this atom if written without a
// bracket; used to decide when a bracket is mandatory.
inline int reader_inferred_h(const Molecule& m, int i) {
  const Atom& a = m.atom(i);
  if (a.formal_charge != 0) return -1;  // bracket forced anyway
  const auto allowed = allowed_valences(a.element, 0);
  if (allowed.empty()) return -1;

  int sum = 0;
  if (a.aromatic) {
    int aromatic_bonds = 0;
    bool exo_double = false;
    for (int bi : m.incident_bonds(i)) {
      const Bond& b = m.bond(bi);
      if (b.order == BondOrder::Aromatic)
        ++aromatic_bonds;
      else {
        sum += b.kekule;
        if (b.kekule >= 2) exo_double = true;
      }
    }
    AtomSpec probe;
    probe.element = a.element;
    probe.formal_charge = a.formal_charge;
    bool needs = kekule_needs_pi(probe, m.degree(i), exo_double, 0);
    sum += aromatic_bonds + (needs ? 1 : 0);
  } else {
    sum = m.valence_sum(i);
  }
  for (int v : allowed) {
    if (v >= sum) return v - sum;
  }
  return -1;
}

inline bool needs_bracket(const Molecule& m, int i, bool emit_stereo) {
  const Atom& a = m.atom(i);
  if (a.formal_charge != 0 || a.isotope) return true;
  if (emit_stereo && a.chirality != Chirality::None) return true;
  if (a.aromatic) {
    if (!aromatic_subset_element(a.element) || a.element == element::Se) return true;
  } else if (!organic_subset_element(a.element)) {
    return true;
  }
  return reader_inferred_h(m, i) != a.hydrogens;
}

struct SmilesWriter {
  const Molecule& m;
  const std::vector<int>& ranks;
  bool emit_stereo;

  std::vector<char> visited;
  std::vector<int> ring_digit;     // per bond: digit or -1
  std::vector<char> is_tree_bond;  // per bond
  std::vector<char> digit_in_use;
  std::string out;

  SmilesWriter(const Molecule& mol, const std::vector<int>& r, bool stereo)
      : m(mol), ranks(r), emit_stereo(stereo) {
    visited.assign(m.atom_count(), 0);
    ring_digit.assign(m.bond_count(), -1);
    is_tree_bond.assign(m.bond_count(), 0);
    digit_in_use.assign(100, 0);
  }

  std::vector<int> children_order(int atom, int parent_bond) const {
    std::vector<int> bis;
    for (int bi : m.incident_bonds(atom)) {
      if (bi == parent_bond) continue;
      bis.push_back(bi);
    }
    std::sort(bis.begin(), bis.end(), [&](int x, int y) {
      int ax = m.bond(x).other(atom), ay = m.bond(y).other(atom);
      return ranks[static_cast<size_t>(ax)] < ranks[static_cast<size_t>(ay)];
    });
    return bis;
  }

  // Pass 1: classify tree vs ring-closure bonds with the same traversal
  // order the emitter uses.
  void classify(int root) {
    struct Frame {
      int atom;
      int parent_bond;
    };
    std::vector<Frame> stack{{root, -1}};
    visited[static_cast<size_t>(root)] = 1;
    while (!stack.empty()) {
      auto [atom, parent_bond] = stack.back();
      stack.pop_back();
      auto order = children_order(atom, parent_bond);
      // reverse so the lowest-rank child is processed first
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int bi = *it;
        int nbr = m.bond(bi).other(atom);
        if (visited[static_cast<size_t>(nbr)]) continue;
        visited[static_cast<size_t>(nbr)] = 1;
        is_tree_bond[static_cast<size_t>(bi)] = 1;
        stack.push_back({nbr, bi});
      }
    }
  }

  int allocate_digit() {
    for (int d = 1; d < 100; ++d) {
      if (!digit_in_use[static_cast<size_t>(d)]) {
        digit_in_use[static_cast<size_t>(d)] = 1;
        return d;
      }
    }
    throw Error("ring closure digits exhausted");
  }

  void append_digit(int d) {
    if (d < 10) {
      out += static_cast<char>('0' + d);
    } else {
      out += '%';
      out += static_cast<char>('0' + d / 10);
      out += static_cast<char>('0' + d % 10);
    }
  }

  void append_bond_symbol(const Bond& b) {
    switch (b.order) {
      case BondOrder::Single:
        if (m.atom(b.a).aromatic && m.atom(b.b).aromatic) out += '-';
        break;
      case BondOrder::Double: out += '='; break;
      case BondOrder::Triple: out += '#'; break;
      case BondOrder::Aromatic: break;
    }
  }

  void append_atom(int i, const std::vector<int>& written_nbrs, bool has_from) {
    const Atom& a = m.atom(i);
    std::string sym(element_symbol(a.element));
    if (a.aromatic)
      for (auto& ch : sym) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));

    if (!needs_bracket(m, i, emit_stereo)) {
      out += sym;
      return;
    }
    out += '[';
    if (a.isotope) out += std::to_string(*a.isotope);
    out += sym;
    if (emit_stereo && a.chirality != Chirality::None) {
      // Parity between the written neighbor order and the stored
      // reference frame (H first, then ascending atom index).
      std::vector<int> written = written_nbrs;
      if (a.hydrogens == 1) {
        written.insert(written.begin() + (has_from ? 1 : 0), -1);
      }
      if (written.size() >= 3) {
        std::vector<int> reference = written;
        std::sort(reference.begin(), reference.end());
        std::vector<int> rel(written.size());
        for (size_t k = 0; k < written.size(); ++k) {
          auto it = std::find(reference.begin(), reference.end(), written[k]);
          rel[k] = static_cast<int>(it - reference.begin());
        }
        int swaps = 0;
        for (size_t k = 0; k < rel.size(); ++k) {
          while (rel[k] != static_cast<int>(k)) {
            std::swap(rel[k], rel[static_cast<size_t>(rel[k])]);
            ++swaps;
          }
        }
        Chirality c = (swaps % 2 == 1) ? flip(a.chirality) : a.chirality;
        out += (c == Chirality::CCW) ? "@" : "@@";
      }
    }
    if (a.hydrogens == 1)
      out += 'H';
    else if (a.hydrogens > 1)
      out += 'H' + std::to_string(a.hydrogens);
    if (a.formal_charge != 0) {
      out += a.formal_charge > 0 ? '+' : '-';
      int mag = std::abs(a.formal_charge);
      if (mag > 1) out += std::to_string(mag);
    }
    out += ']';
  }

  void emit(int atom, int parent_bond) {
    // Collect this atom's written neighbor order as we go, for stereo.
    std::vector<int> written;
    if (parent_bond >= 0) written.push_back(m.bond(parent_bond).other(atom));

    // Ring bonds at this atom: closings (digit already assigned) by
    // digit, then openings by partner rank.
    std::vector<std::pair<int, int>> closings;  // (digit, bond)
    std::vector<std::pair<int, int>> openings;  // (partner rank, bond)
    for (int bi : m.incident_bonds(atom)) {
      if (is_tree_bond[static_cast<size_t>(bi)] || bi == parent_bond) continue;
      if (ring_digit[static_cast<size_t>(bi)] >= 0)
        closings.push_back({ring_digit[static_cast<size_t>(bi)], bi});
      else
        openings.push_back({ranks[static_cast<size_t>(m.bond(bi).other(atom))], bi});
    }
    std::sort(closings.begin(), closings.end());
    std::sort(openings.begin(), openings.end());

    std::vector<std::pair<int, int>> ring_events;  // (digit, bond) in emission order
    for (auto [d, bi] : closings) ring_events.push_back({d, bi});
    for (auto [rk, bi] : openings) {
      int d = allocate_digit();
      ring_digit[static_cast<size_t>(bi)] = d;
      ring_events.push_back({d, bi});
    }
    for (auto& [d, bi] : ring_events) written.push_back(m.bond(bi).other(atom));

    auto tree_children = children_order(atom, parent_bond);
    std::vector<int> tree_bonds;
    for (int bi : tree_children) {
      if (!is_tree_bond[static_cast<size_t>(bi)]) continue;
      tree_bonds.push_back(bi);
      written.push_back(m.bond(bi).other(atom));
    }

    append_atom(atom, written, parent_bond >= 0);

    for (auto [d, bi] : ring_events) {
      const Bond& b = m.bond(bi);
      bool opening = !visited_emitted_[static_cast<size_t>(b.other(atom))];
      if (opening) append_bond_symbol(b);
      append_digit(d);
      if (!opening) digit_in_use[static_cast<size_t>(d)] = 0;  // digit reusable after close
    }

    for (size_t k = 0; k < tree_bonds.size(); ++k) {
      int bi = tree_bonds[k];
      int child = m.bond(bi).other(atom);
      bool last = (k + 1 == tree_bonds.size());
      if (!last) out += '(';
      append_bond_symbol(m.bond(bi));
      visited_emitted_[static_cast<size_t>(child)] = 1;
      emit(child, bi);
      if (!last) out += ')';
    }
  }

  std::vector<char> visited_emitted_;

  std::string write() {
    const size_t n = m.atom_count();
    if (n == 0) return {};
    std::vector<int> atom_at(n);
    for (size_t i = 0; i < n; ++i) atom_at[static_cast<size_t>(ranks[i])] = static_cast<int>(i);

    auto labels = m.component_labels();
    std::vector<char> component_done(static_cast<size_t>(m.component_count()), 0);
    visited_emitted_.assign(n, 0);
    bool first = true;
    for (size_t r = 0; r < n; ++r) {
      int root = atom_at[r];
      int comp = labels[static_cast<size_t>(root)];
      if (component_done[static_cast<size_t>(comp)]) continue;
      component_done[static_cast<size_t>(comp)] = 1;
      if (!first) out += '.';
      first = false;
      std::fill(visited.begin(), visited.end(), 0);
      // classify uses `visited` scratch per component; reuse across
      // components is fine because tree bonds are per-bond state.
      classify(root);
      visited_emitted_[static_cast<size_t>(root)] = 1;
      emit(root, -1);
    }
    return out;
  }
};

}  // namespace detail

// Deterministic canonical SMILES. Output is independent of input atom
// order; aromatic atoms are written lowercase.
inline std::string write_canonical(const Molecule& m, bool emit_stereo = true) {
  if (m.empty()) return {};
  auto ranks = canonical_ranks(m);
  detail::SmilesWriter w(m, ranks, emit_stereo);
  return w.write();
}

inline std::string canonical_smiles(std::string_view smiles) {
  return write_canonical(parse_smiles(smiles));
}

// --- SMILES file format: one record per line, `SMILES<TAB>ID`; lines
// --- starting with '#' are skipped.

struct SmilesRecord {
  std::string smiles;
  std::string id;
};

inline std::vector<SmilesRecord> read_smiles_lines(std::istream& in) {
  std::vector<SmilesRecord> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    SmilesRecord rec;
    if (tab == std::string::npos) {
      // tolerate space-separated ids
      auto sp = line.find(' ');
      rec.smiles = line.substr(0, sp);
      if (sp != std::string::npos) rec.id = line.substr(sp + 1);
    } else {
      rec.smiles = line.substr(0, tab);
      rec.id = line.substr(tab + 1);
    }
    while (!rec.id.empty() && (rec.id.front() == ' ' || rec.id.front() == '\t'))
      rec.id.erase(rec.id.begin());
    if (rec.id.empty()) rec.id = "line" + std::to_string(lineno);
    out.push_back(std::move(rec));
  }
  return out;
}

inline void write_smiles_line(std::ostream& os, const std::string& smiles, const std::string& id) {
  os << smiles << '\t' << id << '\n';
}

}  // namespace molforge
