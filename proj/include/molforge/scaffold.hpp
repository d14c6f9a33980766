//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <vector>

#include "molforge/mol.hpp"
#include "molforge/smiles.hpp"

namespace molforge {

namespace detail {

// Index of the largest fragment (heavy atoms, then bonds, then lowest
// component label).
inline std::vector<int> largest_fragment_atoms(const Molecule& m) {
  auto labels = m.component_labels();
  int nc = m.component_count();
  std::vector<int> atom_counts(static_cast<size_t>(nc), 0);
  std::vector<int> bond_counts(static_cast<size_t>(nc), 0);
  for (size_t i = 0; i < m.atom_count(); ++i) ++atom_counts[static_cast<size_t>(labels[i])];
  for (const auto& b : m.bonds()) ++bond_counts[static_cast<size_t>(labels[static_cast<size_t>(b.a)])];
  int best = 0;
  for (int c = 1; c < nc; ++c) {
    if (atom_counts[static_cast<size_t>(c)] > atom_counts[static_cast<size_t>(best)] ||
        (atom_counts[static_cast<size_t>(c)] == atom_counts[static_cast<size_t>(best)] &&
         bond_counts[static_cast<size_t>(c)] > bond_counts[static_cast<size_t>(best)]))
      best = c;
  }
  std::vector<int> atoms;
  for (size_t i = 0; i < m.atom_count(); ++i)
    if (labels[i] == best) atoms.push_back(static_cast<int>(i));
  return atoms;
}

// Rebuild the induced subgraph on `keep`, preserving kekule orders and
// aromatic hints; hydrogens grow by one per severed single bond.
inline Molecule induced_subgraph(const Molecule& m, const std::vector<char>& keep,
                                 ValencePolicy policy = ValencePolicy::Strict) {
  std::vector<int> map(m.atom_count(), -1);
  std::vector<AtomSpec> atoms;
  for (size_t i = 0; i < m.atom_count(); ++i) {
    if (!keep[i]) continue;
    const Atom& a = m.atom(static_cast<int>(i));
    int cut_order = 0;  // severed bonds turn into hydrogens, order-weighted
    for (int bi : m.incident_bonds(static_cast<int>(i))) {
      const Bond& b = m.bond(bi);
      if (!keep[static_cast<size_t>(b.other(static_cast<int>(i)))]) cut_order += b.kekule;
    }
    AtomSpec s;
    s.element = a.element;
    s.formal_charge = a.formal_charge;
    s.explicit_h = a.hydrogens + cut_order;
    s.isotope = a.isotope;
    s.aromatic = false;  // perception re-derives from the kekule structure
    s.chirality = Chirality::None;  // stereo is not meaningful on a scaffold
    map[i] = static_cast<int>(atoms.size());
    atoms.push_back(std::move(s));
  }
  std::vector<BondSpec> bonds;
  for (const auto& b : m.bonds()) {
    if (!keep[static_cast<size_t>(b.a)] || !keep[static_cast<size_t>(b.b)]) continue;
    BondOrder o = b.order == BondOrder::Aromatic
                      ? (b.kekule == 2 ? BondOrder::Double : BondOrder::Single)
                      : b.order;
    bonds.push_back({map[static_cast<size_t>(b.a)], map[static_cast<size_t>(b.b)], o});
  }
  return build_molecule(std::move(atoms), std::move(bonds), {}, policy);
}

}  // namespace detail

// Murcko framework: ring systems plus the linkers connecting them.
// Terminal atoms strip iteratively; atoms double- or triple-bonded to the
// framework are retained. Multi-fragment inputs reduce to the largest
// fragment; acyclic molecules give an empty scaffold.
inline Molecule murcko_scaffold(const Molecule& m) {
  if (m.empty() || m.rings().count() == 0) return Molecule{};

  std::vector<char> keep(m.atom_count(), 0);
  for (int i : detail::largest_fragment_atoms(m)) keep[static_cast<size_t>(i)] = 1;

  // iterative terminal strip
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < m.atom_count(); ++i) {
      if (!keep[i]) continue;
      int deg = 0;
      for (int bi : m.incident_bonds(static_cast<int>(i)))
        if (keep[static_cast<size_t>(m.bond(bi).other(static_cast<int>(i)))]) ++deg;
      if (deg <= 1 && !m.atom(static_cast<int>(i)).in_ring) {
        keep[i] = 0;
        changed = true;
      }
    }
  }

  // nothing cyclic survived in the largest fragment
  bool any = false;
  for (char k : keep) any |= (k != 0);
  if (!any) return Molecule{};

  // retain multiply-bonded attachments to the framework
  std::vector<char> extended = keep;
  for (const auto& b : m.bonds()) {
    if (b.kekule < 2) continue;
    bool ka = keep[static_cast<size_t>(b.a)], kb = keep[static_cast<size_t>(b.b)];
    if (ka != kb) {
      extended[static_cast<size_t>(b.a)] = 1;
      extended[static_cast<size_t>(b.b)] = 1;
    }
  }

  return detail::induced_subgraph(m, extended);
}

// Canonical key of the element- and bond-order-erased Murcko framework;
// empty string for acyclic molecules. Equal keys identify molecules that
// share a generic framework.
using ScaffoldKey = std::string;

inline ScaffoldKey generic_scaffold_key(const Molecule& m) {
  Molecule scaffold = murcko_scaffold(m);
  if (scaffold.empty()) return {};
  std::vector<AtomSpec> atoms(scaffold.atom_count());
  for (auto& a : atoms) a = AtomSpec{};  // plain carbon, hydrogens derived
  std::vector<BondSpec> bonds;
  for (const auto& b : scaffold.bonds()) bonds.push_back({b.a, b.b, BondOrder::Single});
  Molecule generic =
      build_molecule(std::move(atoms), std::move(bonds), {}, ValencePolicy::Permissive);
  return write_canonical(generic);
}

}  // namespace molforge
