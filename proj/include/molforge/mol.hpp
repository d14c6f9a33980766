//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "molforge/elements.hpp"
#include "molforge/errors.hpp"

namespace molforge {

enum class BondOrder : uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

inline int order_weight(BondOrder o) {
  switch (o) {
    case BondOrder::Single: return 1;
    case BondOrder::Double: return 2;
    case BondOrder::Triple: return 3;
    case BondOrder::Aromatic: return 2;  // nominal; valence math uses kekule orders
  }
  return 1;
}

// Tetrahedral parity relative to the reference neighbor order: the
// hydrogen substituent (if any) first, then neighbors by ascending atom
// index. CCW corresponds to the SMILES '@' sense.
enum class Chirality : uint8_t { None = 0, CW = 1, CCW = 2 };

inline Chirality flip(Chirality c) {
  if (c == Chirality::CW) return Chirality::CCW;
  if (c == Chirality::CCW) return Chirality::CW;
  return c;
}

// Input description of an atom for build_molecule. explicit_h == nullopt
// means "derive the hydrogen count from the valence model"; a concrete
// value fixes it (bracket-atom semantics) and is validated instead.
struct AtomSpec {
  int element = element::C;
  int formal_charge = 0;
  std::optional<int> explicit_h;
  std::optional<int> isotope;
  bool aromatic = false;
  Chirality chirality = Chirality::None;
};

struct BondSpec {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::Single;
};

struct Atom {
  int element;
  int formal_charge;
  int hydrogens;  // total hydrogen count (explicit + derived)
  std::optional<int> isotope;
  bool aromatic;
  bool in_ring;
  Chirality chirality;
};

struct Bond {
  int a;
  int b;
  BondOrder order;  // Aromatic for bonds in perceived aromatic rings
  int kekule;       // 1/2/3 valence-bearing order
  bool in_ring;

  int other(int atom) const { return atom == a ? b : a; }
};

struct RingInfo {
  std::vector<std::vector<int>> atom_rings;  // SSSR, each a cyclic atom sequence
  std::vector<std::vector<int>> bond_rings;  // parallel: bond indices per ring

  size_t count() const { return atom_rings.size(); }
  int largest() const {
    size_t best = 0;
    for (const auto& r : atom_rings) best = std::max(best, r.size());
    return static_cast<int>(best);
  }
};

enum class ValencePolicy {
  Strict,      // construction fails on any valence inconsistency
  Permissive,  // hydrogens clamp to zero instead of failing (generic scaffolds)
};

class Molecule;
Molecule build_molecule(std::vector<AtomSpec> atoms, std::vector<BondSpec> bonds,
                        std::string name = {}, ValencePolicy policy = ValencePolicy::Strict);

// Immutable attributed molecular graph. Construction runs the full
// perception pipeline (kekulization, implicit hydrogens, SSSR,
// aromaticity); instances are safe to share across threads.
class Molecule {
 public:
  Molecule() = default;

  size_t atom_count() const { return atoms_.size(); }
  size_t bond_count() const { return bonds_.size(); }
  bool empty() const { return atoms_.empty(); }

  const Atom& atom(int i) const { return atoms_[static_cast<size_t>(i)]; }
  const Bond& bond(int i) const { return bonds_[static_cast<size_t>(i)]; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Bond>& bonds() const { return bonds_; }

  // Bond indices incident to atom i, in insertion order.
  const std::vector<int>& incident_bonds(int i) const { return adj_[static_cast<size_t>(i)]; }

  int degree(int i) const { return static_cast<int>(adj_[static_cast<size_t>(i)].size()); }

  std::vector<int> neighbors(int i) const {
    std::vector<int> out;
    out.reserve(adj_[static_cast<size_t>(i)].size());
    for (int bi : adj_[static_cast<size_t>(i)]) out.push_back(bonds_[static_cast<size_t>(bi)].other(i));
    return out;
  }

  // Index of the bond joining a and b, or -1.
  int bond_between(int a, int b) const {
    for (int bi : adj_[static_cast<size_t>(a)]) {
      if (bonds_[static_cast<size_t>(bi)].other(a) == b) return bi;
    }
    return -1;
  }

  const RingInfo& rings() const { return rings_; }
  int component_count() const { return n_components_; }
  bool multi_fragment() const { return n_components_ > 1; }

  const std::string& name() const { return name_; }

  // Sum of kekule bond orders at atom i (sigma + pi), excluding hydrogens.
  int valence_sum(int i) const {
    int s = 0;
    for (int bi : adj_[static_cast<size_t>(i)]) s += bonds_[static_cast<size_t>(bi)].kekule;
    return s;
  }

  int total_valence(int i) const { return valence_sum(i) + atoms_[static_cast<size_t>(i)].hydrogens; }

  // Connected-component label per atom (0-based, by first-seen order).
  std::vector<int> component_labels() const {
    std::vector<int> label(atoms_.size(), -1);
    int next = 0;
    for (size_t s = 0; s < atoms_.size(); ++s) {
      if (label[s] >= 0) continue;
      std::vector<int> stack{static_cast<int>(s)};
      label[s] = next;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int bi : adj_[static_cast<size_t>(v)]) {
          int w = bonds_[static_cast<size_t>(bi)].other(v);
          if (label[static_cast<size_t>(w)] < 0) {
            label[static_cast<size_t>(w)] = next;
            stack.push_back(w);
          }
        }
      }
      ++next;
    }
    return label;
  }

 private:
  friend Molecule build_molecule(std::vector<AtomSpec>, std::vector<BondSpec>, std::string,
                                 ValencePolicy);

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> adj_;
  RingInfo rings_;
  int n_components_ = 0;
  std::string name_;
};

namespace detail {

// Whether an aromatic-flagged atom must carry exactly one double bond in
// the kekule assignment. Exocyclic doubles (c=O) satisfy the requirement
// up front; pyrrole-type N/P (three sigma neighbors or an explicit H)
// contribute a lone pair instead.
inline bool kekule_needs_pi(const AtomSpec& a, int sigma_degree, bool has_exo_double,
                            int explicit_h) {
  if (has_exo_double) return false;
  switch (a.element) {
    case element::C:
      if (a.formal_charge != 0) return false;
      return true;
    case element::N:
    case element::P:
      if (a.formal_charge > 0) return true;   // pyridinium-type
      if (a.formal_charge < 0) return false;  // pyrrolide-type
      return explicit_h == 0 && sigma_degree < 3;
    case element::O:
    case element::S:
    case element::Se:
      return a.formal_charge > 0;
    case element::B: return false;
    default: return false;
  }
}

// Backtracking perfect matching on the pi-requiring aromatic atoms over
// aromatic bonds. Neighbor order follows bond index order, so the chosen
// assignment is deterministic.
inline bool kekule_match(const std::vector<std::vector<std::pair<int, int>>>& cand,
                         std::vector<int>& partner, size_t i,
                         const std::vector<int>& order, std::vector<int>& bond_pick) {
  if (i == order.size()) return true;
  int v = order[i];
  if (partner[static_cast<size_t>(v)] >= 0)
    return kekule_match(cand, partner, i + 1, order, bond_pick);
  for (auto [w, bi] : cand[static_cast<size_t>(v)]) {
    if (partner[static_cast<size_t>(w)] >= 0) continue;
    partner[static_cast<size_t>(v)] = w;
    partner[static_cast<size_t>(w)] = v;
    bond_pick.push_back(bi);
    if (kekule_match(cand, partner, i + 1, order, bond_pick)) return true;
    bond_pick.pop_back();
    partner[static_cast<size_t>(v)] = -1;
    partner[static_cast<size_t>(w)] = -1;
  }
  return false;
}

struct SssrResult {
  std::vector<std::vector<int>> atom_rings;
  std::vector<std::vector<int>> bond_rings;
};

// Smallest set of smallest rings: candidate cycles are the shortest cycle
// through every bond plus a spanning-tree fundamental basis (which
// guarantees completion); a greedy GF(2) independence pass keeps the
// smallest B - A + C of them. Deterministic by (size, bond set) order.
inline SssrResult perceive_sssr(size_t n_atoms, const std::vector<Bond>& bonds,
                                const std::vector<std::vector<int>>& adj, int n_components) {
  SssrResult out;
  const size_t nb = bonds.size();
  const int cyclomatic =
      static_cast<int>(nb) - static_cast<int>(n_atoms) + n_components;
  if (cyclomatic <= 0) return out;

  using BondSet = std::vector<uint64_t>;
  const size_t words = (nb + 63) / 64;
  auto set_bit = [&](BondSet& s, int b) { s[static_cast<size_t>(b) / 64] |= (uint64_t{1} << (b % 64)); };

  struct Candidate {
    size_t size;
    std::vector<int> sorted_bonds;
    std::vector<int> atom_cycle;
    std::vector<int> bond_cycle;
  };
  std::vector<Candidate> cands;

  // Shortest path from u to v avoiding bond `skip`; returns atom path.
  auto bfs_path = [&](int u, int v, int skip) -> std::vector<int> {
    std::vector<int> prev(n_atoms, -2);
    std::vector<int> queue{u};
    prev[static_cast<size_t>(u)] = -1;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int x = queue[qi];
      if (x == v) break;
      for (int bi : adj[static_cast<size_t>(x)]) {
        if (bi == skip) continue;
        int y = bonds[static_cast<size_t>(bi)].other(x);
        if (prev[static_cast<size_t>(y)] != -2) continue;
        prev[static_cast<size_t>(y)] = x;
        queue.push_back(y);
      }
    }
    if (prev[static_cast<size_t>(v)] == -2) return {};
    std::vector<int> path;
    for (int x = v; x != -1; x = prev[static_cast<size_t>(x)]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
  };

  auto add_candidate = [&](std::vector<int> atom_cycle) {
    std::vector<int> bond_cycle;
    for (size_t i = 0; i < atom_cycle.size(); ++i) {
      int a = atom_cycle[i];
      int b = atom_cycle[(i + 1) % atom_cycle.size()];
      int found = -1;
      for (int bi : adj[static_cast<size_t>(a)]) {
        if (bonds[static_cast<size_t>(bi)].other(a) == b) {
          found = bi;
          break;
        }
      }
      if (found < 0) return;
      bond_cycle.push_back(found);
    }
    std::vector<int> sorted = bond_cycle;
    std::sort(sorted.begin(), sorted.end());
    cands.push_back({atom_cycle.size(), std::move(sorted), std::move(atom_cycle),
                     std::move(bond_cycle)});
  };

  for (size_t bi = 0; bi < nb; ++bi) {
    auto path = bfs_path(bonds[bi].a, bonds[bi].b, static_cast<int>(bi));
    if (!path.empty()) add_candidate(std::move(path));
  }

  // Fundamental cycles from a BFS spanning forest (completion fallback).
  {
    std::vector<int> parent(n_atoms, -2), parent_bond(n_atoms, -1), depth(n_atoms, 0);
    std::vector<char> tree_bond(nb, 0);
    for (size_t s = 0; s < n_atoms; ++s) {
      if (parent[s] != -2) continue;
      parent[s] = -1;
      std::vector<int> queue{static_cast<int>(s)};
      for (size_t qi = 0; qi < queue.size(); ++qi) {
        int x = queue[qi];
        for (int bi : adj[static_cast<size_t>(x)]) {
          int y = bonds[static_cast<size_t>(bi)].other(x);
          if (parent[static_cast<size_t>(y)] != -2) continue;
          parent[static_cast<size_t>(y)] = x;
          parent_bond[static_cast<size_t>(y)] = bi;
          depth[static_cast<size_t>(y)] = depth[static_cast<size_t>(x)] + 1;
          tree_bond[static_cast<size_t>(bi)] = 1;
          queue.push_back(y);
        }
      }
    }
    for (size_t bi = 0; bi < nb; ++bi) {
      if (tree_bond[bi]) continue;
      int u = bonds[bi].a, v = bonds[bi].b;
      std::vector<int> left{u}, right{v};
      int x = u, y = v;
      while (x != y) {
        if (depth[static_cast<size_t>(x)] >= depth[static_cast<size_t>(y)]) {
          x = parent[static_cast<size_t>(x)];
          left.push_back(x);
        } else {
          y = parent[static_cast<size_t>(y)];
          right.push_back(y);
        }
      }
      left.pop_back();  // drop the meeting point duplicate
      std::vector<int> cycle = std::move(left);
      cycle.insert(cycle.end(), right.rbegin(), right.rend());
      if (cycle.size() >= 3) add_candidate(std::move(cycle));
    }
  }

  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.size != b.size) return a.size < b.size;
    return a.sorted_bonds < b.sorted_bonds;
  });

  auto leading_bit = [&](const BondSet& s) -> int {
    for (size_t w = 0; w < words; ++w)
      if (s[w]) return static_cast<int>(w * 64 + static_cast<size_t>(std::countr_zero(s[w])));
    return -1;
  };

  std::map<int, BondSet> basis;  // leading bit -> reduced row
  for (const auto& c : cands) {
    if (static_cast<int>(out.atom_rings.size()) == cyclomatic) break;
    BondSet row(words, 0);
    for (int b : c.bond_cycle) set_bit(row, b);
    int lead = leading_bit(row);
    while (lead >= 0) {
      auto it = basis.find(lead);
      if (it == basis.end()) break;
      for (size_t w = 0; w < words; ++w) row[w] ^= it->second[w];
      lead = leading_bit(row);
    }
    if (lead < 0) continue;  // dependent cycle
    basis.emplace(lead, std::move(row));
    out.atom_rings.push_back(c.atom_cycle);
    out.bond_rings.push_back(c.bond_cycle);
  }
  return out;
}

// Pi-electron contribution of a ring atom for the Hueckel test, or -1 if
// the atom disqualifies the ring. `double_partner` is the atom at the
// other end of this atom's kekule double bond (-1 if none).
inline int huckel_pi(const Atom& a, int sigma_count, int double_partner, bool partner_in_ring_set,
                     bool partner_in_any_ring) {
  if (sigma_count > 3) return -1;  // sp3 center
  if (double_partner >= 0) {
    if (partner_in_ring_set) return 1;
    // Exocyclic double bond: conjugated into a fused ring counts one
    // electron; a true exocyclic pi system (C=O, fulvene) counts zero.
    if (partner_in_any_ring) return 1;
    return 0;
  }
  switch (a.element) {
    case element::C:
      if (a.formal_charge < 0) return 2;
      if (a.formal_charge > 0) return 0;
      return -1;  // saturated carbon without pi system
    case element::N:
    case element::P:
      if (a.formal_charge > 0) return -1;  // charged N without double bond
      return 2;                            // pyrrole-type lone pair
    case element::O:
    case element::S:
    case element::Se: return a.formal_charge > 0 ? -1 : 2;
    case element::B: return 0;
    default: return -1;
  }
}

}  // namespace detail

inline Molecule build_molecule(std::vector<AtomSpec> atom_specs, std::vector<BondSpec> bond_specs,
                               std::string name, ValencePolicy policy) {
  const size_t n = atom_specs.size();

  for (const auto& a : atom_specs) {
    if (!valid_element(a.element))
      throw GraphError("unknown element number " + std::to_string(a.element));
    if (a.explicit_h && *a.explicit_h < 0) throw GraphError("negative hydrogen count");
  }

  // Graph validation: indices, self loops, duplicates.
  std::vector<std::vector<int>> adj(n);
  for (size_t bi = 0; bi < bond_specs.size(); ++bi) {
    auto& b = bond_specs[bi];
    if (b.a < 0 || b.b < 0 || static_cast<size_t>(b.a) >= n || static_cast<size_t>(b.b) >= n)
      throw GraphError("bond references atom out of range");
    if (b.a == b.b) throw GraphError("self loop on atom " + std::to_string(b.a));
    for (int prev : adj[static_cast<size_t>(b.a)]) {
      if (bond_specs[static_cast<size_t>(prev)].a == b.b ||
          bond_specs[static_cast<size_t>(prev)].b == b.b)
        throw GraphError("duplicate bond " + std::to_string(b.a) + "-" + std::to_string(b.b));
    }
    adj[static_cast<size_t>(b.a)].push_back(static_cast<int>(bi));
    adj[static_cast<size_t>(b.b)].push_back(static_cast<int>(bi));
  }

  // Kekule orders. Aromatic-flagged bonds get resolved by matching.
  std::vector<int> kekule(bond_specs.size(), 1);
  for (size_t bi = 0; bi < bond_specs.size(); ++bi)
    kekule[bi] = bond_specs[bi].order == BondOrder::Aromatic
                     ? 1
                     : order_weight(bond_specs[bi].order);

  bool any_aromatic_input = false;
  for (const auto& a : atom_specs) any_aromatic_input |= a.aromatic;
  for (const auto& b : bond_specs) any_aromatic_input |= (b.order == BondOrder::Aromatic);

  if (any_aromatic_input) {
    std::vector<char> needs_pi(n, 0);
    std::vector<std::vector<std::pair<int, int>>> cand(n);  // (partner, bond)
    for (size_t i = 0; i < n; ++i) {
      if (!atom_specs[i].aromatic) continue;
      int sigma = static_cast<int>(adj[i].size());
      bool exo_double = false;
      for (int bi : adj[i]) {
        if (bond_specs[static_cast<size_t>(bi)].order == BondOrder::Double ||
            bond_specs[static_cast<size_t>(bi)].order == BondOrder::Triple)
          exo_double = true;
      }
      int eh = atom_specs[i].explicit_h.value_or(0);
      needs_pi[i] = detail::kekule_needs_pi(atom_specs[i], sigma, exo_double, eh);
    }
    for (size_t bi = 0; bi < bond_specs.size(); ++bi) {
      const auto& b = bond_specs[bi];
      // Only aromatic-order bonds participate in matching; an explicit
      // single between aromatic atoms stays single.
      if (b.order == BondOrder::Aromatic && needs_pi[static_cast<size_t>(b.a)] &&
          needs_pi[static_cast<size_t>(b.b)]) {
        cand[static_cast<size_t>(b.a)].push_back({b.b, static_cast<int>(bi)});
        cand[static_cast<size_t>(b.b)].push_back({b.a, static_cast<int>(bi)});
      }
    }
    std::vector<int> order;
    for (size_t i = 0; i < n; ++i)
      if (needs_pi[i]) order.push_back(static_cast<int>(i));
    std::vector<int> partner(n, -1);
    std::vector<int> picked;
    if (!detail::kekule_match(cand, partner, 0, order, picked))
      throw KekulizeError("aromatic system admits no alternating bond assignment");
    for (int bi : picked) kekule[static_cast<size_t>(bi)] = 2;
  }

  // Hydrogen counts and valence validation.
  std::vector<int> hydrogens(n, 0);
  for (size_t i = 0; i < n; ++i) {
    int sum = 0;
    for (int bi : adj[i]) sum += kekule[static_cast<size_t>(bi)];
    const auto allowed = allowed_valences(atom_specs[i].element, atom_specs[i].formal_charge);
    if (atom_specs[i].explicit_h) {
      int h = *atom_specs[i].explicit_h;
      hydrogens[i] = h;
      if (!allowed.empty() && policy == ValencePolicy::Strict) {
        int total = sum + h;
        if (std::find(allowed.begin(), allowed.end(), total) == allowed.end())
          throw ValenceError("atom " + std::to_string(i) + " (" +
                             std::string(element_symbol(atom_specs[i].element)) + ") valence " +
                             std::to_string(total) + " not allowed");
      }
    } else {
      if (allowed.empty()) {
        hydrogens[i] = 0;
      } else {
        int fill = -1;
        for (int v : allowed) {
          if (v >= sum) {
            fill = v - sum;
            break;
          }
        }
        if (fill < 0) {
          if (policy == ValencePolicy::Strict)
            throw ValenceError("atom " + std::to_string(i) + " (" +
                               std::string(element_symbol(atom_specs[i].element)) +
                               ") valence " + std::to_string(sum) + " exceeds allowed maximum");
          fill = 0;
        }
        hydrogens[i] = fill;
      }
    }
  }

  Molecule m;
  m.name_ = std::move(name);
  m.atoms_.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    m.atoms_.push_back({atom_specs[i].element, atom_specs[i].formal_charge, hydrogens[i],
                        atom_specs[i].isotope, false, false, atom_specs[i].chirality});
  }
  m.bonds_.reserve(bond_specs.size());
  for (size_t bi = 0; bi < bond_specs.size(); ++bi) {
    BondOrder o = bond_specs[bi].order;
    if (o == BondOrder::Aromatic) o = kekule[bi] == 2 ? BondOrder::Double : BondOrder::Single;
    m.bonds_.push_back({bond_specs[bi].a, bond_specs[bi].b, o, kekule[bi], false});
  }
  m.adj_ = std::move(adj);

  // Components.
  {
    auto labels = m.component_labels();
    m.n_components_ = labels.empty() ? 0 : 1 + *std::max_element(labels.begin(), labels.end());
  }

  // Ring perception.
  auto sssr = detail::perceive_sssr(n, m.bonds_, m.adj_, m.n_components_);
  for (const auto& ring : sssr.bond_rings)
    for (int bi : ring) m.bonds_[static_cast<size_t>(bi)].in_ring = true;
  for (const auto& b : m.bonds_) {
    if (b.in_ring) {
      m.atoms_[static_cast<size_t>(b.a)].in_ring = true;
      m.atoms_[static_cast<size_t>(b.b)].in_ring = true;
    }
  }
  m.rings_.atom_rings = std::move(sssr.atom_rings);
  m.rings_.bond_rings = std::move(sssr.bond_rings);

  // Aromaticity: ring-by-ring Hueckel on the kekule structure, then a
  // single fusion-merge pass over adjacent ring pairs.
  {
    auto double_partner = [&](int i) {
      for (int bi : m.adj_[static_cast<size_t>(i)]) {
        const auto& b = m.bonds_[static_cast<size_t>(bi)];
        if (b.kekule == 2) return b.other(i);
      }
      return -1;
    };
    auto try_mark = [&](const std::vector<int>& ring_atoms) -> bool {
      std::vector<char> in_set(n, 0);
      for (int a : ring_atoms) in_set[static_cast<size_t>(a)] = 1;
      int pi = 0;
      for (int a : ring_atoms) {
        const Atom& at = m.atoms_[static_cast<size_t>(a)];
        int sigma = m.degree(a) + at.hydrogens;
        int dp = double_partner(a);
        int contrib = detail::huckel_pi(
            at, sigma, dp, dp >= 0 && in_set[static_cast<size_t>(dp)],
            dp >= 0 && m.atoms_[static_cast<size_t>(dp)].in_ring);
        if (contrib < 0) return false;
        pi += contrib;
      }
      if (pi < 2 || pi % 4 != 2) return false;
      for (int a : ring_atoms) m.atoms_[static_cast<size_t>(a)].aromatic = true;
      return true;
    };

    std::vector<char> ring_aromatic(m.rings_.count(), 0);
    for (size_t r = 0; r < m.rings_.count(); ++r)
      ring_aromatic[r] = try_mark(m.rings_.atom_rings[r]);

    // Fusion merge: pairs of rings sharing a bond, at least one of which
    // failed alone.
    for (size_t r1 = 0; r1 < m.rings_.count(); ++r1) {
      for (size_t r2 = r1 + 1; r2 < m.rings_.count(); ++r2) {
        if (ring_aromatic[r1] && ring_aromatic[r2]) continue;
        bool share = false;
        for (int b1 : m.rings_.bond_rings[r1])
          for (int b2 : m.rings_.bond_rings[r2])
            if (b1 == b2) share = true;
        if (!share) continue;
        std::vector<int> merged = m.rings_.atom_rings[r1];
        for (int a : m.rings_.atom_rings[r2])
          if (std::find(merged.begin(), merged.end(), a) == merged.end()) merged.push_back(a);
        if (try_mark(merged)) {
          ring_aromatic[r1] = ring_aromatic[r2] = 1;
        }
      }
    }

    // Bonds inside aromatic rings become aromatic-order bonds.
    for (size_t r = 0; r < m.rings_.count(); ++r) {
      if (!ring_aromatic[r]) continue;
      for (int bi : m.rings_.bond_rings[r]) {
        auto& b = m.bonds_[static_cast<size_t>(bi)];
        if (m.atoms_[static_cast<size_t>(b.a)].aromatic && m.atoms_[static_cast<size_t>(b.b)].aromatic)
          b.order = BondOrder::Aromatic;
      }
    }
  }

  return m;
}

// Rebuilds a molecule with atoms relabeled by `perm` (perm[old] = new).
// Chirality parities are transformed to stay consistent with the new
// reference neighbor order.
inline Molecule permute_molecule(const Molecule& m, const std::vector<int>& perm,
                                 std::string name = {}) {
  const size_t n = m.atom_count();
  if (perm.size() != n) throw GraphError("permutation size mismatch");
  std::vector<int> inv(n);
  for (size_t i = 0; i < n; ++i) inv[static_cast<size_t>(perm[i])] = static_cast<int>(i);

  auto parity_of = [](std::vector<int> v) {
    int swaps = 0;
    for (size_t i = 0; i < v.size(); ++i) {
      while (v[i] != static_cast<int>(i)) {
        std::swap(v[i], v[static_cast<size_t>(v[i])]);
        ++swaps;
      }
    }
    return swaps % 2;
  };

  std::vector<AtomSpec> atoms(n);
  for (size_t old = 0; old < n; ++old) {
    const Atom& a = m.atom(static_cast<int>(old));
    AtomSpec s;
    s.element = a.element;
    s.formal_charge = a.formal_charge;
    s.explicit_h = a.hydrogens;
    s.isotope = a.isotope;
    s.aromatic = a.aromatic;
    s.chirality = a.chirality;
    if (a.chirality != Chirality::None) {
      // Reference order = neighbors ascending by index (H slot is
      // positionally first in both frames, so it cancels out).
      auto nbrs = m.neighbors(static_cast<int>(old));
      std::vector<int> by_old = nbrs;
      std::sort(by_old.begin(), by_old.end());
      std::vector<int> by_new = nbrs;
      std::sort(by_new.begin(), by_new.end(),
                [&](int x, int y) { return perm[static_cast<size_t>(x)] < perm[static_cast<size_t>(y)]; });
      std::vector<int> rel(by_old.size());
      for (size_t k = 0; k < by_old.size(); ++k) {
        auto it = std::find(by_new.begin(), by_new.end(), by_old[k]);
        rel[k] = static_cast<int>(it - by_new.begin());
      }
      if (parity_of(rel) == 1) s.chirality = flip(a.chirality);
    }
    atoms[static_cast<size_t>(perm[old])] = std::move(s);
  }

  std::vector<BondSpec> bonds;
  bonds.reserve(m.bond_count());
  for (const auto& b : m.bonds()) {
    BondOrder o = b.order == BondOrder::Aromatic
                      ? (b.kekule == 2 ? BondOrder::Double : BondOrder::Single)
                      : b.order;
    bonds.push_back({perm[static_cast<size_t>(b.a)], perm[static_cast<size_t>(b.b)], o});
  }
  // Preserve aromatic flags as hints so kekulization is bypassed; the
  // kekule orders above are already concrete.
  Molecule rebuilt = build_molecule(std::move(atoms), std::move(bonds),
                                    name.empty() ? m.name() : std::move(name));
  return rebuilt;
}

// Re-runs the full construction pipeline on a molecule's own graph;
// throws if any invariant no longer holds.
inline Molecule revalidate_molecule(const Molecule& m) {
  std::vector<AtomSpec> atoms(m.atom_count());
  for (size_t i = 0; i < m.atom_count(); ++i) {
    const Atom& a = m.atom(static_cast<int>(i));
    atoms[i].element = a.element;
    atoms[i].formal_charge = a.formal_charge;
    atoms[i].explicit_h = a.hydrogens;
    atoms[i].isotope = a.isotope;
    atoms[i].aromatic = a.aromatic;
    atoms[i].chirality = a.chirality;
  }
  std::vector<BondSpec> bonds;
  bonds.reserve(m.bond_count());
  for (const auto& b : m.bonds()) {
    BondOrder o = b.order == BondOrder::Aromatic
                      ? (b.kekule == 2 ? BondOrder::Double : BondOrder::Single)
                      : b.order;
    bonds.push_back({b.a, b.b, o});
  }
  return build_molecule(std::move(atoms), std::move(bonds), m.name());
}

// The connected components as separate molecules (atom order preserved
// within each fragment).
inline std::vector<Molecule> split_fragments(const Molecule& m) {
  auto labels = m.component_labels();
  std::vector<Molecule> out;
  for (int c = 0; c < m.component_count(); ++c) {
    std::vector<int> map(m.atom_count(), -1);
    std::vector<AtomSpec> atoms;
    for (size_t i = 0; i < m.atom_count(); ++i) {
      if (labels[i] != c) continue;
      map[i] = static_cast<int>(atoms.size());
      const Atom& a = m.atom(static_cast<int>(i));
      atoms.push_back({a.element, a.formal_charge, a.hydrogens, a.isotope, a.aromatic, a.chirality});
    }
    std::vector<BondSpec> bonds;
    for (const auto& b : m.bonds()) {
      if (labels[static_cast<size_t>(b.a)] != c) continue;
      BondOrder o = b.order == BondOrder::Aromatic
                        ? (b.kekule == 2 ? BondOrder::Double : BondOrder::Single)
                        : b.order;
      bonds.push_back({map[static_cast<size_t>(b.a)], map[static_cast<size_t>(b.b)], o});
    }
    out.push_back(build_molecule(std::move(atoms), std::move(bonds)));
  }
  return out;
}

}  // namespace molforge
